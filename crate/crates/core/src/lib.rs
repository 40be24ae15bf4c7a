//! Ground-state fidelity susceptibility of the Lipkin-Meshkov-Glick (LMG) model.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: the LMG Hamiltonian and driving operator in the maximal-spin Dicke
//!   basis, stored as banded symmetric matrices, plus the parity-sector split.
//! - [`eigen`]: tridiagonal eigensolvers (Sturm bisection with inverse iteration for
//!   ground states, implicit QL for full spectra).
//! - [`fidelity`]: χ_F by the perturbative sum over the spectrum and by finite
//!   differences of ground-state overlaps.
//! - [`analytic`]: closed-form Holstein-Primakoff predictions in both phases.
//! - [`scaling`]: peak location, log-log power-law fits, data collapse and the
//!   α = μ/ν consistency check.

pub mod analytic;
pub mod eigen;
mod error;
pub mod fidelity;
pub mod model;
pub mod scaling;

pub use analytic::{HpPrediction, Phase};
pub use eigen::{EigenPair, GroundState, SolverConfig, Spectrum, SymTridiagonal};
pub use error::{Error, Result};
pub use fidelity::{ChiEstimate, FidelityConfig, FidelityCurve, FidelitySample, Method};
pub use model::{BandedSpinMatrix, DickeBasis, ModelParams, Parity, ParitySector, SectorBlock};
pub use scaling::{
    AlphaReport, ChiOracle, CollapseCurve, CollapseResult, EdOracle, PeakResult, Quantity,
    ScalingFit, SyntheticPeak,
};
