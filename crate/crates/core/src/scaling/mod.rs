//! Finite-size scaling of the χ_F peak.
//!
//! - [`locate_peak`] finds `h_max(N)` and `χ_max(N)` by golden-section search.
//! - [`fit_power_law`] and [`fit_delta`] extract μ and δ from
//!   `χ_max ∝ N^μ` and `1 - h_max ∝ N^(-δ)`.
//! - [`estimate_nu_collapse`] finds the ν that best collapses
//!   `(χ_max - χ)/χ` against `N^ν (h - h_max)`.
//! - [`check_alpha_relation`] compares μ/ν (or (μ-1)/ν) to the analytic α.
//!
//! All of these take a [`ChiOracle`] so the pipeline can run on exact
//! diagonalization or on a synthetic peak with known exponents.

mod collapse;
mod fit;
mod peak;

pub use collapse::{
    collapse_objective, estimate_nu_collapse, sample_around_peak, CollapseCurve, CollapseOptions,
    CollapseResult, RescaledCurve,
};
pub use fit::{
    check_alpha_relation, fit_delta, fit_power_law, AlphaReport, Quantity, ScalingFit,
    BROKEN_ALPHA_TOLERANCE, SYMMETRIC_ALPHA_TOLERANCE,
};
pub use peak::{locate_peak, maximize_unimodal, peak_series, MaxSearch, PeakOptions, PeakResult};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::fidelity::{chi_auto, FidelityConfig};
use crate::model::ModelParams;

/// Anything that can report χ_F at `(N, γ, h)`.
pub trait ChiOracle: Sync {
    fn chi(&self, n: usize, gamma: f64, h: f64) -> Result<f64>;
}

/// χ_F from exact diagonalization, method chosen by N.
#[derive(Debug, Clone, Copy, Default)]
pub struct EdOracle {
    pub cfg: FidelityConfig,
}

impl EdOracle {
    pub fn new(cfg: FidelityConfig) -> Self {
        EdOracle { cfg }
    }
}

impl ChiOracle for EdOracle {
    fn chi(&self, n: usize, gamma: f64, h: f64) -> Result<f64> {
        let p = ModelParams::new(n, gamma, h)?;
        Ok(chi_auto(&p, &self.cfg)?.value)
    }
}

/// Lorentzian peak with prescribed exponents:
///
/// ```text
/// χ(N, h) = A N^μ / (1 + ((h - h_max) N^ν / w)²),   h_max = h_c - B N^(-δ)
/// ```
///
/// so that `(χ_max - χ)/χ = (N^ν (h - h_max) / w)²` collapses exactly at ν.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SyntheticPeak {
    pub amplitude: f64,
    pub mu: f64,
    pub h_c: f64,
    pub shift: f64,
    pub delta: f64,
    pub width: f64,
    pub nu: f64,
}

impl SyntheticPeak {
    pub fn h_max(&self, n: usize) -> f64 {
        self.h_c - self.shift * (n as f64).powf(-self.delta)
    }
}

impl Default for SyntheticPeak {
    fn default() -> Self {
        SyntheticPeak {
            amplitude: 0.1,
            mu: 4.0 / 3.0,
            h_c: 1.0,
            shift: 1.5,
            delta: 2.0 / 3.0,
            width: 1.0,
            nu: 2.0 / 3.0,
        }
    }
}

impl ChiOracle for SyntheticPeak {
    fn chi(&self, n: usize, _gamma: f64, h: f64) -> Result<f64> {
        let nf = n as f64;
        let x = (h - self.h_max(n)) * nf.powf(self.nu) / self.width;
        Ok(self.amplitude * nf.powf(self.mu) / (1.0 + x * x))
    }
}
