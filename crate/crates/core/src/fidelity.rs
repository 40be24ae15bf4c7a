//! Ground-state fidelity susceptibility χ_F with respect to the field `h`.
//!
//! Two independent routes:
//!
//! - **perturbative**: `Σ_{n≠0} |⟨n|H_I|0⟩|² / (E_n - E_0)²` over a complete
//!   spectrum, `H_I = -2 S_z`.
//! - **overlap**: `2 (1 - F(h - δ/2, h + δ/2)) / δ²`, Richardson-extrapolated from
//!   `δ` and `δ/2`. Only ground states are needed, so it scales to `N = 2^16`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::{self, dot, GroundState, SolverConfig};
use crate::error::{Error, Result};
use crate::model::{build_driving, build_hamiltonian, BandedSpinMatrix, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Method {
    Perturbative,
    Overlap,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::Perturbative => "perturbative",
            Method::Overlap => "overlap",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChiEstimate {
    pub value: f64,
    pub method: Method,
    /// Step used by the overlap method; 0 for the perturbative sum.
    pub delta_h: f64,
    /// `|estimate(δ) - estimate(δ/2)|` for the overlap method; 0 otherwise.
    pub convergence_error: f64,
    /// Set when `convergence_error` exceeds the configured relative threshold.
    pub flagged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct FidelityConfig {
    pub solver: SolverConfig,
    /// Default finite-difference step.
    pub delta_h: f64,
    /// Step used within `critical_window` of `h = 1`.
    pub critical_delta_h: f64,
    pub critical_window: f64,
    /// Largest N for which automatic selection uses the perturbative sum.
    pub perturbative_max_n: usize,
    /// Relative `convergence_error` above which an overlap estimate is flagged.
    pub flag_threshold: f64,
}

impl Default for FidelityConfig {
    fn default() -> Self {
        FidelityConfig {
            solver: SolverConfig::default(),
            delta_h: 1e-4,
            critical_delta_h: 1e-5,
            critical_window: 0.05,
            perturbative_max_n: 512,
            flag_threshold: 1e-3,
        }
    }
}

impl FidelityConfig {
    /// Finite-difference step appropriate at field `h`.
    pub fn delta_for(&self, h: f64) -> f64 {
        if (h - 1.0).abs() < self.critical_window {
            self.critical_delta_h
        } else {
            self.delta_h
        }
    }

    pub fn method_for(&self, n: usize) -> Method {
        if n <= self.perturbative_max_n && n < self.solver.dense_cap {
            Method::Perturbative
        } else {
            Method::Overlap
        }
    }
}

/// χ_F sampled along `h` at fixed `(N, γ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct FidelityCurve {
    pub n: usize,
    pub gamma: f64,
    pub samples: Vec<FidelitySample>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FidelitySample {
    pub h: f64,
    pub estimate: std::result::Result<ChiEstimate, Error>,
}

impl FidelityCurve {
    /// `(h, χ_F)` for every successful sample.
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.samples
            .iter()
            .filter_map(|s| s.estimate.as_ref().ok().map(|e| (s.h, e.value)))
            .collect()
    }

    /// Sample with the largest χ_F.
    pub fn argmax(&self) -> Option<(f64, f64)> {
        self.points()
            .into_iter()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }
}

/// Perturbative sum for an arbitrary Hamiltonian and driving operator.
///
/// Both matrices are block diagonal in parity, so only states of the ground
/// sector can contribute; the sum runs over that sector's full spectrum.
pub fn perturbative_sum(
    hamiltonian: &BandedSpinMatrix,
    driving: &BandedSpinMatrix,
    cfg: &SolverConfig,
) -> Result<f64> {
    if hamiltonian.dimension() != driving.dimension() {
        return Err(Error::DimensionMismatch {
            expected: hamiltonian.dimension(),
            got: driving.dimension(),
        });
    }
    if hamiltonian.dimension() > cfg.dense_cap {
        return Err(Error::DenseCapExceeded {
            dimension: hamiltonian.dimension(),
            cap: cfg.dense_cap,
        });
    }
    let gs = eigen::ground_state(hamiltonian, cfg)?;
    refuse_degenerate(&gs, hamiltonian, cfg)?;
    let block = hamiltonian.sector(gs.parity);
    let spectrum = eigen::sector_spectrum(&block, cfg)?;
    let drive = driving.sector(gs.parity).matrix;
    let e0 = spectrum.energies[0];
    let coupled = drive.matvec(&spectrum.vectors[0]);
    Ok(spectrum
        .energies
        .iter()
        .zip(&spectrum.vectors)
        .skip(1)
        .map(|(e, v)| {
            let amp = dot(v, &coupled);
            amp * amp / ((e - e0) * (e - e0))
        })
        .sum())
}

fn refuse_degenerate(gs: &GroundState, m: &BandedSpinMatrix, cfg: &SolverConfig) -> Result<()> {
    if gs.degenerate {
        return Err(Error::DegenerateGroundState {
            gap: gs.sector_gap.unwrap_or(0.0),
            guard: cfg.degeneracy_guard(m.norm_bound()),
        });
    }
    Ok(())
}

pub fn chi_perturbative(params: &ModelParams, cfg: &FidelityConfig) -> Result<ChiEstimate> {
    let h = build_hamiltonian(params)?;
    let d = build_driving(params)?;
    let value = perturbative_sum(&h, &d, &cfg.solver)?;
    Ok(ChiEstimate {
        value,
        method: Method::Perturbative,
        delta_h: 0.0,
        convergence_error: 0.0,
        flagged: false,
    })
}

/// `|⟨a|b⟩|` for two ground states; refuses states from different sectors.
pub fn ground_overlap(a: &GroundState, b: &GroundState) -> Result<f64> {
    if a.parity != b.parity {
        return Err(Error::SectorMismatch {
            first: a.parity,
            second: b.parity,
        });
    }
    Ok(dot(a.vector(), b.vector()).abs().min(1.0))
}

/// Fidelity `|⟨ψ_0(h1)|ψ_0(h2)⟩|` at fixed `(N, γ)`.
pub fn fidelity_overlap(params: &ModelParams, h1: f64, h2: f64, cfg: &FidelityConfig) -> Result<f64> {
    let a = ground_at(params, h1, &cfg.solver)?;
    if h1 == h2 {
        return Ok(1.0);
    }
    let b = ground_at(params, h2, &cfg.solver)?;
    ground_overlap(&a, &b)
}

fn ground_at(params: &ModelParams, h: f64, cfg: &SolverConfig) -> Result<GroundState> {
    let m = build_hamiltonian(&params.with_field(h)?)?;
    eigen::ground_state(&m, cfg)
}

/// `2(1 - F)/δ²` evaluated as `‖a - b‖²/δ²` (sign-aligned unit vectors), which
/// avoids the cancellation in `1 - F` when `F` is within 1e-10 of one.
fn finite_difference(a: &GroundState, b: &GroundState, delta: f64) -> Result<f64> {
    if a.parity != b.parity {
        return Err(Error::SectorMismatch {
            first: a.parity,
            second: b.parity,
        });
    }
    let sign = if dot(a.vector(), b.vector()) < 0.0 { -1.0 } else { 1.0 };
    let dist2: f64 = a
        .vector()
        .iter()
        .zip(b.vector())
        .map(|(x, y)| (x - sign * y).powi(2))
        .sum();
    Ok(dist2 / (delta * delta))
}

/// Overlap estimator for any one-parameter family `h ↦ H(h)`.
pub fn chi_overlap_with<F>(family: F, h: f64, delta_h: f64, cfg: &FidelityConfig) -> Result<ChiEstimate>
where
    F: Fn(f64) -> Result<BandedSpinMatrix> + Sync,
{
    if !(delta_h > 0.0) || !delta_h.is_finite() {
        return Err(Error::InvalidParams(format!("delta_h must be > 0, got {delta_h}")));
    }
    let offsets = [-delta_h / 2.0, delta_h / 2.0, -delta_h / 4.0, delta_h / 4.0];
    let states: Vec<GroundState> = offsets
        .par_iter()
        .map(|&o| {
            let m = family(h + o)?;
            let gs = eigen::ground_state(&m, &cfg.solver)?;
            refuse_degenerate(&gs, &m, &cfg.solver)?;
            Ok(gs)
        })
        .collect::<Result<_>>()?;
    let coarse = finite_difference(&states[0], &states[1], delta_h)?;
    let fine = finite_difference(&states[2], &states[3], delta_h / 2.0)?;
    let value = ((4.0 * fine - coarse) / 3.0).max(0.0);
    let convergence_error = (coarse - fine).abs();
    Ok(ChiEstimate {
        value,
        method: Method::Overlap,
        delta_h,
        convergence_error,
        flagged: convergence_error > cfg.flag_threshold * value.max(f64::EPSILON),
    })
}

pub fn chi_overlap(params: &ModelParams, delta_h: f64, cfg: &FidelityConfig) -> Result<ChiEstimate> {
    params.validate()?;
    chi_overlap_with(
        |h| build_hamiltonian(&params.with_field(h)?),
        params.h(),
        delta_h,
        cfg,
    )
}

/// χ_F with the method chosen from N (see [`FidelityConfig::method_for`]).
pub fn chi_auto(params: &ModelParams, cfg: &FidelityConfig) -> Result<ChiEstimate> {
    match cfg.method_for(params.n()) {
        Method::Perturbative => chi_perturbative(params, cfg),
        Method::Overlap => chi_overlap(params, cfg.delta_for(params.h()), cfg),
    }
}

/// χ_F over an ascending grid. Per-point failures are kept in the samples.
pub fn sweep_curve(n: usize, gamma: f64, h_grid: &[f64], cfg: &FidelityConfig) -> Result<FidelityCurve> {
    ModelParams::new(n, gamma, 0.0)?;
    if h_grid.is_empty() {
        return Err(Error::InvalidParams("empty h grid".into()));
    }
    if h_grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("h grid must be strictly increasing".into()));
    }
    let samples = h_grid
        .par_iter()
        .map(|&h| FidelitySample {
            h,
            estimate: ModelParams::new(n, gamma, h).and_then(|p| chi_auto(&p, cfg)),
        })
        .collect();
    Ok(FidelityCurve { n, gamma, samples })
}
