//! Run configuration: one JSON file, every field optional, CLI flags on top.

use std::path::Path;

use lmg_core::scaling::{CollapseOptions, PeakOptions};
use lmg_core::{FidelityConfig, SyntheticPeak};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub sizes: Vec<usize>,
    pub gammas: Vec<f64>,
    pub h_grid: HGrid,
    pub fidelity: FidelityConfig,
    pub peak: PeakOptions,
    pub scale: ScaleConfig,
    pub collapse: CollapseOptions,
    pub sweep: SweepConfig,
    pub verify: VerifyConfig,
    /// Replaces exact diagonalization in `peak`, `scale` and `collapse`.
    pub synthetic: Option<SyntheticPeak>,
    /// Worker threads; `None` uses every core. Never affects results.
    pub jobs: Option<usize>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sizes: (8..=16).map(|k| 1usize << k).collect(),
            gammas: vec![0.5],
            h_grid: HGrid::default(),
            fidelity: FidelityConfig::default(),
            peak: PeakOptions::default(),
            scale: ScaleConfig::default(),
            collapse: CollapseOptions::default(),
            sweep: SweepConfig::default(),
            verify: VerifyConfig::default(),
            synthetic: None,
            jobs: None,
            seed: 7,
        }
    }
}

/// Either an explicit list or `points` evenly spaced values on `[start, stop]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum HGrid {
    Values(Vec<f64>),
    Range { start: f64, stop: f64, points: usize },
}

impl Default for HGrid {
    fn default() -> Self {
        HGrid::Range {
            start: 0.05,
            stop: 2.0,
            points: 40,
        }
    }
}

impl HGrid {
    pub fn values(&self) -> Vec<f64> {
        match *self {
            HGrid::Values(ref v) => v.clone(),
            HGrid::Range { start, stop, points } => match points {
                0 => Vec::new(),
                1 => vec![start],
                _ => (0..points)
                    .map(|i| start + (stop - start) * i as f64 / (points - 1) as f64)
                    .collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScaleConfig {
    /// Inclusive `[N_min, N_max]` windows, each fitted separately.
    pub windows: Vec<(usize, usize)>,
    pub h_c: f64,
}

impl Default for ScaleConfig {
    fn default() -> Self {
        ScaleConfig {
            windows: vec![(1 << 8, 1 << 16), (1 << 12, 1 << 16)],
            h_c: 1.0,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SweepConfig {
    /// Adds `chi - leading` and the subleading prediction in the broken phase.
    pub inset: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Largest N for the 2^N brute-force ground energy.
    pub pauli_max_n: usize,
    /// Largest N for dense and matrix-element checks.
    pub dense_max_n: usize,
    pub cross_method_sizes: Vec<usize>,
    /// Flip the sign of one `offdiag2` entry before checking (mutation test).
    pub inject_sign_error: bool,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            pauli_max_n: 12,
            dense_max_n: 12,
            cross_method_sizes: vec![4, 8, 16],
            inject_sign_error: false,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.sizes.is_empty() || self.sizes.contains(&0) {
            return Err(CliError::Config("sizes must be a non-empty list of positive integers".into()));
        }
        if self.gammas.is_empty() {
            return Err(CliError::Config("gammas must not be empty".into()));
        }
        if let Some(g) = self.gammas.iter().find(|g| !(g.abs() < 1.0)) {
            return Err(CliError::Config(format!("|gamma| must be < 1, got {g}")));
        }
        let grid = self.h_grid.values();
        if grid.is_empty() {
            return Err(CliError::Config("h_grid is empty".into()));
        }
        if grid.iter().any(|h| !(h.is_finite() && *h >= 0.0)) {
            return Err(CliError::Config("h_grid values must be finite and >= 0".into()));
        }
        if grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(CliError::Config("h_grid must be strictly increasing".into()));
        }
        if self.jobs == Some(0) {
            return Err(CliError::Config("jobs must be >= 1".into()));
        }
        Ok(())
    }

    /// Canonical JSON of everything that can influence results.
    pub fn canonical_json(&self) -> String {
        let mut c = self.clone();
        c.jobs = None;
        serde_json::to_string(&c).expect("config serializes")
    }

    pub fn sha256(&self) -> String {
        let digest = Sha256::digest(self.canonical_json().as_bytes());
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }
}
