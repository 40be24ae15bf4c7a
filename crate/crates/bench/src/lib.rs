//! Shared fixtures for the solver benchmarks in `benches/`.

use lmg_core::model::build_hamiltonian;
use lmg_core::{BandedSpinMatrix, ModelParams};

/// Hamiltonian near the finite-size peak, where the spectral gap is smallest.
pub fn near_critical(n: usize) -> BandedSpinMatrix {
    build_hamiltonian(&ModelParams::new(n, 0.5, 0.99).unwrap()).unwrap()
}
