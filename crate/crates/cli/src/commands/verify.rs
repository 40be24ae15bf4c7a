use lmg_core::eigen::{full_spectrum, SolverConfig};
use lmg_core::fidelity::{chi_overlap, chi_perturbative, fidelity_overlap};
use lmg_core::model::build_hamiltonian;
use lmg_core::{BandedSpinMatrix, DickeBasis, ModelParams};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{bool_cell, Output};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::oracle::{dicke_projection, pauli_ground_energy, to_dense};
use crate::table::{num, ResultTable};

struct Check {
    name: &'static str,
    n: usize,
    gamma: f64,
    h: f64,
    measured: f64,
    tolerance: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.measured <= self.tolerance
    }
}

fn hamiltonian(cfg: &RunConfig, n: usize, gamma: f64, h: f64) -> Result<BandedSpinMatrix, CliError> {
    let mut m = build_hamiltonian(&ModelParams::new(n, gamma, h)?)?;
    if cfg.verify.inject_sign_error {
        if let Some(x) = m.offdiag2_mut().first_mut() {
            *x = -*x;
        }
    }
    Ok(m)
}

fn sorted_eigenvalues(m: &BandedSpinMatrix) -> Vec<f64> {
    let mut e: Vec<f64> = to_dense(m).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Runs the oracle suites; failures are rows with `pass = false`, never errors.
pub fn cmd_verify(cfg: &RunConfig) -> Result<Output, CliError> {
    let v = &cfg.verify;
    let solver = SolverConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    for n in 1..=v.dense_max_n {
        let gamma = rng.random_range(-0.9..0.9);
        let h = rng.random_range(0.0..2.0);
        let m = hamiltonian(cfg, n, gamma, h)?;
        let scale = m.norm_bound().max(1.0);

        let x: Vec<f64> = (0..=n).map(|_| rng.random_range(-1.0..1.0)).collect();
        let banded = m.matvec(&x)?;
        let dense: Vec<f64> = (to_dense(&m) * nalgebra::DVector::from_vec(x)).iter().copied().collect();
        checks.push(Check {
            name: "banded_matvec",
            n,
            gamma,
            h,
            measured: max_abs_diff(&banded, &dense) / scale,
            tolerance: 1e-13,
        });

        let split = full_spectrum(&m, &solver)?.energies;
        checks.push(Check {
            name: "sector_spectra",
            n,
            gamma,
            h,
            measured: max_abs_diff(&split, &sorted_eigenvalues(&m)) / scale,
            tolerance: 1e-10,
        });

        let reflected_diag: Vec<f64> = m
            .diag()
            .iter()
            .zip(DickeBasis::new(n).magnetizations())
            .map(|(d, mz)| d + 4.0 * h * mz)
            .collect();
        let reflected = BandedSpinMatrix::new(reflected_diag, m.offdiag2().to_vec())?;
        checks.push(Check {
            name: "h_reflection",
            n,
            gamma,
            h,
            measured: max_abs_diff(&split, &full_spectrum(&reflected, &solver)?.energies) / scale,
            tolerance: 1e-10,
        });

        if n <= 8 {
            let reference = dicke_projection(n, gamma, h);
            checks.push(Check {
                name: "pauli_matrix_elements",
                n,
                gamma,
                h,
                measured: (reference - to_dense(&m)).abs().max(),
                tolerance: 1e-12,
            });
        }
    }

    for n in 1..=v.pauli_max_n {
        let gamma = rng.random_range(-0.9..0.9);
        let h = rng.random_range(0.0..2.0);
        let m = hamiltonian(cfg, n, gamma, h)?;
        let e0 = lmg_core::eigen::ground_state(&m, &solver)?.energy();
        checks.push(Check {
            name: "pauli_ground_energy",
            n,
            gamma,
            h,
            measured: (e0 - pauli_ground_energy(n, gamma, h)).abs(),
            tolerance: 1e-10,
        });
    }

    for &n in &v.cross_method_sizes {
        for gamma in [-0.5, 0.0, 0.5] {
            for h in [0.5, 1.5] {
                let p = ModelParams::new(n, gamma, h)?;
                let a = chi_perturbative(&p, &cfg.fidelity)?.value;
                let b = chi_overlap(&p, cfg.fidelity.delta_for(h), &cfg.fidelity)?.value;
                checks.push(Check {
                    name: "cross_method_chi",
                    n,
                    gamma,
                    h,
                    measured: (a - b).abs() / a.abs(),
                    tolerance: 1e-6,
                });
            }
        }
    }

    // γ < 0 keeps the ground state in one parity sector for every h.
    for h in [0.3, 0.9, 1.2] {
        let p = ModelParams::new(16, -0.2, h)?;
        let f = fidelity_overlap(&p, h, h + 0.05, &cfg.fidelity)?;
        let chi = chi_perturbative(&p, &cfg.fidelity)?.value;
        // Zero when both quantities are inside their bounds.
        let violation = (f - 1.0).max(0.0) + (-f).max(0.0) + (-chi).max(0.0);
        checks.push(Check {
            name: "fidelity_bounds",
            n: 16,
            gamma: -0.2,
            h,
            measured: violation,
            tolerance: 0.0,
        });
    }

    let mut table = ResultTable::new(
        "verify",
        cfg,
        &["check", "N", "gamma", "h", "measured", "tolerance", "pass"],
    );
    for c in &checks {
        table.push(vec![
            c.name.to_string(),
            c.n.to_string(),
            num(c.gamma),
            num(c.h),
            num(c.measured),
            num(c.tolerance),
            bool_cell(c.pass()),
        ]);
    }
    let failures = checks.iter().filter(|c| !c.pass()).count();
    let mut out = Output::new(table);
    out.failures = failures;
    Ok(out)
}
