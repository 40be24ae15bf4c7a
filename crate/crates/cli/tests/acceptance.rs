//! Acceptance gate. Each test checks one criterion and prints one line:
//!
//! ```text
//! PASS [05 table-mu] ...
//! ```
//!
//! Run with `cargo test -p lmg-cli --test acceptance -- --nocapture` to see the
//! lines of passing tests too. Peak searches up to N = 2^16 are shared between
//! criteria 5-8 and computed once.

use std::process::Command;
use std::sync::OnceLock;

use lmg_cli::{execute, Command as LmgCommand, RunConfig};
use lmg_core::analytic::ed_gap;
use lmg_core::eigen::{ground_state, full_spectrum};
use lmg_core::fidelity::{chi_auto, chi_overlap, chi_perturbative, fidelity_overlap};
use lmg_core::model::{build_driving, build_hamiltonian};
use lmg_core::scaling::{
    estimate_nu_collapse, fit_delta, fit_power_law, peak_series, sample_around_peak, CollapseCurve,
    CollapseOptions, EdOracle, PeakOptions, PeakResult,
};
use lmg_core::{BandedSpinMatrix, DickeBasis, FidelityConfig, ModelParams, Parity, SolverConfig};
use nalgebra::DMatrix;

const CROSS_METHOD_REL_TOL: f64 = 1e-6;
const PAULI_ABS_TOL: f64 = 1e-10;
const SYMMETRIC_CHI_REL_TOL: f64 = 0.02;
const BROKEN_CHI_REL_TOL: f64 = 0.02;
const MU_ABS_TOL: f64 = 0.01;
const NU_TARGET: f64 = 0.665;
const NU_ABS_TOL: f64 = 0.03;
const DELTA_TARGET: f64 = 0.66;
const DELTA_ABS_TOL: f64 = 0.05;
const ALPHA_SYMMETRIC: f64 = 2.0;
const ALPHA_SYMMETRIC_TOL: f64 = 0.1;
const ALPHA_BROKEN: f64 = 0.5;
const ALPHA_BROKEN_TOL: f64 = 0.05;
const GAP_REL_TOL: f64 = 0.01;
const CONVERGENCE_ORDER_MIN: f64 = 1.8;

/// Reference μ over `[2^12, 2^16]`, and over `[2^8, 2^16]` for information.
const TABLE_MU: [(f64, f64, f64); 6] = [
    (0.8, 1.3250, 1.3221),
    (0.5, 1.3285, 1.3264),
    (0.2, 1.3295, 1.3267),
    (0.0, 1.3299, 1.3280),
    (-0.2, 1.3302, 1.3283),
    (-0.5, 1.3304, 1.3285),
];
const COLLAPSE_GAMMAS: [f64; 3] = [0.5, 0.0, -0.5];

fn report(id: &str, pass: bool, detail: impl AsRef<str>) {
    let line = format!("{} [{id}] {}", if pass { "PASS" } else { "FAIL" }, detail.as_ref());
    println!("{line}");
    assert!(pass, "{line}");
}

fn pow2(lo: u32, hi: u32) -> Vec<usize> {
    (lo..=hi).map(|k| 1usize << k).collect()
}

fn peaks() -> &'static [(f64, Vec<PeakResult>)] {
    static PEAKS: OnceLock<Vec<(f64, Vec<PeakResult>)>> = OnceLock::new();
    PEAKS.get_or_init(|| {
        let oracle = EdOracle::default();
        let sizes = pow2(8, 16);
        TABLE_MU
            .iter()
            .map(|&(g, _, _)| (g, peak_series(&oracle, &sizes, g, &PeakOptions::default()).unwrap()))
            .collect()
    })
}

fn peaks_for(gamma: f64, lo: usize, hi: usize) -> Vec<PeakResult> {
    peaks()
        .iter()
        .find(|(g, _)| *g == gamma)
        .unwrap()
        .1
        .iter()
        .copied()
        .filter(|p| p.n >= lo && p.n <= hi)
        .collect()
}

fn mu_fit(gamma: f64, lo: usize, hi: usize) -> lmg_core::ScalingFit {
    let pts: Vec<(usize, f64)> = peaks_for(gamma, lo, hi).iter().map(|p| (p.n, p.chi_max)).collect();
    fit_power_law(&pts).unwrap()
}

fn nu_fits() -> &'static [(f64, lmg_core::CollapseResult)] {
    static NU: OnceLock<Vec<(f64, lmg_core::CollapseResult)>> = OnceLock::new();
    NU.get_or_init(|| {
        let oracle = EdOracle::default();
        let opts = CollapseOptions::default();
        COLLAPSE_GAMMAS
            .iter()
            .map(|&g| {
                let curves: Vec<CollapseCurve> = peaks_for(g, 1 << 12, 1 << 16)
                    .iter()
                    .map(|p| sample_around_peak(&oracle, p, &opts).unwrap())
                    .collect();
                (g, estimate_nu_collapse(&curves, &opts).unwrap())
            })
            .collect()
    })
}

#[test]
fn c01_cross_method_agreement() {
    let cfg = FidelityConfig::default();
    let mut worst = (0.0f64, String::new());
    for n in [4, 8, 16, 64, 256] {
        for gamma in [-0.5, 0.0, 0.5] {
            for h in [0.2, 0.5, 0.8, 1.5, 2.0] {
                let p = ModelParams::new(n, gamma, h).unwrap();
                let a = chi_perturbative(&p, &cfg).unwrap().value;
                let b = chi_overlap(&p, cfg.delta_for(h), &cfg).unwrap().value;
                let rel = (a - b).abs() / a.abs();
                if rel > worst.0 || worst.1.is_empty() {
                    worst = (rel, format!("N={n} γ={gamma} h={h}"));
                }
            }
        }
    }
    report(
        "01 cross-method",
        worst.0 < CROSS_METHOD_REL_TOL,
        format!("max relative difference {:.2e} at {} (tol {CROSS_METHOD_REL_TOL:e})", worst.0, worst.1),
    );
}

/// Lowest eigenvalue of `-(1/N) Σ_{i<j} (σx σx + γ σy σy) - h Σ σz` on 2^N states,
/// diagonalized per popcount-parity block.
fn pauli_ground_energy(n: usize, gamma: f64, h: f64) -> f64 {
    let dim = 1usize << n;
    let mut best = f64::INFINITY;
    for parity in 0..2 {
        let states: Vec<usize> = (0..dim).filter(|b| b.count_ones() % 2 == parity).collect();
        let mut index = vec![0; dim];
        for (k, &b) in states.iter().enumerate() {
            index[b] = k;
        }
        let mut m = DMatrix::<f64>::zeros(states.len(), states.len());
        for (col, &b) in states.iter().enumerate() {
            let s = |k: usize| if b >> k & 1 == 0 { 1.0 } else { -1.0 };
            m[(col, col)] -= h * (0..n).map(s).sum::<f64>();
            for i in 0..n {
                for j in i + 1..n {
                    let flipped = b ^ (1 << i) ^ (1 << j);
                    m[(index[flipped], col)] -= (1.0 - gamma * s(i) * s(j)) / n as f64;
                }
            }
        }
        best = best.min(m.symmetric_eigenvalues().min());
    }
    best
}

#[test]
fn c02_pauli_brute_force() {
    let cfg = SolverConfig::default();
    let mut worst = (0.0f64, String::new());
    for n in 1..=12 {
        let cases: &[(f64, f64)] = if n <= 10 {
            &[(0.0, 0.0), (0.5, 2.0), (-0.5, 0.5), (0.3, 1.0)]
        } else {
            &[(0.5, 0.7)]
        };
        for &(gamma, h) in cases {
            let m = build_hamiltonian(&ModelParams::new(n, gamma, h).unwrap()).unwrap();
            let ed = ground_state(&m, &cfg).unwrap().energy();
            let err = (ed - pauli_ground_energy(n, gamma, h)).abs();
            if err >= worst.0 {
                worst = (err, format!("N={n} γ={gamma} h={h}"));
            }
        }
    }
    report(
        "02 pauli",
        worst.0 < PAULI_ABS_TOL,
        format!("max |ΔE0| {:.2e} at {} (tol {PAULI_ABS_TOL:e})", worst.0, worst.1),
    );
}

#[test]
fn c03_symmetric_phase_limit() {
    let (gamma, h) = (0.5f64, 2.0f64);
    let exact = (1.0 - gamma).powi(2) / (32.0 * (h - 1.0).powi(2) * (h - gamma).powi(2));
    let cfg = FidelityConfig::default();
    let errs: Vec<(usize, f64)> = [1 << 8, 1 << 10, 1 << 12, 1 << 14]
        .iter()
        .map(|&n| {
            let chi = chi_auto(&ModelParams::new(n, gamma, h).unwrap(), &cfg).unwrap().value;
            (n, (chi - exact).abs() / exact)
        })
        .collect();
    let monotone = errs.windows(2).all(|w| w[1].1 < w[0].1);
    let last = errs.last().unwrap().1;
    let listed: Vec<String> = errs.iter().map(|(n, e)| format!("N={n}: {e:.3e}")).collect();
    report(
        "03 symmetric chi",
        monotone && last < SYMMETRIC_CHI_REL_TOL,
        format!(
            "target {exact:.6e}; relative errors {}; monotone {monotone} (tol {SYMMETRIC_CHI_REL_TOL})",
            listed.join(", ")
        ),
    );
}

#[test]
fn c04_broken_phase_leading_term() {
    let target = 1.0 / (4.0 * 0.75f64.sqrt());
    let cfg = FidelityConfig::default();
    let n = 1 << 14;
    let chi = chi_auto(&ModelParams::new(n, 0.0, 0.5).unwrap(), &cfg).unwrap().value;
    let rel = (chi / n as f64 - target).abs() / target;
    report(
        "04 broken chi/N",
        rel < BROKEN_CHI_REL_TOL,
        format!("chi/N = {:.5} vs {target:.5} at N=2^14, relative error {rel:.3e} (tol {BROKEN_CHI_REL_TOL})", chi / n as f64),
    );
}

#[test]
fn c05_table_mu() {
    let mut ok = true;
    let mut parts = Vec::new();
    for &(gamma, ref_narrow, _) in &TABLE_MU {
        let narrow = mu_fit(gamma, 1 << 12, 1 << 16);
        let wide = mu_fit(gamma, 1 << 8, 1 << 16);
        let within = (narrow.exponent - ref_narrow).abs() <= MU_ABS_TOL;
        let smaller = wide.exponent < narrow.exponent;
        ok &= within && smaller;
        parts.push(format!(
            "γ={gamma}: μ={:.4} (ref {ref_narrow}) wide={:.4}",
            narrow.exponent, wide.exponent
        ));
    }
    report("05 table-mu", ok, format!("{} (tol ±{MU_ABS_TOL}, wide < narrow)", parts.join("; ")));
}

#[test]
fn c06_collapse_nu() {
    let fits = nu_fits();
    let ok = fits.iter().all(|(_, r)| (r.nu - NU_TARGET).abs() <= NU_ABS_TOL);
    let parts: Vec<String> = fits.iter().map(|(g, r)| format!("γ={g}: ν={:.4}±{:.4}", r.nu, r.uncertainty)).collect();
    report("06 collapse-nu", ok, format!("{} (target {NU_TARGET} ± {NU_ABS_TOL})", parts.join("; ")));
}

#[test]
fn c07_peak_drift_delta() {
    let mut ok = true;
    let mut parts = Vec::new();
    for g in COLLAPSE_GAMMAS {
        let d = fit_delta(&peaks_for(g, 1 << 12, 1 << 16), 1.0).unwrap();
        ok &= (d.exponent - DELTA_TARGET).abs() <= DELTA_ABS_TOL;
        parts.push(format!("γ={g}: δ={:.4}±{:.4}", d.exponent, d.uncertainty));
    }
    report("07 delta", ok, format!("{} (target {DELTA_TARGET} ± {DELTA_ABS_TOL})", parts.join("; ")));
}

#[test]
fn c08_exponent_relation() {
    let mut ok = true;
    let mut parts = Vec::new();
    for (g, collapse) in nu_fits() {
        let mu = mu_fit(*g, 1 << 12, 1 << 16).exponent;
        let sym = mu / collapse.nu;
        let broken = (mu - 1.0) / collapse.nu;
        ok &= (sym - ALPHA_SYMMETRIC).abs() <= ALPHA_SYMMETRIC_TOL;
        ok &= (broken - ALPHA_BROKEN).abs() <= ALPHA_BROKEN_TOL;
        parts.push(format!("γ={g}: μ/ν={sym:.4} (μ-1)/ν={broken:.4}"));
    }
    report(
        "08 alpha",
        ok,
        format!(
            "{} (targets {ALPHA_SYMMETRIC}±{ALPHA_SYMMETRIC_TOL}, {ALPHA_BROKEN}±{ALPHA_BROKEN_TOL})",
            parts.join("; ")
        ),
    );
}

#[test]
fn c09_gaps() {
    let cfg = SolverConfig::default();
    let n = 1 << 14;
    let sym = ed_gap(&ModelParams::new(n, 0.5, 2.0).unwrap(), &cfg).unwrap();
    let sym_ref = 2.0 * 1.5f64.sqrt();
    let broken = ed_gap(&ModelParams::new(n, 0.0, 0.0).unwrap(), &cfg).unwrap();
    let r1 = (sym - sym_ref).abs() / sym_ref;
    let r2 = (broken - 2.0).abs() / 2.0;
    report(
        "09 gaps",
        r1 < GAP_REL_TOL && r2 < GAP_REL_TOL,
        format!("γ=0.5 h=2: {sym:.6} vs {sym_ref:.6} ({r1:.2e}); γ=0 h=0: {broken:.6} vs 2 ({r2:.2e}) (tol {GAP_REL_TOL})"),
    );
}

fn spectrum(m: &BandedSpinMatrix) -> Vec<f64> {
    full_spectrum(m, &SolverConfig::default()).unwrap().energies
}

#[test]
fn c10_property_suites_and_verify() {
    let cfg = FidelityConfig::default();
    let mut failures = Vec::new();

    // Fidelity lies in [0, 1] and χ_F is nonnegative.
    for &(n, g, h1, h2) in &[(16, -0.3, 0.4, 0.45), (64, 0.0, 0.9, 1.1), (128, 0.5, 1.5, 1.7)] {
        let p = ModelParams::new(n, g, h1).unwrap();
        let f = fidelity_overlap(&p, h1, h2, &cfg).unwrap();
        let chi = chi_auto(&p, &cfg).unwrap().value;
        if !(0.0..=1.0).contains(&f) || chi < 0.0 {
            failures.push(format!("bounds N={n}: F={f} chi={chi}"));
        }
    }

    // H and H_I never couple the two parity sectors.
    for n in [5, 8, 33] {
        let p = ModelParams::new(n, 0.4, 0.8).unwrap();
        for m in [build_hamiltonian(&p).unwrap(), build_driving(&p).unwrap()] {
            for i in 0..=n {
                for j in 0..=n {
                    if Parity::of_index(i) != Parity::of_index(j) && m.get(i, j) != 0.0 {
                        failures.push(format!("parity N={n} ({i},{j})"));
                    }
                }
            }
        }
    }

    // Spectrum is invariant under h -> -h.
    for n in [3, 10, 40] {
        let m = build_hamiltonian(&ModelParams::new(n, -0.4, 0.9).unwrap()).unwrap();
        let diag: Vec<f64> = m
            .diag()
            .iter()
            .zip(DickeBasis::new(n).magnetizations())
            .map(|(d, mz)| d + 4.0 * 0.9 * mz)
            .collect();
        let reflected = BandedSpinMatrix::new(diag, m.offdiag2().to_vec()).unwrap();
        let diff = spectrum(&m)
            .iter()
            .zip(spectrum(&reflected))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if diff > 1e-10 {
            failures.push(format!("reflection N={n}: {diff:e}"));
        }
    }

    // The plain symmetric difference converges at second order in δ.
    let p = ModelParams::new(32, 0.3, 1.4).unwrap();
    let exact = chi_perturbative(&p, &cfg).unwrap().value;
    let gs = |h: f64| {
        let m = build_hamiltonian(&p.with_field(h).unwrap()).unwrap();
        ground_state(&m, &SolverConfig::default()).unwrap().pair.vector
    };
    let raw = |d: f64| {
        let (a, b) = (gs(1.4 - d / 2.0), gs(1.4 + d / 2.0));
        let s: f64 = a.iter().zip(&b).map(|(x, y)| x * y).sum();
        2.0 * (1.0 - s.abs()) / (d * d)
    };
    let e1 = (raw(0.04) - exact).abs();
    let e2 = (raw(0.02) - exact).abs();
    let order = (e1 / e2).log2();
    if !(order >= CONVERGENCE_ORDER_MIN) {
        failures.push(format!("convergence order {order:.3}"));
    }

    // Fits are exact on noiseless power laws.
    let pts: Vec<(usize, f64)> = pow2(6, 14).iter().map(|&n| (n, 0.3 * (n as f64).powf(1.37))).collect();
    let fit = fit_power_law(&pts).unwrap();
    if (fit.exponent - 1.37).abs() > 1e-10 {
        failures.push(format!("fit exponent {}", fit.exponent));
    }

    let lib = execute(LmgCommand::Verify, &RunConfig::default()).unwrap();
    if lib.failures != 0 {
        failures.push(format!("verify table has {} failures", lib.failures));
    }
    let status = Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(["verify", "--out"])
        .arg(std::env::temp_dir().join(format!("lmg-acceptance-verify-{}.csv", std::process::id())))
        .status()
        .unwrap();
    if status.code() != Some(0) {
        failures.push(format!("lmg verify exit {:?}", status.code()));
    }

    report(
        "10 properties+verify",
        failures.is_empty(),
        if failures.is_empty() {
            format!("bounds, parity, reflection, order {order:.3} (min {CONVERGENCE_ORDER_MIN}), fit exactness, verify exit 0")
        } else {
            failures.join("; ")
        },
    );
}
