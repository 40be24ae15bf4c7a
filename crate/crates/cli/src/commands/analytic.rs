use lmg_core::analytic::{ed_gap, predict};
use lmg_core::eigen::ground_state;
use lmg_core::fidelity::chi_auto;
use lmg_core::model::build_hamiltonian;
use lmg_core::ModelParams;
use rayon::prelude::*;

use super::Output;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{num, opt, ResultTable};

const COLUMNS: [&str; 15] = [
    "N",
    "gamma",
    "h",
    "phase",
    "chi_ed",
    "chi_hp_leading",
    "chi_hp_subleading",
    "chi_rel_err",
    "gap_ed",
    "gap_hp",
    "gap_rel_err",
    "e0_ed",
    "e0_hp",
    "e0_rel_err",
    "note",
];

fn rel_err(ed: Option<f64>, hp: Option<f64>) -> Option<f64> {
    match (ed, hp) {
        (Some(a), Some(b)) if b != 0.0 => Some((a - b).abs() / b.abs()),
        _ => None,
    }
}

fn row(cfg: &RunConfig, n: usize, gamma: f64, h: f64) -> Result<Vec<String>, CliError> {
    let params = ModelParams::new(n, gamma, h)?;
    let hp = predict(gamma, h, n)?;
    let mut notes = Vec::new();
    if h == 1.0 {
        notes.push("singular point h=1: no HP susceptibility".to_string());
    }
    let mut keep = |r: Result<f64, lmg_core::Error>, what: &str| match r {
        Ok(v) => Some(v),
        Err(e) => {
            notes.push(format!("{what}: {e}"));
            None
        }
    };
    let chi_ed = keep(chi_auto(&params, &cfg.fidelity).map(|e| e.value), "chi");
    let gap_ed = keep(ed_gap(&params, &cfg.fidelity.solver), "gap");
    let e0_ed = keep(
        build_hamiltonian(&params).and_then(|m| ground_state(&m, &cfg.fidelity.solver)).map(|g| g.energy()),
        "e0",
    );
    Ok(vec![
        n.to_string(),
        num(gamma),
        num(h),
        hp.phase.as_str().to_string(),
        opt(chi_ed),
        opt(hp.chi_f),
        opt(hp.chi_subleading),
        opt(rel_err(chi_ed, hp.chi_f)),
        opt(gap_ed),
        num(hp.gap),
        opt(rel_err(gap_ed, Some(hp.gap))),
        opt(e0_ed),
        num(hp.ground_energy),
        opt(rel_err(e0_ed, Some(hp.ground_energy))),
        notes.join("; "),
    ])
}

/// Exact diagonalization next to the closed-form large-N predictions.
pub fn cmd_analytic(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    let grid = cfg.h_grid.values();
    let mut points = Vec::new();
    for &n in &cfg.sizes {
        for &g in &cfg.gammas {
            points.extend(grid.iter().map(|&h| (n, g, h)));
        }
    }
    let rows: Vec<Vec<String>> = points
        .par_iter()
        .map(|&(n, g, h)| row(cfg, n, g, h))
        .collect::<Result<_, _>>()?;
    let mut table = ResultTable::new("analytic", cfg, &COLUMNS);
    for r in rows {
        table.push(r);
    }
    Ok(Output::new(table))
}
