use lmg_core::analytic::chi_broken;
use lmg_core::fidelity::sweep_curve;

use super::{bool_cell, Output};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{line_plot, Series};
use crate::table::{num, opt, ResultTable};

const COLUMNS: [&str; 10] = [
    "N",
    "gamma",
    "h",
    "chi",
    "chi_per_spin",
    "method",
    "delta_h",
    "convergence_error",
    "flagged",
    "error",
];
const INSET_COLUMNS: [&str; 3] = ["chi_hp_leading", "chi_minus_leading", "chi_hp_subleading"];

/// χ_F(h) for every `(N, γ)`; per-point failures are kept in the `error` column.
pub fn cmd_sweep(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    let inset = cfg.sweep.inset;
    let mut columns: Vec<&str> = COLUMNS.to_vec();
    if inset {
        columns.extend(INSET_COLUMNS);
    }
    let mut table = ResultTable::new("sweep", cfg, &columns);
    let grid = cfg.h_grid.values();
    let mut series = Vec::new();

    for &n in &cfg.sizes {
        for &gamma in &cfg.gammas {
            let curve = sweep_curve(n, gamma, &grid, &cfg.fidelity)?;
            for s in &curve.samples {
                let mut row = vec![n.to_string(), num(gamma), num(s.h)];
                let chi = match &s.estimate {
                    Ok(e) => {
                        row.extend([
                            num(e.value),
                            num(e.value / n as f64),
                            e.method.as_str().to_string(),
                            num(e.delta_h),
                            num(e.convergence_error),
                            bool_cell(e.flagged),
                            String::new(),
                        ]);
                        Some(e.value)
                    }
                    Err(err) => {
                        row.extend(vec![String::new(); 5]);
                        row.extend([bool_cell(true), err.to_string()]);
                        None
                    }
                };
                if inset {
                    match chi_broken(gamma, s.h, n) {
                        Ok(b) => row.extend([
                            num(b.leading),
                            opt(chi.map(|c| c - b.leading)),
                            num(b.subleading),
                        ]),
                        Err(_) => row.extend(vec![String::new(); 3]),
                    }
                }
                table.push(row);
            }
            series.push(Series {
                label: format!("N={n} γ={gamma}"),
                points: curve
                    .points()
                    .into_iter()
                    .map(|(h, c)| (h, c / n as f64))
                    .collect(),
            });
        }
    }

    let mut out = Output::new(table);
    out.plots.push((
        String::new(),
        line_plot("fidelity susceptibility", "h", "chi_F / N", &series),
    ));
    Ok(out)
}
