use lmg_core::scaling::{estimate_nu_collapse, peak_series, sample_around_peak, CollapseCurve};
use rayon::prelude::*;

use super::{oracle, Output};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{line_plot, Series};
use crate::table::{num, ResultTable};

/// Rescaled curves `(x, y) = (N^ν (h - h_max), (χ_max - χ)/χ)` at the fitted ν, per γ.
pub fn cmd_collapse(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    if cfg.sizes.len() < 3 {
        return Err(CliError::Config(format!(
            "collapse needs at least 3 sizes, got {}",
            cfg.sizes.len()
        )));
    }
    let oracle = oracle(cfg);
    let mut table = ResultTable::new(
        "collapse",
        cfg,
        &["gamma", "N", "h", "chi", "x", "y", "nu", "nu_err"],
    );
    let mut plots = Vec::new();
    for &gamma in &cfg.gammas {
        let peaks = peak_series(oracle.as_ref(), &cfg.sizes, gamma, &cfg.peak)?;
        let curves: Vec<CollapseCurve> = peaks
            .par_iter()
            .map(|p| sample_around_peak(oracle.as_ref(), p, &cfg.collapse))
            .collect::<Result<_, _>>()?;
        let result = estimate_nu_collapse(&curves, &cfg.collapse)?;
        for (curve, rescaled) in curves.iter().zip(&result.curves) {
            // Rescaling is monotone in h, so both lists share one order.
            for (&(h, chi), &(x, y)) in curve.samples.iter().zip(&rescaled.points) {
                table.push(vec![
                    num(gamma),
                    curve.n.to_string(),
                    num(h),
                    num(chi),
                    num(x),
                    num(y),
                    num(result.nu),
                    num(result.uncertainty),
                ]);
            }
        }
        table.push_meta(
            &format!("nu[gamma={gamma}]"),
            format!("{} +- {}", result.nu, result.uncertainty),
        );
        let series: Vec<Series> = result
            .curves
            .iter()
            .map(|c| Series {
                label: format!("N={}", c.n),
                points: c.points.clone(),
            })
            .collect();
        plots.push((
            format!("gamma{gamma}"),
            line_plot(
                &format!("collapse at γ={gamma}, ν={:.4}", result.nu),
                "N^ν (h - h_max)",
                "(chi_max - chi)/chi",
                &series,
            ),
        ));
    }
    let mut out = Output::new(table);
    out.plots = plots;
    Ok(out)
}
