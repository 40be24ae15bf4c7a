use lmg_core::scaling::{fit_delta, fit_power_law, peak_series, PeakResult};

use super::{oracle, Output};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::svg::{line_plot, Series};
use crate::table::{num, ResultTable};

fn all_peaks(cfg: &RunConfig) -> Result<Vec<(f64, Vec<PeakResult>)>, CliError> {
    let oracle = oracle(cfg);
    cfg.gammas
        .iter()
        .map(|&g| Ok((g, peak_series(oracle.as_ref(), &cfg.sizes, g, &cfg.peak)?)))
        .collect()
}

/// Location and height of the χ_F maximum for every `(γ, N)`.
pub fn cmd_peak(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    let mut table = ResultTable::new(
        "peak",
        cfg,
        &[
            "gamma",
            "N",
            "h_max",
            "chi_max",
            "chi_max_per_spin",
            "refinement_width",
            "evaluations",
        ],
    );
    let mut series = Vec::new();
    for (gamma, peaks) in all_peaks(cfg)? {
        for p in &peaks {
            table.push(vec![
                num(gamma),
                p.n.to_string(),
                num(p.h_max),
                num(p.chi_max),
                num(p.chi_max / p.n as f64),
                num(p.refinement_width),
                p.evaluations.to_string(),
            ]);
        }
        series.push(Series {
            label: format!("γ={gamma}"),
            points: peaks
                .iter()
                .map(|p| ((p.n as f64).log2(), p.chi_max.ln()))
                .collect(),
        });
    }
    let mut out = Output::new(table);
    out.plots.push((String::new(), line_plot("peak height", "log2 N", "ln chi_max", &series)));
    Ok(out)
}

/// μ and δ per γ and size window, from one set of peak searches.
pub fn cmd_scale(cfg: &RunConfig) -> Result<Output, CliError> {
    cfg.validate()?;
    if cfg.scale.windows.is_empty() {
        return Err(CliError::Config("scale.windows is empty".into()));
    }
    for &(lo, hi) in &cfg.scale.windows {
        let inside = cfg.sizes.iter().filter(|&&n| n >= lo && n <= hi).count();
        if inside < 3 {
            return Err(CliError::Config(format!(
                "window [{lo}, {hi}] contains {inside} size(s); at least 3 are needed"
            )));
        }
    }
    let mut table = ResultTable::new(
        "scale",
        cfg,
        &[
            "gamma",
            "n_min",
            "n_max",
            "points",
            "mu",
            "mu_err",
            "mu_residual",
            "delta",
            "delta_err",
            "delta_residual",
        ],
    );
    for (gamma, peaks) in all_peaks(cfg)? {
        for &(lo, hi) in &cfg.scale.windows {
            let window: Vec<PeakResult> = peaks.iter().copied().filter(|p| p.n >= lo && p.n <= hi).collect();
            let pts: Vec<(usize, f64)> = window.iter().map(|p| (p.n, p.chi_max)).collect();
            let mu = fit_power_law(&pts)?;
            let delta = fit_delta(&window, cfg.scale.h_c)?;
            table.push(vec![
                num(gamma),
                mu.size_range.0.to_string(),
                mu.size_range.1.to_string(),
                mu.points.to_string(),
                num(mu.exponent),
                num(mu.uncertainty),
                num(mu.residual),
                num(delta.exponent),
                num(delta.uncertainty),
                num(delta.residual),
            ]);
        }
    }
    Ok(Output::new(table))
}
