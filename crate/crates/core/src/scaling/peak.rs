use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::ChiOracle;
use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Outcome of [`maximize_unimodal`].
#[derive(Debug, Clone, PartialEq)]
pub struct MaxSearch {
    pub x: f64,
    pub value: f64,
    /// Final bracket and the function values at its ends.
    pub bracket: ((f64, f64), (f64, f64)),
    pub evaluations: usize,
    /// Every `(x, f(x))` evaluated, in evaluation order.
    pub samples: Vec<(f64, f64)>,
}

/// Golden-section search for the maximum of a unimodal function on `[a, b]`,
/// finished with one parabolic step through the best three samples.
///
/// The bracket ends are evaluated first. If the best point ends up within
/// `tol` of an original end, there is no interior maximum and the samples are
/// returned in the error.
pub fn maximize_unimodal<F>(mut f: F, (a0, b0): (f64, f64), tol: f64, max_evals: usize) -> Result<MaxSearch>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(b0 > a0) || !(tol > 0.0) {
        return Err(Error::InvalidParams(format!(
            "need a < b and tol > 0, got [{a0}, {b0}] tol {tol}"
        )));
    }
    let mut samples = Vec::new();
    let mut eval = |x: f64, samples: &mut Vec<(f64, f64)>| -> Result<f64> {
        let y = f(x)?;
        samples.push((x, y));
        Ok(y)
    };

    let (mut a, mut b) = (a0, b0);
    let mut fa = eval(a, &mut samples)?;
    let mut fb = eval(b, &mut samples)?;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = eval(c, &mut samples)?;
    let mut fd = eval(d, &mut samples)?;
    while b - a > tol && samples.len() < max_evals.saturating_sub(1) {
        if fc >= fd {
            b = d;
            fb = fd;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = eval(c, &mut samples)?;
        } else {
            a = c;
            fa = fc;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = eval(d, &mut samples)?;
        }
    }

    // Parabola through the best sample and its neighbours in x.
    let mut sorted = samples.clone();
    sorted.sort_by(|p, q| p.0.total_cmp(&q.0));
    let best = (0..sorted.len())
        .max_by(|&i, &j| sorted[i].1.total_cmp(&sorted[j].1))
        .expect("at least four samples");
    if best > 0 && best + 1 < sorted.len() {
        let (x0, y0) = sorted[best - 1];
        let (x1, y1) = sorted[best];
        let (x2, y2) = sorted[best + 1];
        let num = (x1 - x0).powi(2) * (y1 - y2) - (x1 - x2).powi(2) * (y1 - y0);
        let den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
        if den != 0.0 {
            let xv = x1 - 0.5 * num / den;
            if xv > x0 && xv < x2 && xv != x1 {
                eval(xv, &mut samples)?;
            }
        }
    }

    let &(x, value) = samples
        .iter()
        .max_by(|p, q| p.1.total_cmp(&q.1))
        .expect("non-empty");
    let edge = tol.max(1e-12 * (b0 - a0));
    if x - a0 <= edge || b0 - x <= edge {
        return Err(Error::NoInteriorMaximum { samples });
    }
    Ok(MaxSearch {
        x,
        value,
        bracket: ((a, fa), (b, fb)),
        evaluations: samples.len(),
        samples,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PeakOptions {
    pub bracket: (f64, f64),
    /// Absolute tolerance on `h_max`.
    pub tol_h: f64,
    pub max_evaluations: usize,
}

impl Default for PeakOptions {
    fn default() -> Self {
        PeakOptions {
            bracket: (0.5, 1.0),
            tol_h: 1e-6,
            max_evaluations: 48,
        }
    }
}

/// Location and height of the χ_F maximum at one `(N, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PeakResult {
    pub n: usize,
    pub gamma: f64,
    pub h_max: f64,
    pub chi_max: f64,
    /// Width of the final golden-section bracket.
    pub refinement_width: f64,
    pub evaluations: usize,
}

pub fn locate_peak(oracle: &dyn ChiOracle, n: usize, gamma: f64, opts: &PeakOptions) -> Result<PeakResult> {
    let (lo, hi) = opts.bracket;
    if !(lo >= 0.0 && hi <= 1.0 && lo < hi) {
        return Err(Error::InvalidParams(format!(
            "peak bracket must lie in [0, 1], got [{lo}, {hi}]"
        )));
    }
    let search = maximize_unimodal(
        |h| oracle.chi(n, gamma, h),
        opts.bracket,
        opts.tol_h,
        opts.max_evaluations,
    )?;
    let ((a, _), (b, _)) = search.bracket;
    Ok(PeakResult {
        n,
        gamma,
        h_max: search.x,
        chi_max: search.value,
        refinement_width: b - a,
        evaluations: search.evaluations,
    })
}

/// Peaks for several sizes at fixed γ, computed in parallel, returned in input order.
pub fn peak_series(oracle: &dyn ChiOracle, sizes: &[usize], gamma: f64, opts: &PeakOptions) -> Result<Vec<PeakResult>> {
    sizes
        .par_iter()
        .map(|&n| locate_peak(oracle, n, gamma, opts))
        .collect()
}
