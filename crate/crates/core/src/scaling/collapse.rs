use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ChiOracle, PeakResult};
use crate::error::{Error, Result};
use crate::fidelity::FidelityCurve;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// One system size prepared for collapse: samples `(h, χ_F)` near its own peak.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseCurve {
    pub n: usize,
    pub h_max: f64,
    pub chi_max: f64,
    pub samples: Vec<(f64, f64)>,
}

impl CollapseCurve {
    pub fn from_fidelity(curve: &FidelityCurve, peak: &PeakResult) -> Self {
        CollapseCurve {
            n: curve.n,
            h_max: peak.h_max,
            chi_max: peak.chi_max,
            samples: curve.points(),
        }
    }

    /// `(x, y) = (N^ν (h - h_max), (χ_max - χ)/χ)`, sorted by x.
    pub fn rescale(&self, nu: f64) -> Vec<(f64, f64)> {
        let scale = (self.n as f64).powf(nu);
        let mut pts: Vec<(f64, f64)> = self
            .samples
            .iter()
            .map(|&(h, chi)| (scale * (h - self.h_max), (self.chi_max - chi) / chi))
            .collect();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        pts
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CollapseOptions {
    pub nu_min: f64,
    pub nu_max: f64,
    pub nu_step: f64,
    /// Points of the common x-grid the curves are interpolated onto.
    pub grid_points: usize,
    /// Samples are taken where `(χ_max - χ)/χ ≤ y_max` (1 = down to half maximum).
    pub y_max: f64,
    /// Samples per curve in [`sample_around_peak`].
    pub samples_per_curve: usize,
}

impl Default for CollapseOptions {
    fn default() -> Self {
        CollapseOptions {
            nu_min: 0.3,
            nu_max: 1.0,
            nu_step: 0.005,
            grid_points: 200,
            y_max: 1.0,
            samples_per_curve: 41,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RescaledCurve {
    pub n: usize,
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CollapseResult {
    pub nu: f64,
    /// Collapse spread at `nu`.
    pub objective: f64,
    /// Shift of ν that doubles the spread, from the local curvature.
    pub uncertainty: f64,
    pub curves: Vec<RescaledCurve>,
    /// Coarse scan `(ν, spread)`.
    pub scan: Vec<(f64, f64)>,
    pub size_range: (usize, usize),
}

impl CollapseResult {
    pub fn as_fit(&self) -> super::ScalingFit {
        super::ScalingFit {
            quantity: super::Quantity::Nu,
            exponent: self.nu,
            uncertainty: self.uncertainty,
            residual: self.objective.sqrt(),
            size_range: self.size_range,
            points: self.curves.len(),
            prefactor: 1.0,
        }
    }
}

fn interpolate(pts: &[(f64, f64)], x: f64) -> f64 {
    let i = pts.partition_point(|p| p.0 < x);
    if i == 0 {
        return pts[0].1;
    }
    if i == pts.len() {
        return pts[pts.len() - 1].1;
    }
    let (x0, y0) = pts[i - 1];
    let (x1, y1) = pts[i];
    if x1 == x0 {
        return y0;
    }
    y0 + (y1 - y0) * (x - x0) / (x1 - x0)
}

/// Mean over curve pairs of the mean squared difference of the rescaled curves,
/// each linearly interpolated onto a uniform grid over their common x-range.
pub fn collapse_objective(curves: &[CollapseCurve], nu: f64, grid_points: usize) -> Result<f64> {
    let rescaled: Vec<Vec<(f64, f64)>> = curves.iter().map(|c| c.rescale(nu)).collect();
    if rescaled.iter().any(|r| r.len() < 2) {
        return Err(Error::Collapse("every curve needs at least two samples".into()));
    }
    let lo = rescaled.iter().map(|r| r[0].0).fold(f64::NEG_INFINITY, f64::max);
    let hi = rescaled.iter().map(|r| r[r.len() - 1].0).fold(f64::INFINITY, f64::min);
    if !(lo < hi) {
        return Err(Error::Collapse(format!(
            "rescaled curves do not overlap at nu = {nu} (common range [{lo}, {hi}])"
        )));
    }
    let k = grid_points.max(2);
    let grid: Vec<f64> = (0..k).map(|i| lo + (hi - lo) * i as f64 / (k - 1) as f64).collect();
    let interp: Vec<Vec<f64>> = rescaled
        .iter()
        .map(|r| grid.iter().map(|&x| interpolate(r, x)).collect())
        .collect();
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..interp.len() {
        for j in i + 1..interp.len() {
            total += interp[i]
                .iter()
                .zip(&interp[j])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                / k as f64;
            pairs += 1;
        }
    }
    Ok(total / pairs as f64)
}

/// ν minimizing [`collapse_objective`]: coarse scan, then golden-section
/// refinement within one scan step of the best grid point.
pub fn estimate_nu_collapse(curves: &[CollapseCurve], opts: &CollapseOptions) -> Result<CollapseResult> {
    if curves.len() < 3 {
        return Err(Error::Collapse(format!(
            "need at least 3 system sizes, got {}",
            curves.len()
        )));
    }
    if !(opts.nu_step > 0.0 && opts.nu_max > opts.nu_min) {
        return Err(Error::InvalidParams("invalid nu scan range".into()));
    }
    let steps = ((opts.nu_max - opts.nu_min) / opts.nu_step).round() as usize;
    let scan: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let nu = opts.nu_min + i as f64 * opts.nu_step;
            collapse_objective(curves, nu, opts.grid_points).map(|o| (nu, o))
        })
        .collect::<Result<_>>()?;
    let &(nu0, _) = scan
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .expect("non-empty scan");

    let obj = |nu: f64| collapse_objective(curves, nu, opts.grid_points);
    let mut a = (nu0 - opts.nu_step).max(opts.nu_min);
    let mut b = (nu0 + opts.nu_step).min(opts.nu_max);
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = obj(c)?;
    let mut fd = obj(d)?;
    while b - a > 1e-7 {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = obj(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = obj(d)?;
        }
    }
    let (mut nu, mut objective) = if fc <= fd { (c, fc) } else { (d, fd) };
    let f0 = obj(nu0)?;
    if f0 < objective {
        nu = nu0;
        objective = f0;
    }

    let s = opts.nu_step;
    let curvature = (obj((nu + s).min(opts.nu_max))? + obj((nu - s).max(opts.nu_min))? - 2.0 * objective) / (s * s);
    let uncertainty = if curvature > 0.0 {
        (2.0 * objective / curvature).sqrt()
    } else {
        f64::INFINITY
    };

    let n_min = curves.iter().map(|c| c.n).min().unwrap();
    let n_max = curves.iter().map(|c| c.n).max().unwrap();
    Ok(CollapseResult {
        nu,
        objective,
        uncertainty,
        curves: curves
            .iter()
            .map(|c| RescaledCurve {
                n: c.n,
                points: c.rescale(nu),
            })
            .collect(),
        scan,
        size_range: (n_min, n_max),
    })
}

/// Sample χ_F around a located peak, between the points where χ_F has fallen to
/// `χ_max / (1 + y_max)` on either side.
pub fn sample_around_peak(oracle: &dyn ChiOracle, peak: &PeakResult, opts: &CollapseOptions) -> Result<CollapseCurve> {
    let (n, gamma, hm, cm) = (peak.n, peak.gamma, peak.h_max, peak.chi_max);
    let y = |h: f64| -> Result<f64> {
        let chi = oracle.chi(n, gamma, h)?;
        Ok((cm - chi) / chi)
    };
    let edge = |side: f64| -> Result<f64> {
        let mut inner = 0.0;
        let mut outer = 1e-5;
        loop {
            let h = hm + side * outer;
            if h <= 0.0 || outer > 1.0 {
                return Err(Error::Collapse(format!(
                    "chi_F does not fall to the requested level on the {} side of h_max = {hm} (N = {n})",
                    if side < 0.0 { "low" } else { "high" }
                )));
            }
            if y(h)? >= opts.y_max {
                break;
            }
            inner = outer;
            outer *= 2.0;
        }
        while outer - inner > 1e-3 * outer {
            let mid = 0.5 * (inner + outer);
            if y(hm + side * mid)? >= opts.y_max {
                outer = mid;
            } else {
                inner = mid;
            }
        }
        Ok(hm + side * 0.5 * (inner + outer))
    };
    let lo = edge(-1.0)?;
    let hi = edge(1.0)?;
    let k = opts.samples_per_curve.max(3);
    let samples = (0..k)
        .into_par_iter()
        .map(|i| {
            let h = lo + (hi - lo) * i as f64 / (k - 1) as f64;
            oracle.chi(n, gamma, h).map(|c| (h, c))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CollapseCurve {
        n,
        h_max: hm,
        chi_max: cm,
        samples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scaling::{locate_peak, PeakOptions, SyntheticPeak};

    fn synthetic_curves(nu: f64) -> Vec<CollapseCurve> {
        let s = SyntheticPeak {
            nu,
            ..SyntheticPeak::default()
        };
        [256usize, 1024, 4096, 16384]
            .iter()
            .map(|&n| {
                let peak = locate_peak(&s, n, 0.0, &PeakOptions { tol_h: 1e-10, max_evaluations: 100, ..Default::default() }).unwrap();
                sample_around_peak(&s, &peak, &CollapseOptions::default()).unwrap()
            })
            .collect()
    }

    #[test]
    fn recovers_constructed_nu() {
        for nu in [0.5, 2.0 / 3.0] {
            let curves = synthetic_curves(nu);
            let r = estimate_nu_collapse(&curves, &CollapseOptions::default()).unwrap();
            assert!((r.nu - nu).abs() < 0.005, "{} vs {nu}", r.nu);
            assert!(r.objective < 1e-6);
        }
    }

    #[test]
    fn objective_is_locally_minimal() {
        let curves = synthetic_curves(0.5);
        let opts = CollapseOptions::default();
        let r = estimate_nu_collapse(&curves, &opts).unwrap();
        let left = collapse_objective(&curves, r.nu - opts.nu_step, opts.grid_points).unwrap();
        let right = collapse_objective(&curves, r.nu + opts.nu_step, opts.grid_points).unwrap();
        assert!(r.objective <= left && r.objective <= right);
    }

    #[test]
    fn too_few_sizes() {
        let curves = synthetic_curves(0.5);
        assert!(matches!(
            estimate_nu_collapse(&curves[..1], &CollapseOptions::default()),
            Err(Error::Collapse(_))
        ));
    }

    #[test]
    fn disjoint_curves_rejected() {
        let a = CollapseCurve { n: 10, h_max: 0.5, chi_max: 1.0, samples: vec![(0.6, 0.9), (0.7, 0.8)] };
        let b = CollapseCurve { n: 20, h_max: 0.5, chi_max: 1.0, samples: vec![(0.1, 0.9), (0.2, 0.8)] };
        let c = a.clone();
        assert!(matches!(collapse_objective(&[a, b, c], 0.5, 50), Err(Error::Collapse(_))));
    }

    #[test]
    fn interpolation() {
        let pts = [(0.0, 0.0), (1.0, 2.0), (3.0, 4.0)];
        assert_eq!(interpolate(&pts, 0.5), 1.0);
        assert_eq!(interpolate(&pts, 2.0), 3.0);
        assert_eq!(interpolate(&pts, -1.0), 0.0);
        assert_eq!(interpolate(&pts, 9.0), 4.0);
    }
}
