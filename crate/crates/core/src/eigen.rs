//! Eigensolvers for the LMG matrices.
//!
//! After the parity split every block is a symmetric tridiagonal matrix, so two
//! classical tridiagonal routines cover all needs:
//!
//! - extremal eigenvalues by Sturm-sequence bisection, with the ground vector from
//!   shifted inverse iteration. Cost is O(n) per eigenvalue, so an `N = 2^16`
//!   ground state takes well under a second.
//! - complete eigendecompositions by implicit QL with Wilkinson-type shifts, used
//!   for the perturbative sum and for small-N cross checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{BandedSpinMatrix, Parity, SectorBlock};

/// Solver knobs shared by every eigen routine.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    /// Residual tolerance, relative to `max(1, ‖H‖)`.
    pub tol: f64,
    /// Largest dimension accepted by [`full_spectrum`].
    pub dense_cap: usize,
    /// Inverse-iteration cap; `None` means `50·√n`.
    pub max_iterations: Option<usize>,
    /// Gaps below `degeneracy_factor · tol · max(1, ‖H‖)` count as degenerate.
    pub degeneracy_factor: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-12,
            dense_cap: 4096,
            max_iterations: None,
            degeneracy_factor: 100.0,
        }
    }
}

impl SolverConfig {
    fn scale(norm: f64) -> f64 {
        norm.max(1.0)
    }

    pub fn residual_bound(&self, norm: f64) -> f64 {
        self.tol * Self::scale(norm)
    }

    pub fn degeneracy_guard(&self, norm: f64) -> f64 {
        self.degeneracy_factor * self.tol * Self::scale(norm)
    }

    fn iteration_cap(&self, n: usize) -> usize {
        self.max_iterations
            .unwrap_or_else(|| ((50.0 * (n as f64).sqrt()).ceil() as usize).max(10))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenPair {
    pub energy: f64,
    /// Unit norm; the entry of largest magnitude is nonnegative.
    pub vector: Vec<f64>,
}

/// Ground eigenpair of a banded matrix together with its sector bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroundState {
    pub pair: EigenPair,
    pub residual: f64,
    pub parity: Parity,
    /// Lowest energy of the other parity sector.
    pub other_sector_energy: f64,
    /// First excitation inside the ground-state sector, if the sector has one.
    pub sector_gap: Option<f64>,
    /// Set when `sector_gap` falls below the degeneracy guard.
    pub degenerate: bool,
}

impl GroundState {
    pub fn energy(&self) -> f64 {
        self.pair.energy
    }

    pub fn vector(&self) -> &[f64] {
        &self.pair.vector
    }
}

/// Complete eigendecomposition in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub energies: Vec<f64>,
    pub vectors: Vec<Vec<f64>>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }
}

/// Real symmetric tridiagonal matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    diag: Vec<f64>,
    off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidParams("empty tridiagonal matrix".into()));
        }
        if off.len() + 1 != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len() - 1,
                got: off.len(),
            });
        }
        Ok(SymTridiagonal { diag, off })
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn off(&self) -> &[f64] {
        &self.off
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        let n = self.len();
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for i in 0..n - 1 {
            out[i] += self.off[i] * v[i + 1];
            out[i + 1] += self.off[i] * v[i];
        }
        out
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            if i > 0 {
                r += self.off[i - 1].abs();
            }
            if i + 1 < n {
                r += self.off[i].abs();
            }
            lo = lo.min(self.diag[i] - r);
            hi = hi.max(self.diag[i] + r);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivmin(&self) -> f64 {
        let emax = self.off.iter().map(|e| e * e).fold(1.0, f64::max);
        f64::MIN_POSITIVE * emax
    }

    /// Number of eigenvalues strictly below `x` (Sturm sequence).
    pub fn count_below(&self, x: f64) -> usize {
        let pivmin = self.pivmin();
        let mut count = 0;
        let mut q = self.diag[0] - x;
        if q.abs() < pivmin {
            q = -pivmin;
        }
        if q < 0.0 {
            count += 1;
        }
        for i in 1..self.len() {
            let e = self.off[i - 1];
            q = self.diag[i] - x - e * e / q;
            if q.abs() < pivmin {
                q = -pivmin;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// `k`-th smallest eigenvalue (0-based), bisected to machine precision.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len(), "eigenvalue index {k} out of range");
        if self.len() == 1 {
            return self.diag[0];
        }
        let (glo, ghi) = self.gershgorin();
        let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()) + self.pivmin();
        let mut lo = glo - pad;
        let mut hi = ghi + pad;
        loop {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if hi - lo <= 2.0 * f64::EPSILON * lo.abs().max(hi.abs()) + self.pivmin() {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Solve `(T - σ) y = b` for σ below the spectrum; `None` if a pivot is not positive.
    fn solve_shifted_spd(&self, sigma: f64, b: &[f64]) -> Option<Vec<f64>> {
        let n = self.len();
        let mut pivots = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        let mut p = self.diag[0] - sigma;
        if p <= 0.0 {
            return None;
        }
        pivots.push(p);
        y.push(b[0]);
        for i in 1..n {
            let l = self.off[i - 1] / pivots[i - 1];
            p = self.diag[i] - sigma - l * self.off[i - 1];
            if p <= 0.0 {
                return None;
            }
            pivots.push(p);
            y.push(b[i] - l * y[i - 1]);
        }
        let mut x = vec![0.0; n];
        x[n - 1] = y[n - 1] / pivots[n - 1];
        for i in (0..n - 1).rev() {
            x[i] = (y[i] - self.off[i] * x[i + 1]) / pivots[i];
        }
        Some(x)
    }

    /// Lowest eigenpair: bisection for the eigenvalue, then inverse iteration from
    /// the normalized all-ones vector with a shift just below it.
    pub fn ground_pair(&self, cfg: &SolverConfig) -> Result<(EigenPair, f64)> {
        let n = self.len();
        let norm = self.norm_bound();
        let lambda = self.eigenvalue(0);
        if n == 1 {
            return Ok((
                EigenPair {
                    energy: self.diag[0],
                    vector: vec![1.0],
                },
                0.0,
            ));
        }

        let mut eta = 1e3 * f64::EPSILON * norm.max(f64::MIN_POSITIVE);
        let mut x = vec![1.0 / (n as f64).sqrt(); n];
        let cap = cfg.iteration_cap(n);
        let mut last_change = f64::INFINITY;
        let mut iterations = 0;
        while iterations < cap {
            iterations += 1;
            let Some(mut y) = self.solve_shifted_spd(lambda - eta, &x) else {
                eta *= 16.0;
                continue;
            };
            let norm_y = l2(&y);
            if !norm_y.is_finite() || norm_y == 0.0 {
                eta *= 16.0;
                continue;
            }
            let align = if dot(&y, &x) < 0.0 { -1.0 } else { 1.0 };
            y.iter_mut().for_each(|v| *v *= align / norm_y);
            let change = y.iter().zip(&x).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            x = y;
            // Stop once the update is at roundoff or no longer shrinking.
            if change <= 4.0 * f64::EPSILON * (n as f64).sqrt() || change > 0.5 * last_change {
                break;
            }
            last_change = change;
        }

        let tx = self.matvec(&x);
        let energy = dot(&x, &tx);
        let residual = tx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - energy * b).powi(2))
            .sum::<f64>()
            .sqrt();
        if residual > cfg.residual_bound(norm) {
            return Err(Error::NoConvergence {
                iterations,
                residual,
            });
        }
        canonicalize_sign(&mut x);
        Ok((EigenPair { energy, vector: x }, residual))
    }

    /// Full eigendecomposition by implicit QL; columns returned in ascending order.
    pub fn eigen_decomposition(&self) -> Result<(Vec<f64>, Vec<Vec<f64>>)> {
        let n = self.len();
        let mut d = self.diag.clone();
        let mut e = self.off.clone();
        e.push(0.0);
        // z[col * n + row]; column `col` converges to the eigenvector of d[col].
        let mut z = vec![0.0; n * n];
        for i in 0..n {
            z[i * n + i] = 1.0;
        }

        for l in 0..n {
            let mut iter = 0;
            loop {
                let mut m = l;
                while m + 1 < n {
                    let dd = d[m].abs() + d[m + 1].abs();
                    if e[m].abs() <= f64::EPSILON * dd {
                        break;
                    }
                    m += 1;
                }
                if m == l {
                    break;
                }
                iter += 1;
                if iter > 60 {
                    return Err(Error::NoConvergence {
                        iterations: iter,
                        residual: e[l].abs(),
                    });
                }
                let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                let mut r = g.hypot(1.0);
                g = d[m] - d[l] + e[l] / (g + r.copysign(g));
                let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
                let mut i = m;
                let mut underflow = false;
                while i > l {
                    i -= 1;
                    let f = s * e[i];
                    let b = c * e[i];
                    r = f.hypot(g);
                    e[i + 1] = r;
                    if r == 0.0 {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                    let (left, right) = z.split_at_mut((i + 1) * n);
                    let zi = &mut left[i * n..];
                    let zi1 = &mut right[..n];
                    for k in 0..n {
                        let t = zi1[k];
                        zi1[k] = s * zi[k] + c * t;
                        zi[k] = c * zi[k] - s * t;
                    }
                }
                if underflow {
                    continue;
                }
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| d[a].total_cmp(&d[b]));
        let energies = order.iter().map(|&k| d[k]).collect();
        let vectors = order
            .iter()
            .map(|&k| {
                let mut v = z[k * n..(k + 1) * n].to_vec();
                canonicalize_sign(&mut v);
                v
            })
            .collect();
        Ok((energies, vectors))
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn l2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Flip the vector so its largest-magnitude entry is nonnegative.
pub fn canonicalize_sign(v: &mut [f64]) {
    let mut best = 0.0;
    let mut sign = 1.0;
    for &x in v.iter() {
        if x.abs() > best {
            best = x.abs();
            sign = if x < 0.0 { -1.0 } else { 1.0 };
        }
    }
    if sign < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Ground state of `m`.
///
/// Both parity sectors are solved and the lower one wins. When the two sector
/// minima agree within the degeneracy guard (the broken phase at large N, or an
/// exact crossing at h = 0) the sector holding the polarized state `m = S` is
/// taken, so adjacent fields resolve the tie the same way. Such a cross-sector tie
/// is harmless for fidelity work because the driving operator preserves parity;
/// `degenerate` only reports a degeneracy inside the chosen sector.
pub fn ground_state(m: &BandedSpinMatrix, cfg: &SolverConfig) -> Result<GroundState> {
    let norm = m.norm_bound();
    let guard = cfg.degeneracy_guard(norm);
    let (even, odd) = m.split_sectors();
    let e_even = even.matrix.eigenvalue(0);
    let e_odd = odd.matrix.eigenvalue(0);
    let parity = if (e_even - e_odd).abs() <= guard {
        Parity::polarized(m.dimension())
    } else if e_even < e_odd {
        Parity::Even
    } else {
        Parity::Odd
    };
    let (block, other_energy) = match parity {
        Parity::Even => (&even, e_odd),
        Parity::Odd => (&odd, e_even),
    };
    sector_ground_state(block, other_energy, norm, cfg)
}

fn sector_ground_state(
    block: &SectorBlock,
    other_sector_energy: f64,
    norm: f64,
    cfg: &SolverConfig,
) -> Result<GroundState> {
    let (pair, residual) = block.matrix.ground_pair(cfg)?;
    let sector_gap = (block.matrix.len() > 1).then(|| block.matrix.eigenvalue(1) - pair.energy);
    let degenerate = sector_gap.is_some_and(|g| g < cfg.degeneracy_guard(norm));
    let mut vector = block.sector.embed(&pair.vector);
    canonicalize_sign(&mut vector);
    Ok(GroundState {
        pair: EigenPair {
            energy: pair.energy,
            vector,
        },
        residual,
        parity: block.sector.label,
        other_sector_energy,
        sector_gap,
        degenerate,
    })
}

/// Full spectrum of one sector block, vectors expressed in the sector sub-basis.
pub fn sector_spectrum(block: &SectorBlock, cfg: &SolverConfig) -> Result<Spectrum> {
    let n = block.matrix.len();
    if n > cfg.dense_cap {
        return Err(Error::DenseCapExceeded {
            dimension: n,
            cap: cfg.dense_cap,
        });
    }
    let (energies, vectors) = block.matrix.eigen_decomposition()?;
    Ok(Spectrum { energies, vectors })
}

/// Complete orthonormal eigendecomposition of `m`, ascending.
pub fn full_spectrum(m: &BandedSpinMatrix, cfg: &SolverConfig) -> Result<Spectrum> {
    if m.dimension() > cfg.dense_cap {
        return Err(Error::DenseCapExceeded {
            dimension: m.dimension(),
            cap: cfg.dense_cap,
        });
    }
    let (even, odd) = m.split_sectors();
    let mut entries: Vec<(f64, Vec<f64>)> = Vec::with_capacity(m.dimension());
    for block in [&even, &odd] {
        let (energies, vectors) = block.matrix.eigen_decomposition()?;
        for (e, v) in energies.into_iter().zip(vectors) {
            let mut full = block.sector.embed(&v);
            canonicalize_sign(&mut full);
            entries.push((e, full));
        }
    }
    // Stable sort keeps even-sector states first on exact ties.
    entries.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (energies, vectors) = entries.into_iter().unzip();
    Ok(Spectrum { energies, vectors })
}

/// `E_1 - E_0` of the full matrix (across both sectors).
pub fn gap(m: &BandedSpinMatrix) -> Result<f64> {
    let (even, odd) = m.split_sectors();
    let mut low: Vec<f64> = Vec::with_capacity(4);
    for block in [&even, &odd] {
        low.push(block.matrix.eigenvalue(0));
        if block.matrix.len() > 1 {
            low.push(block.matrix.eigenvalue(1));
        }
    }
    low.sort_by(f64::total_cmp);
    Ok((low[1] - low[0]).max(0.0))
}

/// First excitation inside the sector that holds the ground state.
pub fn sector_gap(m: &BandedSpinMatrix, cfg: &SolverConfig) -> Result<f64> {
    let gs = ground_state(m, cfg)?;
    gs.sector_gap.ok_or_else(|| {
        Error::InvalidParams("ground-state sector has a single state; no intra-sector gap".into())
    })
}
