//! LMG Hamiltonian in the maximal-spin Dicke basis.
//!
//! Within the `S = N/2` sector the Hamiltonian
//!
//! ```text
//! H = -(λ/N)(1+γ)(S² - S_z² - N/2) - 2h S_z - (λ/2N)(1-γ)(S_+² + S_-²)
//! ```
//!
//! couples `|m⟩` only to `|m ± 2⟩`, so it is stored as a diagonal plus a single
//! offset-2 band. Basis states are ordered by ascending `m = -S, …, S`; index `i`
//! carries `m = i - S`.

use std::fmt;

use serde::Serialize;

use crate::eigen::SymTridiagonal;
use crate::error::{Error, Result};

/// One LMG instance `(N, γ, h, λ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModelParams {
    n: usize,
    gamma: f64,
    h: f64,
    lambda: f64,
}

impl ModelParams {
    /// Parameters with the default coupling `λ = 1`.
    pub fn new(n: usize, gamma: f64, h: f64) -> Result<Self> {
        Self::with_lambda(n, gamma, h, 1.0)
    }

    pub fn with_lambda(n: usize, gamma: f64, h: f64, lambda: f64) -> Result<Self> {
        let params = ModelParams {
            n,
            gamma,
            h,
            lambda,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidParams("N must be at least 1".into()));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidParams(format!("gamma = {} is not finite", self.gamma)));
        }
        if self.gamma == 1.0 {
            return Err(Error::InvalidParams(
                "gamma = 1 is the isotropic level-crossing line; the ground state carries a good \
                 quantum number there and the fidelity susceptibility is not defined"
                    .into(),
            ));
        }
        if self.gamma.abs() >= 1.0 {
            return Err(Error::InvalidParams(format!(
                "|gamma| must be < 1, got {}",
                self.gamma
            )));
        }
        if !self.h.is_finite() || self.h < 0.0 {
            return Err(Error::InvalidParams(format!(
                "h must be finite and >= 0 (the spectrum is symmetric under h -> -h), got {}",
                self.h
            )));
        }
        if !self.lambda.is_finite() || self.lambda < 0.0 {
            return Err(Error::InvalidParams(format!(
                "lambda must be finite and >= 0, got {}",
                self.lambda
            )));
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Same model at a different field.
    pub fn with_field(&self, h: f64) -> Result<Self> {
        Self::with_lambda(self.n, self.gamma, h, self.lambda)
    }

    pub fn basis(&self) -> DickeBasis {
        DickeBasis::new(self.n)
    }
}

/// The `S = N/2` Dicke basis `|S, m⟩`, `m = -S, …, S`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DickeBasis {
    n: usize,
}

impl DickeBasis {
    pub fn new(n: usize) -> Self {
        DickeBasis { n }
    }

    pub fn spin(&self) -> f64 {
        self.n as f64 / 2.0
    }

    pub fn dimension(&self) -> usize {
        self.n + 1
    }

    /// Magnetization of basis index `i`.
    pub fn m(&self, i: usize) -> f64 {
        i as f64 - self.spin()
    }

    pub fn magnetizations(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.dimension()).map(move |i| self.m(i))
    }
}

/// Parity of a basis index. The offset-2 coupling never changes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_index(i: usize) -> Self {
        if i % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    /// Sector containing the fully polarized state `m = S` (the last index).
    pub fn polarized(dimension: usize) -> Self {
        Parity::of_index(dimension - 1)
    }

    pub fn other(self) -> Self {
        match self {
            Parity::Even => Parity::Odd,
            Parity::Odd => Parity::Even,
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Index set of one parity sector inside a basis of `full_dimension` states.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParitySector {
    pub label: Parity,
    pub indices: Vec<usize>,
    pub full_dimension: usize,
}

impl ParitySector {
    pub fn new(label: Parity, full_dimension: usize) -> Self {
        let start = match label {
            Parity::Even => 0,
            Parity::Odd => 1,
        };
        ParitySector {
            label,
            indices: (start..full_dimension).step_by(2).collect(),
            full_dimension,
        }
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    /// Lift a sector vector into the full basis (zeros elsewhere).
    pub fn embed(&self, sub: &[f64]) -> Vec<f64> {
        let mut full = vec![0.0; self.full_dimension];
        for (&i, &x) in self.indices.iter().zip(sub) {
            full[i] = x;
        }
        full
    }

    /// Components of a full vector on this sector.
    pub fn restrict(&self, full: &[f64]) -> Vec<f64> {
        self.indices.iter().map(|&i| full[i]).collect()
    }
}

/// A parity sector together with the (tridiagonal) matrix compacted onto it.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorBlock {
    pub sector: ParitySector,
    pub matrix: SymTridiagonal,
}

/// Real symmetric matrix with nonzero entries only at offsets 0 and ±2.
#[derive(Debug, Clone, PartialEq)]
pub struct BandedSpinMatrix {
    diag: Vec<f64>,
    offdiag2: Vec<f64>,
}

impl BandedSpinMatrix {
    /// `offdiag2[i]` couples indices `i` and `i + 2`. Dimension must be at least 2.
    pub fn new(diag: Vec<f64>, offdiag2: Vec<f64>) -> Result<Self> {
        if diag.len() < 2 {
            return Err(Error::InvalidParams(format!(
                "banded matrix needs dimension >= 2, got {}",
                diag.len()
            )));
        }
        let expected = diag.len() - 2;
        if offdiag2.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: offdiag2.len(),
            });
        }
        Ok(BandedSpinMatrix { diag, offdiag2 })
    }

    pub fn identity(dimension: usize) -> Result<Self> {
        Self::new(vec![1.0; dimension], vec![0.0; dimension.saturating_sub(2)])
    }

    pub fn dimension(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    pub fn offdiag2(&self) -> &[f64] {
        &self.offdiag2
    }

    /// Mutable access to the band, for building perturbed test matrices.
    pub fn offdiag2_mut(&mut self) -> &mut [f64] {
        &mut self.offdiag2
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i == j {
            self.diag[i]
        } else if i + 2 == j {
            self.offdiag2[i]
        } else if j + 2 == i {
            self.offdiag2[j]
        } else {
            0.0
        }
    }

    pub fn matvec(&self, v: &[f64]) -> Result<Vec<f64>> {
        let n = self.dimension();
        if v.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        let mut out: Vec<f64> = self.diag.iter().zip(v).map(|(d, x)| d * x).collect();
        for (i, &c) in self.offdiag2.iter().enumerate() {
            out[i] += c * v[i + 2];
            out[i + 2] += c * v[i];
        }
        Ok(out)
    }

    /// Row-major dense expansion.
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let n = self.dimension();
        (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Bound on the spectral radius (maximum absolute row sum).
    pub fn norm_bound(&self) -> f64 {
        (0..self.dimension())
            .map(|i| {
                let mut s = self.diag[i].abs();
                if i + 2 < self.dimension() {
                    s += self.offdiag2[i].abs();
                }
                if i >= 2 {
                    s += self.offdiag2[i - 2].abs();
                }
                s
            })
            .fold(0.0, f64::max)
    }

    pub fn sector(&self, label: Parity) -> SectorBlock {
        let sector = ParitySector::new(label, self.dimension());
        let diag = sector.indices.iter().map(|&i| self.diag[i]).collect();
        let off = sector.indices.iter().skip(1).map(|&i| self.offdiag2[i - 2]).collect();
        let matrix = SymTridiagonal::new(diag, off).expect("sector compaction is consistent");
        SectorBlock { sector, matrix }
    }

    /// Compact the even- and odd-index sectors into tridiagonal blocks.
    pub fn split_sectors(&self) -> (SectorBlock, SectorBlock) {
        (self.sector(Parity::Even), self.sector(Parity::Odd))
    }
}

/// Raw assembly without parameter validation; `h` may be negative here.
pub(crate) fn assemble_hamiltonian(n: usize, gamma: f64, h: f64, lambda: f64) -> BandedSpinMatrix {
    let basis = DickeBasis::new(n);
    let s = basis.spin();
    let nf = n as f64;
    let pair = -lambda / nf * (1.0 + gamma);
    let flip = -lambda / (2.0 * nf) * (1.0 - gamma);
    // S(S+1) - m² - N/2 = (S - m)(S + m) for S = N/2; the product form is exact.
    let diag = basis
        .magnetizations()
        .map(|m| pair * (s - m) * (s + m) - 2.0 * h * m)
        .collect();
    let offdiag2 = (0..basis.dimension().saturating_sub(2))
        .map(|i| {
            let m = basis.m(i);
            // ⟨m+2|S_+²|m⟩ with S(S+1) - m(m+1) = (S-m)(S+m+1).
            let a = (s - m) * (s + m + 1.0);
            let b = (s - m - 1.0) * (s + m + 2.0);
            flip * (a * b).sqrt()
        })
        .collect();
    BandedSpinMatrix { diag, offdiag2 }
}

/// Matrix of `H` in the Dicke basis.
pub fn build_hamiltonian(params: &ModelParams) -> Result<BandedSpinMatrix> {
    params.validate()?;
    Ok(assemble_hamiltonian(
        params.n(),
        params.gamma(),
        params.h(),
        params.lambda(),
    ))
}

/// Driving operator `H_I = -2 S_z`, so that `dH/dh = H_I`.
pub fn build_driving(params: &ModelParams) -> Result<BandedSpinMatrix> {
    params.validate()?;
    let basis = params.basis();
    BandedSpinMatrix::new(
        basis.magnetizations().map(|m| -2.0 * m).collect(),
        vec![0.0; basis.dimension() - 2],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::{DMatrix, SymmetricEigen};
    use proptest::prelude::*;

    fn dense(m: &BandedSpinMatrix) -> DMatrix<f64> {
        let n = m.dimension();
        DMatrix::from_fn(n, n, |i, j| m.get(i, j))
    }

    fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
        let mut ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    #[test]
    fn rejects_isotropic_and_empty() {
        assert!(matches!(
            ModelParams::new(4, 1.0, 0.5),
            Err(Error::InvalidParams(_))
        ));
        assert!(ModelParams::new(0, 0.0, 0.5).is_err());
        assert!(ModelParams::new(4, -1.0, 0.5).is_err());
        assert!(ModelParams::new(4, 0.0, -0.1).is_err());
        assert!(ModelParams::new(4, 0.0, f64::NAN).is_err());
    }

    #[test]
    fn single_spin_is_pure_field() {
        let p = ModelParams::new(1, 0.0, 1.0).unwrap();
        let h = build_hamiltonian(&p);
        // N = 1 has dimension 2 which the banded type accepts with an empty band.
        let h = h.unwrap();
        assert_eq!(h.dimension(), 2);
        assert!(h.offdiag2().is_empty());
        let mut d = h.diag().to_vec();
        d.sort_by(f64::total_cmp);
        assert_eq!(d, vec![-1.0, 1.0]);
    }

    #[test]
    fn two_spins_zero_field() {
        let p = ModelParams::new(2, 0.0, 0.0).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        assert_eq!(h.diag(), &[0.0, -0.5, 0.0]);
        assert_eq!(h.offdiag2(), &[-0.5]);
        let ev = sorted_eigenvalues(&dense(&h));
        assert!((ev[0] + 0.5).abs() < 1e-15);
    }

    #[test]
    fn driving_is_minus_two_m() {
        let d2 = build_driving(&ModelParams::new(2, 0.0, 0.3).unwrap()).unwrap();
        assert_eq!(d2.diag(), &[2.0, 0.0, -2.0]);
        let d4 = build_driving(&ModelParams::new(4, 0.5, 0.3).unwrap()).unwrap();
        assert_eq!(d4.diag(), &[4.0, 2.0, 0.0, -2.0, -4.0]);
        assert!(d4.offdiag2().iter().all(|&x| x == 0.0));
        for n in 1..40 {
            let d = build_driving(&ModelParams::new(n, 0.0, 0.0).unwrap()).unwrap();
            assert_eq!(d.diag().iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn identity_matvec() {
        let id = BandedSpinMatrix::identity(7).unwrap();
        let v: Vec<f64> = (0..7).map(|i| (i as f64).sin()).collect();
        assert_eq!(id.matvec(&v).unwrap(), v);
        assert!(matches!(
            id.matvec(&v[..6]),
            Err(Error::DimensionMismatch { expected: 7, got: 6 })
        ));
    }

    #[test]
    fn banded_constructor_checks_lengths() {
        assert!(BandedSpinMatrix::new(vec![1.0, 2.0, 3.0], vec![]).is_err());
        assert!(BandedSpinMatrix::new(vec![1.0], vec![]).is_err());
    }

    #[test]
    fn sector_sizes() {
        let h = build_hamiltonian(&ModelParams::new(4, 0.3, 0.7).unwrap()).unwrap();
        let (even, odd) = h.split_sectors();
        assert_eq!(even.sector.len(), 3);
        assert_eq!(odd.sector.len(), 2);
        let mut all: Vec<usize> = even.sector.indices.iter().chain(&odd.sector.indices).copied().collect();
        all.sort();
        assert_eq!(all, (0..5).collect::<Vec<_>>());
    }

    #[test]
    fn sector_spectra_union_matches_full() {
        for n in 1..=12 {
            for &(g, f) in &[(0.0, 0.4), (0.5, 1.3), (-0.5, 0.9)] {
                let h = build_hamiltonian(&ModelParams::new(n, g, f).unwrap()).unwrap();
                let full = sorted_eigenvalues(&dense(&h));
                let (e, o) = h.split_sectors();
                let mut parts = Vec::new();
                for block in [&e, &o] {
                    let t = &block.matrix;
                    let k = t.len();
                    let m = DMatrix::from_fn(k, k, |i, j| {
                        if i == j {
                            t.diag()[i]
                        } else if i + 1 == j {
                            t.off()[i]
                        } else if j + 1 == i {
                            t.off()[j]
                        } else {
                            0.0
                        }
                    });
                    parts.extend(sorted_eigenvalues(&m));
                }
                parts.sort_by(f64::total_cmp);
                for (a, b) in full.iter().zip(&parts) {
                    assert!((a - b).abs() < 1e-10, "n={n}: {a} vs {b}");
                }
                let ground = full[0];
                assert!((ground - parts[0]).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn field_reflection_preserves_spectrum() {
        for n in 1..=12 {
            for &(g, f) in &[(0.0, 0.4), (0.5, 1.3), (-0.7, 0.05)] {
                let plus = sorted_eigenvalues(&dense(&assemble_hamiltonian(n, g, f, 1.0)));
                let minus = sorted_eigenvalues(&dense(&assemble_hamiltonian(n, g, -f, 1.0)));
                for (a, b) in plus.iter().zip(&minus) {
                    assert!((a - b).abs() < 1e-12, "n={n}: {a} vs {b}");
                }
            }
        }
    }

    proptest! {
        #[test]
        fn hamiltonian_is_symmetric(n in 1usize..40, g in -0.99f64..0.99, f in 0.0f64..3.0) {
            let h = build_hamiltonian(&ModelParams::new(n, g, f).unwrap()).unwrap();
            let d = h.to_dense();
            for i in 0..d.len() {
                for j in 0..d.len() {
                    prop_assert_eq!(d[i][j], d[j][i]);
                }
            }
        }

        #[test]
        fn banded_matvec_matches_dense(
            n in 2usize..=64,
            g in -0.99f64..0.99,
            f in 0.0f64..3.0,
            seed in proptest::collection::vec(-1.0f64..1.0, 65),
        ) {
            let h = build_hamiltonian(&ModelParams::new(n, g, f).unwrap()).unwrap();
            let v = &seed[..h.dimension()];
            let fast = h.matvec(v).unwrap();
            let slow = dense(&h) * nalgebra::DVector::from_column_slice(v);
            let scale = slow.norm().max(1e-300);
            let diff: f64 = fast.iter().zip(slow.iter()).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt();
            prop_assert!(diff / scale < 1e-13);
        }

        #[test]
        fn matvec_preserves_parity(
            n in 2usize..=64,
            g in -0.99f64..0.99,
            f in 0.0f64..3.0,
            odd in any::<bool>(),
        ) {
            let h = build_hamiltonian(&ModelParams::new(n, g, f).unwrap()).unwrap();
            let label = if odd { Parity::Odd } else { Parity::Even };
            let sector = ParitySector::new(label, h.dimension());
            let v = sector.embed(&vec![1.0; sector.len()]);
            let out = h.matvec(&v).unwrap();
            for (i, x) in out.iter().enumerate() {
                if Parity::of_index(i) != label {
                    prop_assert_eq!(*x, 0.0);
                }
            }
        }
    }
}
