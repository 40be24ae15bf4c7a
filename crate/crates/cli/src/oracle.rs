//! Independent reference computations used by `verify`.
//!
//! The spin-1/2 model is built directly from Pauli operators on all `2^N`
//! configurations, without any use of the collective-spin algebra.

use lmg_core::BandedSpinMatrix;
use nalgebra::DMatrix;

/// Nonzero entries of column `b` of
/// `H = -(λ/N) Σ_{i<j} (σx_i σx_j + γ σy_i σy_j) - h Σ σz_i` with λ = 1.
/// Bit value 0 is spin up.
pub fn pauli_column(n: usize, gamma: f64, h: f64, b: usize) -> Vec<(usize, f64)> {
    let sign = |k: usize| if b >> k & 1 == 0 { 1.0 } else { -1.0 };
    let zeeman: f64 = (0..n).map(sign).sum();
    let mut out = vec![(b, -h * zeeman)];
    for i in 0..n {
        for j in i + 1..n {
            // σy σy flips the same two bits as σx σx, with amplitude -s_i s_j.
            let amp = 1.0 - gamma * sign(i) * sign(j);
            if amp != 0.0 {
                out.push((b ^ (1 << i) ^ (1 << j), -amp / n as f64));
            }
        }
    }
    out
}

pub fn apply_pauli(n: usize, gamma: f64, h: f64, v: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; v.len()];
    for (b, &x) in v.iter().enumerate() {
        if x != 0.0 {
            for (row, a) in pauli_column(n, gamma, h, b) {
                out[row] += a * x;
            }
        }
    }
    out
}

/// Lowest eigenvalue of the `2^N` model, from dense diagonalization of the
/// two blocks of fixed popcount parity.
pub fn pauli_ground_energy(n: usize, gamma: f64, h: f64) -> f64 {
    let dim = 1usize << n;
    let mut best = f64::INFINITY;
    for parity in 0..2 {
        let states: Vec<usize> = (0..dim).filter(|b| b.count_ones() % 2 == parity).collect();
        let mut index = vec![usize::MAX; dim];
        for (k, &b) in states.iter().enumerate() {
            index[b] = k;
        }
        let mut m = DMatrix::<f64>::zeros(states.len(), states.len());
        for (col, &b) in states.iter().enumerate() {
            for (row, v) in pauli_column(n, gamma, h, b) {
                m[(index[row], col)] += v;
            }
        }
        best = best.min(m.symmetric_eigenvalues().min());
    }
    best
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Normalized symmetric state with `k` flipped spins (`m = N/2 - k`).
pub fn dicke_state(n: usize, k: usize) -> Vec<f64> {
    let norm = binomial(n, k).sqrt().recip();
    (0..1usize << n)
        .map(|b| if b.count_ones() as usize == k { norm } else { 0.0 })
        .collect()
}

/// `⟨S,m_i|H|S,m_j⟩` from the Pauli model, indexed like the Dicke basis
/// (index `i` has `m = i - N/2`).
pub fn dicke_projection(n: usize, gamma: f64, h: f64) -> DMatrix<f64> {
    let states: Vec<Vec<f64>> = (0..=n).map(|i| dicke_state(n, n - i)).collect();
    let mut out = DMatrix::zeros(n + 1, n + 1);
    for j in 0..=n {
        let hv = apply_pauli(n, gamma, h, &states[j]);
        for i in 0..=n {
            out[(i, j)] = states[i].iter().zip(&hv).map(|(a, b)| a * b).sum();
        }
    }
    out
}

pub fn to_dense(m: &BandedSpinMatrix) -> DMatrix<f64> {
    let d = m.dimension();
    DMatrix::from_fn(d, d, |i, j| m.get(i, j))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_spins_at_zero_field() {
        // -(1/2) σx σx: eigenvalues ±1/2.
        assert!((pauli_ground_energy(2, 0.0, 0.0) + 0.5).abs() < 1e-14);
    }

    #[test]
    fn single_spin_is_field_only() {
        assert!((pauli_ground_energy(1, 0.3, 1.0) + 1.0).abs() < 1e-14);
    }

    #[test]
    fn dicke_states_are_orthonormal() {
        let n = 5;
        for a in 0..=n {
            for b in 0..=n {
                let d: f64 = dicke_state(n, a).iter().zip(dicke_state(n, b)).map(|(x, y)| x * y).sum();
                let expected = if a == b { 1.0 } else { 0.0 };
                assert!((d - expected).abs() < 1e-14);
            }
        }
    }
}
