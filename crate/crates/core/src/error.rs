use thiserror::Error;

use crate::model::Parity;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix dimension {dimension} exceeds the dense cap {cap}")]
    DenseCapExceeded { dimension: usize, cap: usize },

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("degenerate ground state: gap {gap:.3e} is below the guard {guard:.3e}")]
    DegenerateGroundState { gap: f64, guard: f64 },

    #[error("ground states lie in different parity sectors ({first} vs {second})")]
    SectorMismatch { first: Parity, second: Parity },

    #[error("outside the formula's domain: {0}")]
    Domain(String),

    #[error("fit failed: {0}")]
    Fit(String),

    #[error("no interior maximum in the bracket; samples (h, value): {samples:?}")]
    NoInteriorMaximum { samples: Vec<(f64, f64)> },

    #[error("collapse failed: {0}")]
    Collapse(String),
}

impl Error {
    /// Errors that mean "this point cannot be computed meaningfully", as opposed to bad input.
    pub fn is_refusal(&self) -> bool {
        matches!(
            self,
            Error::DegenerateGroundState { .. }
                | Error::SectorMismatch { .. }
                | Error::NoConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
