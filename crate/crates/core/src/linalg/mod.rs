//! Dense linear algebra over a real field and subspace arithmetic.
//!
//! Everything is generic over [`Scalar`]; `f64` decides ranks and containment
//! at a tolerance, [`Rational`] decides them exactly.

mod exact;
mod float;
mod matrix;
mod scalar;
mod subspace;

pub use float::{numerical_rank, GAP_RATIO};
pub use matrix::Matrix;
pub use scalar::{parse_rational, Mode, Rational, Scalar};
pub use subspace::{Containment, Subspace};

pub(crate) use scalar::{dot, norm_f64};

use thiserror::Error;

/// Rank and containment thresholds carried by every subspace.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize)]
pub struct Tolerance {
    /// Singular values at or below `rank * max(s_max, 1)` count as zero.
    pub rank: f64,
    /// A vector `v` is contained when its residual is at most `containment * max(1, |v|)`.
    pub containment: f64,
}

impl Tolerance {
    pub const DEFAULT_RANK: f64 = 1e-8;
    pub const DEFAULT_CONTAINMENT: f64 = 1e-7;

    pub fn float_default() -> Self {
        Self { rank: Self::DEFAULT_RANK, containment: Self::DEFAULT_CONTAINMENT }
    }

    pub fn exact() -> Self {
        Self { rank: 0.0, containment: 0.0 }
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LinalgError {
    #[error("ambient dimension must be positive")]
    EmptyAmbient,
    #[error("ambient dimension mismatch: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },
    #[error("vector of length {len} in ambient dimension {ambient}")]
    LengthMismatch { len: usize, ambient: usize },
    #[error("{rows}x{cols} matrix cannot act on ambient dimension {ambient}")]
    MatrixShape { rows: usize, cols: usize, ambient: usize },
    #[error("subspace is not contained in the ambient subspace (residual {residual:e})")]
    NotContained { residual: f64 },
}
