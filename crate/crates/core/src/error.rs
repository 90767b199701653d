//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// The input matrix fails the hermiticity pre-check.
    #[error("matrix is not hermitian (relative deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },

    /// Shapes of the operands are incompatible with the operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix required to be positive semidefinite has a genuinely
    /// negative eigenvalue (below the clamping tolerance).
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    /// The operator basis is not orthonormal under Tr[T_a^dag T_b].
    #[error("operator basis is not orthonormal under the Hilbert-Schmidt inner product")]
    BasisNotOrthonormal,

    /// A scenario or map specification is outside its validity region.
    #[error("invalid specification: {0}")]
    InvalidSpec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
