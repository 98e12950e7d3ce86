use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid stabilizer code: {0}")]
    InvalidCode(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{qubits} qubits exceeds the dense cap of {cap}")]
    DenseCap { qubits: usize, cap: usize },

    #[error("operator is not Hermitian (deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("factorization has no trailing bath factor")]
    MissingBath,

    #[error("Kraus sum rule violated by {0:.3e}")]
    SumRule(f64),

    #[error("value out of floating-point range: {0}")]
    Range(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("roots are degenerate (gap {0:.3e})")]
    DegenerateRoots(f64),

    #[error("first-order bound diverges at zeta^q = 1")]
    DivergentFirstOrder,

    #[error("operator is zero")]
    ZeroOperator,

    #[error("channel output is not a scalar multiple of its input (residual {0:.3e})")]
    NotScalar(f64),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
