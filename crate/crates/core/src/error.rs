//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("field element is not rational: {0}")]
    NotRational(String),
    #[error("series is not invertible (zero to stored order)")]
    NotInvertible,
    #[error("insufficient truncation: {0}")]
    InsufficientTruncation(String),
    #[error("antiderivative would need a logarithmic term (nonzero z^-1 coefficient)")]
    LogarithmicTerm,
    #[error("unstable index: 2g-2+n <= 0 for g={g}, n={n}")]
    Unstable { g: u32, n: usize },
    #[error("invalid target: {0}")]
    InvalidTarget(String),
    #[error("R series is not symplectic: {0}")]
    NotSymplectic(String),
    #[error("square root of Delta_{0} not in Q(i,sqrt2)")]
    SqrtNotInField(usize),
    #[error("curve does not admit the rank-N Laplace factorization: {0}")]
    NotFactorizable(String),
    #[error("edge-weight numerator not divisible by (z+w): {0}")]
    NotDivisible(String),
    #[error("nonzero remainder when expanding in the dxi basis: {0}")]
    ExpansionResidual(String),
    #[error("scaling factor must be nonzero")]
    ZeroScale,
    #[error("curve data failed validation: {0}")]
    Validation(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("format error: {0}")]
    Format(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
