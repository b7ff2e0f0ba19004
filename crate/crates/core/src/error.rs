use thiserror::Error;

/// Errors raised by the p-adic machinery.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("mismatched primes: {0} vs {1}")]
    PrimeMismatch(u64, u64),

    #[error("cannot parse rational {0:?}")]
    ParseRational(String),

    #[error("invalid wavelet index: {0}")]
    InvalidIndex(String),

    /// `D^alpha h + h = delta` has no square-integrable solution.
    #[error("no L2 solution for alpha <= 1/2 (alpha = {0})")]
    NotInL2(f64),

    /// The diagonal value h_k(x_k) is a divergent series for alpha <= 1.
    #[error("diagonal series diverges for alpha <= 1 (alpha = {0})")]
    DiagonalDivergence(f64),

    #[error("multiplier unbounded on tail")]
    UnboundedTail,

    #[error("operation requires a finite expansion")]
    NotFinite,

    #[error("boundary data outside the range of B: residual {0:e}")]
    Range(f64),

    #[error("matrix Y is singular")]
    SingularY,

    #[error("missing matrix Y")]
    MissingY,

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
