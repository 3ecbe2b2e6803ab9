use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("input must be non-zero")]
    ZeroInput,
    #[error("factorization limit exceeded: {0}")]
    FactorizationLimitExceeded(String),
    #[error("empty prime range [{lo}, {hi}]")]
    EmptyRange { lo: u64, hi: u64 },
    #[error("lattice is not contained in the super-lattice")]
    NotSublattice,
    #[error("lattices have different ranks (index is infinite)")]
    RankMismatch,
    #[error("bad reduction at p = {p}")]
    BadReduction { p: u64 },
    #[error("element is zero modulo {p}")]
    ZeroElement { p: u64 },
    #[error("point has finite order")]
    TorsionPoint,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("point is not on the curve")]
    PointNotOnCurve,
    #[error("curve is singular (discriminant zero)")]
    SingularCurve,
    #[error("prime {p} exceeds the limit {limit}")]
    PrimeTooLarge { p: u64, limit: u64 },
    #[error("-1 is not a square modulo {p}")]
    NoSquareRootOfMinusOne { p: u64 },
    #[error("operation requires the curve y^2 = x^3 + x")]
    WrongCurve,
    #[error("discrete logarithm limit exceeded at p = {p}")]
    DiscreteLogLimitExceeded { p: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
}
