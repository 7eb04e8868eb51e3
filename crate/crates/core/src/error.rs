use thiserror::Error;

use crate::expr::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("gcd of two zero polynomials is undefined")]
    UndefinedGcd,
    #[error("operation requires a nonzero polynomial")]
    ZeroPolynomial,
    #[error("division by zero")]
    DivisionByZero,
    #[error("0^0 is undefined")]
    ZeroToZeroPower,
    #[error("degree at infinity of the zero function is undefined")]
    ZeroFunction,
    #[error("function must be non-constant")]
    ConstantFunction,
    #[error("target coincides with the monomial identically; the p-point set is infinite")]
    InfinitelyManyPoints,
    #[error("spec is not meromorphic-admissible: {0}")]
    InadmissibleSpec(String),
    #[error("the shared value p must be nonzero")]
    ZeroTarget,
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("malformed monomial spec: {0}")]
    InvalidSpec(String),
    #[error("exponential rate c must be nonzero")]
    ZeroRate,
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("usage: {0}")]
    Usage(String),
    #[error("instance generator gave up after {0} attempts")]
    ResamplingExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
