use alloc::string::String;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("map does not respect the relations of its domain")]
    NotAHomomorphism,
    #[error("{0} is not a prime in the supported range 5..=100000")]
    UnsupportedPrime(u64),
    #[error("zero is not a unit")]
    ZeroNotUnit,
    #[error("curve is singular")]
    SingularCurve,
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error("divisor is not principal")]
    NotPrincipal,
    #[error("evaluation point lies in the support of the divisor")]
    SupportCollision,
    #[error("no evaluation point found outside the supports after {0} attempts")]
    NoGenericPoint(usize),
    #[error("two independent evaluations disagree: {0}")]
    Inconsistent(String),
    #[error("bilinear form is not symmetric at ({0}, {1})")]
    NotSymmetric(usize, usize),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("function is not a character times a constant: {0}")]
    NotCharacter(String),
    #[error("invalid descent datum: {0}")]
    InvalidDatum(String),
}

pub type Result<T> = core::result::Result<T, Error>;
