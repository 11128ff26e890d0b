use thiserror::Error;

/// Errors raised during construction and guarded operations.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not an odd prime")]
    NotPrime(u64),
    #[error("p = {0} exceeds the table cap of 2^26")]
    PrimeTooLarge(u64),
    #[error("character index {index} out of range for p = {p}")]
    BadCharIndex { index: u64, p: u64 },
    #[error("order {order} does not divide p - 1 = {pm1}")]
    BadCharOrder { order: u64, pm1: u64 },
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("curve must have positive y-degree")]
    NotACurve,
    #[error("numerator and denominator share a nonconstant common factor")]
    CommonFactor,
    #[error("curve contains the vertical line x = {x}: every y solves P({x}, y) = 0")]
    VerticalLine { x: u64 },
    #[error("invalid window parameters: {0}")]
    BadWindow(String),
    #[error("normalizer H(beta-alpha) must be positive")]
    ZeroNormalizer,
    #[error("identification maps positions with offsets {a} and {b} to one indeterminate")]
    IllegalIdentification { a: u64, b: u64 },
    #[error("guard violated: {0}")]
    Guard(String),
    #[error("moment order {0} exceeds the supported cap {1}")]
    OrderCap(u32, u32),
    #[error("empty sample")]
    EmptySample,
    #[error("|u|,|v| must not exceed H^(1/4) = {limit:.3}")]
    CharfunRange { limit: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
