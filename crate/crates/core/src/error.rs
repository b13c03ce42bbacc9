use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },
    #[error("cannot differentiate {m} times a series of order {order}")]
    DegreeUnderflow { m: usize, order: usize },
    #[error("non-finite coefficient at index {index}")]
    NonFinite { index: usize },
    #[error("leading denominator coefficient {magnitude:e} is below the division threshold {threshold:e}")]
    DivisionByNearZero { magnitude: f64, threshold: f64 },
    #[error("invalid weights: {0}")]
    InvalidWeights(String),
    #[error("elements live in different spaces")]
    SpaceMismatch,
    #[error("point {modulus} lies outside the open unit disc")]
    OutOfDisc { modulus: f64 },
    #[error("|phi(0)| = {modulus} is not inside the unit disc")]
    SelfMapViolation { modulus: f64 },
    #[error("normality margin {margin} must be smaller than the truncation order {order}")]
    InvalidMargin { margin: usize, order: usize },
    #[error("m = {0} is not supported here (m >= 1 required)")]
    UnsupportedOrder(usize),
    #[error("degenerate weights: automorphism bracket vanishes")]
    DegenerateWeights,
    #[error("w must be unimodular (|w| = {modulus})")]
    NotUnimodular { modulus: f64 },
    #[error("invalid symbol parameters: {0}")]
    InvalidParams(String),
}
