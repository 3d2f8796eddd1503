use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid arrangement: {0}")]
    InvalidArrangement(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("excluded point: {0}")]
    ExcludedPoint(String),
    #[error("series is not divisible by {divisor}: {residual_terms} residual terms, max |residual| = {residual_norm:e}")]
    NonDivisible { divisor: String, residual_terms: usize, residual_norm: f64 },
    #[error("series inversion needs a nonzero constant term")]
    ZeroConstantTerm,
    #[error("mismatched series shapes: {0}")]
    Mismatch(String),
    #[error("exact mode cannot represent {0}")]
    NotExact(String),
    #[error("polytope is not simple: {0}")]
    NotSimple(String),
    #[error("exponent annihilates an edge direction")]
    DegenerateExponent,
    #[error("direction rank dropped below {0}")]
    RankDrop(usize),
    #[error("unsupported family: {0}")]
    UnsupportedFamily(String),
}

pub type Result<T> = std::result::Result<T, Error>;
