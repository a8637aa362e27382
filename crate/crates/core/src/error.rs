use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("not an exact rational: {0:?}")]
    Rational(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DomainError {
    #[error("s_0 is never materialized; use the (1-t)^(-ch0) prefactor")]
    SZero,
    #[error("exponent e = 0 in t^e")]
    ZeroExponent,
}

/// Rejections of ill-posed inputs (bad shapes, sectors, groups).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ValidationError {
    #[error("degenerate shape: {0}")]
    Shape(String),
    #[error("group not admissible: {0}")]
    Group(String),
    #[error("invalid sector: {0}")]
    Sector(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("mismatched ambient: {0}")]
    Ambient(String),
}

/// Failures that indicate a broken computation rather than bad input.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IntegrityError {
    #[error("pole at t = 1: {0}")]
    Pole(String),
    #[error("relation certificate failed: {0}")]
    Certificate(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
}

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("corrupt cache file {path}, line {line}: {reason}")]
    Corrupt { path: String, line: usize, reason: String },
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("calibration failed: {0}")]
pub struct CalibrationError(pub String);

/// Umbrella error returned by the top-level entry points.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Validation(#[from] ValidationError),
    #[error(transparent)]
    Integrity(#[from] IntegrityError),
    #[error(transparent)]
    Cache(#[from] CacheError),
    #[error(transparent)]
    Calibration(#[from] CalibrationError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
