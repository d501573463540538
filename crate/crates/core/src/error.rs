use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero frequency mode is not allowed here")]
    ZeroMode,

    #[error("momentum violation: sum of sigma*j is {0}, expected 0")]
    Momentum(i64),

    #[error("no root in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("divisor {divisor:e} below tolerance on key {key} not flagged resonant")]
    ToleranceInconsistency { key: String, divisor: f64 },

    #[error("implicit midpoint step rejected at t={t} after {iterations} iterations")]
    StepRejected { t: f64, iterations: usize },

    #[error("seed is under-resolved: tail ratio {ratio:e} beyond mode {cutoff}")]
    UnderResolved { ratio: f64, cutoff: usize },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;
