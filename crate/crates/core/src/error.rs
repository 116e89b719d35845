use thiserror::Error;

use crate::cbc::Incompatibility;
use crate::words::AmbiguityWitness;

/// Errors raised by the library. Negative verdicts are not errors: they are
/// returned as values carrying their own certificates.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("modulus mismatch: expected {expected}, found {found}")]
    ModulusMismatch { expected: usize, found: usize },

    #[error("value {value} is out of range for modulus {n}")]
    OutOfRange { value: usize, n: usize },

    #[error("not a factorization of Z_{0}")]
    NotAFactorization(usize),

    #[error("the input set is not a code")]
    NotACode(Box<AmbiguityWitness>),

    #[error("the family is not compatible")]
    Incompatible(Box<Incompatibility>),

    #[error("{0} is not a period of the set")]
    NotAPeriod(usize),

    #[error("gcd precondition violated: {0}")]
    GcdViolation(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("envelope exceeded: {0}")]
    EnvelopeExceeded(String),

    #[error("unsupported instance: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
