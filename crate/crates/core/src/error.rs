use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("cannot parse braid token `{token}`: {reason}")]
    Parse { token: String, reason: String },
    #[error("index {index} out of range (expected {expected})")]
    OutOfRange { index: i64, expected: String },
    #[error("strand count mismatch: {left} vs {right}")]
    StrandMismatch { left: usize, right: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
