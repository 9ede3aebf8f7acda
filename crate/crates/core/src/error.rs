use thiserror::Error;

/// Failure modes shared by every operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or inconsistent input data.
    #[error("validation error: {0}")]
    Validation(String),
    /// A mathematical hypothesis of the operation does not hold for the input.
    #[error("precondition failed: {0}")]
    Precondition(String),
    /// A configured bound (steps, degree window, brute-force cap) was reached.
    #[error("computation limit exceeded: {0}")]
    Limit(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse { line: usize, col: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}

pub(crate) fn limit(msg: impl Into<String>) -> Error {
    Error::Limit(msg.into())
}
