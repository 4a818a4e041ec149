use thiserror::Error;

/// Errors produced by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied parameter is outside its contract (wrong dimension,
    /// out-of-range strength, unphysical Stokes vector, ...).
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A matrix failed density-matrix or channel validation.
    #[error("validation failed: {0}")]
    Validation(String),
    /// Malformed measurement data. `row` is the 1-based line number in the
    /// source, counting the header as line 1; 0 means the whole file.
    #[error("parse error at row {row}: {message}")]
    Parse { row: usize, message: String },
    /// A computation produced a result that violates a postcondition.
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn argument(msg: impl Into<String>) -> Error {
    Error::Argument(msg.into())
}

pub(crate) fn validation(msg: impl Into<String>) -> Error {
    Error::Validation(msg.into())
}
