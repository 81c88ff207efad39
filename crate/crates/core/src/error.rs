use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} out of range: {value} (allowed {allowed})")]
    OutOfRange {
        what: &'static str,
        value: String,
        allowed: String,
    },

    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    #[error("no irrep block with j = {j}, r = {r}")]
    UnknownBlock { j: String, r: usize },

    #[error("state has in-code probability {0:e}, cannot decode")]
    Undecodable(f64),

    #[error("wrong channel kind: expected {0}")]
    WrongChannel(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn out_of_range(
    what: &'static str,
    value: impl ToString,
    allowed: impl ToString,
) -> Error {
    Error::OutOfRange {
        what,
        value: value.to_string(),
        allowed: allowed.to_string(),
    }
}
