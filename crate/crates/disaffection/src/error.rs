//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by parsing, training, and analysis.
#[derive(Debug, Error)]
pub enum Error {
    /// A line of an input file could not be parsed.
    #[error("line {line}: {reason}")]
    Malformed { line: usize, reason: String },

    /// A record key that must be unique appeared twice.
    #[error("line {line}: duplicate {what} {key:?}")]
    Duplicate {
        what: &'static str,
        line: usize,
        key: String,
    },

    /// An argument violated an operation's contract.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Not enough data to carry out the requested computation.
    #[error("insufficient data: {0}")]
    InsufficientData(String),

    /// An internal invariant was breached; indicates a bug or corrupt state.
    #[error("invariant breached: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn malformed(line: usize, reason: impl Into<String>) -> Self {
        Error::Malformed {
            line,
            reason: reason.into(),
        }
    }
}
