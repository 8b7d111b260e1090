//! Error type shared across the workbench.

use thiserror::Error;

/// Unified error for parsing, algebra, and numeric routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: inconsistent dimensions, out-of-range parameters,
    /// unknown fields, and similar document-level problems.
    #[error("input error: {0}")]
    Input(String),
    /// Syntax error in polynomial or document text, with 1-based position.
    #[error("syntax error at line {line}, column {col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    /// A configured resource cap was exceeded; the message carries partial
    /// progress statistics so the caller can see how far the run got.
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    /// Numeric domain error (overflow guard, unattainable tolerance).
    #[error("range error: {0}")]
    Range(String),
    /// An internal invariant failed; reported as an error instead of a panic.
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the CLI: 1 input, 2/3 reserved for probe
    /// verdicts, 4 resource caps.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceCap(_) => 4,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
