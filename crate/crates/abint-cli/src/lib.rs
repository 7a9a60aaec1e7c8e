//! Command-line driver: configuration parsing, end-to-end runs of the
//! integral pipeline with the numeric oracle, bundled examples, and report output.

pub mod config;
pub mod report;
pub mod run;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    InvalidFamily(String),
    #[error("invariant breach: {0}")]
    Computation(String),
    #[error("bound violation: {0}")]
    BoundViolation(String),
    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),
    #[error("golden mismatch:\n{0}")]
    GoldenMismatch(String),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Io(_) => 1,
            CliError::InvalidFamily(_) => 2,
            CliError::Computation(_) | CliError::BoundViolation(_) => 3,
            CliError::OracleMismatch(_) => 4,
            CliError::GoldenMismatch(_) => 5,
        }
    }
}
