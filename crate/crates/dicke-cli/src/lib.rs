//! Sweep engine, state persistence and verification suites behind the
//! `dicke` command-line tool.

pub mod config;
pub mod statefile;
pub mod sweep;
pub mod verify;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{0}")]
    Model(#[from] dicke::DickeError),
    #[error("i/o failure on {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed state file {path}: {reason}")]
    Parse { path: String, reason: String },
}

impl CliError {
    pub fn io(path: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}
