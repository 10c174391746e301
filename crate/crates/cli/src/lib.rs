//! Batch front-end for `gme-core`: a line-based configuration file selects
//! one of six runs, each of which writes a CSV table.

pub mod config;
pub mod run;

use gme_core::{ProtocolError, QuadError};
use thiserror::Error;

pub use config::{load_config, parse_config, write_config, Grid, Mode, RunConfig, Sweep, SweepVar};
pub use run::{run, RunOutput};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "GME_THREADS";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CliError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{0}")]
    Convergence(String),
    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub(crate) fn parse(line: usize, msg: String) -> Self {
        CliError::Parse { line, msg }
    }

    pub(crate) fn from_protocol(e: ProtocolError) -> Self {
        match e {
            ProtocolError::Quad(q @ QuadError::NotConverged { .. }) => CliError::Convergence(q.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }

    /// Process exit status: 1 configuration, 2 convergence, 3 I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 1,
            CliError::Convergence(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

/// Worker count from the `--threads` flag and the environment cap. `None`
/// leaves the pool at its default size.
pub fn thread_count(flag: Option<usize>, env: Option<&str>) -> Result<Option<usize>, CliError> {
    let cap = match env.map(str::trim).filter(|s| !s.is_empty()) {
        None => None,
        Some(s) => match s.parse::<usize>() {
            Ok(n) if n > 0 => Some(n),
            _ => return Err(CliError::Validation(format!("{THREADS_ENV} must be a positive integer, got `{s}`"))),
        },
    };
    if flag == Some(0) {
        return Err(CliError::Validation("--threads must be >= 1".into()));
    }
    Ok(match (flag, cap) {
        (Some(f), Some(c)) => Some(f.min(c)),
        (f, c) => f.or(c),
    })
}
