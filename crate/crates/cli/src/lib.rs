//! Experiment harness around the `parsec` library: evolve compressors per
//! corpus, apply them, and tabulate accuracy changes.

use std::fmt::Display;
use std::path::Path;

pub mod commands;
pub mod config;
pub mod report;

pub use commands::{compress, evaluate, evolve, report as read_report, Manifest, Split};
pub use config::{ExperimentConfig, Format, Overrides};
pub use report::{render, AccuracyDelta};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("infeasible bounds: {0}")]
    Infeasible(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn at(path: impl AsRef<Path>, err: impl Display) -> Self {
        CliError::Io(format!("{}: {err}", path.as_ref().display()))
    }

    /// Process exit status for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Infeasible(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl From<parsec::EvolutionError> for CliError {
    fn from(e: parsec::EvolutionError) -> Self {
        match e {
            parsec::EvolutionError::InvalidParams(p) => CliError::Config(p.to_string()),
            other => CliError::Infeasible(other.to_string()),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}
