//! Batch experiments on recurrence of collective dynamics: TOML configs in,
//! line-delimited JSON reports, CSV summaries and SVG rasters out.

pub mod catalog;
pub mod commands;
pub mod config;
pub mod plot;
pub mod report;
pub mod runner;
pub mod selftest;

use std::fmt;

/// Failure of a CLI verb, mapped to the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Bad input: unreadable or malformed config, unknown names, bounds.
    Validation(String),
    /// A violated internal check, such as disagreeing equivalent statements.
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "error: {m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}
