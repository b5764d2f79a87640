//! Library side of the `btl-topk` command-line tool: config and instance
//! file formats, results CSV handling, the Monte Carlo sweep runner,
//! feasibility report rendering, and SVG chart emission.
//!
//! Everything the binary does is callable from here, which is also how the
//! integration and acceptance suites drive it without spawning processes.

pub mod config;
pub mod instance;
pub mod report;
pub mod results;
pub mod svg;
pub mod sweep;

use std::fmt;

/// Process-level failure classes, one per documented exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or flag values (exit 1).
    Usage(String),
    /// Structurally sound input describing an infeasible problem:
    /// disconnected comparison graph, hopeless generation regime, or a
    /// chain that fails to mix (exit 2).
    Infeasible(String),
    /// I/O failures and malformed files (exit 3).
    Format(String),
}

impl CliError {
    /// The exit code this error class maps to.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Infeasible(_) => 2,
            CliError::Format(_) => 3,
        }
    }

    /// Wraps a core-library error arising from flag-derived inputs: domain
    /// and config violations are usage errors; the rest mark the instance
    /// infeasible.
    pub fn from_core_flags(e: btl_topk::Error) -> CliError {
        match e {
            btl_topk::Error::Domain(_) | btl_topk::Error::Config(_) => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Infeasible(e.to_string()),
        }
    }

    /// Wraps a core-library error arising while processing a loaded file:
    /// validation failures mean the file content is malformed; the rest
    /// mark the described instance infeasible.
    pub fn from_core_file(e: btl_topk::Error) -> CliError {
        match e {
            btl_topk::Error::Domain(_) | btl_topk::Error::Config(_) => {
                CliError::Format(e.to_string())
            }
            _ => CliError::Infeasible(e.to_string()),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Infeasible(m) | CliError::Format(m) => {
                f.write_str(m)
            }
        }
    }
}

impl std::error::Error for CliError {}

/// Result alias for the CLI layer.
pub type CliResult<T> = Result<T, CliError>;
