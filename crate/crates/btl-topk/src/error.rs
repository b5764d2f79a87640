//! Error type shared by the library.

use thiserror::Error;

/// Errors raised by model construction, generators, and estimators.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument violates a documented precondition (wrong range, wrong
    /// dimension, malformed structure).
    #[error("domain error: {0}")]
    Domain(String),

    /// A generation or algorithm configuration is invalid as a whole.
    #[error("config error: {0}")]
    Config(String),

    /// The comparison graph is not connected, so no estimator can order all
    /// items against each other.
    #[error("comparison graph is disconnected (n={n}, {edges} edges)")]
    Disconnected { n: usize, edges: usize },

    /// Power iteration did not reach the requested residual.
    #[error(
        "power iteration did not converge: residual {residual:e} after {iters} iterations (tol {tol:e})"
    )]
    NoConvergence { tol: f64, iters: usize, residual: f64 },

    /// Repeated graph draws never produced a connected graph.
    #[error("no connected graph after {attempts} attempts (n={n}, p_obs={p_obs})")]
    GenerationFailed { attempts: u32, n: usize, p_obs: f64 },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Shorthand for a [`Error::Domain`] with a formatted message.
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Shorthand for a [`Error::Config`] with a formatted message.
    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }
}
