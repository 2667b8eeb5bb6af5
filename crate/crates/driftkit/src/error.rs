//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A value left the mathematical domain of an operation
    /// (ln of a non-positive number, division by zero, E1 at x <= 0, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A theorem precondition failed an exact check; the message names the
    /// witness (state, pair of states, or sampled point).
    #[error("precondition rejected: {0}")]
    Precondition(String),

    /// Adaptive quadrature hit its subdivision-depth cap before reaching
    /// the requested tolerance. Carries the best estimate achieved.
    #[error("quadrature did not converge (achieved {achieved:e}, estimate {estimate})")]
    Convergence { estimate: f64, achieved: f64 },

    /// A parameter was structurally invalid (out of range, wrong length).
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Expression could not be parsed.
    #[error("parse error at byte {at}: {msg}")]
    Parse { at: usize, msg: String },

    /// A finite-chain invariant failed (row sums, reachability, labels).
    #[error("invalid chain: {0}")]
    Chain(String),

    /// Monte Carlo estimation could not produce a usable result.
    #[error("estimation failed: {0}")]
    Estimation(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parameter(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub fn chain(msg: impl Into<String>) -> Self {
        Error::Chain(msg.into())
    }
}
