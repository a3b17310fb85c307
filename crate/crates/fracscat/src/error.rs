//! Error types shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the admissible range of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A quadrature or iteration failed to reach its tolerance.
    #[error("{what}: error estimate {est_error:.3e} exceeds tolerance {tol:.3e}")]
    NonConvergence {
        what: String,
        est_error: f64,
        tol: f64,
    },

    /// Grid spacing too coarse for the requested wavenumber.
    #[error("resolution error: {0}")]
    Resolution(String),

    /// The discretized system is (numerically) singular.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// A linear solve finished but its residual is above the contract.
    #[error("solve residual {residual:.3e} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    /// Evaluation point lies inside (or too close to) the potential support.
    #[error("point inside support: {0}")]
    PointInsideSupport(String),

    /// Inconsistent dimensions, grids or parameter sets.
    #[error("mismatch: {0}")]
    Mismatch(String),

    /// Too few frequency samples for a reconstruction.
    #[error("insufficient coverage: {0}")]
    Coverage(String),

    /// A lattice frequency sits on the resonant shell with no regularization.
    #[error("shell hit: {0}")]
    ShellHit(String),

    /// Malformed or truncated data file.
    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
