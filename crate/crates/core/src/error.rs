use thiserror::Error;

/// Errors raised by the lattice solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("state norm deviates from unity by {deviation:.3e}")]
    NotNormalized { deviation: f64 },

    #[error("lattice must have at least 3 sites, got {0}")]
    TooFewSites(usize),

    #[error("operation requires a periodic lattice")]
    UnsupportedBoundary,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("integrator diverged at step {step}: norm drift {drift:.3e}")]
    IntegratorDiverged { step: usize, drift: f64 },

    #[error("no restart converged ({restarts} attempted, best residual {best_residual:.3e})")]
    NoConvergence { restarts: usize, best_residual: f64 },

    #[error("stationary residual {residual:.3e} exceeds {limit:.1e}")]
    ResidualTooLarge { residual: f64, limit: f64 },

    #[error("zero-mode construction impossible on an even lattice (L = {0})")]
    EvenZeroMode(usize),

    #[error("no decreasing root for the zero-mode recursion at site {site}")]
    RootSelection { site: usize },

    #[error("predicate does not change sign on [{lo}, {hi}]")]
    BracketFailure { lo: f64, hi: f64 },

    #[error("{0}")]
    Io(String),
}

impl Error {
    /// Short machine-readable category, used for CLI diagnostics.
    pub fn category(&self) -> &'static str {
        match self {
            Error::NotNormalized { .. } | Error::TooFewSites(_) | Error::InvalidParameter(_) => {
                "precondition"
            }
            Error::UnsupportedBoundary => "unsupported-boundary",
            Error::IntegratorDiverged { .. } => "integrator-diverged",
            Error::NoConvergence { .. } => "no-convergence",
            Error::ResidualTooLarge { .. } => "precondition",
            Error::EvenZeroMode(_) => "construction-impossible",
            Error::RootSelection { .. } => "root-selection",
            Error::BracketFailure { .. } => "bracket-failure",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
