//! Error types shared by every module.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum CknError {
    /// One or more improper integrals diverge for the requested weights.
    #[error("integrability violation: {}", .0.join("; "))]
    Integrability(Vec<String>),

    /// An iterative routine failed to meet its tolerance.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A stated hypothesis on the parameters does not hold.
    #[error("regime hypothesis violated: {0}")]
    Regime(String),

    /// A function required to be positive crossed zero.
    #[error("positivity lost near r = {0}")]
    Positivity(f64),

    /// An optimization or ratio has a vanishing denominator.
    #[error("zero denominator: {0}")]
    ZeroDenominator(String),

    /// Construction arguments outside the valid domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Malformed run configuration.
    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for CknError {
    fn from(e: std::io::Error) -> Self {
        CknError::Io(e.to_string())
    }
}

impl From<serde_json::Error> for CknError {
    fn from(e: serde_json::Error) -> Self {
        CknError::Config(e.to_string())
    }
}
