use thiserror::Error;

/// Errors surfaced by the numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// An iteration or series failed to converge within its budget.
    #[error("convergence failure: {0}")]
    Convergence(String),

    /// A structural parameter (mass, mode, potential spec) is invalid.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A non-finite value appeared during evolution.
    #[error("numerical abort: {0}")]
    NumericalAbort(String),

    /// Two independent computation routes disagree beyond tolerance.
    #[error("cross-check disagreement: {0}")]
    CrossCheck(String),

    /// A fit window is unusable (ringing contamination or roundoff floor).
    #[error("fit window rejected: {0}")]
    FitWindow(String),

    /// A quantity that must be positive came out non-positive.
    #[error("positivity violation: {0}")]
    Positivity(String),
}

pub type Result<T> = std::result::Result<T, Error>;
