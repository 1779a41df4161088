use thiserror::Error;

/// Errors produced by samplers, estimators and diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    /// Input violates a precondition (empty data, nonpositive values,
    /// out-of-range parameters).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// All relevant observations are equal, so a log-ratio based
    /// estimator is undefined.
    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    /// The requested parameter regime is outside what this crate models.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
