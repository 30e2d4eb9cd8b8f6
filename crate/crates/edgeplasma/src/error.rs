//! Error type shared by every fallible operation in the crate.

use thiserror::Error;

/// Unified error type.
///
/// Numerical routines distinguish *domain* errors (arguments outside the
/// mathematical domain of a formula), *precondition* errors (a documented
/// contract of an operation is violated, e.g. asking for normal-form data
/// when no bifurcation exists), and *singular* errors (a linear solve or
/// closed form degenerates for the given parameters).
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// A documented precondition of the operation is violated.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A linear solve or closed form degenerates for these parameters.
    #[error("singular configuration: {0}")]
    Singular(String),

    /// Requested output resolution cannot represent the spectral content.
    #[error("resolution too coarse: {0}")]
    Resolution(String),

    /// An iterative root finder failed to converge.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// The simulated field exceeded the blow-up guard.
    #[error("solution blow-up at t = {t}: sup-norm {sup:.3e} exceeds {limit:.1e}")]
    BlowUp { t: f64, sup: f64, limit: f64 },

    /// Underlying file-system failure.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// JSON (de)serialization failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    /// A persisted artifact does not match the documented format.
    #[error("format error: {0}")]
    Format(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
