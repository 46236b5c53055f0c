use thiserror::Error;

/// Errors raised by the numerical library and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("non-finite value at index {index}")]
    NonFinite { index: usize },

    #[error(
        "t = {t} is outside the usable frequency band: limit is {margin} x Nyquist = {limit} (Nyquist {nyquist})"
    )]
    OutOfBand {
        t: f64,
        limit: f64,
        margin: f64,
        nyquist: f64,
    },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The requested check is known not to hold, so it is not run.
    #[error("refused: {0}")]
    Refused(String),

    /// The decay profile has no two-sided power law to test (zero or super-polynomial tail).
    #[error("no power law: {0}")]
    NoPowerLaw(String),

    #[error("fit error: {0}")]
    Fit(String),

    #[error("step {step:?} rounds to the zero grid vector (spacing {spacing})")]
    SnapFailure { step: Vec<f64>, spacing: f64 },

    #[error(
        "sphere rule self-check did not converge at h = {h}: order {order}, relative change {rel_change:e}"
    )]
    Unconverged { h: f64, order: usize, rel_change: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
