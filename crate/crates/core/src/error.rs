use thiserror::Error;

/// Errors raised by evaluation, residual and extraction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error at x = {point}: {msg}")]
    OutOfDomain { point: f64, msg: String },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("positivity violated: value {value} at t = {at}")]
    Positivity { at: f64, value: f64 },
    #[error("divergence: {0}")]
    Divergence(String),
    #[error("range error: {0}")]
    Range(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, x: f64) -> Result<()> {
    if x.is_finite() {
        Ok(())
    } else {
        Err(Error::Input(format!("{name} must be finite, got {x}")))
    }
}
