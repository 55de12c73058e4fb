//! The evaluation interface shared by closed forms, tabulated data and ad-hoc closures.

use crate::error::{Error, Result};

/// A real function of one real variable that may refuse some arguments.
///
/// Closures `Fn(f64) -> f64` implement this directly; a non-finite return value is
/// reported as an evaluation error rather than propagated.
pub trait Evaluable: Send + Sync {
    fn eval(&self, t: f64) -> Result<f64>;
}

impl<F> Evaluable for F
where
    F: Fn(f64) -> f64 + Send + Sync,
{
    fn eval(&self, t: f64) -> Result<f64> {
        let y = self(t);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Evaluation(format!("non-finite value {y} at t = {t}")))
        }
    }
}

/// Evaluates `f` and rejects non-finite output.
pub(crate) fn eval_finite(f: &dyn Evaluable, t: f64) -> Result<f64> {
    let y = f.eval(t)?;
    if y.is_finite() {
        Ok(y)
    } else {
        Err(Error::Evaluation(format!("non-finite value {y} at t = {t}")))
    }
}
