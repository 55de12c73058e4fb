//! The rho-kernel `(1 - e^{-rho t}) / rho`, the exponential auxiliary and the affine
//! Beurling solution.

use serde::Serialize;

use crate::error::{ensure_finite, Result};
use crate::func::Evaluable;

/// Below this value of `|rho * t|` the kernel is evaluated by its Taylor series.
pub const HRHO_SERIES_SWITCH: f64 = 1e-4;

/// Evaluates `(1 - e^{-rho t}) / rho`, with the removable singularity at `rho = 0`
/// filled in by continuity (`t` itself).
pub fn eval_hrho(rho: f64, t: f64) -> Result<f64> {
    ensure_finite("rho", rho)?;
    ensure_finite("t", t)?;
    if rho == 0.0 {
        return Ok(t);
    }
    let x = rho * t;
    if x.abs() < HRHO_SERIES_SWITCH {
        Ok(hrho_series(rho, t))
    } else {
        Ok(-(-x).exp_m1() / rho)
    }
}

/// `t * (1 - x/2 + x^2/6 - x^3/24 + x^4/120)` with `x = rho t`; the truncation error is
/// below `x^5 / 720`, far under an ulp for `|x| < 1e-4`.
pub(crate) fn hrho_series(rho: f64, t: f64) -> f64 {
    let x = rho * t;
    t * (1.0 - x / 2.0 * (1.0 - x / 3.0 * (1.0 - x / 4.0 * (1.0 - x / 5.0))))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RhoKernel {
    pub rho: f64,
}

impl RhoKernel {
    pub fn new(rho: f64) -> Self {
        Self { rho }
    }
}

impl Evaluable for RhoKernel {
    fn eval(&self, t: f64) -> Result<f64> {
        eval_hrho(self.rho, t)
    }
}

/// `g(x) = e^{-rho x}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpAuxiliary {
    pub rho: f64,
}

impl ExpAuxiliary {
    pub fn new(rho: f64) -> Self {
        Self { rho }
    }
}

impl Evaluable for ExpAuxiliary {
    fn eval(&self, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        Ok((-self.rho * t).exp())
    }
}

/// `phi(t) = 1 + c t`, the positive solutions of the Beurling equation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AffineSolution {
    pub c: f64,
}

impl AffineSolution {
    pub fn new(c: f64) -> Self {
        Self { c }
    }
}

impl Evaluable for AffineSolution {
    fn eval(&self, t: f64) -> Result<f64> {
        ensure_finite("t", t)?;
        Ok(1.0 + self.c * t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hrho_examples() {
        assert_eq!(eval_hrho(0.0, 3.5).unwrap(), 3.5);
        let one = eval_hrho(1.0, 1.0).unwrap();
        assert!((one - 0.632_120_558_828_557_7).abs() < 1e-15);
        let neg = eval_hrho(-1.0, 1.0).unwrap();
        assert!((neg - 1.718_281_828_459_045).abs() < 1e-15);
    }

    #[test]
    fn hrho_zero_at_origin() {
        for rho in [-5.0, -1e-9, 0.0, 1e-9, 0.3, 5.0] {
            assert_eq!(eval_hrho(rho, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn hrho_rejects_non_finite() {
        assert!(eval_hrho(f64::NAN, 1.0).is_err());
        assert!(eval_hrho(1.0, f64::INFINITY).is_err());
    }

    #[test]
    fn series_matches_direct_at_switch() {
        // Both sides of the branch switch, across the rho range.
        for i in 0..=100 {
            let rho = -5.0 + 0.1 * i as f64;
            if rho == 0.0 {
                continue;
            }
            let t = HRHO_SERIES_SWITCH / rho.abs();
            if t > 10.0 {
                continue;
            }
            let direct = -(-rho * t).exp_m1() / rho;
            let series = hrho_series(rho, t);
            assert!(((direct - series) / direct).abs() < 1e-12, "rho={rho}");
        }
    }

    #[test]
    fn exp_auxiliary_is_multiplicative() {
        let g = ExpAuxiliary::new(0.8);
        assert_eq!(g.eval(0.0).unwrap(), 1.0);
        let lhs = g.eval(1.25 + 2.5).unwrap();
        let rhs = g.eval(1.25).unwrap() * g.eval(2.5).unwrap();
        assert!(((lhs - rhs) / lhs).abs() < 1e-14);
    }

    #[test]
    fn affine_at_least_one() {
        let phi = AffineSolution::new(0.5);
        assert_eq!(phi.eval(0.0).unwrap(), 1.0);
        assert!(phi.eval(3.0).unwrap() >= 1.0);
    }
}
