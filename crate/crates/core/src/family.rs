//! Closed-form solution families of the equations handled by this crate.

use std::fmt;
use std::sync::Arc;

use serde::ser::{SerializeMap, Serializer};
use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::extract::quadrature_h;
use crate::func::Evaluable;
use crate::kernel::eval_hrho;

/// Absolute tolerance used when an [`SolutionFamily::IntegralSolution`] is evaluated.
pub const INTEGRAL_EVAL_TOL: f64 = 1e-12;

#[derive(Clone)]
pub enum SolutionFamily {
    /// `phi == 1`.
    ConstantOne,
    /// `phi(t) = 1 + c t`.
    Affine { c: f64 },
    /// `K(x) = c x`.
    Linear { c: f64 },
    /// `F(x) = c (1 - e^{-rho x}) / rho`.
    RhoKernelScaled { c: f64, rho: f64 },
    /// `g(x) = e^{-rho x}`.
    Exponential { rho: f64 },
    /// `K(x) = c * int_0^x h(t)/k(t) dt`.
    IntegralSolution {
        c: f64,
        h: Arc<dyn Evaluable>,
        k: Arc<dyn Evaluable>,
    },
}

impl SolutionFamily {
    pub fn affine(c: f64) -> Result<Self> {
        ensure_finite("c", c)?;
        Ok(Self::Affine { c })
    }

    /// Rejects `c = 0`: the zero kernel is excluded.
    pub fn linear(c: f64) -> Result<Self> {
        ensure_finite("c", c)?;
        nonzero(c)?;
        Ok(Self::Linear { c })
    }

    pub fn rho_kernel(c: f64, rho: f64) -> Result<Self> {
        ensure_finite("c", c)?;
        ensure_finite("rho", rho)?;
        nonzero(c)?;
        Ok(Self::RhoKernelScaled { c, rho })
    }

    pub fn exponential(rho: f64) -> Result<Self> {
        ensure_finite("rho", rho)?;
        Ok(Self::Exponential { rho })
    }

    pub fn integral(c: f64, h: Arc<dyn Evaluable>, k: Arc<dyn Evaluable>) -> Result<Self> {
        ensure_finite("c", c)?;
        nonzero(c)?;
        Ok(Self::IntegralSolution { c, h, k })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ConstantOne => "constant_one",
            Self::Affine { .. } => "affine",
            Self::Linear { .. } => "linear",
            Self::RhoKernelScaled { .. } => "rho_kernel",
            Self::Exponential { .. } => "exponential",
            Self::IntegralSolution { .. } => "integral",
        }
    }

    /// Named numeric parameters, in a fixed order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Self::ConstantOne => vec![],
            Self::Affine { c } | Self::Linear { c } => vec![("c", c)],
            Self::RhoKernelScaled { c, rho } => vec![("c", c), ("rho", rho)],
            Self::Exponential { rho } => vec![("rho", rho)],
            Self::IntegralSolution { c, .. } => vec![("c", c)],
        }
    }

    /// The auxiliary `g` that pairs with this function when it plays the kernel role in
    /// the Goldie equation: `e^{-rho x}` for the rho-kernel, `1` otherwise.
    pub fn goldie_auxiliary(&self) -> SolutionFamily {
        match *self {
            Self::RhoKernelScaled { rho, .. } => Self::Exponential { rho },
            _ => Self::ConstantOne,
        }
    }
}

fn nonzero(c: f64) -> Result<()> {
    if c == 0.0 {
        Err(Error::Degenerate("the zero function is excluded".into()))
    } else {
        Ok(())
    }
}

/// Evaluates a family member at `t`.
pub fn eval_family(f: &SolutionFamily, t: f64) -> Result<f64> {
    ensure_finite("t", t)?;
    match f {
        SolutionFamily::ConstantOne => Ok(1.0),
        SolutionFamily::Affine { c } => Ok(1.0 + c * t),
        SolutionFamily::Linear { c } => Ok(c * t),
        SolutionFamily::RhoKernelScaled { c, rho } => Ok(c * eval_hrho(*rho, t)?),
        SolutionFamily::Exponential { rho } => Ok((-rho * t).exp()),
        SolutionFamily::IntegralSolution { c, h, k } => {
            let v = quadrature_h(h.as_ref(), k.as_ref(), t, INTEGRAL_EVAL_TOL)
                .map_err(|e| Error::Evaluation(format!("integral solution at t = {t}: {e}")))?;
            Ok(c * v)
        }
    }
}

impl Evaluable for SolutionFamily {
    fn eval(&self, t: f64) -> Result<f64> {
        eval_family(self, t)
    }
}

impl fmt::Debug for SolutionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.name())?;
        let params = self.params();
        if !params.is_empty() {
            let inner: Vec<String> = params.iter().map(|(k, v)| format!("{k}={v}")).collect();
            write!(f, "({})", inner.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for SolutionFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let params = self.params();
        let mut map = serializer.serialize_map(Some(1 + params.len()))?;
        map.serialize_entry("family", self.name())?;
        for (k, v) in params {
            map.serialize_entry(k, &v)?;
        }
        map.end()
    }
}
