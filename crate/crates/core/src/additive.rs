//! Exactly additive, non-linear functions on `Q + Q sqrt(2)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::domain::QuadSurd;
use crate::error::{Error, Result};

/// `K(a + b sqrt 2) = alpha a + beta b` with rational `alpha`, `beta`.
///
/// Additive on the subgroup by construction. Since `beta` is rational it can never equal
/// `alpha sqrt 2`, so `K(x)/x` is non-constant: the function is linear over `Q` but not
/// over the reals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactAdditiveOnZSqrt2 {
    alpha: BigRational,
    beta: BigRational,
}

pub fn make_pathological_additive(
    alpha: BigRational,
    beta: BigRational,
) -> Result<ExactAdditiveOnZSqrt2> {
    if alpha.is_zero() && beta.is_zero() {
        return Err(Error::Degenerate(
            "alpha = beta = 0 gives the zero function".into(),
        ));
    }
    Ok(ExactAdditiveOnZSqrt2 { alpha, beta })
}

impl ExactAdditiveOnZSqrt2 {
    /// Convenience constructor from integer coefficients.
    pub fn from_ints(alpha: i64, beta: i64) -> Result<Self> {
        make_pathological_additive(
            BigRational::from_integer(BigInt::from(alpha)),
            BigRational::from_integer(BigInt::from(beta)),
        )
    }

    pub fn alpha(&self) -> &BigRational {
        &self.alpha
    }

    pub fn beta(&self) -> &BigRational {
        &self.beta
    }

    pub fn eval(&self, x: &QuadSurd) -> BigRational {
        &self.alpha * &x.a + &self.beta * &x.b
    }

    pub fn eval_f64(&self, x: &QuadSurd) -> f64 {
        self.eval(x).to_f64().unwrap_or(f64::NAN)
    }

    /// Exact `K(x + y) - K(x) - K(y)`.
    pub fn additivity_defect(&self, x: &QuadSurd, y: &QuadSurd) -> BigRational {
        self.eval(&(x + y)) - self.eval(x) - self.eval(y)
    }
}
