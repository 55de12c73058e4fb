//! Tabulated functions with shape-preserving (PCHIP) interpolation.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::func::Evaluable;

/// Tabulated `(x, value)` data. Evaluation interpolates with monotone cubic Hermite
/// splines and refuses arguments outside `[xs[0], xs[n-1]]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledFunction {
    xs: Vec<f64>,
    values: Vec<f64>,
    #[serde(skip)]
    slopes: Vec<f64>,
}

impl SampledFunction {
    pub fn new(xs: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if xs.len() != values.len() {
            return Err(Error::Input(format!(
                "length mismatch: {} abscissae, {} values",
                xs.len(),
                values.len()
            )));
        }
        if xs.len() < 2 {
            return Err(Error::Input("need at least two samples".into()));
        }
        for (i, (&x, &y)) in xs.iter().zip(&values).enumerate() {
            if !x.is_finite() || !y.is_finite() {
                return Err(Error::Input(format!("non-finite sample at index {i}")));
            }
        }
        if xs[0] < 0.0 {
            return Err(Error::Input(format!("negative abscissa {}", xs[0])));
        }
        if let Some(i) = xs.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::Input(format!(
                "abscissae not strictly increasing at index {}",
                i + 1
            )));
        }
        let slopes = pchip_slopes(&xs, &values);
        Ok(Self { xs, values, slopes })
    }

    /// Tabulates `f` on `xs`.
    pub fn tabulate(f: &dyn Evaluable, xs: Vec<f64>) -> Result<Self> {
        let values = xs.iter().map(|&x| f.eval(x)).collect::<Result<Vec<_>>>()?;
        Self::new(xs, values)
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn range(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    fn interpolate(&self, t: f64) -> Result<f64> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfDomain {
                point: t,
                msg: format!("outside tabulated range [{lo}, {hi}]"),
            });
        }
        // Index of the left end of the bracketing interval.
        let i = match self.xs.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(i) => return Ok(self.values[i]),
            Err(i) => i - 1,
        };
        let h = self.xs[i + 1] - self.xs[i];
        let s = (t - self.xs[i]) / h;
        let (y0, y1) = (self.values[i], self.values[i + 1]);
        let (d0, d1) = (self.slopes[i], self.slopes[i + 1]);
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        Ok(h00 * y0 + h10 * h * d0 + h01 * y1 + h11 * h * d1)
    }
}

impl Evaluable for SampledFunction {
    fn eval(&self, t: f64) -> Result<f64> {
        self.interpolate(t)
    }
}

/// Fritsch-Carlson derivative estimates with the usual one-sided end conditions.
fn pchip_slopes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
    let delta: Vec<f64> = (0..n - 1).map(|i| (ys[i + 1] - ys[i]) / h[i]).collect();
    if n == 2 {
        return vec![delta[0]; 2];
    }
    let mut d = vec![0.0; n];
    for k in 1..n - 1 {
        let (a, b) = (delta[k - 1], delta[k]);
        if a == 0.0 || b == 0.0 || a.signum() != b.signum() {
            d[k] = 0.0;
        } else {
            let w1 = 2.0 * h[k] + h[k - 1];
            let w2 = h[k] + 2.0 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / a + w2 / b);
        }
    }
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    d
}

fn end_slope(h0: f64, h1: f64, m0: f64, m1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * m0 - h0 * m1) / (h0 + h1);
    if d.signum() != m0.signum() {
        0.0
    } else if m0.signum() != m1.signum() && d.abs() > 3.0 * m0.abs() {
        3.0 * m0
    } else {
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_tables() {
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 0.0, 1.0], vec![1.0, 1.0, 1.0]).is_err());
        assert!(SampledFunction::new(vec![0.0, 1.0], vec![1.0, f64::NAN]).is_err());
        assert!(SampledFunction::new(vec![-1.0, 1.0], vec![1.0, 1.0]).is_err());
    }

    #[test]
    fn reproduces_linear_data() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 0.25 * x).collect();
        let f = SampledFunction::new(xs, ys).unwrap();
        for t in [0.0, 0.3, 4.71, 9.99, 10.0] {
            assert!((f.eval(t).unwrap() - (1.0 + 0.25 * t)).abs() < 1e-14);
        }
    }

    #[test]
    fn refuses_extrapolation() {
        let f = SampledFunction::new(vec![0.0, 1.0, 2.0], vec![0.0, 1.0, 4.0]).unwrap();
        match f.eval(2.5) {
            Err(Error::OutOfDomain { point, .. }) => assert_eq!(point, 2.5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn preserves_monotonicity() {
        let xs = vec![0.0, 1.0, 2.0, 3.0, 4.0];
        let ys = vec![0.0, 0.1, 0.2, 5.0, 5.1];
        let f = SampledFunction::new(xs, ys).unwrap();
        let mut prev = f.eval(0.0).unwrap();
        for i in 1..=400 {
            let v = f.eval(i as f64 * 0.01).unwrap();
            assert!(v >= prev);
            prev = v;
        }
    }

    #[test]
    fn smooth_interpolation_is_accurate() {
        let xs: Vec<f64> = (0..=200).map(|i| i as f64 * 0.025).collect();
        let f = SampledFunction::tabulate(&|x: f64| (-x).exp(), xs).unwrap();
        let err = (0..1000)
            .map(|i| {
                let t = i as f64 * 0.004_999;
                (f.eval(t).unwrap() - (-t).exp()).abs()
            })
            .fold(0.0, f64::max);
        assert!(err < 1e-5, "{err}");
    }
}
