//! Parameter extraction following the constructive Goldie arguments: the kernel constant
//! kappa, the exponential rate, Riemann-sum reconstruction of `gamma = int g`, the
//! integral solution `H = int h/k`, the slope of a Beurling solution at zero, and
//! classification of tabulated data.

mod classify;
mod quadrature;

pub use classify::{classify, CandidateTrace, ClassificationResult, MIN_CLASSIFY_POINTS};
pub use quadrature::{quadrature_h, riemann_gamma};

use serde::Serialize;

use crate::domain::{domain_points, DomainSpec};
use crate::error::{Error, Result};
use crate::func::{eval_finite, Evaluable};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaEstimate {
    pub kappa: f64,
    /// `max - min` of the per-point ratios.
    pub spread: f64,
    pub points_used: usize,
}

/// Estimates kappa in `K = kappa (g - 1)` as the median of `K(u) / (g(u) - 1)`, skipping
/// points where `|g(u) - 1| <= one_tol`.
pub fn extract_kappa(
    k: &dyn Evaluable,
    g: &dyn Evaluable,
    domain: &DomainSpec,
    one_tol: f64,
) -> Result<KappaEstimate> {
    let mut ratios = Vec::new();
    for p in domain_points(domain)? {
        let gm1 = eval_finite(g, p.value)? - 1.0;
        if gm1.abs() <= one_tol {
            continue;
        }
        ratios.push(eval_finite(k, p.value)? / gm1);
    }
    if ratios.len() < 2 {
        return Err(Error::Degenerate(format!(
            "g == 1 on the domain ({} usable point(s)); the additive case has no kappa",
            ratios.len()
        )));
    }
    ratios.sort_by(f64::total_cmp);
    let n = ratios.len();
    let kappa = if n % 2 == 1 {
        ratios[n / 2]
    } else {
        0.5 * (ratios[n / 2 - 1] + ratios[n / 2])
    };
    Ok(KappaEstimate {
        kappa,
        spread: ratios[n - 1] - ratios[0],
        points_used: n,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExponentialFit {
    pub rho: f64,
    /// Root mean square of the residuals of `-log g(x) - rho x`.
    pub rms: f64,
}

/// Zero-intercept least-squares line through `(x, -log g(x))`.
pub fn fit_exponential_rho(g: &dyn Evaluable, points: &[f64]) -> Result<ExponentialFit> {
    if points.len() < 3 {
        return Err(Error::Usage(format!("need at least 3 points, got {}", points.len())));
    }
    let mut xy = Vec::with_capacity(points.len());
    for &x in points {
        if !(x.is_finite() && x > 0.0) {
            return Err(Error::Usage(format!("fit points must be positive, got {x}")));
        }
        let gx = eval_finite(g, x)?;
        if gx <= 0.0 {
            return Err(Error::OutOfDomain {
                point: x,
                msg: format!("g must be positive for a log fit, got {gx}"),
            });
        }
        xy.push((x, -gx.ln()));
    }
    let sxx: f64 = xy.iter().map(|(x, _)| x * x).sum();
    let sxy: f64 = xy.iter().map(|(x, y)| x * y).sum();
    let rho = sxy / sxx;
    let ss: f64 = xy.iter().map(|(x, y)| (y - rho * x).powi(2)).sum();
    Ok(ExponentialFit {
        rho,
        rms: (ss / xy.len() as f64).sqrt(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeEstimate {
    /// Extrapolated limit of `(lambda(u) - 1) / u` as `u -> 0`.
    pub rho: f64,
    pub quotients: Vec<f64>,
    /// `|q_{n+1} - q_n|` between consecutive quotients.
    pub differences: Vec<f64>,
}

/// Limit of the difference quotients `(lambda(u_n) - 1) / u_n`, by linear (Richardson)
/// extrapolation to `u = 0` from the last two terms.
pub fn slope_at_zero(lambda: &dyn Evaluable, u_sequence: &[f64]) -> Result<SlopeEstimate> {
    if u_sequence.len() < 5 {
        return Err(Error::Usage(format!(
            "need at least 5 terms, got {}",
            u_sequence.len()
        )));
    }
    if u_sequence.iter().any(|u| !(u.is_finite() && *u > 0.0))
        || u_sequence.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(Error::Usage("u sequence must be positive and strictly decreasing".into()));
    }
    let quotients = u_sequence
        .iter()
        .map(|&u| Ok((eval_finite(lambda, u)? - 1.0) / u))
        .collect::<Result<Vec<_>>>()?;
    let differences: Vec<f64> = quotients.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let first = differences[0];
    let last = differences[differences.len() - 1];
    let scale = 1.0 + quotients.iter().fold(0.0f64, |m, q| m.max(q.abs()));
    if last > first && last > 1e-12 * scale {
        return Err(Error::NonConvergence(format!(
            "difference quotients spread out: {first:e} -> {last:e}"
        )));
    }
    let n = u_sequence.len();
    let (u0, u1) = (u_sequence[n - 2], u_sequence[n - 1]);
    let (q0, q1) = (quotients[n - 2], quotients[n - 1]);
    let rho = q1 + (q1 - q0) * u1 / (u0 - u1);
    Ok(SlopeEstimate {
        rho,
        quotients,
        differences,
    })
}
