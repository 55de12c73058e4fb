//! Classification of tabulated data into the closed-form families.
//!
//! Candidates are tried simplest first. Each is fitted by least squares, then the fitted
//! closed form is substituted back into the requested equation; the first candidate
//! whose scaled fit RMS and relative equation residual are both within tolerance wins.

use serde::Serialize;

use crate::domain::DomainSpec;
use crate::error::{Error, Result};
use crate::family::SolutionFamily;
use crate::func::Evaluable;
use crate::kernel::eval_hrho;
use crate::residuals::{equation_residual, EquationKind, ResidualOptions};
use crate::sampled::SampledFunction;

pub const MIN_CLASSIFY_POINTS: usize = 10;
/// Points of the data used as the `u` and `v` ranges of the residual recheck.
const RECHECK_POINTS: usize = 30;

#[derive(Debug, Clone, Serialize)]
pub struct CandidateTrace {
    pub candidate: &'static str,
    pub fitted: Option<SolutionFamily>,
    /// Residual RMS of the fit divided by `max(1, rms(values))`.
    pub fit_rms: Option<f64>,
    pub equation_residual: Option<f64>,
    pub accepted: bool,
    pub note: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassificationResult {
    pub equation: EquationKind,
    pub family: Option<SolutionFamily>,
    pub fit_rms: Option<f64>,
    pub equation_residual_after_fit: Option<f64>,
    pub tol: f64,
    pub trace: Vec<CandidateTrace>,
}

const CANDIDATES: [&str; 5] = ["constant_one", "linear", "affine", "exponential", "rho_kernel"];

pub fn classify(data: &SampledFunction, equation: EquationKind, tol: f64) -> Result<ClassificationResult> {
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::Usage(format!("tolerance must be positive, got {tol}")));
    }
    let (lo, hi) = data.range();
    if data.len() < MIN_CLASSIFY_POINTS || hi <= lo {
        return Err(Error::Usage(format!(
            "classification needs at least {MIN_CLASSIFY_POINTS} points spanning an interval, got {}",
            data.len()
        )));
    }
    let xs = data.xs();
    let ys = data.values();
    let scale = rms(ys).max(1.0);
    let recheck = recheck_domain(xs);

    let mut trace = Vec::with_capacity(CANDIDATES.len());
    let mut winner: Option<usize> = None;
    for name in CANDIDATES {
        let mut entry = CandidateTrace {
            candidate: name,
            fitted: None,
            fit_rms: None,
            equation_residual: None,
            accepted: false,
            note: None,
        };
        match fit_candidate(name, xs, ys) {
            Ok(fam) => {
                let fit = fit_rms(&fam, xs, ys)? / scale;
                entry.fit_rms = Some(fit);
                match recheck_residual(&fam, equation, &recheck, tol) {
                    Ok(r) => entry.equation_residual = Some(r),
                    Err(e) => entry.note = Some(format!("residual check failed: {e}")),
                }
                entry.accepted = winner.is_none()
                    && fit <= tol
                    && entry.equation_residual.is_some_and(|r| r <= tol);
                entry.fitted = Some(fam);
            }
            Err(e) => entry.note = Some(e.to_string()),
        }
        if entry.accepted {
            winner = Some(trace.len());
        }
        trace.push(entry);
    }
    let (family, fit, resid) = match winner {
        Some(i) => (trace[i].fitted.clone(), trace[i].fit_rms, trace[i].equation_residual),
        None => (None, None, None),
    };
    Ok(ClassificationResult {
        equation,
        family,
        fit_rms: fit,
        equation_residual_after_fit: resid,
        tol,
        trace,
    })
}

fn rms(v: &[f64]) -> f64 {
    (v.iter().map(|y| y * y).sum::<f64>() / v.len() as f64).sqrt()
}

fn fit_rms(fam: &SolutionFamily, xs: &[f64], ys: &[f64]) -> Result<f64> {
    let mut ss = 0.0;
    for (&x, &y) in xs.iter().zip(ys) {
        ss += (fam.eval(x)? - y).powi(2);
    }
    Ok((ss / xs.len() as f64).sqrt())
}

fn recheck_domain(xs: &[f64]) -> DomainSpec {
    let pos: Vec<f64> = xs.iter().copied().filter(|&x| x > 0.0).collect();
    let pts = if pos.len() <= RECHECK_POINTS {
        pos
    } else {
        let last = pos.len() - 1;
        let mut v: Vec<f64> = (0..RECHECK_POINTS)
            .map(|i| pos[i * last / (RECHECK_POINTS - 1)])
            .collect();
        v.dedup();
        v
    };
    DomainSpec::grid(pts)
}

/// Relative residual of `equation` with the candidate substituted into every role:
/// the Goldie auxiliary pairs with the kernel, and the Beurling-type equations take
/// `K = k = h = phi`, `g = phi - 1`.
fn recheck_residual(fam: &SolutionFamily, equation: EquationKind, domain: &DomainSpec, tol: f64) -> Result<f64> {
    let opts = ResidualOptions::with_tol(tol);
    let minus_one = |t: f64| fam.eval(t).map(|y| y - 1.0).unwrap_or(f64::NAN);
    let report = match equation {
        EquationKind::CfeAdditive
        | EquationKind::CeeMultiplicative
        | EquationKind::Mik
        | EquationKind::Bfe => equation_residual(equation, &[fam], domain, &opts)?,
        EquationKind::Gfe => {
            let g = fam.goldie_auxiliary();
            equation_residual(equation, &[fam, &g], domain, &opts)?
        }
        EquationKind::Gbe => equation_residual(equation, &[fam, fam, &minus_one], domain, &opts)?,
        EquationKind::Gbep => {
            equation_residual(equation, &[fam, fam, &minus_one, fam], domain, &opts)?
        }
    };
    Ok(report.max_rel)
}

fn fit_candidate(name: &str, xs: &[f64], ys: &[f64]) -> Result<SolutionFamily> {
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    match name {
        "constant_one" => Ok(SolutionFamily::ConstantOne),
        "linear" => {
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
            SolutionFamily::linear(sxy / sxx)
        }
        "affine" => {
            let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * (y - 1.0)).sum();
            SolutionFamily::affine(sxy / sxx)
        }
        "exponential" => {
            let mut sxy = 0.0;
            for (&x, &y) in xs.iter().zip(ys) {
                if y <= 0.0 {
                    return Err(Error::OutOfDomain {
                        point: x,
                        msg: "exponential fit needs positive values".into(),
                    });
                }
                sxy -= x * y.ln();
            }
            SolutionFamily::exponential(sxy / sxx)
        }
        "rho_kernel" => {
            let (c, rho) = fit_rho_kernel(xs, ys)?;
            SolutionFamily::rho_kernel(c, rho)
        }
        _ => unreachable!("unknown candidate {name}"),
    }
}

/// Best `c` for a fixed `rho`, and the resulting sum of squares.
fn profile(xs: &[f64], ys: &[f64], rho: f64) -> (f64, f64) {
    let mut sbb = 0.0;
    let mut sby = 0.0;
    let basis: Vec<f64> = xs.iter().map(|&x| eval_hrho(rho, x).unwrap_or(f64::NAN)).collect();
    for (b, y) in basis.iter().zip(ys) {
        sbb += b * b;
        sby += b * y;
    }
    let c = sby / sbb;
    let ss: f64 = basis.iter().zip(ys).map(|(b, y)| (y - c * b).powi(2)).sum();
    if ss.is_finite() {
        (c, ss)
    } else {
        (c, f64::INFINITY)
    }
}

/// `d/d rho` of `(1 - e^{-rho x}) / rho`.
fn hrho_drho(rho: f64, x: f64) -> f64 {
    let y = rho * x;
    if y.abs() < 1e-3 {
        x * x * (-0.5 + y / 3.0 - y * y / 8.0 + y * y * y / 30.0)
    } else {
        (x * (-y).exp() - eval_hrho(rho, x).unwrap_or(f64::NAN)) / rho
    }
}

fn fit_rho_kernel(xs: &[f64], ys: &[f64]) -> Result<(f64, f64)> {
    let x_max = xs[xs.len() - 1];
    if x_max <= 0.0 {
        return Err(Error::Degenerate("no positive abscissae".into()));
    }
    // Coarse scan over rho * x_max in [-40, 40], then golden-section refinement.
    const SCAN: usize = 801;
    let rho_at = |i: usize| (-40.0 + 80.0 * i as f64 / (SCAN - 1) as f64) / x_max;
    let best = (0..SCAN)
        .min_by(|&i, &j| profile(xs, ys, rho_at(i)).1.total_cmp(&profile(xs, ys, rho_at(j)).1))
        .expect("non-empty scan");
    let (mut a, mut b) = (rho_at(best.saturating_sub(1)), rho_at((best + 1).min(SCAN - 1)));
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (1.0 + a.abs()) {
            break;
        }
        let m1 = b - inv_phi * (b - a);
        let m2 = a + inv_phi * (b - a);
        if profile(xs, ys, m1).1 <= profile(xs, ys, m2).1 {
            b = m2;
        } else {
            a = m1;
        }
    }
    let mut rho = 0.5 * (a + b);
    let (mut c, mut ss) = profile(xs, ys, rho);

    // Gauss-Newton polish on (c, rho).
    for _ in 0..30 {
        let (mut jtj, mut jtr) = ([[0.0; 2]; 2], [0.0; 2]);
        for (&x, &y) in xs.iter().zip(ys) {
            let h = eval_hrho(rho, x)?;
            let jac = [h, c * hrho_drho(rho, x)];
            let r = y - c * h;
            for i in 0..2 {
                jtr[i] += jac[i] * r;
                for j in 0..2 {
                    jtj[i][j] += jac[i] * jac[j];
                }
            }
        }
        let det = jtj[0][0] * jtj[1][1] - jtj[0][1] * jtj[1][0];
        if det.abs() < f64::MIN_POSITIVE {
            break;
        }
        let dc = (jtj[1][1] * jtr[0] - jtj[0][1] * jtr[1]) / det;
        let drho = (jtj[0][0] * jtr[1] - jtj[1][0] * jtr[0]) / det;
        let (nc, nrho) = (c + dc, rho + drho);
        let nss: f64 = xs
            .iter()
            .zip(ys)
            .map(|(&x, &y)| (y - nc * eval_hrho(nrho, x).unwrap_or(f64::NAN)).powi(2))
            .sum();
        if !(nss < ss) {
            break;
        }
        c = nc;
        rho = nrho;
        ss = nss;
    }
    if !(c.is_finite() && rho.is_finite()) {
        return Err(Error::NonConvergence("rho-kernel fit diverged".into()));
    }
    Ok((c, rho))
}
