//! Residuals of the functional equations and inequalities over a quantifier domain.
//!
//! Every report aggregates `|LHS - RHS|` over the pairs `(u, v)` drawn from the domain's
//! `u` and `v` ranges. The relative residual is `|LHS - RHS| / (1 + |LHS| + |RHS|)`; pass
//! or fail is decided on it.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::additive::ExactAdditiveOnZSqrt2;
use crate::domain::{DomainPoint, DomainSpec};
use crate::error::{Error, Result};
use crate::func::{eval_finite, Evaluable};

/// Default relative tolerance for closed-form inputs.
pub const DEFAULT_TOL_CLOSED_FORM: f64 = 1e-9;
/// Default relative tolerance for tabulated inputs.
pub const DEFAULT_TOL_TABULATED: f64 = 1e-6;
/// Above this many pairs, pairs are sampled at random from the seed.
pub const DEFAULT_MAX_PAIRS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EquationKind {
    /// `K(u+v) = K(u) + K(v)`.
    CfeAdditive,
    /// `g(u+v) = g(u) g(v)`.
    CeeMultiplicative,
    /// `K(u+v) = g(v) K(u) + K(v)`.
    Gfe,
    /// `phi(v + u phi(v)) = phi(u) phi(v)`.
    Bfe,
    /// `K(v + u k(v)) - K(v) = g(u) k(v)`.
    Gbe,
    /// `K(v + u k(v)) - K(v) = g(u) h(v)`.
    Gbep,
    /// `f(u+v) = f(u) + f(v)` whenever `f(u+v) != 0`.
    Mik,
}

impl EquationKind {
    pub const ALL: [EquationKind; 7] = [
        Self::CfeAdditive,
        Self::CeeMultiplicative,
        Self::Gfe,
        Self::Bfe,
        Self::Gbe,
        Self::Gbep,
        Self::Mik,
    ];

    /// Role names, in the order functions must be supplied.
    pub fn roles(self) -> &'static [&'static str] {
        match self {
            Self::CfeAdditive => &["K"],
            Self::CeeMultiplicative => &["g"],
            Self::Mik => &["f"],
            Self::Gfe => &["K", "g"],
            Self::Bfe => &["phi"],
            Self::Gbe => &["K", "k", "g"],
            Self::Gbep => &["K", "k", "g", "h"],
        }
    }

    pub fn arity(self) -> usize {
        self.roles().len()
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::CfeAdditive => "cfe",
            Self::CeeMultiplicative => "cee",
            Self::Gfe => "gfe",
            Self::Bfe => "bfe",
            Self::Gbe => "gbe",
            Self::Gbep => "gbep",
            Self::Mik => "mik",
        }
    }
}

impl fmt::Display for EquationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for EquationKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Usage(format!("unknown equation '{s}'")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ResidualOptions {
    pub tol: f64,
    pub max_pairs: usize,
    pub seed: u64,
}

impl Default for ResidualOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL_CLOSED_FORM,
            max_pairs: DEFAULT_MAX_PAIRS,
            seed: 0,
        }
    }
}

impl ResidualOptions {
    pub fn with_tol(tol: f64) -> Self {
        Self { tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::Usage(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.max_pairs == 0 {
            return Err(Error::Usage("max_pairs must be positive".into()));
        }
        Ok(())
    }
}

/// One evaluated pair.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PairResidual {
    pub u: f64,
    pub v: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub abs: f64,
    pub rel: f64,
}

impl PairResidual {
    fn new(u: f64, v: f64, lhs: f64, rhs: f64) -> Self {
        let abs = (lhs - rhs).abs();
        let rel = abs / (1.0 + lhs.abs() + rhs.abs());
        Self { u, v, lhs, rhs, abs, rel }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub kind: EquationKind,
    pub domain: String,
    pub n_pairs: usize,
    /// Pairs excluded by the conditional clause of the Mikusinski equation.
    pub n_skipped: usize,
    pub max_abs: f64,
    pub max_rel: f64,
    /// The pair attaining `max_rel`; the lexicographically smallest on ties.
    pub argmax: Option<(f64, f64)>,
    pub rms: f64,
    pub tol: f64,
    pub pass: bool,
}

impl ResidualReport {
    fn from_pairs(
        kind: EquationKind,
        domain: String,
        pairs: &[PairResidual],
        n_skipped: usize,
        tol: f64,
    ) -> Self {
        let mut max_abs = 0.0f64;
        let mut max_rel = 0.0f64;
        let mut argmax: Option<(f64, f64)> = None;
        let mut sum_sq = 0.0;
        for p in pairs {
            max_abs = max_abs.max(p.abs);
            sum_sq += p.abs * p.abs;
            let better = match argmax {
                None => true,
                Some(best) => match p.rel.total_cmp(&max_rel) {
                    Ordering::Greater => true,
                    Ordering::Equal => lex_less((p.u, p.v), best),
                    Ordering::Less => false,
                },
            };
            if better {
                max_rel = p.rel;
                argmax = Some((p.u, p.v));
            }
        }
        let rms = if pairs.is_empty() {
            0.0
        } else {
            (sum_sq / pairs.len() as f64).sqrt().min(max_abs)
        };
        Self {
            kind,
            domain,
            n_pairs: pairs.len(),
            n_skipped,
            max_abs,
            max_rel,
            argmax,
            rms,
            tol,
            pass: max_rel <= tol,
        }
    }
}

fn lex_less(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)) == Ordering::Less
}

/// Index pairs to evaluate: the full product when small enough, otherwise a seeded
/// uniform sample of `max_pairs` pairs.
pub(crate) fn select_pairs(n_u: usize, n_v: usize, opts: &ResidualOptions) -> Vec<(usize, usize)> {
    let total = n_u.saturating_mul(n_v);
    if total <= opts.max_pairs {
        (0..n_u).flat_map(|i| (0..n_v).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        (0..opts.max_pairs)
            .map(|_| (rng.gen_range(0..n_u), rng.gen_range(0..n_v)))
            .collect()
    }
}

/// `(LHS, RHS)` of `kind` at `(u, v)`; `None` when the pair is excluded (the Mikusinski
/// condition with band `tol`).
pub fn pair_sides(
    kind: EquationKind,
    funcs: &[&dyn Evaluable],
    u: f64,
    v: f64,
    tol: f64,
) -> Result<Option<(f64, f64)>> {
    check_arity(kind, funcs)?;
    let ev = |i: usize, t: f64| eval_finite(funcs[i], t);
    let sides = match kind {
        EquationKind::CfeAdditive => (ev(0, u + v)?, ev(0, u)? + ev(0, v)?),
        EquationKind::CeeMultiplicative => (ev(0, u + v)?, ev(0, u)? * ev(0, v)?),
        EquationKind::Mik => {
            let lhs = ev(0, u + v)?;
            if lhs.abs() <= tol {
                return Ok(None);
            }
            (lhs, ev(0, u)? + ev(0, v)?)
        }
        EquationKind::Gfe => (ev(0, u + v)?, ev(1, v)? * ev(0, u)? + ev(0, v)?),
        EquationKind::Bfe => {
            let pv = ev(0, v)?;
            (ev(0, v + u * pv)?, ev(0, u)? * pv)
        }
        EquationKind::Gbe => {
            let kv = ev(1, v)?;
            (ev(0, v + u * kv)? - ev(0, v)?, ev(2, u)? * kv)
        }
        EquationKind::Gbep => {
            let kv = ev(1, v)?;
            (ev(0, v + u * kv)? - ev(0, v)?, ev(2, u)? * ev(3, v)?)
        }
    };
    Ok(Some(sides))
}

fn check_arity(kind: EquationKind, funcs: &[&dyn Evaluable]) -> Result<()> {
    if funcs.len() != kind.arity() {
        return Err(Error::Usage(format!(
            "{kind} takes {} function(s) ({}), got {}",
            kind.arity(),
            kind.roles().join(", "),
            funcs.len()
        )));
    }
    Ok(())
}

/// Pointwise residuals over the domain, in evaluation order, and the number of pairs
/// skipped by the conditional clause.
pub fn pointwise_residuals(
    kind: EquationKind,
    funcs: &[&dyn Evaluable],
    domain: &DomainSpec,
    opts: &ResidualOptions,
) -> Result<(Vec<PairResidual>, usize)> {
    opts.validate()?;
    check_arity(kind, funcs)?;
    let (us, vs) = domain.pair_ranges()?;
    let mut out = Vec::new();
    let mut skipped = 0;
    for (i, j) in select_pairs(us.len(), vs.len(), opts) {
        let (u, v) = (us[i].value, vs[j].value);
        match pair_sides(kind, funcs, u, v, opts.tol)? {
            Some((lhs, rhs)) => out.push(PairResidual::new(u, v, lhs, rhs)),
            None => skipped += 1,
        }
    }
    Ok((out, skipped))
}

/// Residual of `kind` for the role-ordered `funcs` (see [`EquationKind::roles`]).
pub fn equation_residual(
    kind: EquationKind,
    funcs: &[&dyn Evaluable],
    domain: &DomainSpec,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    let (pairs, skipped) = pointwise_residuals(kind, funcs, domain, opts)?;
    Ok(ResidualReport::from_pairs(kind, domain.summary(), &pairs, skipped, opts.tol))
}

/// Exact residual of the Cauchy or Mikusinski equation for an exactly additive function,
/// computed in rational arithmetic on the exact subgroup coordinates.
pub fn exact_residual(
    kind: EquationKind,
    k: &ExactAdditiveOnZSqrt2,
    domain: &DomainSpec,
    opts: &ResidualOptions,
) -> Result<ResidualReport> {
    opts.validate()?;
    if !matches!(kind, EquationKind::CfeAdditive | EquationKind::Mik) {
        return Err(Error::Usage(format!("exact mode supports cfe and mik, not {kind}")));
    }
    let (us, vs) = domain.pair_ranges()?;
    let exact = |p: &DomainPoint| {
        p.exact
            .clone()
            .ok_or_else(|| Error::Usage("exact mode needs subgroup points on both ranges".into()))
    };
    let mut pairs = Vec::new();
    let mut skipped = 0;
    for (i, j) in select_pairs(us.len(), vs.len(), opts) {
        let (u, v) = (exact(&us[i])?, exact(&vs[j])?);
        let lhs = k.eval(&(&u + &v));
        if kind == EquationKind::Mik && lhs.is_zero() {
            skipped += 1;
            continue;
        }
        let rhs = k.eval(&u) + k.eval(&v);
        let defect: BigRational = (&lhs - &rhs).abs();
        let (lf, rf) = (to_f64(&lhs), to_f64(&rhs));
        let abs = to_f64(&defect);
        pairs.push(PairResidual {
            u: us[i].value,
            v: vs[j].value,
            lhs: lf,
            rhs: rf,
            abs,
            rel: abs / (1.0 + lf.abs() + rf.abs()),
        });
    }
    Ok(ResidualReport::from_pairs(kind, domain.summary(), &pairs, skipped, opts.tol))
}

fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InequalityReport {
    pub n_pairs: usize,
    pub n_violations: usize,
    /// Largest amount by which the inequality fails; zero when it never fails.
    pub worst_violation: f64,
    pub worst_point: Option<(f64, f64)>,
}

impl InequalityReport {
    pub fn pass(&self) -> bool {
        self.n_violations == 0
    }
}

fn inequality_report<F>(domain: &DomainSpec, opts: &ResidualOptions, mut excess: F) -> Result<InequalityReport>
where
    F: FnMut(f64, f64) -> Result<f64>,
{
    opts.validate()?;
    let (us, vs) = domain.pair_ranges()?;
    let mut report = InequalityReport {
        n_pairs: 0,
        n_violations: 0,
        worst_violation: 0.0,
        worst_point: None,
    };
    for (i, j) in select_pairs(us.len(), vs.len(), opts) {
        let (u, v) = (us[i].value, vs[j].value);
        let amount = excess(u, v)?;
        report.n_pairs += 1;
        if amount > opts.tol {
            report.n_violations += 1;
            let better = match report.worst_point {
                None => true,
                Some(p) => amount > report.worst_violation
                    || (amount == report.worst_violation && lex_less((u, v), p)),
            };
            if better {
                report.worst_violation = amount;
                report.worst_point = Some((u, v));
            }
        }
    }
    Ok(report)
}

/// Goldie's inequality `F(u+v) <= e^{rho v} F(u) + F(v)`; a pair violates it when the
/// excess exceeds `opts.tol`.
pub fn gfi_check(
    f: &dyn Evaluable,
    rho: f64,
    domain: &DomainSpec,
    opts: &ResidualOptions,
) -> Result<InequalityReport> {
    inequality_report(domain, opts, |u, v| {
        let lhs = eval_finite(f, u + v)?;
        let rhs = (rho * v).exp() * eval_finite(f, u)? + eval_finite(f, v)?;
        Ok(lhs - rhs)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Additivity {
    Sub,
    Super,
}

pub fn subadditivity_check(
    f: &dyn Evaluable,
    domain: &DomainSpec,
    direction: Additivity,
    opts: &ResidualOptions,
) -> Result<InequalityReport> {
    inequality_report(domain, opts, |u, v| {
        let gap = eval_finite(f, u + v)? - eval_finite(f, u)? - eval_finite(f, v)?;
        Ok(match direction {
            Additivity::Sub => gap,
            Additivity::Super => -gap,
        })
    })
}

/// Samples taken in each window by [`hs_check`].
pub const HS_SAMPLES_PER_WINDOW: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HsReport {
    pub windows: Vec<f64>,
    /// Sampled supremum of `F` on each window `(0, w]`.
    pub suprema: Vec<f64>,
    /// Supremum on the smallest window.
    pub estimate: f64,
    pub nonincreasing: bool,
    pub tol: f64,
    pub pass: bool,
}

/// Estimates `limsup_{u -> 0+} F(u)` from suprema over shrinking windows.
pub fn hs_check(f: &dyn Evaluable, windows: &[f64], tol: f64) -> Result<HsReport> {
    if windows.len() < 3 {
        return Err(Error::Usage(format!(
            "need at least 3 windows to see a trend, got {}",
            windows.len()
        )));
    }
    if windows.iter().any(|w| !(w.is_finite() && *w > 0.0))
        || windows.windows(2).any(|p| p[1] >= p[0])
    {
        return Err(Error::Usage("windows must be positive and strictly decreasing".into()));
    }
    let mut suprema = Vec::with_capacity(windows.len());
    for &w in windows {
        let mut sup = f64::NEG_INFINITY;
        for j in 1..=HS_SAMPLES_PER_WINDOW {
            let u = w * j as f64 / HS_SAMPLES_PER_WINDOW as f64;
            sup = sup.max(eval_finite(f, u)?);
        }
        suprema.push(sup);
    }
    let estimate = *suprema.last().expect("at least three windows");
    Ok(HsReport {
        windows: windows.to_vec(),
        nonincreasing: suprema.windows(2).all(|p| p[1] <= p[0]),
        suprema,
        estimate,
        tol,
        pass: estimate <= tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{uniform_grid, DenseSubgroupSpec};
    use crate::family::SolutionFamily;
    use crate::kernel::RhoKernel;
    use crate::sampled::SampledFunction;

    fn grid(lo: f64, hi: f64, n: usize) -> DomainSpec {
        DomainSpec::grid(uniform_grid(lo, hi, n).unwrap())
    }

    #[test]
    fn gfe_exact_for_rho_kernel() {
        let k = SolutionFamily::rho_kernel(3.0, 1.0).unwrap();
        let g = SolutionFamily::exponential(1.0).unwrap();
        let r = equation_residual(
            EquationKind::Gfe,
            &[&k, &g],
            &grid(0.05, 5.0, 100),
            &ResidualOptions::with_tol(1e-9),
        )
        .unwrap();
        assert_eq!(r.n_pairs, 10_000);
        assert!(r.max_abs <= 1e-12, "{}", r.max_abs);
        assert!(r.pass);
        assert!(r.rms <= r.max_abs);
    }

    #[test]
    fn bfe_affine_pair_is_exact() {
        let phi = SolutionFamily::affine(2.0).unwrap();
        let (l, r) = pair_sides(EquationKind::Bfe, &[&phi], 0.5, 1.0, 1e-9)
            .unwrap()
            .unwrap();
        assert_eq!(l, 6.0);
        assert_eq!(r, 6.0);
    }

    #[test]
    fn bfe_exponential_fails() {
        let phi = |t: f64| t.exp();
        let r = equation_residual(
            EquationKind::Bfe,
            &[&phi],
            &DomainSpec::grid(vec![1.0]),
            &ResidualOptions::default(),
        )
        .unwrap();
        let e = std::f64::consts::E;
        let expected = (1.0 + e).exp() - e * e;
        assert!((r.max_abs - expected).abs() < 1e-10);
        assert!(!r.pass);
        assert_eq!(r.argmax, Some((1.0, 1.0)));
    }

    #[test]
    fn exact_cfe_on_zsqrt2_is_zero() {
        let k = ExactAdditiveOnZSqrt2::from_ints(1, 0).unwrap();
        let domain = DomainSpec::subgroup(DenseSubgroupSpec::ZAdjoinSqrt2 {
            coeff_bound: 100,
            bound: 50.0,
        });
        let opts = ResidualOptions { max_pairs: 5_000, ..ResidualOptions::default() };
        let r = exact_residual(EquationKind::CfeAdditive, &k, &domain, &opts).unwrap();
        assert_eq!(r.n_pairs, 5_000);
        assert_eq!(r.max_abs, 0.0);
        assert!(r.pass);
    }

    #[test]
    fn arity_mismatch_is_usage_error() {
        let k = RhoKernel::new(1.0);
        let r = equation_residual(
            EquationKind::Gfe,
            &[&k],
            &grid(0.1, 1.0, 3),
            &ResidualOptions::default(),
        );
        assert!(matches!(r, Err(Error::Usage(_))));
    }

    #[test]
    fn tabulated_input_outside_range_names_point() {
        let xs = uniform_grid(0.0, 2.0, 21).unwrap();
        let phi = SampledFunction::tabulate(&SolutionFamily::affine(1.0).unwrap(), xs).unwrap();
        let r = equation_residual(
            EquationKind::Bfe,
            &[&phi],
            &DomainSpec::grid(vec![1.0, 1.5]),
            &ResidualOptions::default(),
        );
        match r {
            Err(Error::OutOfDomain { point, .. }) => assert_eq!(point, 1.0 + 1.0 * 2.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn mik_skips_zero_sums() {
        // f vanishes on [2, inf); pairs with u + v >= 2 are excluded.
        let f = |t: f64| if t >= 2.0 { 0.0 } else { t };
        let r = equation_residual(
            EquationKind::Mik,
            &[&f],
            &DomainSpec::grid(vec![0.5, 1.0, 1.5]),
            &ResidualOptions::default(),
        )
        .unwrap();
        assert_eq!(r.n_skipped, 6);
        assert_eq!(r.n_pairs, 3);
        assert_eq!(r.max_abs, 0.0);
    }

    #[test]
    fn mixed_domain_weakened_goldie() {
        let k = SolutionFamily::rho_kernel(2.0, 0.7).unwrap();
        let g = SolutionFamily::exponential(0.7).unwrap();
        let domain = DomainSpec::Mixed {
            u_domain: DenseSubgroupSpec::Dyadic { level: 3, bound: 2.0 },
            v_grid: uniform_grid(0.013, 3.0, 37).unwrap(),
        };
        let r = equation_residual(EquationKind::Gfe, &[&k, &g], &domain, &ResidualOptions::default())
            .unwrap();
        assert_eq!(r.n_pairs, 16 * 37);
        assert!(r.pass);
    }

    #[test]
    fn sampling_is_deterministic() {
        let k = SolutionFamily::rho_kernel(1.0, 2.0).unwrap();
        let g = SolutionFamily::exponential(2.0).unwrap();
        let opts = ResidualOptions { max_pairs: 100, seed: 7, ..Default::default() };
        let d = grid(0.01, 1.0, 50);
        let a = equation_residual(EquationKind::Gfe, &[&k, &g], &d, &opts).unwrap();
        let b = equation_residual(EquationKind::Gfe, &[&k, &g], &d, &opts).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.n_pairs, 100);
    }

    #[test]
    fn gfi_examples() {
        let d = grid(0.05, 5.0, 40);
        let opts = ResidualOptions::with_tol(1e-12);
        let h1 = RhoKernel::new(1.0);
        assert_eq!(gfi_check(&h1, 1.0, &d, &opts).unwrap().n_violations, 0);
        // With the exponent sign matching the kernel, the inequality is an equality.
        assert_eq!(gfi_check(&h1, -1.0, &d, &opts).unwrap().n_violations, 0);
        let id = |x: f64| x;
        assert_eq!(gfi_check(&id, 0.0, &d, &opts).unwrap().n_violations, 0);
        let sq = |x: f64| x * x;
        let r = gfi_check(&sq, 0.0, &DomainSpec::grid(vec![1.0]), &opts).unwrap();
        assert_eq!(r.n_violations, 1);
        assert_eq!(r.worst_violation, 2.0);
        assert_eq!(r.worst_point, Some((1.0, 1.0)));
    }

    #[test]
    fn subadditivity_examples() {
        let d = grid(0.05, 5.0, 40);
        let opts = ResidualOptions::with_tol(1e-12);
        let sub = subadditivity_check(&RhoKernel::new(2.0), &d, Additivity::Sub, &opts).unwrap();
        assert!(sub.pass());
        let sup = subadditivity_check(&RhoKernel::new(-2.0), &d, Additivity::Super, &opts).unwrap();
        assert!(sup.pass());
        let wrong = subadditivity_check(&RhoKernel::new(2.0), &d, Additivity::Super, &opts).unwrap();
        assert!(!wrong.pass());
        let sq = |x: f64| x * x;
        let r = subadditivity_check(&sq, &DomainSpec::grid(vec![1.0]), Additivity::Sub, &opts)
            .unwrap();
        assert_eq!(r.worst_violation, 2.0);
    }

    #[test]
    fn hs_examples() {
        let windows: Vec<f64> = (1..=6).map(|k| 10f64.powi(-k)).collect();
        let r = hs_check(&RhoKernel::new(1.0), &windows, 1e-6).unwrap();
        assert!(r.pass && r.nonincreasing);
        assert!(r.estimate <= 1e-6);

        let one = |_: f64| 1.0;
        let r = hs_check(&one, &windows, 1e-6).unwrap();
        assert_eq!(r.estimate, 1.0);
        assert!(!r.pass);

        let osc = |u: f64| (1.0 / u).sin() * u;
        let r = hs_check(&osc, &windows, 1e-6).unwrap();
        assert!(r.pass);
        for (s, w) in r.suprema.iter().zip(&windows) {
            assert!(*s <= *w);
        }

        assert!(matches!(hs_check(&one, &windows[..2], 1e-6), Err(Error::Usage(_))));
    }

    #[test]
    fn equation_names_round_trip() {
        for k in EquationKind::ALL {
            assert_eq!(k.name().parse::<EquationKind>().unwrap(), k);
        }
        assert!("nope".parse::<EquationKind>().is_err());
    }
}
