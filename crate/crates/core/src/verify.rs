//! Theorem-level checks: constructive witnesses, level sets and nuclei, range-set
//! structure of Beurling solutions, monotonicity, and the additive dichotomy.

use num_traits::{Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::additive::ExactAdditiveOnZSqrt2;
use crate::domain::{domain_points, subgroup_points, DenseSubgroupSpec, DomainSpec, QuadSurd};
use crate::error::{Error, Result};
use crate::func::{eval_finite, Evaluable};
use crate::residuals::{equation_residual, EquationKind, ResidualOptions};

/// Ties closer than this count as failures of strict monotonicity.
pub const STRICT_TIE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremStatus {
    Pass,
    Fail,
    /// The input cannot meet the hypotheses; nothing was contradicted.
    VacuousPass,
    /// A precondition check failed; the theorem was not tested.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub value: f64,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NamedValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoremReport {
    pub theorem: String,
    pub status: TheoremStatus,
    /// Conjunction of the sub-checks.
    pub pass: bool,
    pub checks: Vec<SubCheck>,
    /// Points demonstrating the first failed sub-check.
    pub witness: Option<Vec<f64>>,
    pub values: Vec<NamedValue>,
    pub notes: Vec<String>,
}

impl TheoremReport {
    fn new(theorem: &str) -> Self {
        Self {
            theorem: theorem.into(),
            status: TheoremStatus::Pass,
            pass: true,
            checks: Vec::new(),
            witness: None,
            values: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, name: &str, value: f64, threshold: f64, pass: bool, witness: Option<Vec<f64>>) {
        self.checks.push(SubCheck {
            name: name.into(),
            value,
            threshold,
            pass,
        });
        if !pass && self.witness.is_none() {
            self.witness = Some(witness.unwrap_or_default());
        }
    }

    fn value(&mut self, name: &str, value: f64) {
        self.values.push(NamedValue {
            name: name.into(),
            value,
        });
    }

    fn finish(mut self) -> Self {
        self.pass = self.checks.iter().all(|c| c.pass);
        self.status = if self.pass {
            TheoremStatus::Pass
        } else {
            TheoremStatus::Fail
        };
        self
    }

    fn vacuous(mut self, note: String) -> Self {
        self.notes.push(note);
        self.pass = true;
        self.status = TheoremStatus::VacuousPass;
        self
    }

    fn not_applicable(mut self, note: String) -> Self {
        self.notes.push(note);
        self.pass = false;
        self.status = TheoremStatus::NotApplicable;
        self
    }

    /// True when some sub-check failed.
    pub fn any_failed(&self) -> bool {
        self.checks.iter().any(|c| !c.pass)
    }
}

fn require_grid(grid: &[f64], min: usize) -> Result<()> {
    if grid.len() < min {
        return Err(Error::Usage(format!("need at least {min} grid points, got {}", grid.len())));
    }
    if grid.iter().any(|x| !x.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Usage("grid must be finite and strictly increasing".into()));
    }
    Ok(())
}

/// The point exhibiting why a positive Beurling solution cannot dip below one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Theorem5Witness {
    pub u: f64,
    /// `u / (1 - phi(u))`, so that `u + v phi(u) = v`.
    pub v: f64,
    /// `|phi(u + v phi(u)) - phi(u) phi(v)|`.
    pub residual: f64,
    pub rel_residual: f64,
}

/// If `phi(u) < 1 - tol`, returns `v = u / (1 - phi(u))` with the Beurling residual at
/// the pair whose left side collapses to `phi(v)`.
pub fn theorem5_witness(phi: &dyn Evaluable, u: f64, tol: f64) -> Result<Option<Theorem5Witness>> {
    let pu = eval_finite(phi, u)?;
    if pu <= 0.0 {
        return Err(Error::Positivity { at: u, value: pu });
    }
    if pu >= 1.0 - tol {
        return Ok(None);
    }
    let v = u / (1.0 - pu);
    let lhs = eval_finite(phi, u + v * pu)?;
    let rhs = pu * eval_finite(phi, v)?;
    let residual = (lhs - rhs).abs();
    Ok(Some(Theorem5Witness {
        u,
        v,
        residual,
        rel_residual: residual / (1.0 + lhs.abs() + rhs.abs()),
    }))
}

/// Scans `grid` for points where `phi < 1 - tol`. Passes when there are none; otherwise
/// fails with the strongest witness `(u, v)`.
pub fn theorem5_suite(phi: &dyn Evaluable, grid: &[f64], tol: f64) -> Result<TheoremReport> {
    require_grid(grid, 1)?;
    let mut rep = TheoremReport::new("theorem5");
    let mut min_phi = f64::INFINITY;
    let mut u_min = f64::NAN;
    let mut best: Option<Theorem5Witness> = None;
    let mut dips = 0usize;
    let mut unevaluable = 0usize;
    for &u in grid {
        let pu = eval_finite(phi, u)?;
        if pu < min_phi {
            min_phi = pu;
            u_min = u;
        }
        if pu <= 0.0 {
            rep.witness = Some(vec![u]);
            return Ok(rep.not_applicable(format!("phi({u}) = {pu} is not positive")));
        }
        if pu >= 1.0 - tol {
            continue;
        }
        dips += 1;
        match theorem5_witness(phi, u, tol) {
            Ok(Some(w)) => {
                if best.is_none_or(|b| w.rel_residual > b.rel_residual) {
                    best = Some(w);
                }
            }
            Ok(None) => {}
            Err(_) => unevaluable += 1,
        }
    }
    rep.value("min_phi", min_phi);
    rep.value("points_below_one", dips as f64);
    if unevaluable > 0 {
        rep.notes.push(format!("{unevaluable} witness point(s) fell outside the evaluable range"));
    }
    let witness = Some(best.map_or(vec![u_min], |w| vec![w.u, w.v]));
    if let Some(w) = best {
        rep.value("witness_residual", w.residual);
        rep.value("witness_rel_residual", w.rel_residual);
    }
    rep.check("phi_at_least_one", min_phi, 1.0 - tol, dips == 0, witness);
    Ok(rep.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LevelPredicate {
    /// `f(t) > 1`.
    AboveOne,
    /// `|f(t) - 1| <= tol`.
    EqualOne(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSet {
    pub points: Vec<f64>,
    pub grid: Vec<f64>,
}

pub fn level_set(f: &dyn Evaluable, grid: &[f64], predicate: LevelPredicate) -> Result<LevelSet> {
    require_grid(grid, 1)?;
    let mut points = Vec::new();
    for &t in grid {
        let y = eval_finite(f, t)?;
        let hit = match predicate {
            LevelPredicate::AboveOne => y > 1.0,
            LevelPredicate::EqualOne(tol) => (y - 1.0).abs() <= tol,
        };
        if hit {
            points.push(t);
        }
    }
    Ok(LevelSet {
        points,
        grid: grid.to_vec(),
    })
}

/// Whether `x` lies in the Cauchy nucleus: `K(x + a) = K(x) + K(a)` for every domain
/// point `a`, to within `tol`.
pub fn nucleus_check(k: &dyn Evaluable, x: f64, domain: &DomainSpec, tol: f64) -> Result<bool> {
    let kx = eval_finite(k, x)?;
    for a in domain_points(domain)? {
        let d = eval_finite(k, x + a.value)? - kx - eval_finite(k, a.value)?;
        if d.abs() > tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact nucleus membership for an exactly additive function.
pub fn nucleus_check_exact(k: &ExactAdditiveOnZSqrt2, x: &QuadSurd, domain: &DomainSpec) -> Result<bool> {
    for a in domain_points(domain)? {
        let a = a
            .exact
            .ok_or_else(|| Error::Usage("exact nucleus check needs subgroup points".into()))?;
        if !k.additivity_defect(x, &a).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Multiples `n a` probed by [`range_group_check`].
pub const UNIT_MULTIPLES: usize = 16;

/// Range-set structure when a Beurling solution attains one at `a`: periodicity
/// `f(x + a) = f(x)`, `f(n a) = 1`, and `f(w a) = 1` for attained values `w`.
pub fn range_group_check(f: &dyn Evaluable, a: f64, probe: &[f64], tol: f64) -> Result<TheoremReport> {
    require_grid(probe, 1)?;
    let rep = TheoremReport::new("lemma_b");
    let fa = eval_finite(f, a)?;
    if (fa - 1.0).abs() > tol {
        return Ok(rep.vacuous(format!(
            "f({a}) = {fa} is not 1; the range-set hypotheses are not met"
        )));
    }
    let mut rep = rep;
    let mut skipped = 0usize;
    let mut worst = (0.0f64, f64::NAN);
    for &x in probe {
        match (f.eval(x + a), f.eval(x)) {
            (Ok(p), Ok(q)) => {
                let d = (p - q).abs();
                if d > worst.0 {
                    worst = (d, x);
                }
            }
            _ => skipped += 1,
        }
    }
    rep.check("periodicity", worst.0, tol, worst.0 <= tol, Some(vec![worst.1, worst.1 + a]));

    let mut worst = (0.0f64, f64::NAN);
    for n in 1..=UNIT_MULTIPLES {
        let t = n as f64 * a;
        match f.eval(t) {
            Ok(y) => {
                let d = (y - 1.0).abs();
                if d > worst.0 {
                    worst = (d, t);
                }
            }
            Err(_) => skipped += 1,
        }
    }
    rep.check("unit_at_multiples", worst.0, tol, worst.0 <= tol, Some(vec![worst.1]));

    let mut worst = (0.0f64, f64::NAN);
    for &x in probe {
        let w = eval_finite(f, x)?;
        match f.eval(w * a) {
            Ok(y) => {
                let d = (y - 1.0).abs();
                if d > worst.0 {
                    worst = (d, w * a);
                }
            }
            Err(_) => skipped += 1,
        }
    }
    rep.check("unit_on_range_multiples", worst.0, tol, worst.0 <= tol, Some(vec![worst.1]));
    if skipped > 0 {
        rep.notes.push(format!("{skipped} probe(s) outside the evaluable range were skipped"));
    }
    Ok(rep.finish())
}

fn bfe_precheck(f: &dyn Evaluable, grid: &[f64], tol: f64) -> Result<Option<(f64, Option<(f64, f64)>)>> {
    let r = equation_residual(
        EquationKind::Bfe,
        &[f],
        &DomainSpec::grid(grid.to_vec()),
        &ResidualOptions::with_tol(tol),
    )?;
    Ok(if r.pass { None } else { Some((r.max_rel, r.argmax)) })
}

/// A Beurling solution that attains one is identically one: passes when `f` never comes
/// within `tol` of one, or stays within `tol` of one everywhere on the grid.
pub fn one_implies_constant(f: &dyn Evaluable, grid: &[f64], tol: f64) -> Result<TheoremReport> {
    require_grid(grid, 1)?;
    let mut rep = TheoremReport::new("theorem_b");
    if let Some((res, at)) = bfe_precheck(f, grid, tol)? {
        rep.check("bfe_precheck", res, tol, false, at.map(|(u, v)| vec![u, v]));
        return Ok(rep.not_applicable("f does not solve the Beurling equation on the grid".into()));
    }
    let mut min_dev = f64::INFINITY;
    let mut max_dev = 0.0f64;
    let mut at_min = f64::NAN;
    for &t in grid {
        let d = (eval_finite(f, t)? - 1.0).abs();
        if d < min_dev {
            min_dev = d;
            at_min = t;
        }
        max_dev = max_dev.max(d);
    }
    rep.value("min_abs_f_minus_one", min_dev);
    rep.value("max_abs_f_minus_one", max_dev);
    let never_one = min_dev > tol;
    let always_one = max_dev <= tol;
    rep.check(
        "one_never_attained_or_constant",
        if never_one { min_dev } else { max_dev },
        tol,
        never_one || always_one,
        Some(vec![at_min]),
    );
    Ok(rep.finish())
}

/// For a positive Beurling solution never equal to one: the symmetry
/// `x + y f(x) = y + x f(y)` and constancy of `(f(x) - 1) / x`, whose median is `c`.
pub fn bm_constancy_check(f: &dyn Evaluable, grid: &[f64], tol: f64) -> Result<TheoremReport> {
    require_grid(grid, 2)?;
    let mut rep = TheoremReport::new("theorem_bm");
    let vals = grid.iter().map(|&x| eval_finite(f, x)).collect::<Result<Vec<_>>>()?;
    if let Some((&x, &y)) = grid
        .iter()
        .zip(&vals)
        .find(|(_, &y)| y <= 0.0 || (y - 1.0).abs() <= tol)
    {
        rep.witness = Some(vec![x]);
        return Ok(rep.not_applicable(format!("f({x}) = {y}: hypothesis f > 0, f != 1 fails")));
    }
    let mut worst = (0.0f64, (f64::NAN, f64::NAN));
    for (i, (&x, &fx)) in grid.iter().zip(&vals).enumerate() {
        for (&y, &fy) in grid.iter().zip(&vals).skip(i + 1) {
            let d = (x + y * fx - y - x * fy).abs() / (1.0 + x + y);
            if d > worst.0 {
                worst = (d, (x, y));
            }
        }
    }
    rep.check("symmetry", worst.0, tol, worst.0 <= tol, Some(vec![worst.1 .0, worst.1 .1]));

    let mut ratios: Vec<(f64, f64)> = grid
        .iter()
        .zip(&vals)
        .map(|(&x, &fx)| ((fx - 1.0) / x, x))
        .collect();
    ratios.sort_by(|a, b| a.0.total_cmp(&b.0));
    let n = ratios.len();
    let spread = ratios[n - 1].0 - ratios[0].0;
    let c = if n % 2 == 1 {
        ratios[n / 2].0
    } else {
        0.5 * (ratios[n / 2 - 1].0 + ratios[n / 2].0)
    };
    rep.check(
        "ratio_constancy",
        spread,
        tol,
        spread <= tol,
        Some(vec![ratios[0].1, ratios[n - 1].1]),
    );
    rep.value("c", c);
    Ok(rep.finish())
}

/// Strict increase along `grid`; the first inversion is the witness.
pub fn monotonicity_check(f: &dyn Evaluable, grid: &[f64]) -> Result<TheoremReport> {
    require_grid(grid, 3)?;
    let mut rep = TheoremReport::new("monotonicity");
    let vals = grid.iter().map(|&x| eval_finite(f, x)).collect::<Result<Vec<_>>>()?;
    let mut min_step = f64::INFINITY;
    let mut first_bad: Option<usize> = None;
    for i in 0..grid.len() - 1 {
        let step = vals[i + 1] - vals[i];
        min_step = min_step.min(step);
        if step <= STRICT_TIE_TOL && first_bad.is_none() {
            first_bad = Some(i);
        }
    }
    rep.check(
        "strictly_increasing",
        min_step,
        STRICT_TIE_TOL,
        first_bad.is_none(),
        first_bad.map(|i| vec![grid[i], grid[i + 1]]),
    );
    Ok(rep.finish())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DichotomyOptions {
    /// Minimum spread of `K(x)/x` counted as non-linear.
    pub spread_min: f64,
    /// Level `max |K|` on `(0, X]` must reach at the end of the schedule.
    pub threshold: f64,
    /// Random pairs used for the exact additivity check.
    pub additivity_pairs: usize,
    pub seed: u64,
}

impl Default for DichotomyOptions {
    fn default() -> Self {
        Self {
            spread_min: 0.5,
            threshold: 1e3,
            additivity_pairs: 10_000,
            seed: 0,
        }
    }
}

pub fn dichotomy_demo(k: &ExactAdditiveOnZSqrt2, n: u64, x: f64) -> Result<TheoremReport> {
    dichotomy_demo_with(k, n, x, &DichotomyOptions::default())
}

/// Shows the additive-but-wild side of the dichotomy on `Z + Z sqrt 2`: exact additivity,
/// a non-constant ratio `K(x)/x`, and `max |K|` on the fixed interval `(0, X]` escaping
/// past `threshold` along the doubling schedule `1, 2, 4, ..., N`.
pub fn dichotomy_demo_with(
    k: &ExactAdditiveOnZSqrt2,
    n: u64,
    x: f64,
    opts: &DichotomyOptions,
) -> Result<TheoremReport> {
    let spec = DenseSubgroupSpec::ZAdjoinSqrt2 { coeff_bound: n, bound: x };
    let pts = subgroup_points(&spec)?;
    let mut rep = TheoremReport::new("dichotomy");

    // (a) exact additivity on random pairs.
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut worst = num_rational::BigRational::zero();
    let mut worst_pair = (f64::NAN, f64::NAN);
    for _ in 0..opts.additivity_pairs {
        let p = &pts[rng.gen_range(0..pts.len())];
        let q = &pts[rng.gen_range(0..pts.len())];
        let (pe, qe) = (p.exact.as_ref().expect("exact"), q.exact.as_ref().expect("exact"));
        let d = k.additivity_defect(pe, qe).abs();
        if d > worst {
            worst = d;
            worst_pair = (p.value, q.value);
        }
    }
    let defect = worst.to_f64().unwrap_or(f64::NAN);
    rep.check(
        "exact_additivity_residual",
        defect,
        0.0,
        worst.is_zero(),
        Some(vec![worst_pair.0, worst_pair.1]),
    );

    // (b) linearity test.
    let (mut lo, mut hi) = ((f64::INFINITY, f64::NAN), (f64::NEG_INFINITY, f64::NAN));
    for p in &pts {
        let r = k.eval_f64(p.exact.as_ref().expect("exact")) / p.value;
        if r < lo.0 {
            lo = (r, p.value);
        }
        if r > hi.0 {
            hi = (r, p.value);
        }
    }
    let spread = hi.0 - lo.0;
    rep.check(
        "linearity_spread",
        spread,
        opts.spread_min,
        spread >= opts.spread_min,
        Some(vec![lo.1, hi.1]),
    );

    // (c) growth of max |K| on (0, X] along the doubling schedule.
    let mut schedule = Vec::new();
    let mut m = 1u64;
    while m < n {
        schedule.push(m);
        m *= 2;
    }
    schedule.push(n);
    let mut maxima = Vec::with_capacity(schedule.len());
    for &m in &schedule {
        let spec = DenseSubgroupSpec::ZAdjoinSqrt2 { coeff_bound: m, bound: x };
        let max_k = match subgroup_points(&spec) {
            Ok(pts) => pts
                .iter()
                .map(|p| k.eval_f64(p.exact.as_ref().expect("exact")).abs())
                .fold(0.0, f64::max),
            Err(Error::Domain(_)) => 0.0,
            Err(e) => return Err(e),
        };
        rep.value(&format!("max_abs_k[N={m}]"), max_k);
        maxima.push(max_k);
    }
    let drop = maxima.windows(2).position(|w| w[1] < w[0]);
    rep.check(
        "max_abs_k_nondecreasing",
        drop.map_or(0.0, |i| maxima[i] - maxima[i + 1]),
        0.0,
        drop.is_none(),
        drop.map(|i| vec![schedule[i] as f64, schedule[i + 1] as f64]),
    );
    let last = *maxima.last().expect("non-empty schedule");
    rep.check(
        "max_abs_k_exceeds_threshold",
        last,
        opts.threshold,
        last > opts.threshold,
        Some(vec![n as f64]),
    );
    Ok(rep.finish())
}
