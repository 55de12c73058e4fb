//! Beck sequences `t_{m+1} = t_m + u phi(t_m)`, `t_0 = 0`.

use serde::Serialize;

use crate::error::{ensure_finite, Error, Result};
use crate::func::{eval_finite, Evaluable};

/// Default number of steps allowed before a sequence is declared stuck.
pub const DEFAULT_ITERATION_BUDGET: usize = 1_000_000;
/// Below this `|phi(u) - 1|` the closed form switches to its linear limb.
pub const CLOSED_FORM_SWITCH: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// The requested number of steps was taken.
    Count,
    /// The last term passed the cap.
    Cap,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BeckSequence {
    pub u: f64,
    pub phi_u: f64,
    pub terms: Vec<f64>,
    pub stop: StopReason,
}

impl BeckSequence {
    /// Largest relative deviation from `phi(t_{m+1}) = phi(u) phi(t_m)` along the
    /// sequence. Zero for Beurling solutions; this is checked, never assumed.
    pub fn recursion_defect(&self, phi: &dyn Evaluable) -> Result<f64> {
        let mut worst = 0.0f64;
        for w in self.terms.windows(2) {
            let lhs = eval_finite(phi, w[1])?;
            let rhs = self.phi_u * eval_finite(phi, w[0])?;
            worst = worst.max((lhs - rhs).abs() / (1.0 + lhs.abs() + rhs.abs()));
        }
        Ok(worst)
    }
}

fn check_step(u: f64) -> Result<()> {
    ensure_finite("u", u)?;
    if u <= 0.0 {
        return Err(Error::Input(format!("step u must be positive, got {u}")));
    }
    Ok(())
}

fn positive_at(phi: &dyn Evaluable, t: f64) -> Result<f64> {
    let p = eval_finite(phi, t)?;
    if p <= 0.0 {
        return Err(Error::Positivity { at: t, value: p });
    }
    Ok(p)
}

/// Iterates up to `n` steps, stopping early once a term exceeds `t_cap`.
pub fn beck_iterate(phi: &dyn Evaluable, u: f64, n: usize, t_cap: f64) -> Result<BeckSequence> {
    check_step(u)?;
    if n == 0 {
        return Err(Error::Usage("number of steps must be positive".into()));
    }
    let phi_u = positive_at(phi, u)?;
    let mut terms = Vec::with_capacity(n.min(1 << 16) + 1);
    terms.push(0.0);
    let mut t = 0.0;
    let mut stop = StopReason::Count;
    for _ in 0..n {
        t += u * positive_at(phi, t)?;
        terms.push(t);
        if t > t_cap {
            stop = StopReason::Cap;
            break;
        }
    }
    Ok(BeckSequence { u, phi_u, terms, stop })
}

/// `t_m = u (phi_u^m - 1) / (phi_u - 1)`, with the limit `m u` (plus its first-order
/// correction) when `phi_u` is within [`CLOSED_FORM_SWITCH`] of one.
pub fn beck_closed_form(phi_u: f64, u: f64, m: u32) -> Result<f64> {
    ensure_finite("phi_u", phi_u)?;
    ensure_finite("u", u)?;
    if phi_u <= 0.0 {
        return Err(Error::Input(format!("phi(u) must be positive, got {phi_u}")));
    }
    let d = phi_u - 1.0;
    let mf = m as f64;
    let t = if d.abs() < CLOSED_FORM_SWITCH {
        mf * u + u * mf * (mf - 1.0) * d / 2.0
    } else if d.abs() >= 0.5 {
        u * (phi_u.powf(mf) - 1.0) / d
    } else {
        u * (mf * d.ln_1p()).exp_m1() / d
    };
    if !t.is_finite() {
        return Err(Error::Range(format!(
            "phi_u^m overflows for phi_u = {phi_u}, m = {m}; reduce m"
        )));
    }
    Ok(t)
}

/// The jump index `m` with `t_m <= t < t_{m+1}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct JumpIndex {
    pub m: usize,
    pub t_m: f64,
    pub t_next: f64,
}

pub fn jump_index(phi: &dyn Evaluable, u: f64, t: f64) -> Result<JumpIndex> {
    jump_index_with_budget(phi, u, t, DEFAULT_ITERATION_BUDGET)
}

pub fn jump_index_with_budget(
    phi: &dyn Evaluable,
    u: f64,
    t: f64,
    budget: usize,
) -> Result<JumpIndex> {
    check_step(u)?;
    ensure_finite("t", t)?;
    if t < 0.0 {
        return Err(Error::Input(format!("t must be non-negative, got {t}")));
    }
    let mut t_m = 0.0;
    for m in 0..budget {
        let t_next = t_m + u * positive_at(phi, t_m)?;
        if t_next > t {
            return Ok(JumpIndex { m, t_m, t_next });
        }
        t_m = t_next;
    }
    Err(Error::Divergence(format!(
        "Beck sequence with u = {u} did not pass t = {t} within {budget} steps (reached {t_m})"
    )))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapBound {
    pub m: usize,
    /// `t_{m+1} - t_m` at the jump index of `T`.
    pub delta: f64,
    /// `T (lambda(u) - 1) + u`.
    pub bound: f64,
    pub ok: bool,
}

/// Compares the Beck gap at the jump index of `big_t` with `T (lambda(u) - 1) + u`.
pub fn delta_gap_bound(lambda: &dyn Evaluable, u: f64, big_t: f64) -> Result<GapBound> {
    ensure_finite("T", big_t)?;
    if big_t <= 0.0 {
        return Err(Error::Input(format!("T must be positive, got {big_t}")));
    }
    let j = jump_index(lambda, u, big_t)?;
    let lambda_u = positive_at(lambda, u)?;
    let delta = j.t_next - j.t_m;
    let bound = big_t * (lambda_u - 1.0) + u;
    let tol = 1e-12 * (1.0 + bound.abs());
    Ok(GapBound {
        m: j.m,
        delta,
        bound,
        ok: delta <= bound + tol,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::SolutionFamily;

    fn affine(c: f64) -> SolutionFamily {
        SolutionFamily::affine(c).unwrap()
    }

    #[test]
    fn doubling_sequence() {
        let s = beck_iterate(&affine(1.0), 1.0, 4, f64::INFINITY).unwrap();
        assert_eq!(s.terms, vec![0.0, 1.0, 3.0, 7.0, 15.0]);
        assert_eq!(s.stop, StopReason::Count);
        assert_eq!(s.phi_u, 2.0);
    }

    #[test]
    fn constant_one_is_arithmetic() {
        let s = beck_iterate(&SolutionFamily::ConstantOne, 0.5, 4, f64::INFINITY).unwrap();
        assert_eq!(s.terms, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn stops_at_cap() {
        let s = beck_iterate(&affine(1.0), 1.0, 100, 100.0).unwrap();
        assert_eq!(s.stop, StopReason::Cap);
        assert_eq!(*s.terms.last().unwrap(), 127.0);
        assert_eq!(s.terms.len(), 8);
        assert_eq!(s.terms[6], 63.0);
    }

    #[test]
    fn positivity_error_names_point() {
        let phi = |t: f64| if t > 0.8 && t < 1.2 { -1.0 } else { 1.0 };
        match beck_iterate(&phi, 0.5, 10, f64::INFINITY) {
            Err(Error::Positivity { at, .. }) => assert_eq!(at, 1.0),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(beck_closed_form(2.0, 1.0, 4).unwrap(), 15.0);
        assert_eq!(beck_closed_form(1.0, 0.5, 3).unwrap(), 1.5);
        let v = beck_closed_form(1.1, 0.2, 10).unwrap();
        assert!((v - 3.187_484_920_2).abs() < 1e-9);
        assert!(matches!(beck_closed_form(10.0, 1.0, 1000), Err(Error::Range(_))));
    }

    #[test]
    fn closed_form_continuous_across_switch() {
        let (u, m) = (0.3, 25);
        let below = beck_closed_form(1.0 + (1.0 - 1e-6) * CLOSED_FORM_SWITCH, u, m).unwrap();
        let above = beck_closed_form(1.0 + (1.0 + 1e-6) * CLOSED_FORM_SWITCH, u, m).unwrap();
        assert!((below - above).abs() < 1e-11);
    }

    #[test]
    fn jump_index_examples() {
        let j = jump_index(&affine(1.0), 1.0, 10.0).unwrap();
        assert_eq!((j.m, j.t_m, j.t_next), (3, 7.0, 15.0));
        let j = jump_index(&SolutionFamily::ConstantOne, 0.5, 1.25).unwrap();
        assert_eq!((j.m, j.t_m, j.t_next), (2, 1.0, 1.5));
        let j = jump_index(&affine(1.0), 1.0, 0.5).unwrap();
        assert_eq!(j.m, 0);
    }

    #[test]
    fn stuck_sequence_diverges() {
        // phi decays so fast that the sequence converges below t.
        let phi = |t: f64| (-10.0 * t).exp();
        let r = jump_index_with_budget(&phi, 0.01, 5.0, 10_000);
        assert!(matches!(r, Err(Error::Divergence(_))));
    }

    #[test]
    fn gap_bound_examples() {
        let g = delta_gap_bound(&affine(1.0), 0.01, 5.0).unwrap();
        assert!(g.ok && g.delta <= 0.06 + 1e-12);
        assert!((g.bound - 0.06).abs() < 1e-12);

        let g = delta_gap_bound(&SolutionFamily::ConstantOne, 0.25, 3.0).unwrap();
        assert_eq!(g.delta, 0.25);
        assert_eq!(g.bound, 0.25);
        assert!(g.ok);

        let mut last = f64::INFINITY;
        for u in [0.1, 0.01, 0.001] {
            let g = delta_gap_bound(&affine(2.0), u, 2.0).unwrap();
            assert!(g.ok);
            assert!(g.delta < last);
            last = g.delta;
        }
    }
}
