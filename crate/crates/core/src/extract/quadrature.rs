use crate::error::{ensure_finite, Error, Result};
use crate::func::{eval_finite, Evaluable};

const INITIAL_PANELS: usize = 16;
const MAX_DEPTH: u32 = 50;

/// Number of left-endpoint rectangles for `riemann_gamma`: `ceil(x / delta)`, where a
/// ratio within rounding of an integer counts as that integer.
pub(crate) fn rectangle_count(x: f64, delta: f64) -> usize {
    let r = x / delta;
    let nearest = r.round();
    if (r - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as usize
    } else {
        r.ceil() as usize
    }
}

/// `delta * sum_{m=1}^{i} g((m-1) delta)` with `i = ceil(x / delta)`: the left-endpoint
/// Riemann sum for `int_0^x g`.
pub fn riemann_gamma(g: &dyn Evaluable, x: f64, delta: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    ensure_finite("delta", delta)?;
    if !(delta > 0.0 && delta < x) {
        return Err(Error::Usage(format!("need 0 < delta < x, got delta = {delta}, x = {x}")));
    }
    let i = rectangle_count(x, delta);
    let mut sum = 0.0;
    let mut comp = 0.0;
    for m in 0..i {
        // Kahan summation keeps the rounding well below the O(delta) rule error.
        let y = eval_finite(g, m as f64 * delta)? - comp;
        let s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    Ok(delta * sum)
}

/// `H(x) = int_0^x h(t) / k(t) dt` by adaptive Simpson quadrature.
pub fn quadrature_h(h: &dyn Evaluable, k: &dyn Evaluable, x: f64, abs_tol: f64) -> Result<f64> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return Err(Error::Input(format!("x must be non-negative, got {x}")));
    }
    if !(abs_tol > 0.0) {
        return Err(Error::Usage(format!("abs_tol must be positive, got {abs_tol}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let p = |t: f64| -> Result<f64> {
        let kt = eval_finite(k, t)?;
        if kt <= 0.0 {
            return Err(Error::Positivity { at: t, value: kt });
        }
        Ok(eval_finite(h, t)? / kt)
    };
    let width = x / INITIAL_PANELS as f64;
    let panel_tol = abs_tol / INITIAL_PANELS as f64;
    let mut total = 0.0;
    let mut fa = p(0.0)?;
    for i in 0..INITIAL_PANELS {
        let a = i as f64 * width;
        let b = if i + 1 == INITIAL_PANELS { x } else { a + width };
        let m = 0.5 * (a + b);
        let (fm, fb) = (p(m)?, p(b)?);
        let whole = simpson(a, b, fa, fm, fb);
        total += adapt(&p, a, b, fa, fm, fb, whole, panel_tol, MAX_DEPTH)?;
        fa = fb;
    }
    Ok(total)
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adapt<F>(p: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (p(lm)?, p(rm)?);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let err = left + right - whole;
    if err.abs() <= 15.0 * tol || lm <= a || rm >= b {
        return Ok(left + right + err / 15.0);
    }
    if depth == 0 {
        return Err(Error::NonConvergence(format!(
            "adaptive Simpson did not reach {tol:e} on [{a}, {b}]"
        )));
    }
    Ok(adapt(p, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)?
        + adapt(p, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::eval_hrho;

    #[test]
    fn riemann_examples() {
        let g = |x: f64| (-x).exp();
        let r = riemann_gamma(&g, 1.0, 1e-4).unwrap();
        assert!((r - eval_hrho(1.0, 1.0).unwrap()).abs() < 1e-4);

        let one = |_: f64| 1.0;
        assert_eq!(riemann_gamma(&one, 2.0, 0.5).unwrap(), 2.0);

        let target = 1.0 - (-1.0f64).exp();
        let e1 = riemann_gamma(&g, 1.0, 1e-4).unwrap() - target;
        let e2 = riemann_gamma(&g, 1.0, 5e-5).unwrap() - target;
        let ratio = e1 / e2;
        assert!((1.8..=2.2).contains(&ratio), "{ratio}");
    }

    #[test]
    fn riemann_needs_small_delta() {
        let one = |_: f64| 1.0;
        assert!(matches!(riemann_gamma(&one, 1.0, 1.0), Err(Error::Usage(_))));
    }

    #[test]
    fn rectangle_count_absorbs_rounding() {
        assert_eq!(rectangle_count(1.0, 1e-4), 10_000);
        assert_eq!(rectangle_count(0.3, 0.1), 3);
        assert_eq!(rectangle_count(0.35, 0.1), 4);
    }

    #[test]
    fn quadrature_examples() {
        let h = |t: f64| (-t).exp();
        let one = |_: f64| 1.0;
        let v = quadrature_h(&h, &one, 1.0, 1e-12).unwrap();
        assert!((v - 0.632_120_558_828_557_7).abs() < 1e-12);

        let k = |t: f64| 2.0 + t.sin();
        let v = quadrature_h(&k, &k, 3.7, 1e-12).unwrap();
        assert!((v - 3.7).abs() < 1e-12);

        let t = |t: f64| t;
        let k = |t: f64| 1.0 + t;
        let v = quadrature_h(&t, &k, 1.0, 1e-12).unwrap();
        assert!((v - (1.0 - 2f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn quadrature_rejects_nonpositive_k() {
        let one = |_: f64| 1.0;
        let k = |t: f64| 1.0 - t;
        assert!(matches!(
            quadrature_h(&one, &k, 2.0, 1e-10),
            Err(Error::Positivity { .. })
        ));
    }
}
