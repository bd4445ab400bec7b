//! Bracketed root finding: bisection to safety, Newton to polish.

use crate::error::{Error, Result};

/// Root of `f` in `[lo, hi]`, demanding a sign change on the bracket.
///
/// Bisection narrows the bracket robustly; once it is tight, Newton steps
/// (using `df`) polish the root. Newton iterates that would leave the
/// bracket fall back to bisection, so convergence is unconditional for
/// continuous `f`. Returns when `|f(x)|` drops below `ftol` or the bracket
/// is a few ulps wide.
pub fn bracketed_root(
    f: impl Fn(f64) -> f64,
    df: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    ftol: f64,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numerical(format!(
            "no sign change on bracket [{a}, {b}]: f = ({fa}, {fb})"
        )));
    }
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let fx = f(x);
        if fx.abs() <= ftol {
            return Ok(x);
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
        } else {
            b = x;
        }
        // Newton candidate from the current iterate.
        let dfx = df(x);
        let newton = if dfx != 0.0 { x - fx / dfx } else { f64::NAN };
        x = if newton.is_finite() && newton > a && newton < b {
            newton
        } else {
            0.5 * (a + b)
        };
        if (b - a).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return Ok(x);
        }
    }
    Err(Error::Numerical(format!(
        "root refinement stalled on [{a}, {b}]"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root_to_tight_residual() {
        let f = |x: f64| x * x * x - 2.0;
        let df = |x: f64| 3.0 * x * x;
        let r = bracketed_root(f, df, 0.0, 2.0, 1e-13).unwrap();
        assert!((r - 2.0f64.powf(1.0 / 3.0)).abs() < 1e-13);
        assert!(f(r).abs() < 1e-13);
    }

    #[test]
    fn rejects_bracket_without_sign_change() {
        let f = |x: f64| x * x + 1.0;
        assert!(bracketed_root(f, |x| 2.0 * x, -1.0, 1.0, 1e-12).is_err());
    }
}
