//! Bracketed root finding: bisection to a fixed width, then Newton polish.

use crate::error::{Error, Result};

/// Solve f(x) = 0 on [lo, hi]. The bracket must show a sign change.
/// Bisection narrows the interval to `width`, then `newton_steps` Newton
/// iterations sharpen the root using `df`; steps leaving the bracket or
/// producing non-finite values are discarded.
pub(crate) fn bisect_then_newton(
    mut f: impl FnMut(f64) -> Result<f64>,
    mut df: impl FnMut(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    width: f64,
    newton_steps: u32,
) -> Result<f64> {
    let f_lo = f(lo)?;
    let f_hi = f(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::Solver(format!(
            "no sign change on bracket [{lo}, {hi}]: f(lo) = {f_lo:.6e}, f(hi) = {f_hi:.6e}"
        )));
    }

    let (mut a, mut b) = (lo, hi);
    let mut f_a = f_lo;
    let mut iterations = 0u32;
    while b - a > width && iterations < 200 {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break; // interval exhausted in f64
        }
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_a.signum() {
            a = mid;
            f_a = f_mid;
        } else {
            b = mid;
        }
        iterations += 1;
    }

    let mut root = 0.5 * (a + b);
    for _ in 0..newton_steps {
        let value = f(root)?;
        let slope = df(root)?;
        if slope == 0.0 || !slope.is_finite() {
            break;
        }
        let next = root - value / slope;
        if !next.is_finite() || next < lo || next > hi {
            break;
        }
        root = next;
    }
    Ok(root)
}
