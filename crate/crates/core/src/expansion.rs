//! The Gumbel limit and the analytic expansion terms: kappa, omega, the
//! second-order limit (omega + kappa^2/2)·Lambda, the leading
//! (log log n)^2/log n rates, and the classical lambda = 0 baseline terms.

use crate::dist::Shape;
use crate::error::{Error, Result};

/// Gumbel distribution function Lambda(x) = exp(-exp(-x)).
#[inline]
pub fn gumbel(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Branch-tagged expansion terms at one x.
#[derive(Clone, Copy, Debug)]
pub struct ExpansionTerms {
    pub kappa: f64,
    pub omega: f64,
    pub second_order_limit: f64,
}

/// exp(-x) blows past doubles near x = -709; everything below -700 is
/// rejected with a typed overflow instead of returning infinity.
fn check_exp_range(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {x}")));
    }
    if x < -700.0 {
        return Err(Error::Overflow(format!(
            "exp(-x) overflows doubles for x = {x} (limit -700)"
        )));
    }
    Ok(x)
}

fn finite_or_overflow(value: f64, what: &str, x: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Overflow(format!("{what} overflowed at x = {x}")))
    }
}

fn kappa_positive(x: f64) -> f64 {
    0.5 * ((x + 2.0) * x) * (-x).exp()
}

fn omega_positive(x: f64) -> f64 {
    -0.125 * ((((x + 4.0) * x + 8.0) * x + 16.0) * x) * (-x).exp()
}

/// kappa(x): (x^2+2x)e^{-x}/2 for lambda > 0 (lambda-free), or
/// (x^2+4x)e^{-x}/(2(1+lambda^2)) for lambda < 0.
pub fn kappa(x: f64, shape: Shape) -> Result<f64> {
    let x = check_exp_range(x)?;
    shape.require_skewed("kappa")?;
    let lambda = shape.lambda();
    let value = if lambda > 0.0 {
        kappa_positive(x)
    } else {
        let l2 = lambda * lambda;
        0.5 / (1.0 + l2) * ((x + 4.0) * x) * (-x).exp()
    };
    finite_or_overflow(value, "kappa", x)
}

/// omega(x): the quartic e^{-x} term of the second-order expansion.
/// Negative branch: -(l^2 x^4 + 8 l^2 x^3 + 24 l^2 x^2 + 16(1+3l^2)x)
/// e^{-x} / (8 l^2 (1+l^2)^2).
pub fn omega(x: f64, shape: Shape) -> Result<f64> {
    let x = check_exp_range(x)?;
    shape.require_skewed("omega")?;
    let lambda = shape.lambda();
    let value = if lambda > 0.0 {
        omega_positive(x)
    } else {
        let l2 = lambda * lambda;
        let c = 1.0 + l2;
        let poly = ((l2 * x + 8.0 * l2) * x + 24.0 * l2) * x + 16.0 * (1.0 + 3.0 * l2);
        -(poly * x) * (-x).exp() / (8.0 * l2 * c * c)
    };
    finite_or_overflow(value, "omega", x)
}

/// The second-order limit (omega(x) + kappa(x)^2/2)·Lambda(x).
pub fn second_order_limit(x: f64, shape: Shape) -> Result<f64> {
    let k = kappa(x, shape)?;
    let w = omega(x, shape)?;
    finite_or_overflow((w + 0.5 * k * k) * gumbel(x), "second_order_limit", x)
}

/// Leading convergence rate of the closed-form norming:
/// Lambda(x) e^{-x} (log log n)^2 / (16 log n) for lambda > 0, with the
/// constant 1/4 instead of 1/16 on the negative branch.
pub fn leading_rate(log_n: f64, x: f64, shape: Shape) -> Result<f64> {
    if !log_n.is_finite() || log_n <= 1.0 {
        return Err(Error::domain(format!("log n must exceed 1, got {log_n}")));
    }
    let x = check_exp_range(x)?;
    shape.require_skewed("leading_rate")?;
    // 1/16 and 1/4 are exact powers of two: the branch ratio is exactly 4
    let constant = if shape.lambda() > 0.0 { 0.0625 } else { 0.25 };
    let lln = log_n.ln();
    let value = constant * gumbel(x) * (-x).exp() * lln * lln / log_n;
    finite_or_overflow(value, "leading_rate", x)
}

/// Nair's lambda = 0 baseline terms; the polynomials coincide with the
/// positive-branch kappa and omega.
pub fn nair_baseline_terms(x: f64) -> Result<ExpansionTerms> {
    let x = check_exp_range(x)?;
    let kappa = finite_or_overflow(kappa_positive(x), "kappa", x)?;
    let omega = finite_or_overflow(omega_positive(x), "omega", x)?;
    Ok(ExpansionTerms {
        kappa,
        omega,
        second_order_limit: (omega + 0.5 * kappa * kappa) * gumbel(x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(lambda: f64) -> Shape {
        Shape::new(lambda).unwrap()
    }

    #[test]
    fn gumbel_reference_points() {
        assert_relative_eq!(gumbel(0.0), (-1.0_f64).exp(), max_relative = 1e-15);
        assert!(gumbel(40.0) >= 1.0 - 1e-17);
        assert_relative_eq!(gumbel(-(2.0_f64.ln().ln())), 0.5, max_relative = 1e-15);
        assert_relative_eq!(gumbel(1.0), 0.69220062755534635387, max_relative = 1e-15);
    }

    #[test]
    fn gumbel_strictly_increasing() {
        let mut prev = 0.0;
        for i in 0..100 {
            let v = gumbel(-4.0 + 0.1 * i as f64);
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn kappa_reference_values() {
        for lambda in [0.5, 2.0, 7.0] {
            assert_eq!(kappa(0.0, shape(lambda)).unwrap(), 0.0);
            // the positive branch is lambda-free: bit-identical across shapes
            assert_eq!(
                kappa(1.3, shape(lambda)).unwrap(),
                kappa(1.3, shape(0.5)).unwrap()
            );
        }
        assert_relative_eq!(
            kappa(1.0, shape(2.0)).unwrap(),
            0.55181916175716348239, // (3/2)/e
            max_relative = 1e-14
        );
        assert_relative_eq!(
            kappa(1.0, shape(-1.0)).unwrap(),
            0.45984930146430290199, // (5/4)/e
            max_relative = 1e-14
        );
        assert_eq!(kappa(0.0, shape(-3.0)).unwrap(), 0.0);
    }

    #[test]
    fn omega_reference_values() {
        assert_eq!(omega(0.0, shape(1.0)).unwrap(), 0.0);
        assert_eq!(omega(0.0, shape(-2.0)).unwrap(), 0.0);
        assert_relative_eq!(
            omega(1.0, shape(3.0)).unwrap(),
            -1.3335629742464784158, // -29/(8e)
            max_relative = 1e-14
        );
        assert_relative_eq!(
            omega(1.0, shape(-1.0)).unwrap(),
            -1.1151345560509345373, // -97/(32e)
            max_relative = 1e-14
        );
    }

    #[test]
    fn second_order_limit_reference() {
        assert_eq!(second_order_limit(0.0, shape(1.0)).unwrap(), 0.0);
        assert_eq!(second_order_limit(0.0, shape(-5.0)).unwrap(), 0.0);
        assert_relative_eq!(
            second_order_limit(1.0, shape(1.0)).unwrap(),
            -0.81770406367287721522,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            second_order_limit(1.0, shape(-1.0)).unwrap(),
            -0.69870998951745018203,
            max_relative = 1e-13
        );
        // omega dominates kappa^2/2 on (0, 4] for the positive branch
        for i in 1..=16 {
            let x = 0.25 * i as f64;
            assert!(second_order_limit(x, shape(1.0)).unwrap() < 0.0, "x = {x}");
        }
    }

    #[test]
    fn leading_rate_reference() {
        const LN10: f64 = std::f64::consts::LN_10;
        let got = leading_rate(6.0 * LN10, 0.0, shape(1.0)).unwrap();
        assert_relative_eq!(got, 0.011474643716232608865, max_relative = 1e-14);
        // branch constants differ by exactly 4
        let neg = leading_rate(6.0 * LN10, 0.7, shape(-2.5)).unwrap();
        let pos = leading_rate(6.0 * LN10, 0.7, shape(2.5)).unwrap();
        assert_eq!(neg / pos, 4.0);
        // (log log n)^2 / log n decreases beyond n = e^{e^2}
        let r6 = leading_rate(6.0 * LN10, 0.0, shape(1.0)).unwrap();
        let r8 = leading_rate(8.0 * LN10, 0.0, shape(1.0)).unwrap();
        assert!(r8 < r6);
        assert!(leading_rate(1.0, 0.0, shape(1.0)).is_err());
    }

    #[test]
    fn nair_baseline_matches_positive_branch() {
        for x in [-2.0, -0.5, 0.0, 1.0, 3.7] {
            let t = nair_baseline_terms(x).unwrap();
            assert_eq!(t.kappa, kappa(x, shape(1.0)).unwrap());
            assert_eq!(t.omega, omega(x, shape(1.0)).unwrap());
        }
        assert_eq!(nair_baseline_terms(-2.0).unwrap().kappa, 0.0);
        assert_relative_eq!(
            nair_baseline_terms(1.0).unwrap().omega,
            -1.3335629742464784158,
            max_relative = 1e-14
        );
    }

    #[test]
    fn overflow_guard() {
        assert!(matches!(kappa(-701.0, shape(1.0)), Err(Error::Overflow(_))));
        assert!(matches!(omega(-700.5, shape(-1.0)), Err(Error::Overflow(_))));
        assert!(matches!(nair_baseline_terms(-1e6), Err(Error::Overflow(_))));
        // just inside the guard: finite or flagged, never infinity
        match kappa(-699.0, shape(1.0)) {
            Ok(v) => assert!(v.is_finite()),
            Err(Error::Overflow(_)) => {}
            Err(e) => panic!("unexpected error {e}"),
        }
    }

    #[test]
    fn negative_branch_kappa_scales_like_inverse_lambda_squared() {
        let k100 = kappa(1.0, shape(-100.0)).unwrap();
        let k10 = kappa(1.0, shape(-10.0)).unwrap();
        let expected = (1.0 + 100.0) / (1.0 + 10_000.0);
        assert_relative_eq!(k100 / k10, expected, max_relative = 1e-3);
    }

    #[test]
    fn derivative_consistency() {
        // finite difference of second_order_limit vs the analytic
        // product-rule derivative, positive branch
        let s = shape(1.0);
        let h = 1e-5;
        for i in 0..=28 {
            let x = -2.0 + 0.25 * i as f64;
            let num = (second_order_limit(x + h, s).unwrap()
                - second_order_limit(x - h, s).unwrap())
                / (2.0 * h);
            let k = kappa(x, s).unwrap();
            let w = omega(x, s).unwrap();
            let dk = 0.5 * (2.0 - x * x) * (-x).exp();
            let dw = 0.125 * (((x * x - 4.0) * x * x) - 16.0) * (-x).exp();
            let analytic = (dw + k * dk) * gumbel(x) + (w + 0.5 * k * k) * gumbel(x) * (-x).exp();
            assert_relative_eq!(num, analytic, max_relative = 1e-6, epsilon = 1e-10);
        }
    }
}
