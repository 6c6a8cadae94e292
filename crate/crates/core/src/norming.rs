//! Norming constants for SN(lambda) maxima: the closed-form family, the
//! quantile family 1 - F(b_n) = 1/n with a_n = f(b_n), and the three
//! classical lambda = 0 baselines.
//!
//! Sample sizes are carried as log n throughout; the diagnostics go to
//! n = 10^100 and beyond, where n itself is unrepresentable but every
//! formula only consumes log n.

use crate::dist::{self, Shape};
use crate::error::{Error, Result};
use crate::normal;
use crate::solve;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Default log-space residual tolerance of the quantile solvers.
pub const DEFAULT_TOL: f64 = 1e-12;

/// How a norming pair was constructed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormingMethod {
    ClosedForm,
    Quantile,
    Leadbetter0,
    Hall0,
    Nair0,
}

impl NormingMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            NormingMethod::ClosedForm => "closed_form",
            NormingMethod::Quantile => "quantile",
            NormingMethod::Leadbetter0 => "leadbetter0",
            NormingMethod::Hall0 => "hall0",
            NormingMethod::Nair0 => "nair0",
        }
    }
}

/// Scale/location constants for a sample size carried as log n.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormingPair {
    pub log_n: f64,
    pub scale: f64,
    pub location: f64,
    pub method: NormingMethod,
}

fn check_log_n_gt_one(log_n: f64) -> Result<f64> {
    if !log_n.is_finite() || log_n <= 1.0 {
        return Err(Error::domain(format!(
            "log n must exceed 1 (so log log n is positive), got {log_n}"
        )));
    }
    Ok(log_n)
}

/// Closed-form norming constants (alpha_n, beta_n) for lambda != 0.
///
/// Positive branch: alpha = (2 log n)^{-1/2},
/// beta = (2 log n)^{1/2} - (log log n + log pi)/(2 (2 log n)^{1/2}).
/// Negative branch: the same with 1/sqrt(1+lambda^2) scaling and
/// log(-2 pi lambda) in place of log pi.
pub fn closed_form_norming(log_n: f64, shape: Shape) -> Result<NormingPair> {
    let log_n = check_log_n_gt_one(log_n)?;
    shape.require_skewed("closed_form_norming")?;
    let lambda = shape.lambda();
    let root = (2.0 * log_n).sqrt();
    let pair = if lambda > 0.0 {
        NormingPair {
            log_n,
            scale: root.recip(),
            location: root - (log_n.ln() + PI.ln()) / (2.0 * root),
            method: NormingMethod::ClosedForm,
        }
    } else {
        let sq = (1.0 + lambda * lambda).sqrt();
        NormingPair {
            log_n,
            scale: (sq * root).recip(),
            location: root / sq - (log_n.ln() + (2.0 * PI * (-lambda)).ln()) / (sq * root),
            method: NormingMethod::ClosedForm,
        }
    };
    Ok(pair)
}

/// Log-space residual of the quantile equation at b: log(n(1 - F(b))).
fn quantile_residual(b: f64, log_n: f64, shape: Shape) -> Result<f64> {
    Ok(log_n + dist::log_survival(b, shape)?.value())
}

/// Derivative of the residual: d/db log S(b) = -pdf(b)/survival(b),
/// assembled from logs so it survives the deep tail.
fn quantile_residual_slope(b: f64, shape: Shape) -> Result<f64> {
    let log_pdf = dist::log_pdf(b, shape)?;
    let log_s = dist::log_survival(b, shape)?.value();
    Ok(-(log_pdf - log_s).exp())
}

/// Solve 1 - F(b_n) = 1/n in log space: |log(n(1 - F(b_n)))| <= tol.
///
/// The documented bracket is [0.5, sqrt(2 log n) + 10]; when the root lies
/// below it (strongly negative lambda at moderate n pushes b_n toward or
/// past zero) the bracket is extended downward once before failing.
pub fn solve_quantile_bn(log_n: f64, shape: Shape, tol: f64) -> Result<f64> {
    if !log_n.is_finite() || log_n <= 0.0 {
        return Err(Error::domain(format!("log n must be positive, got {log_n}")));
    }
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    shape.require_skewed("solve_quantile_bn")?;

    let hi = (2.0 * log_n).sqrt() + 10.0;
    let mut lo = 0.5;
    if quantile_residual(lo, log_n, shape)? <= 0.0 {
        lo = -hi;
    }
    let root = solve::bisect_then_newton(
        |b| quantile_residual(b, log_n, shape),
        |b| quantile_residual_slope(b, shape),
        lo,
        hi,
        1e-13,
        2,
    )?;
    let residual = quantile_residual(root, log_n, shape)?;
    if residual.abs() > tol {
        return Err(Error::Solver(format!(
            "quantile residual {residual:.3e} exceeds tolerance {tol:.1e} at b = {root} \
             (log n = {log_n}, lambda = {})",
            shape.lambda()
        )));
    }
    Ok(root)
}

/// a_n = f(b_n) with the auxiliary function of the tail representation:
/// 1/b_n (positive branch), 1/((1+lambda^2) b_n) (negative branch).
pub fn an_from_bn(b_n: f64, shape: Shape) -> Result<f64> {
    if !b_n.is_finite() || b_n <= 0.0 {
        return Err(Error::domain(format!("b_n must be positive, got {b_n}")));
    }
    shape.require_skewed("an_from_bn")?;
    let lambda = shape.lambda();
    if lambda > 0.0 {
        Ok(1.0 / b_n)
    } else {
        Ok(1.0 / ((1.0 + lambda * lambda) * b_n))
    }
}

/// Quantile norming pair (a_n, b_n) solved to `tol`.
pub fn quantile_norming(log_n: f64, shape: Shape, tol: f64) -> Result<NormingPair> {
    let location = solve_quantile_bn(log_n, shape, tol)?;
    let scale = an_from_bn(location, shape)?;
    Ok(NormingPair {
        log_n,
        scale,
        location,
        method: NormingMethod::Quantile,
    })
}

/// The three classical lambda = 0 norming families.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaselineVariant {
    /// alpha = (2 log n)^{-1/2}, beta = 1/alpha - alpha/2 (log log n + log 4 pi).
    Leadbetter,
    /// b solves 2 pi b^2 exp(b^2) = n^2, a = 1/b.
    Hall,
    /// b solves 1 - Phi(b) = 1/n, a = 1/b.
    Nair,
}

/// Baseline norming constants for SN(0) maxima. The skewed closed form
/// does NOT continuously extend to these (log pi vs log 4 pi): the tail
/// mass halves discontinuously at lambda = 0, so the families are
/// genuinely disjoint.
pub fn baseline_norming_lambda0(
    log_n: f64,
    variant: BaselineVariant,
    tol: f64,
) -> Result<NormingPair> {
    let log_n = check_log_n_gt_one(log_n)?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::domain(format!("tolerance must be positive, got {tol}")));
    }
    let hi = (2.0 * log_n).sqrt() + 10.0;
    match variant {
        BaselineVariant::Leadbetter => {
            let alpha = (2.0 * log_n).sqrt().recip();
            let beta = alpha.recip() - 0.5 * alpha * (log_n.ln() + (4.0 * PI).ln());
            Ok(NormingPair {
                log_n,
                scale: alpha,
                location: beta,
                method: NormingMethod::Leadbetter0,
            })
        }
        BaselineVariant::Hall => {
            // log residual of 2 pi b^2 exp(b^2) = n^2
            let residual = |b: f64| Ok((2.0 * PI).ln() + 2.0 * b.ln() + b * b - 2.0 * log_n);
            let slope = |b: f64| Ok(2.0 / b + 2.0 * b);
            let b = solve::bisect_then_newton(residual, slope, 0.5, hi, 1e-13, 2)?;
            let r = residual(b)?;
            if r.abs() > tol {
                return Err(Error::Solver(format!(
                    "hall residual {r:.3e} exceeds tolerance {tol:.1e} at b = {b}"
                )));
            }
            Ok(NormingPair {
                log_n,
                scale: 1.0 / b,
                location: b,
                method: NormingMethod::Hall0,
            })
        }
        BaselineVariant::Nair => {
            let residual = |b: f64| Ok(log_n + normal::log_sf(b));
            let slope = |b: f64| Ok(-(normal::log_pdf(b) - normal::log_sf(b)).exp());
            let b = solve::bisect_then_newton(residual, slope, 0.5, hi, 1e-13, 2)?;
            let r = residual(b)?;
            if r.abs() > tol {
                return Err(Error::Solver(format!(
                    "nair residual {r:.3e} exceeds tolerance {tol:.1e} at b = {b}"
                )));
            }
            Ok(NormingPair {
                log_n,
                scale: 1.0 / b,
                location: b,
                method: NormingMethod::Nair0,
            })
        }
    }
}
