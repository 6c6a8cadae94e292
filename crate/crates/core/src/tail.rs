//! Mills inequalities and ratios for SN(lambda), the distributional tail
//! representation (c, f, g), and the high-order tail expansions.

use crate::dist::{self, LogProb, Shape};
use crate::error::{Error, Result};
use crate::normal;
use std::f64::consts::{E, PI};

/// Two-sided Mills bounds for the ratio (1 - F(x))/f(x) at one point.
///
/// A bound is `None` where its defining factor is non-positive, i.e. the
/// inequality as written is vacuous at this x; callers (and tests) skip
/// those points rather than clamp them.
#[derive(Clone, Copy, Debug)]
pub struct MillsBounds {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub ratio: f64,
}

impl MillsBounds {
    /// True when both bounds exist and strictly contain the ratio.
    pub fn contains_ratio(&self) -> Option<bool> {
        match (self.lower, self.upper) {
            (Some(lo), Some(hi)) => Some(lo < self.ratio && self.ratio < hi),
            _ => None,
        }
    }
}

fn check_positive(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::domain(format!("Mills bounds hold for x > 0 only, got {x}")));
    }
    Ok(x)
}

/// Classical Mills bounds for the standard normal:
/// x/(1+x^2) < (1 - Phi(x))/phi(x) < 1/x for x > 0.
pub fn mills_bounds_normal(x: f64) -> Result<MillsBounds> {
    let x = check_positive(x)?;
    let ratio = (normal::log_sf(x) - normal::log_pdf(x)).exp();
    Ok(MillsBounds {
        lower: Some(x / (1.0 + x * x)),
        upper: Some(1.0 / x),
        ratio,
    })
}

/// Sign-branched Mills bounds for SN(lambda), lambda != 0.
///
/// Positive branch: x/(1+x^2) < ratio < (1/x)·(1 - phi(lx)/(lx))^{-1};
/// the upper factor is non-positive (vacuous) when lambda·x is small.
/// Negative branch: the lower factor reduces to (1 - x^{-2})/(1+lambda^2),
/// vacuous for x <= 1.
pub fn mills_bounds_sn(x: f64, shape: Shape) -> Result<MillsBounds> {
    let x = check_positive(x)?;
    if shape.lambda() == 0.0 {
        return Err(Error::domain(
            "lambda = 0 has no skewed branch; use mills_bounds_normal",
        ));
    }
    let lambda = shape.lambda();
    let ratio = mills_ratio_sn(x, shape)?;
    if lambda > 0.0 {
        let lx = lambda * x;
        let factor = 1.0 - normal::pdf(lx) / lx;
        let upper = (factor > 0.0).then(|| 1.0 / (x * factor));
        Ok(MillsBounds {
            lower: Some(x / (1.0 + x * x)),
            upper,
            ratio,
        })
    } else {
        let l2 = lambda * lambda;
        let w = l2 / (1.0 + l2);
        let lower_factor = 1.0 - w * (1.0 + 1.0 / (l2 * x * x));
        let lower = (lower_factor > 0.0).then(|| x / (1.0 + x * x) * lower_factor);
        let upper = (1.0 - w / (1.0 + 1.0 / ((1.0 + l2) * x * x))) / x;
        Ok(MillsBounds {
            lower,
            upper: Some(upper),
            ratio,
        })
    }
}

/// Mills ratio survival(x)/pdf(x), assembled in log space so it stays
/// finite where the plain survival underflows (deep negative-branch tail).
/// lambda = 0 is the documented normal baseline.
pub fn mills_ratio_sn(x: f64, shape: Shape) -> Result<f64> {
    let log_s = dist::log_survival(x, shape)?.value();
    let log_f = dist::log_pdf(x, shape)?;
    Ok((log_s - log_f).exp())
}

/// Sign of the skew branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branch {
    Positive,
    Negative,
}

/// The von Mises-type tail representation
/// 1 - F(x) = c(x)·exp(-∫_1^x g(t)/f(t) dt), c(x) -> c_limit.
///
/// `f` is the auxiliary function whose value at b_n supplies the norming
/// scale a_n; `g` tends to one.
#[derive(Clone, Copy, Debug)]
pub struct TailModel {
    lambda: f64,
    pub branch: Branch,
    pub c_limit: f64,
}

impl TailModel {
    /// Auxiliary function: 1/x (positive branch), 1/((1+lambda^2)x) (negative).
    pub fn f(&self, x: f64) -> f64 {
        match self.branch {
            Branch::Positive => 1.0 / x,
            Branch::Negative => 1.0 / ((1.0 + self.lambda * self.lambda) * x),
        }
    }

    /// g(x) = 1 + 1/x^2, or 1 + 2/((1+lambda^2) x^2) on the negative branch.
    pub fn g(&self, x: f64) -> f64 {
        match self.branch {
            Branch::Positive => 1.0 + 1.0 / (x * x),
            Branch::Negative => 1.0 + 2.0 / ((1.0 + self.lambda * self.lambda) * x * x),
        }
    }

    /// Closed form of ∫_1^x g(t)/f(t) dt:
    /// (x^2-1)/2 + log x, or (1+lambda^2)(x^2-1)/2 + 2 log x.
    pub fn gf_integral(&self, x: f64) -> f64 {
        match self.branch {
            Branch::Positive => 0.5 * (x * x - 1.0) + x.ln(),
            Branch::Negative => {
                0.5 * (1.0 + self.lambda * self.lambda) * (x * x - 1.0) + 2.0 * x.ln()
            }
        }
    }
}

/// Branch-correct tail representation of SN(lambda), lambda != 0.
pub fn tail_model(shape: Shape) -> Result<TailModel> {
    shape.require_skewed("tail_model")?;
    let lambda = shape.lambda();
    if lambda > 0.0 {
        Ok(TailModel {
            lambda,
            branch: Branch::Positive,
            c_limit: (2.0 / (PI * E)).sqrt(),
        })
    } else {
        let l2 = lambda * lambda;
        Ok(TailModel {
            lambda,
            branch: Branch::Negative,
            c_limit: (-0.5 * (1.0 + l2)).exp() / ((-lambda) * (1.0 + l2) * PI),
        })
    }
}

/// Three-term tail expansion of the log survival (the far-tail engine):
/// only valid beyond the survival crossover, callers below it must use the
/// quadrature path.
pub fn tail_expansion_log_survival(x: f64, shape: Shape) -> Result<LogProb> {
    shape.require_skewed("tail_expansion_log_survival")?;
    let crossover = dist::survival_crossover(shape);
    if !x.is_finite() || x < crossover {
        return Err(Error::domain(format!(
            "tail expansion requires x >= crossover ({crossover}) for lambda = {}, got {x}; \
             use the quadrature survival below it",
            shape.lambda()
        )));
    }
    LogProb::new(dist::log_sf_expansion(x, shape.lambda()))
}
