//! Skew-normal density, distribution and survival functions, plus
//! reproducible sampling.
//!
//! The density is 2·phi(x)·Phi(lambda·x). Everything tail-related is built
//! on one primitive: the log survival for x >= 0, evaluated either by
//! adaptive quadrature of the density in log space (below the crossover) or
//! by a three-term tail expansion (beyond it). The two routes are
//! cross-checked at the crossover by the consistency self-test.

use crate::error::{Error, Result};
use crate::normal;
use crate::quad;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use std::f64::consts::{LN_2, PI};

/// Skew parameter of SN(lambda).
///
/// Construction only requires finiteness; operations that branch on the
/// sign of lambda reject zero themselves, since lambda = 0 is only
/// meaningful for the documented baselines.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Shape {
    lambda: f64,
}

impl Shape {
    pub fn new(lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::domain(format!("shape parameter must be finite, got {lambda}")));
        }
        Ok(Shape { lambda })
    }

    #[inline]
    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    #[inline]
    pub fn is_negative(&self) -> bool {
        self.lambda < 0.0
    }

    /// Errors unless lambda != 0, for the sign-branched operations.
    pub fn require_skewed(&self, what: &str) -> Result<()> {
        if self.lambda == 0.0 {
            return Err(Error::domain(format!(
                "{what} branches on the sign of lambda; lambda = 0 is served by the baseline operations"
            )));
        }
        Ok(())
    }
}

/// Natural log of a probability in (0, 1]. Values far below the double
/// underflow threshold (about -745) are still meaningful here; `prob()`
/// simply underflows to zero for them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LogProb(f64);

impl LogProb {
    pub fn new(value: f64) -> Result<Self> {
        if value.is_nan() || value > 0.0 {
            return Err(Error::domain(format!("log-probability must be <= 0, got {value}")));
        }
        Ok(LogProb(value))
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn prob(self) -> f64 {
        self.0.exp()
    }
}

fn check_finite(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::domain(format!("argument must be finite, got {x}")));
    }
    Ok(x)
}

/// Quadrature-to-expansion switch point of the survival evaluation.
///
/// Calibrated so the dropped O(x^-6) remainder of the three-term expansions
/// keeps the relative error below ~4e-7 at the switch for |lambda| in
/// [0.25, 8]; the negative branch scales like 1/|lambda| because its
/// bracket coefficients grow like lambda^-4.
pub fn survival_crossover(shape: Shape) -> f64 {
    if shape.lambda() >= 0.0 {
        20.0
    } else {
        (24.0 / shape.lambda().abs()).max(8.0)
    }
}

/// Log-density log f_lambda(t) = log 2 + log phi(t) + log Phi(lambda t).
#[inline]
pub(crate) fn log_density(t: f64, lambda: f64) -> f64 {
    LN_2 + normal::log_pdf(t) + normal::log_cdf(lambda * t)
}

/// Three-term tail expansions of log survival, valid beyond the crossover.
pub(crate) fn log_sf_expansion(x: f64, lambda: f64) -> f64 {
    let s = 1.0 / (x * x);
    if lambda >= 0.0 {
        log_density(x, lambda) - x.ln() + (s * (-1.0 + 3.0 * s)).ln_1p()
    } else {
        let l2 = lambda * lambda;
        let c = 1.0 + l2;
        let c2 = (1.0 + 3.0 * l2) / (l2 * c);
        let c4 = (15.0 * l2 * l2 + 10.0 * l2 + 3.0) / (l2 * l2 * c * c);
        -0.5 * c * x * x - ((-lambda) * PI * c).ln() - 2.0 * x.ln() + (s * (-c2 + c4 * s)).ln_1p()
    }
}

/// Log survival via log-space adaptive quadrature of the density on
/// [x, x + delta], where delta is chosen so the discarded remainder is
/// below 1e-37 relative.
pub(crate) fn log_sf_quadrature(x: f64, lambda: f64) -> Result<f64> {
    let ell_x = log_density(x, lambda);
    // extend until the integrand has dropped ~92 e-folds
    let mut delta = 1.0_f64;
    while log_density(x + delta, lambda) - ell_x > -92.0 && delta < 200.0 {
        delta *= 2.0;
    }
    let q = quad::integrate(
        |t| (log_density(t, lambda) - ell_x).exp(),
        x,
        x + delta,
        1e-13,
    )?;
    Ok(ell_x + q.value.ln())
}

/// Log survival for x >= 0: the single tail primitive.
fn log_sf_tail(x: f64, lambda: f64) -> Result<f64> {
    debug_assert!(x >= 0.0);
    if x >= survival_crossover(Shape { lambda }) {
        Ok(log_sf_expansion(x, lambda))
    } else {
        log_sf_quadrature(x, lambda)
    }
}

/// Consistency self-test of the two survival routes: evaluates both the
/// quadrature and the expansion log-survival at the crossover and returns
/// the absolute log-space gap. The build-level gate requires this below
/// 1e-6 for |lambda| in [0.25, 8].
pub fn survival_crossover_gap(shape: Shape) -> Result<f64> {
    let x = survival_crossover(shape);
    let by_quadrature = log_sf_quadrature(x, shape.lambda())?;
    let by_expansion = log_sf_expansion(x, shape.lambda());
    Ok((by_quadrature - by_expansion).abs())
}

/// Density of SN(lambda): 2 phi(x) Phi(lambda x).
pub fn pdf(x: f64, shape: Shape) -> Result<f64> {
    let x = check_finite(x)?;
    Ok(2.0 * normal::pdf(x) * normal::cdf(shape.lambda() * x))
}

/// Log-density, finite for all finite x (the plain density underflows in
/// the deep negative-branch tail).
pub fn log_pdf(x: f64, shape: Shape) -> Result<f64> {
    let x = check_finite(x)?;
    Ok(log_density(x, shape.lambda()))
}

/// Distribution function. Uses the reflection F_lambda(x) =
/// survival(-x; -lambda), so no cancellation anywhere.
pub fn cdf(x: f64, shape: Shape) -> Result<f64> {
    let x = check_finite(x)?;
    let lambda = shape.lambda();
    if x > 0.0 {
        Ok(1.0 - log_sf_tail(x, lambda)?.exp())
    } else {
        Ok(log_sf_tail(-x, -lambda)?.exp())
    }
}

/// Survival function 1 - F_lambda(x), computed without cancellation
/// against 1 for x > 0.
pub fn survival(x: f64, shape: Shape) -> Result<f64> {
    let x = check_finite(x)?;
    let lambda = shape.lambda();
    if x >= 0.0 {
        Ok(log_sf_tail(x, lambda)?.exp())
    } else {
        Ok(1.0 - log_sf_tail(-x, -lambda)?.exp())
    }
}

/// Log survival; stays accurate to x >= 40 for every supported shape, far
/// past the point where the plain survival underflows.
pub fn log_survival(x: f64, shape: Shape) -> Result<LogProb> {
    let x = check_finite(x)?;
    let lambda = shape.lambda();
    let value = if x >= 0.0 {
        log_sf_tail(x, lambda)?.min(0.0)
    } else {
        (-log_sf_tail(-x, -lambda)?.exp()).ln_1p()
    };
    LogProb::new(value)
}

const SAMPLE_BATCH: usize = 8192;

/// Draws from SN(lambda) via the two-normal representation
/// X = delta |Z0| + sqrt(1 - delta^2) Z1 with delta = lambda/sqrt(1+lambda^2).
///
/// Deterministic given (shape, count, seed) and independent of thread
/// count: draws are partitioned into fixed batches of 8192, and batch k
/// reads ChaCha8 stream k+1 of the seed.
pub fn sample(shape: Shape, count: i64, seed: u64) -> Result<Vec<f64>> {
    if count < 0 {
        return Err(Error::domain(format!("sample count must be non-negative, got {count}")));
    }
    let lambda = shape.lambda();
    let delta = lambda / (1.0 + lambda * lambda).sqrt();
    let coef = (1.0 - delta * delta).sqrt();
    let mut out = vec![0.0_f64; count as usize];
    out.par_chunks_mut(SAMPLE_BATCH).enumerate().for_each(|(batch, chunk)| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(batch as u64 + 1);
        for v in chunk.iter_mut() {
            let z0: f64 = StandardNormal.sample(&mut rng);
            let z1: f64 = StandardNormal.sample(&mut rng);
            *v = delta * z0.abs() + coef * z1;
        }
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn shape(lambda: f64) -> Shape {
        Shape::new(lambda).unwrap()
    }

    #[test]
    fn pdf_at_zero_is_phi_zero_for_any_lambda() {
        for lambda in [3.7, -3.7, 0.0, 8.0] {
            let got = pdf(0.0, shape(lambda)).unwrap();
            assert_relative_eq!(got, 0.3989422804014327, max_relative = 1e-15);
        }
    }

    #[test]
    fn pdf_lambda_zero_is_standard_normal() {
        for x in [-3.0, -0.7, 0.0, 1.2, 4.0] {
            let got = pdf(x, shape(0.0)).unwrap();
            assert_relative_eq!(got, normal::pdf(x), max_relative = 1e-15);
        }
    }

    #[test]
    fn pdf_reference_value() {
        // 2 phi(1) Phi(1), mpmath 60 dps
        let got = pdf(1.0, shape(1.0)).unwrap();
        assert_relative_eq!(got, 0.40716159555316004141, max_relative = 1e-13);
    }

    #[test]
    fn pdf_rejects_non_finite() {
        assert!(pdf(f64::NAN, shape(1.0)).is_err());
        assert!(pdf(f64::INFINITY, shape(1.0)).is_err());
        assert!(Shape::new(f64::INFINITY).is_err());
    }

    #[test]
    fn cdf_at_zero() {
        assert_relative_eq!(cdf(0.0, shape(0.0)).unwrap(), 0.5, max_relative = 1e-12);
        // arctan identity: cdf(0, lambda) = 1/2 - atan(lambda)/pi
        assert_relative_eq!(cdf(0.0, shape(1.0)).unwrap(), 0.25, max_relative = 1e-12);
        assert_relative_eq!(
            cdf(0.0, shape(-2.0)).unwrap(),
            0.5 + (2.0_f64).atan() / PI,
            max_relative = 1e-12
        );
    }

    #[test]
    fn cdf_reflection_identity() {
        let (x, l) = (1.3, 2.5);
        let total = cdf(x, shape(l)).unwrap() + cdf(-x, shape(-l)).unwrap();
        assert!((total - 1.0).abs() < 1e-14);
    }

    #[test]
    fn survival_at_zero_and_far_left() {
        assert_relative_eq!(survival(0.0, shape(1.0)).unwrap(), 0.75, max_relative = 1e-12);
        assert!(survival(-40.0, shape(1.0)).unwrap() >= 1.0 - 1e-15);
        assert!(survival(-40.0, shape(-5.0)).unwrap() >= 1.0 - 1e-15);
    }

    #[test]
    fn survival_closed_forms_for_unit_lambda() {
        // S(x, 1) = 1 - Phi(x)^2 and S(x, -1) = (1 - Phi(x))^2
        for x in [0.5, 1.0, 2.0, 3.0, 5.0, 6.0] {
            let s_pos = survival(x, shape(1.0)).unwrap();
            let phi_x = normal::cdf(x);
            assert_relative_eq!(s_pos, (1.0 - phi_x) * (1.0 + phi_x), max_relative = 1e-11);
            let s_neg = survival(x, shape(-1.0)).unwrap();
            assert_relative_eq!(s_neg, normal::sf(x) * normal::sf(x), max_relative = 1e-11);
        }
    }

    #[test]
    fn log_survival_reference_values() {
        // mpmath fixtures (60 dps, normalized tanh-sinh cross-checked
        // against the closed forms S(x,1) = Phibar(1+Phi), S(x,-1) = Phibar^2)
        let cases = [
            // quadrature region
            (0.25, 10.0, -52.5439595347118593332, 1e-9),
            (1.0, 10.0, -52.5381379699525252689, 1e-9),
            (5.0, 15.0, -115.438237665151749926, 1e-9),
            (-1.0, 6.0, -41.4735378999494113099, 1e-9),
            (-1.0, 12.0, -150.821346003137591878, 1e-9),
            (-0.25, 20.0, -218.351663051412978169, 1e-9),
            (-0.25, 40.0, -857.207743803030053403, 1e-8),
            // expansion region (three-term bracket, error O(x^-6))
            (1.0, 25.0, -315.946260827460313626, 1e-6),
            (2.0, 25.0, -315.946260827460313626, 1e-6),
            (0.5, 30.0, -453.628096775783251798, 1e-6),
            (1.0, 40.0, -803.915294833193842857, 1e-6),
            (0.25, 40.0, -803.915294833193842857, 1e-6),
            (8.0, 40.0, -803.915294833193842857, 1e-6),
            (-1.0, 24.0, -584.197442006415576249, 1e-6),
            (-1.0, 30.0, -908.642487912686394215, 1e-6),
            (-1.0, 40.0, -1609.21688402750757633, 1e-6),
            (-2.0, 12.0, -368.421618471666030192, 1e-6),
            (-2.0, 25.0, -1572.38610536109923693, 1e-6),
            (-5.0, 10.0, -1310.618602161868658, 1e-6),
            (-8.0, 8.0, -2091.55816607851625716, 1e-6),
            (-8.0, 40.0, -52014.7763466010660861, 1e-5),
        ];
        for (lambda, x, want, tol) in cases {
            let got = log_survival(x, shape(lambda)).unwrap().value();
            assert!(
                (got - want).abs() < tol,
                "log_survival({x}, lambda={lambda}) = {got:.12}, want {want:.12}"
            );
        }
    }

    #[test]
    fn log_survival_monotone_on_grid() {
        for lambda in [0.25, 1.0, -1.0, -8.0] {
            let mut prev = f64::INFINITY;
            for i in 0..80 {
                let x = -6.0 + 0.5 * i as f64;
                let v = log_survival(x, shape(lambda)).unwrap().value();
                assert!(v <= prev + 1e-12, "log_survival not nonincreasing at x={x}, lambda={lambda}");
                prev = v;
            }
        }
    }

    #[test]
    fn log_survival_probe_value() {
        let got = log_survival(0.0, shape(1.0)).unwrap().value();
        assert_relative_eq!(got, -0.28768207245178092744, max_relative = 1e-11);
    }

    #[test]
    fn crossover_consistency_gate() {
        // quadrature and expansion must agree to relative 1e-6 at the switch
        for lambda in [0.25, 0.5, 1.0, 2.0, 5.0, 8.0, -0.25, -0.5, -1.0, -2.0, -5.0, -8.0] {
            let gap = survival_crossover_gap(shape(lambda)).unwrap();
            assert!(gap < 1e-6, "crossover gate failed for lambda={lambda}: gap {gap:.3e}");
        }
    }

    #[test]
    fn survival_plus_cdf_is_one() {
        for lambda in [0.5, -0.5, 2.0, -2.0, 8.0, -8.0] {
            for i in 0..33 {
                let x = -8.0 + 0.5 * i as f64;
                let total = survival(x, shape(lambda)).unwrap() + cdf(x, shape(lambda)).unwrap();
                assert!((total - 1.0).abs() < 1e-12, "lambda={lambda}, x={x}: {total}");
            }
        }
    }

    #[test]
    fn density_integrates_to_one() {
        for lambda in [0.25, 1.0, -1.0, 5.0, -5.0] {
            let q = quad::integrate(
                |t| 2.0 * normal::pdf(t) * normal::cdf(lambda * t),
                -12.0,
                12.0,
                1e-13,
            )
            .unwrap();
            assert!((q.value - 1.0).abs() < 1e-10, "lambda={lambda}: {}", q.value);
        }
    }

    #[test]
    fn sample_mean_matches_theory() {
        // E[SN(1)] = sqrt(1/pi); 1e7 draws, 3-sigma band
        let draws = sample(shape(1.0), 10_000_000, 20260809).unwrap();
        let mean = draws.iter().sum::<f64>() / draws.len() as f64;
        let sd = (1.0 - 2.0 / (2.0 * PI)).sqrt(); // var = 1 - 2 delta^2 / pi, delta^2 = 1/2
        let band = 3.0 * sd / (draws.len() as f64).sqrt();
        assert!(
            (mean - 0.56418958354775628695).abs() < band,
            "mean {mean} outside {band}"
        );
    }

    #[test]
    fn sample_count_contract() {
        assert!(sample(shape(1.0), 0, 1).unwrap().is_empty());
        assert!(sample(shape(1.0), -1, 1).is_err());
    }

    #[test]
    fn sample_deterministic_and_thread_independent() {
        let a = sample(shape(-2.0), 50_000, 7).unwrap();
        let b = sample(shape(-2.0), 50_000, 7).unwrap();
        assert_eq!(a, b);
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let c = pool.install(|| sample(shape(-2.0), 50_000, 7).unwrap());
        assert_eq!(a, c);
    }

    #[test]
    fn sample_ecdf_against_cdf() {
        // DKW-style sup-distance bound at the 1% level: 1.63/sqrt(N)
        let n = 100_000;
        let mut draws = sample(shape(0.0), n, 99).unwrap();
        draws.sort_by(f64::total_cmp);
        let mut sup = 0.0_f64;
        for (i, x) in draws.iter().enumerate() {
            let f = normal::cdf(*x);
            sup = sup.max((f - i as f64 / n as f64).abs());
            sup = sup.max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(sup <= 1.63 / (n as f64).sqrt(), "normal ECDF sup-distance {sup}");

        let n = 1_000_000;
        let mut draws = sample(shape(-2.0), n, 4242).unwrap();
        draws.sort_by(f64::total_cmp);
        let mut sup = 0.0_f64;
        for (i, x) in draws.iter().enumerate() {
            let f = cdf(*x, shape(-2.0)).unwrap();
            sup = sup.max((f - i as f64 / n as f64).abs());
            sup = sup.max((f - (i + 1) as f64 / n as f64).abs());
        }
        assert!(sup <= 0.002, "SN(-2) ECDF sup-distance {sup}");
    }
}
