//! Property tests for the distribution layer's structural invariants.

use proptest::prelude::*;
use sn_extremes::{dist, expansion, fmt, tail, Shape};

fn shape(lambda: f64) -> Shape {
    Shape::new(lambda).unwrap()
}

proptest! {
    /// Reflection symmetry of the density: f(x; lambda) = f(-x; -lambda).
    #[test]
    fn pdf_reflection(x in -10.0_f64..10.0, lambda in -8.0_f64..8.0) {
        let a = dist::pdf(x, shape(lambda)).unwrap();
        let b = dist::pdf(-x, shape(-lambda)).unwrap();
        prop_assert!((a - b).abs() <= 1e-15 * a.abs().max(1e-300));
    }

    /// cdf(x; lambda) + cdf(-x; -lambda) = 1.
    #[test]
    fn cdf_reflection(x in -8.0_f64..8.0, lambda in -8.0_f64..8.0) {
        let total = dist::cdf(x, shape(lambda)).unwrap() + dist::cdf(-x, shape(-lambda)).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12, "total = {total}");
    }

    /// survival + cdf = 1 on |x| <= 8.
    #[test]
    fn survival_cdf_complement(x in -8.0_f64..8.0, lambda in -8.0_f64..8.0) {
        let s = shape(lambda);
        let total = dist::survival(x, s).unwrap() + dist::cdf(x, s).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    /// exp(log_survival) recovers survival wherever it is representable.
    #[test]
    fn log_survival_exponentiates(x in -20.0_f64..20.0, lambda in -8.0_f64..8.0) {
        let s = shape(lambda);
        let plain = dist::survival(x, s).unwrap();
        let logged = dist::log_survival(x, s).unwrap();
        if plain >= 1e-290 {
            prop_assert!(
                ((logged.prob() - plain) / plain).abs() <= 1e-9,
                "x={x}, lambda={lambda}: {} vs {plain}", logged.prob()
            );
        }
        prop_assert!(logged.value() <= 0.0);
    }

    /// log_survival is nonincreasing in x.
    #[test]
    fn log_survival_monotone(a in -10.0_f64..30.0, gap in 0.001_f64..5.0, lambda in -8.0_f64..8.0) {
        let s = shape(lambda);
        let lo = dist::log_survival(a, s).unwrap().value();
        let hi = dist::log_survival(a + gap, s).unwrap().value();
        prop_assert!(hi <= lo + 1e-11, "S rose from x={a} to x={}", a + gap);
    }

    /// Central difference of the cdf matches the density where the density
    /// is not degenerately small relative to the cdf's absolute accuracy.
    #[test]
    fn cdf_derivative_is_pdf(x in -5.0_f64..5.0, lambda in -4.0_f64..4.0) {
        let s = shape(lambda);
        let p = dist::pdf(x, s).unwrap();
        if p >= 1e-5 {
            let h = 1e-5;
            let num = (dist::cdf(x + h, s).unwrap() - dist::cdf(x - h, s).unwrap()) / (2.0 * h);
            prop_assert!(((num - p) / p).abs() <= 1e-6, "x={x}, lambda={lambda}: {num} vs {p}");
        }
    }

    /// Mills containment is strict wherever both bound factors are positive.
    #[test]
    fn mills_containment(x in 0.01_f64..25.0, lambda in -8.0_f64..8.0) {
        prop_assume!(lambda != 0.0);
        let b = tail::mills_bounds_sn(x, shape(lambda)).unwrap();
        if let Some(ok) = b.contains_ratio() {
            prop_assert!(ok, "x={x}, lambda={lambda}: {b:?}");
        }
    }

    /// The Gumbel law is a distribution function. Strict positivity is
    /// only representable for x > -ln 745 or so; below that exp(-exp(-x))
    /// underflows to an honest zero.
    #[test]
    fn gumbel_is_cdf(a in -6.0_f64..20.0, gap in 0.001_f64..5.0) {
        let lo = expansion::gumbel(a);
        let hi = expansion::gumbel(a + gap);
        prop_assert!(lo > 0.0 && hi < 1.0 && hi > lo);
    }

    /// Nondecreasing even through the underflow region.
    #[test]
    fn gumbel_monotone_everywhere(a in -50.0_f64..20.0, gap in 0.001_f64..5.0) {
        prop_assert!(expansion::gumbel(a + gap) >= expansion::gumbel(a));
    }

    /// 15-significant-digit formatting round-trips within 1e-14 relative.
    #[test]
    fn sig15_round_trip(x in prop::num::f64::NORMAL) {
        let parsed: f64 = fmt::sig15(x).parse().unwrap();
        prop_assert!(((parsed - x) / x).abs() <= 1e-14, "{x} -> {}", fmt::sig15(x));
    }
}
