//! Cross-module invariants that tie the norming families to the Gumbel
//! limit and the Mills asymptotics to their limiting constants.

use sn_extremes::{diagnostics, norming, tail, Shape};

const LN10: f64 = std::f64::consts::LN_10;

fn shape(lambda: f64) -> Shape {
    Shape::new(lambda).unwrap()
}

#[test]
fn both_norming_families_reach_the_gumbel_limit() {
    for lambda in [1.0, -1.0, 2.0] {
        let s = shape(lambda);
        for x in [-1.0, 0.0, 1.0, 2.0] {
            for build in [true, false] {
                let mut first = f64::NAN;
                let mut last = f64::NAN;
                for k in [4.0, 8.0, 16.0, 32.0, 64.0] {
                    let log_n = k * LN10;
                    let pair = if build {
                        norming::closed_form_norming(log_n, s).unwrap()
                    } else {
                        norming::quantile_norming(log_n, s, norming::DEFAULT_TOL).unwrap()
                    };
                    let rec = diagnostics::delta_n(log_n, x, &pair, s).unwrap();
                    if k == 4.0 {
                        first = rec.delta_n.abs();
                    }
                    last = rec.delta_n.abs();
                }
                assert!(
                    last < first && last < 0.02,
                    "no convergence: lambda={lambda}, x={x}, closed={build}, first={first}, last={last}"
                );
            }
        }
    }
}

#[test]
fn mills_ratio_monotone_trend_toward_limit() {
    // x*ratio -> 1 (lambda > 0) and (1+lambda^2) x*ratio -> 1 (lambda < 0),
    // with the gap shrinking monotonically over x in [5, 50]
    for lambda in [0.5, 1.0, 2.0, 5.0, -0.5, -1.0, -2.0, -5.0] {
        let s = shape(lambda);
        let factor = if lambda < 0.0 { 1.0 + lambda * lambda } else { 1.0 };
        let mut prev_gap = f64::INFINITY;
        for i in 0..10 {
            let x = 5.0 + 5.0 * i as f64;
            let ratio = tail::mills_ratio_sn(x, s).unwrap();
            let gap = (factor * x * ratio - 1.0).abs();
            assert!(
                gap < prev_gap,
                "gap grew at x={x}, lambda={lambda}: {gap} vs {prev_gap}"
            );
            prev_gap = gap;
        }
        assert!(prev_gap < 1e-3, "lambda={lambda}: final gap {prev_gap}");
    }
}
