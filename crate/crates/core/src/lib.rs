//! Tail theory of the skew-normal distribution SN(lambda) and numerical
//! verification of the Gumbel convergence of its sample maxima.
//!
//! The crate has five public layers:
//!
//! - [`dist`]: density 2·phi(x)·Phi(lambda x), CDF, cancellation-free
//!   survival with a log-space deep-tail path, and reproducible sampling;
//! - [`tail`]: Mills inequalities/ratios, the (c, f, g) tail
//!   representation, and the three-term far-tail expansions;
//! - [`norming`]: the closed-form and quantile norming families for
//!   SN(lambda) maxima plus the classical lambda = 0 baselines, all
//!   parameterized by log n so n = 10^100 grids are routine;
//! - [`expansion`]: the Gumbel limit, kappa/omega expansion terms,
//!   leading (log log n)^2/log n rates;
//! - [`diagnostics`]: F^n rate scans, the h_lambda residual ladder,
//!   seeded Monte Carlo maxima, and CSV/JSON table export.

// reference values and quadrature nodes are kept at their full published
// precision even where f64 rounds them
#![allow(clippy::excessive_precision)]

pub mod diagnostics;
pub mod dist;
mod error;
pub mod expansion;
pub mod fmt;
pub mod normal;
pub mod norming;
pub mod quad;
mod solve;
pub mod tail;

pub use dist::{LogProb, Shape};
pub use error::{Error, Result};
