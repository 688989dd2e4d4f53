//! The two-parameter Kumaraswamy distribution on the open unit interval.
//!
//! Density `f(x) = a b x^{a-1} (1 - x^a)^{b-1}` and distribution function
//! `F(x) = 1 - (1 - x^a)^b` for shape parameters `a > 0`, `b > 0`. Log-space
//! evaluation goes through `expm1`/`ln_1p` so the `(1 - x^a)` factor keeps
//! precision as `x^a` approaches 1.

#[cfg(not(feature = "std"))]
use num_traits::Float;

use alloc::vec::Vec;
use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::rng;

/// Shape-parameter pair of a Kumaraswamy distribution. Both strictly positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KumaParams {
    a: f64,
    b: f64,
}

impl KumaParams {
    /// Validates that both shapes are strictly positive and finite.
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite() {
            Ok(KumaParams { a, b })
        } else {
            Err(Error::InvalidParams { a, b })
        }
    }

    /// Builds without validation; caller guarantees positivity.
    pub fn new_unchecked(a: f64, b: f64) -> Self {
        KumaParams { a, b }
    }

    /// First shape parameter.
    pub fn a(&self) -> f64 {
        self.a
    }

    /// Second shape parameter.
    pub fn b(&self) -> f64 {
        self.b
    }
}

/// `log(1 - e^v)` for `v <= 0`, branch chosen so neither `e^v -> 1` nor
/// `e^v -> 0` loses digits.
pub(crate) fn ln_one_minus_exp(v: f64) -> f64 {
    if v < -core::f64::consts::LN_2 {
        (-v.exp()).ln_1p()
    } else {
        (-v.exp_m1()).ln()
    }
}

/// `log(1 - x^a)` at full precision across the whole support.
pub(crate) fn ln_one_minus_pow(x: f64, a: f64) -> f64 {
    ln_one_minus_exp(a * x.ln())
}

/// `1 - x^a` with the same precision guarantee.
pub(crate) fn one_minus_pow(x: f64, a: f64) -> f64 {
    -(a * x.ln()).exp_m1()
}

/// Natural log of the density at `x` in (0, 1).
pub(crate) fn ln_pdf(x: f64, p: KumaParams) -> f64 {
    let lx = x.ln();
    p.a.ln() + p.b.ln() + (p.a - 1.0) * lx + (p.b - 1.0) * ln_one_minus_exp(p.a * lx)
}

/// Probability density function.
///
/// Errors with [`Error::OutOfDomain`] outside the open unit interval.
pub fn pdf(x: f64, p: KumaParams) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(Error::OutOfDomain { x });
    }
    Ok(ln_pdf(x, p).exp())
}

/// Cumulative distribution function; clamps to 0 below the support and 1 above.
pub fn cdf(x: f64, p: KumaParams) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        // 1 - (1 - x^a)^b = -expm1(b ln(1 - x^a))
        -(p.b * ln_one_minus_pow(x, p.a)).exp_m1()
    }
}

/// Quantile function, the exact closed-form inverse of [`cdf`] on [0, 1].
pub fn quantile(u: f64, p: KumaParams) -> f64 {
    if u <= 0.0 {
        return 0.0;
    }
    if u >= 1.0 {
        return 1.0;
    }
    // (1 - (1-u)^{1/b})^{1/a}, all four steps in log space
    let t = (-u).ln_1p() / p.b; // ln (1-u)^{1/b}
    (ln_one_minus_exp(t) / p.a).exp()
}

/// Draws `n` values by inverse-transform sampling; deterministic given `seed`.
pub fn sample(n: usize, p: KumaParams, seed: u64) -> Vec<f64> {
    let mut r = rng::stream(seed);
    sample_with(n, p, &mut r)
}

/// Same as [`sample`] but drawing from a caller-owned generator.
pub fn sample_with(n: usize, p: KumaParams, rng: &mut impl RngCore) -> Vec<f64> {
    (0..n).map(|_| quantile(rng::uniform_open(rng), p)).collect()
}
