//! The ratio `Φ(x)/φ(x) = e^{x²/2} ∫_{−∞}^{x} e^{−t²/2} dt`.
//!
//! Both `Φ` and `φ` are taken without the `1/√(2π)` normalization, so the
//! ratio is the ordinary Mills-type ratio of the standard normal. It is an
//! entire, positive, strictly increasing function with
//! `R(0) = √(2π)/2`, `R(x) ~ −1/x` as `x → −∞` and
//! `R(x) ~ √(2π) e^{x²/2}` as `x → ∞`.

use std::f64::consts::SQRT_2;

use crate::error::{Error, Result};

/// √(2π)
pub const SQRT_2PI: f64 = 2.506_628_274_631_000_5;

/// √(π/2), which is also `R(0)`.
const SQRT_PI_2: f64 = 1.253_314_137_315_500_3;

/// Switch-over point to the continued fraction in the left tail.
const TAIL: f64 = 6.0;

/// Complementary Mills ratio `m(t) = e^{t²/2} ∫_t^∞ e^{−s²/2} ds` for `t ≥ TAIL`,
/// by modified Lentz evaluation of `1/(t + 1/(t + 2/(t + 3/(t + …))))`.
fn upper_tail(t: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = t;
    let mut c = t;
    let mut d = 0.0;
    for k in 1..500 {
        let a = k as f64;
        d = t + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = t + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `e^{x²/2} ∫_{−∞}^{x} e^{−t²/2} dt`.
///
/// Relative accuracy is close to machine precision over [−40, 40] wherever
/// the result is representable; for `x ≳ 37.7` the value overflows and
/// `+∞` is returned (check with `is_infinite`).
pub fn mills_ratio(x: f64) -> Result<f64> {
    if !x.is_finite() {
        return Err(Error::NonFinite("mills_ratio"));
    }
    Ok(mills_ratio_unchecked(x))
}

pub(crate) fn mills_ratio_unchecked(x: f64) -> f64 {
    if x <= -TAIL {
        upper_tail(-x)
    } else if x < TAIL {
        SQRT_PI_2 * (0.5 * x * x).exp() * libm::erfc(-x / SQRT_2)
    } else {
        let lead = SQRT_2PI * (0.5 * x * x).exp();
        if lead.is_infinite() {
            f64::INFINITY
        } else {
            lead - upper_tail(x)
        }
    }
}

/// `e^{−shift} · R(x)` without forming `R(x)` when it would overflow.
///
/// Used where a Gaussian prefactor cancels the growth of the ratio, as in the
/// projected-normal density, where `shift ≥ x²/2` keeps the product bounded.
pub fn scaled_mills_ratio(x: f64, shift: f64) -> f64 {
    if x < TAIL {
        (-shift).exp() * mills_ratio_unchecked(x)
    } else {
        SQRT_2PI * (0.5 * x * x - shift).exp() - (-shift).exp() * upper_tail(x)
    }
}

/// Partial sum of the everywhere-convergent power series
///
/// ```text
/// R(x) = Σ_k x^{2k+1}/(2k+1)!!  +  (√(2π)/2) Σ_k x^{2k}/(2k)!!
/// ```
///
/// through `k = k_max` in both sums. Intended as an independent check on
/// [`mills_ratio`]; it loses accuracy to cancellation for large negative `x`.
pub fn mills_ratio_series(x: f64, k_max: usize) -> f64 {
    let x2 = x * x;
    let mut odd = x; // x^{2k+1}/(2k+1)!!
    let mut even = 1.0; // x^{2k}/(2k)!!
    let mut odd_sum = 0.0;
    let mut even_sum = 0.0;
    for k in 0..=k_max {
        if k > 0 {
            odd *= x2 / (2 * k + 1) as f64;
            even *= x2 / (2 * k) as f64;
        }
        odd_sum += odd;
        even_sum += even;
    }
    odd_sum + 0.5 * SQRT_2PI * even_sum
}
