//! Closed-form power-series machinery behind the monotonicity of the link.
//!
//! In the reciprocal-scale variable `x = 1/√λ` the unnormalized link is
//!
//! ```text
//! F(x) = e^{−x²/2} ∫₀^π φ² (x cos φ + (x² cos² φ + 1) R(x cos φ)) sin φ dφ,
//! ```
//!
//! and `F′(x) e^{x²/2} = Σ c_k x^k` with explicit coefficients built from the
//! moments `J_m = ∫₀^π φ² cos^m φ sin φ dφ` and the Taylor coefficients `d_k`
//! of `R`. The coefficients alternate in sign and eventually decrease, which
//! certifies `F′ < 0` through a Leibniz tail bound.
//!
//! Double factorials and binomials are never formed as integers; every ratio
//! is accumulated factor by factor so indices in the hundreds stay finite.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::projnorm::SQRT_2PI;

/// `n!!` as a float (overflows to `+∞` past `n ≈ 300`).
pub fn double_factorial(n: u32) -> f64 {
    (1..=n).rev().step_by(2).map(f64::from).product()
}

/// `1/n!!`, accumulated as a product of reciprocals so it underflows
/// gracefully instead of passing through `∞`.
fn inv_double_factorial(n: u32) -> f64 {
    (1..=n)
        .rev()
        .step_by(2)
        .map(|i| 1.0 / f64::from(i))
        .product()
}

/// `m!!/(m+1)!!`.
fn double_factorial_ratio(m: u32) -> f64 {
    let mut r = 1.0;
    let mut top = m;
    let mut bottom = m + 1;
    while bottom > 1 {
        r *= if top > 0 { f64::from(top) } else { 1.0 } / f64::from(bottom);
        top = top.saturating_sub(2);
        bottom -= 2;
    }
    r
}

/// `b_j = C(2j+1, j) / 2^{2j+1}` for `j = 0..count`.
fn half_central_binomials(count: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut b = 0.5;
    for j in 0..count {
        out.push(b);
        b *= (2 * j + 3) as f64 / (2 * (j + 2)) as f64;
    }
    out
}

/// `1 + Σ_{j<n} b_j/(2j+3)`.
fn binomial_partial_sum(n: usize) -> f64 {
    1.0 + half_central_binomials(n)
        .iter()
        .enumerate()
        .map(|(j, b)| b / (2 * j + 3) as f64)
        .sum::<f64>()
}

/// `J_m = ∫₀^π φ² cos^m(φ) sin(φ) dφ`, closed form.
///
/// ```text
/// J_0 = π² − 4
/// J_m = π²/(m+1) · (m!!/(m+1)!! − 1)                                m odd
/// J_m = (π² − 4 · m!!/(m+1)!! · (1 + Σ_{j<m/2} b_j/(2j+3))) / (m+1)   m even
/// ```
pub fn j_moment(m: u32) -> f64 {
    let pi2 = PI * PI;
    if m == 0 {
        return pi2 - 4.0;
    }
    let r = double_factorial_ratio(m);
    let m1 = f64::from(m + 1);
    if m % 2 == 1 {
        pi2 / m1 * (r - 1.0)
    } else {
        (pi2 - 4.0 * r * binomial_partial_sum(m as usize / 2)) / m1
    }
}

/// Taylor coefficient `d_k` of `R = Φ/φ`: `1/k!!` for odd `k`,
/// `(√(2π)/2)/k!!` for even `k` (with `0!! = 1`).
pub fn dawson_coeff(k: u32) -> f64 {
    let inv = inv_double_factorial(k);
    if k % 2 == 1 {
        inv
    } else {
        0.5 * SQRT_2PI * inv
    }
}

fn dawson_coeff_signed(k: i64) -> f64 {
    if k < 0 {
        0.0
    } else {
        dawson_coeff(k as u32)
    }
}

/// `d_{k−1}(3J_{k+1} − J_{k−1}) + d_{k−3}(J_{k+1} − J_{k−1})`, with `d` of a
/// negative index taken as zero. For `k ≥ 1` this is the coefficient of `x^k`
/// in the `R`-dependent part of `F′(x) e^{x²/2}`.
pub fn a_coeff_from_moments(k: u32) -> f64 {
    let ki = i64::from(k);
    let hi = j_moment(k + 1);
    let lo = j_moment(k.saturating_sub(1));
    dawson_coeff_signed(ki - 1) * (3.0 * hi - lo) + dawson_coeff_signed(ki - 3) * (hi - lo)
}

/// `a_1 = 4√(2π)/9`, `a_2 = −7π²/32`, and [`a_coeff_from_moments`] for `k ≥ 3`.
pub fn a_coeff(k: u32) -> Result<f64> {
    match k {
        0 => Err(Error::Domain("a_k is defined for k >= 1".into())),
        1 => Ok(4.0 * SQRT_2PI / 9.0),
        2 => Ok(-7.0 * PI * PI / 32.0),
        _ => Ok(a_coeff_from_moments(k)),
    }
}

/// ```text
/// S(k) = 1 + Σ_{j=0}^{(k−1)/2 − 1} C(2j+1, j) / (2^{2j+1}(2j+3))
///          − (k+1)/(2^k (k+2)) · C(k, (k−1)/2)
/// ```
/// for odd `k ≥ 3`. Increasing in `k`, with `π ≤ 2√(2π) S(k) ≤ π²`.
pub fn s_of_k(k: u32) -> Result<f64> {
    if k < 3 || k.is_multiple_of(2) {
        return Err(Error::Domain(format!("S(k) needs odd k >= 3, got {k}")));
    }
    let i = (k as usize - 1) / 2;
    let b = half_central_binomials(i + 1);
    let sum: f64 = b[..i]
        .iter()
        .enumerate()
        .map(|(j, bj)| bj / (2 * j + 3) as f64)
        .sum();
    Ok(1.0 + sum - f64::from(k + 1) / f64::from(k + 2) * b[i])
}

/// Coefficient `c_k` of `F′(x) e^{x²/2} = Σ c_k x^k`:
///
/// ```text
/// c_0 = −π²/2,  c_1 = 4√(2π)/9,  c_2 = −π²/8,
/// c_k = 2√(2π) S(k)/(k+2)!!    k ≥ 3 odd,
/// c_k = −π²/(k+2)!!            k ≥ 4 even.
/// ```
pub fn c_coeff(k: u32) -> f64 {
    let pi2 = PI * PI;
    match k {
        0 => -0.5 * pi2,
        1 => 4.0 * SQRT_2PI / 9.0,
        2 => -pi2 / 8.0,
        _ if k % 2 == 1 => {
            2.0 * SQRT_2PI * s_of_k(k).expect("odd k >= 3") * inv_double_factorial(k + 2)
        }
        _ => -pi2 * inv_double_factorial(k + 2),
    }
}

/// A truncated alternating series with its Leibniz tail bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesSum {
    pub value: f64,
    /// Bound on `|true sum − value|`.
    pub tail_bound: f64,
    pub k_max: usize,
}

/// Default truncation for [`fprime_series`].
pub const DEFAULT_K_MAX: usize = 80;

/// Absolute tail bound a partial sum must certify.
pub const TAIL_TOLERANCE: f64 = 1e-12;

/// Terms `c_k x^k` and majorant factors `g_k = x^k/(k+2)!!` for
/// `k = 0..count`, computed without forming `x^k` or `(k+2)!!` separately.
fn fprime_terms(x: f64, count: usize) -> (Vec<f64>, Vec<f64>) {
    let pi2 = PI * PI;
    let x2 = x * x;
    let mut terms = Vec::with_capacity(count);
    let mut gs = Vec::with_capacity(count);
    // g_k = g_{k−2} x²/(k+2)
    let mut g = [0.5, x / 3.0];
    let b = half_central_binomials(count / 2 + 2);
    let mut binom_sum = 1.0; // 1 + Σ_{j<i} b_j/(2j+3)
    for k in 0..count {
        if k >= 2 {
            g[k % 2] *= x2 / (k + 2) as f64;
        }
        let t = match k {
            0 => c_coeff(0),
            1 => c_coeff(1) * x,
            2 => c_coeff(2) * x2,
            _ if k % 2 == 1 => {
                let i = (k - 1) / 2;
                binom_sum += b[i - 1] / (2 * i + 1) as f64;
                let s = binom_sum - (k + 1) as f64 / (k + 2) as f64 * b[i];
                2.0 * SQRT_2PI * s * g[1]
            }
            _ => -pi2 * g[0],
        };
        terms.push(t);
        gs.push(g[k % 2]);
    }
    (terms, gs)
}

/// Partial sum `Σ_{k ≤ k_max} c_k x^k` of `F′(x) e^{x²/2}` for `x ≥ 0`.
///
/// Every coefficient obeys `|c_k| ≤ π²/(k+2)!!`, and the majorant
/// `g_k = x^k/(k+2)!!` satisfies `g_{k+2} = g_k x²/(k+4)`. Once
/// `ρ = x²/(k_max+5) < 1` the omitted tail is therefore at most
/// `π² (g_{k_max+1} + g_{k_max+2}) / (1 − ρ)`. The sum is returned only when
/// that bound is below [`TAIL_TOLERANCE`].
pub fn fprime_series(x: f64, k_max: usize) -> Result<SeriesSum> {
    if !x.is_finite() {
        return Err(Error::NonFinite("fprime_series"));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!(
            "series is evaluated for x >= 0, got {x}"
        )));
    }
    let (terms, gs) = fprime_terms(x, k_max + 3);
    let rho = x * x / (k_max + 5) as f64;
    let tail_bound = if rho < 1.0 {
        PI * PI * (gs[k_max + 1] + gs[k_max + 2]) / (1.0 - rho)
    } else {
        f64::INFINITY
    };
    if !(tail_bound < TAIL_TOLERANCE) {
        return Err(Error::SeriesTail { k_max, tail_bound });
    }
    let value = terms[..=k_max].iter().sum();
    if !f64::is_finite(value) {
        return Err(Error::NonFinite("fprime_series"));
    }
    Ok(SeriesSum {
        value,
        tail_bound,
        k_max,
    })
}

/// [`fprime_series`] with the smallest `k_max ≥ DEFAULT_K_MAX`, growing in
/// steps of 16, that certifies the tail.
pub fn fprime_series_auto(x: f64) -> Result<SeriesSum> {
    let mut k_max = DEFAULT_K_MAX;
    loop {
        match fprime_series(x, k_max) {
            Err(Error::SeriesTail { .. }) if k_max < 8192 => k_max += 16,
            other => return other,
        }
    }
}

fn positive_series(first: f64, ratio: impl Fn(usize) -> f64) -> f64 {
    let mut term = first;
    let mut sum = 0.0;
    for k in 0.. {
        sum += term;
        let r = ratio(k);
        // ratios decrease, so the geometric tail bound is valid once r < 1
        if r < 1.0 && term * r / (1.0 - r) <= 1e-16 * sum.max(1.0) {
            break;
        }
        term *= r;
    }
    sum
}

/// `M(x) = Σ_k x^{2k}/(2k+2)!!`.
pub fn m_series(x: f64) -> f64 {
    let x2 = x * x;
    positive_series(0.5, |k| x2 / (2 * k + 4) as f64)
}

/// `N(x) = Σ_k x^{2k+1}/(2k+3)!!`.
pub fn n_series(x: f64) -> f64 {
    let x2 = x * x;
    positive_series(x / 3.0, |k| x2 / (2 * k + 5) as f64)
}
