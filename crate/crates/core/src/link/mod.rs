//! The link `λ ↦ f(λ)` between the projected-normal scale and the half-trace
//! of the intrinsic covariance at the mean direction.
//!
//! ```text
//! f(λ) = 1/(2√(2π)) · e^{−1/(2λ)} ∫₀^π φ² (D + (D² + 1) R(D)) sin φ dφ,   D = cos φ/√λ,
//! ```
//!
//! `f(0) = 0`, `f` is strictly increasing, and `f(λ) → (π²−4)/4` as `λ → ∞`
//! (the value for the uniform distribution). [`invert_f`] recovers `λ` from
//! an observed half-trace.

use std::f64::consts::PI;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::projnorm::{shape_factor, SQRT_2PI};
use crate::quadrature::{integrate_with_breaks, QuadOptions};

mod series;

pub use series::{
    a_coeff, a_coeff_from_moments, c_coeff, dawson_coeff, double_factorial, fprime_series,
    fprime_series_auto, j_moment, m_series, n_series, s_of_k, SeriesSum, DEFAULT_K_MAX,
    TAIL_TOLERANCE,
};

/// `sup f = (π² − 4)/4`.
pub const F_BOUND: f64 = (PI * PI - 4.0) / 4.0;

/// Half-traces within this distance of [`F_BOUND`] are treated as saturated.
pub const SATURATION_MARGIN: f64 = 1e-9;

/// Absolute accuracy of [`f_of_lambda`].
const F_TOL: f64 = 1e-12;

/// `F(x) = e^{−x²/2} ∫₀^π φ² (x cos φ + (x² cos² φ + 1) R(x cos φ)) sin φ dφ`,
/// the link in the variable `x = 1/√λ` without its constant factor:
/// `F(x) = 2√(2π) f(1/x²)`.
///
/// The integrand has width about `1/x` around `φ = 0`, so the initial panels
/// are graded geometrically from that scale.
pub fn f_of_x(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::NonFinite("f_of_x"));
    }
    if x < 0.0 {
        return Err(Error::Domain(format!("f_of_x needs x >= 0, got {x}")));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    variance_integral(x, 2.0 * SQRT_2PI * F_TOL)
}

fn variance_integral(x: f64, abs_tol: f64) -> Result<f64> {
    let mut breaks = vec![0.0];
    let mut s = 1.0 / x;
    let mut tail = Vec::new();
    while s < 0.5 * PI {
        tail.push(s);
        s *= 2.0;
    }
    breaks.extend(tail);
    breaks.extend([0.5 * PI, PI]);
    let shift = -0.5 * x * x;
    let r = integrate_with_breaks(
        |phi| {
            let (sin, cos) = phi.sin_cos();
            phi * phi * sin * shape_factor(x * cos, shift)
        },
        &breaks,
        QuadOptions {
            abs_tol,
            rel_tol: 0.0,
            max_subintervals: 4000,
        },
    );
    if !r.value.is_finite() {
        return Err(Error::NonFinite("f_of_x"));
    }
    Ok(r.value)
}

/// `f(λ)` by adaptive quadrature, absolute error below `1e-12`.
///
/// `f(0) = 0` and `f(∞) = (π²−4)/4`.
pub fn f_of_lambda(lambda: f64) -> Result<f64> {
    if lambda.is_nan() {
        return Err(Error::NonFinite("f_of_lambda"));
    }
    if lambda < 0.0 {
        return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
    }
    if lambda == 0.0 {
        return Ok(0.0);
    }
    Ok(f_of_x(1.0 / lambda.sqrt())? / (2.0 * SQRT_2PI))
}

/// Solves `f(λ) = v` by bracketing and bisection.
///
/// `v = 0` gives `λ = 0`. Values at or within [`SATURATION_MARGIN`] of
/// [`F_BOUND`] have no finite preimage and yield [`Error::Saturated`].
pub fn invert_f(v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(Error::NonFinite("invert_f"));
    }
    if v < 0.0 {
        return Err(Error::Domain(format!("half-trace must be >= 0, got {v}")));
    }
    if v >= F_BOUND - SATURATION_MARGIN {
        return Err(Error::Saturated {
            value: v,
            bound: F_BOUND,
        });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    let (mut lo, mut hi) = (1e-8, 1.0);
    while f_of_lambda(lo)? > v {
        lo *= 0.5;
        if lo < 1e-300 {
            return Ok(lo);
        }
    }
    while f_of_lambda(hi)? < v {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return Err(Error::Saturated {
                value: v,
                bound: F_BOUND,
            });
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f_of_lambda(mid)?;
        if fm == v {
            return Ok(mid);
        }
        if fm < v {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tabulated `(λ, f(λ))` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkTable {
    pub rows: Vec<(f64, f64)>,
}

impl LinkTable {
    /// Evaluates `f` on the given grid (in parallel; order is preserved).
    pub fn build(lambdas: &[f64]) -> Result<LinkTable> {
        let rows = lambdas
            .par_iter()
            .map(|&l| f_of_lambda(l).map(|f| (l, f)))
            .collect::<Result<Vec<_>>>()?;
        Ok(LinkTable { rows })
    }

    /// `n` points from `lo` to `hi` inclusive, evenly spaced in `λ` or in
    /// `ln λ`. A single point is `lo`.
    pub fn grid(lo: f64, hi: f64, n: usize, log_spacing: bool) -> Result<Vec<f64>> {
        if !(lo > 0.0 && hi > lo && hi.is_finite() && n >= 1) {
            return Err(Error::Domain(format!(
                "grid needs 0 < lo < hi and n >= 1, got [{lo}, {hi}] x {n}"
            )));
        }
        if n == 1 {
            return Ok(vec![lo]);
        }
        let (a, b) = if log_spacing {
            (lo.ln(), hi.ln())
        } else {
            (lo, hi)
        };
        Ok((0..n)
            .map(|i| match i {
                0 => lo,
                _ if i == n - 1 => hi,
                _ => {
                    let t = a + (b - a) * i as f64 / (n - 1) as f64;
                    if log_spacing {
                        t.exp()
                    } else {
                        t
                    }
                }
            })
            .collect())
    }

    /// CSV with header `lambda,f_value`, 17 significant digits, and a final
    /// comment line recording the supremum.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "lambda,f_value")?;
        for (l, f) in &self.rows {
            writeln!(w, "{l:.16e},{f:.16e}")?;
        }
        writeln!(w, "# sup f = (pi^2-4)/4 = {F_BOUND:.16e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    // mpmath, 40 digits
    const REFERENCE: [(f64, f64); 9] = [
        (1e-4, 1.000_033_339_335_477_36e-4),
        (0.01, 0.010_033_956_023_518_828),
        (0.1, 0.104_020_003_400_350_27),
        (0.5, 0.446_223_118_800_802_68),
        (1.0, 0.656_584_827_210_774_59),
        (2.0, 0.851_359_231_598_075_37),
        (10.0, 1.169_669_510_426_281_8),
        (100.0, 1.370_157_764_511_153_9),
        (1e6, 1.466_416_860_843_859_0),
    ];

    #[test]
    fn reference_values() {
        for (l, f) in REFERENCE {
            assert_abs_diff_eq!(f_of_lambda(l).unwrap(), f, epsilon = 1e-12);
        }
    }

    #[test]
    fn limits() {
        assert_eq!(f_of_lambda(0.0).unwrap(), 0.0);
        assert_relative_eq!(f_of_lambda(1e-8).unwrap(), 1e-8, max_relative = 1e-6);
        assert_relative_eq!(F_BOUND, 1.467_401_100_272_339_7, max_relative = 1e-16);
        assert!(f_of_lambda(1e12).unwrap() < F_BOUND);
        assert_abs_diff_eq!(
            f_of_x(0.0).unwrap(),
            2.0 * SQRT_2PI * F_BOUND,
            epsilon = 1e-11
        );
        assert!(f_of_lambda(-1.0).is_err());
        assert!(f_of_lambda(f64::NAN).is_err());
    }

    #[test]
    fn x_form_agrees() {
        for x in [0.3, 1.0, 2.5, 7.0] {
            assert_relative_eq!(
                f_of_x(x).unwrap(),
                2.0 * SQRT_2PI * f_of_lambda(1.0 / (x * x)).unwrap(),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn inverse_round_trip() {
        for l in [1e-6, 0.01, 0.3, 1.0, 7.0, 100.0, 5000.0] {
            let back = invert_f(f_of_lambda(l).unwrap()).unwrap();
            assert_relative_eq!(back, l, max_relative = 1e-8);
        }
    }

    #[test]
    fn inverse_edges() {
        assert_eq!(invert_f(0.0).unwrap(), 0.0);
        assert!(matches!(invert_f(-0.1), Err(Error::Domain(_))));
        assert!(matches!(invert_f(F_BOUND), Err(Error::Saturated { .. })));
        assert!(matches!(invert_f(2.0), Err(Error::Saturated { .. })));
        // mpmath
        assert_relative_eq!(
            invert_f(1.46).unwrap(),
            17_658.948_944_702_89,
            max_relative = 1e-8
        );
    }

    #[test]
    fn table_csv() {
        let grid = LinkTable::grid(0.01, 100.0, 5, true).unwrap();
        assert_eq!(grid[0], 0.01);
        assert_eq!(grid[4], 100.0);
        assert_relative_eq!(grid[2], 1.0, max_relative = 1e-14);
        let t = LinkTable::build(&grid).unwrap();
        assert!(t.rows.windows(2).all(|w| w[1].1 > w[0].1));
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines[0], "lambda,f_value");
        assert_eq!(lines.len(), 7);
        assert!(lines[6].starts_with('#'));
        let f: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(f, t.rows[2].1);
        assert!(LinkTable::grid(1.0, 0.5, 3, true).is_err());
        assert_eq!(
            LinkTable::grid(1.0, 3.0, 3, false).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(LinkTable::grid(1.0, 3.0, 1, false).unwrap(), vec![1.0]);
    }
}
