//! Intrinsic sample statistics on S²: the Fréchet mean and the tangent-space
//! covariance at that mean.
//!
//! The mean is the fixed point of
//!
//! ```text
//! X  = (1/L) Σ log_{μ̂}(y_ℓ),     μ̂ ← exp_{μ̂}(X),
//! ```
//!
//! iterated until `‖X‖ ≤ tol`. `X` is the (negative half) Riemannian gradient
//! of `Σ dist²(μ̂, y_ℓ)/L`, so the stopping rule bounds the gradient norm.
//!
//! When the Fréchet mean is not unique (for example, for data spread
//! uniformly over the sphere) the iteration returns whichever stationary point
//! it reaches; `converged` then only certifies stationarity.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    canonical_basis, exp_map, log_map_in, project, transport_matrix, SpherePoint, TangentBasis,
    TangentVector,
};

pub const DEFAULT_TOL: f64 = 1e-10;
pub const DEFAULT_MAX_ITER: usize = 1000;

/// Points per leaf of the reduction tree. Fixed so the summation order, and
/// hence every result bit, is independent of the thread count.
const CHUNK: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanResult {
    pub mean: SpherePoint,
    pub iterations: usize,
    pub final_gradient_norm: f64,
    pub converged: bool,
}

/// Symmetric 2×2 matrix on the tangent plane `basis.base`, in radians².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CovMatrix2 {
    pub basis: TangentBasis,
    pub m11: f64,
    pub m12: f64,
    pub m22: f64,
}

impl CovMatrix2 {
    pub fn zero(basis: TangentBasis) -> Self {
        CovMatrix2 {
            basis,
            m11: 0.0,
            m12: 0.0,
            m22: 0.0,
        }
    }

    pub fn trace(&self) -> f64 {
        self.m11 + self.m22
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> [f64; 2] {
        let mid = 0.5 * (self.m11 + self.m22);
        let rad = (0.5 * (self.m11 - self.m22)).hypot(self.m12);
        [mid - rad, mid + rad]
    }

    fn apply(&self, a: (f64, f64), b: (f64, f64)) -> f64 {
        a.0 * (self.m11 * b.0 + self.m12 * b.1) + a.1 * (self.m12 * b.0 + self.m22 * b.1)
    }

    /// The same bilinear form written in another basis of the same plane.
    pub fn express_in(&self, basis: &TangentBasis) -> CovMatrix2 {
        let q1 = self.basis.components(&basis.e1);
        let q2 = self.basis.components(&basis.e2);
        CovMatrix2 {
            basis: *basis,
            m11: self.apply(q1, q1),
            m12: self.apply(q1, q2),
            m22: self.apply(q2, q2),
        }
    }
}

/// Deterministic parallel sum: fixed-size leaves summed sequentially, then a
/// pairwise tree over the leaf sums.
fn tree_sum<const N: usize, F>(points: &[SpherePoint], leaf: F) -> Result<[f64; N]>
where
    F: Fn(usize, &SpherePoint) -> Result<[f64; N]> + Sync,
{
    let mut partial: Vec<[f64; N]> = points
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(c, chunk)| {
            let mut acc = [0.0; N];
            for (i, p) in chunk.iter().enumerate() {
                let v = leaf(c * CHUNK + i, p)?;
                for k in 0..N {
                    acc[k] += v[k];
                }
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    while partial.len() > 1 {
        partial = partial
            .chunks(2)
            .map(|pair| match pair {
                [a, b] => std::array::from_fn(|k| a[k] + b[k]),
                [a] => *a,
                _ => unreachable!(),
            })
            .collect();
    }
    Ok(partial.pop().unwrap_or([0.0; N]))
}

fn log_at(basis: &TangentBasis, index: usize, p: &SpherePoint) -> Result<TangentVector> {
    log_map_in(basis, p).map_err(|e| match e {
        Error::Antipodal => Error::CutLocus { index },
        other => other,
    })
}

/// Starting point: the normalized extrinsic average, or the first point when
/// the average vanishes.
fn initial_guess(points: &[SpherePoint]) -> SpherePoint {
    let sum = points
        .iter()
        .fold(nalgebra::Vector3::zeros(), |acc, p| acc + p.as_vector());
    if sum.norm() / points.len() as f64 <= 1e-12 {
        points[0]
    } else {
        project(&sum).unwrap_or(points[0])
    }
}

/// Fréchet mean by the log/exp fixed-point iteration.
///
/// Non-convergence within `max_iter` is reported through
/// [`MeanResult::converged`], not as an error. An iterate that lands on the
/// antipode of a data point is an error naming that point.
pub fn frechet_mean(points: &[SpherePoint], tol: f64, max_iter: usize) -> Result<MeanResult> {
    run(points, tol, max_iter, None)
}

/// As [`frechet_mean`], also returning `Σ dist²(μ̂_k, y_ℓ)` at every iterate
/// `μ̂_0, μ̂_1, …` that was visited.
pub fn frechet_mean_traced(
    points: &[SpherePoint],
    tol: f64,
    max_iter: usize,
) -> Result<(MeanResult, Vec<f64>)> {
    let mut trace = Vec::new();
    let res = run(points, tol, max_iter, Some(&mut trace))?;
    Ok((res, trace))
}

fn run(
    points: &[SpherePoint],
    tol: f64,
    max_iter: usize,
    mut trace: Option<&mut Vec<f64>>,
) -> Result<MeanResult> {
    if points.is_empty() {
        return Err(Error::TooFewPoints { needed: 1, got: 0 });
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let n = points.len() as f64;
    let mut mean = initial_guess(points);
    let mut gradient_norm = f64::INFINITY;
    for iteration in 1..=max_iter {
        let basis = canonical_basis(&mean);
        let [s1, s2, sq] = tree_sum(points, |i, p| {
            let v = log_at(&basis, i, p)?;
            Ok([v.c1, v.c2, v.c1 * v.c1 + v.c2 * v.c2])
        })?;
        if let Some(t) = trace.as_deref_mut() {
            t.push(sq);
        }
        let step = TangentVector::new(basis, s1 / n, s2 / n);
        gradient_norm = step.norm();
        mean = exp_map(&step);
        if gradient_norm <= tol {
            return Ok(MeanResult {
                mean,
                iterations: iteration,
                final_gradient_norm: gradient_norm,
                converged: true,
            });
        }
    }
    Ok(MeanResult {
        mean,
        iterations: max_iter,
        final_gradient_norm: gradient_norm,
        converged: false,
    })
}

/// `V̂ = 1/(L−1) Σ log_μ(y_ℓ) log_μ(y_ℓ)ᵀ` in `canonical_basis(mean)`.
pub fn empirical_covariance(points: &[SpherePoint], mean: &SpherePoint) -> Result<CovMatrix2> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints {
            needed: 2,
            got: points.len(),
        });
    }
    let basis = canonical_basis(mean);
    let [a, b, c] = tree_sum(points, |i, p| {
        let v = log_at(&basis, i, p)?;
        Ok([v.c1 * v.c1, v.c1 * v.c2, v.c2 * v.c2])
    })?;
    let denom = (points.len() - 1) as f64;
    Ok(CovMatrix2 {
        basis,
        m11: a / denom,
        m12: b / denom,
        m22: c / denom,
    })
}

/// `P V P⁻¹`: conjugates `cov` by parallel transport to `to`, written in
/// `canonical_basis(to)`. Returns `cov` unchanged when `to` is its base.
pub fn transport_covariance(cov: &CovMatrix2, to: &SpherePoint) -> Result<CovMatrix2> {
    let from = cov.basis.base;
    let rot = transport_matrix(&from, to)?;
    if rot == nalgebra::Rotation3::identity() {
        return Ok(*cov);
    }
    let target = canonical_basis(to);
    // pull the target axes back into the source plane
    let q1 = cov.basis.components(&(rot.inverse() * target.e1));
    let q2 = cov.basis.components(&(rot.inverse() * target.e2));
    Ok(CovMatrix2 {
        basis: target,
        m11: cov.apply(q1, q1),
        m12: cov.apply(q1, q2),
        m22: cov.apply(q2, q2),
    })
}
