use nalgebra::{Matrix3, Vector3};
use serde::{Deserialize, Serialize};

use super::mills::scaled_mills_ratio;
use crate::error::{Error, Result};
use crate::geometry::{project, SpherePoint};

/// (1/(2π))^{3/2}
const INV_2PI_POW_1_5: f64 = 0.063_493_635_934_240_97;

/// Isotropic projected-normal model after removing the unidentifiable scale:
/// `X/‖μ‖ ~ N(direction, λ I₃)` with `λ = σ²/‖μ‖²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjNormParams {
    pub direction: SpherePoint,
    pub lambda: f64,
}

impl ProjNormParams {
    pub fn new(direction: SpherePoint, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() {
            return Err(Error::NonFinite("ProjNormParams::new"));
        }
        if lambda < 0.0 {
            return Err(Error::Domain(format!("lambda must be >= 0, got {lambda}")));
        }
        Ok(ProjNormParams { direction, lambda })
    }

    /// Identifiable parameters of `N(mu, sigma² I₃)`.
    pub fn from_normal(mu: &Vector3<f64>, sigma: f64) -> Result<Self> {
        let direction = project(mu)?;
        let ratio = sigma / mu.norm();
        ProjNormParams::new(direction, ratio * ratio)
    }
}

/// `N(mu, sigma)` in ℝ³ with an arbitrary SPD covariance.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralNormalParams {
    mu: Vector3<f64>,
    sigma: Matrix3<f64>,
    sigma_inv: Matrix3<f64>,
    det: f64,
}

impl GeneralNormalParams {
    pub fn new(mu: Vector3<f64>, sigma: Matrix3<f64>) -> Result<Self> {
        if !mu.iter().chain(sigma.iter()).all(|v| v.is_finite()) {
            return Err(Error::NonFinite("GeneralNormalParams::new"));
        }
        if (sigma - sigma.transpose()).amax() > 1e-12 {
            return Err(Error::Domain("covariance is not symmetric".into()));
        }
        let chol = sigma.cholesky().ok_or(Error::Singular)?;
        let det = chol.determinant();
        if det <= 0.0 {
            return Err(Error::Singular);
        }
        Ok(GeneralNormalParams {
            mu,
            sigma,
            sigma_inv: chol.inverse(),
            det,
        })
    }

    pub fn isotropic(mu: Vector3<f64>, variance: f64) -> Result<Self> {
        GeneralNormalParams::new(mu, Matrix3::identity() * variance)
    }

    pub fn mu(&self) -> &Vector3<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &Matrix3<f64> {
        &self.sigma
    }
}

/// Shared tail of both densities: `D + (D² + 1)·R(D)` times `e^{C}`, with
/// `C ≤ −D²/2` folded into the ratio so nothing overflows.
pub(crate) fn shape_factor(d: f64, c: f64) -> f64 {
    d * c.exp() + (d * d + 1.0) * scaled_mills_ratio(d, -c)
}

/// Density of `pr(X)`, `X ~ N(μ, Σ)`, per unit solid angle at `u`:
///
/// ```text
/// p(u) = (1/(2πA))^{3/2} |Σ|^{−1/2} e^{C} (D + D² R(D) + R(D)),
/// A = uᵀΣ⁻¹u,  B = uᵀΣ⁻¹μ,  C = −½ μᵀΣ⁻¹μ,  D = B/√A,
/// ```
///
/// with `R = Φ/φ` from [`super::mills_ratio`].
pub fn density_general(params: &GeneralNormalParams, u: &SpherePoint) -> f64 {
    let u = u.as_vector();
    let si_u = params.sigma_inv * u;
    let a = u.dot(&si_u);
    let b = si_u.dot(&params.mu);
    let c = -0.5 * params.mu.dot(&(params.sigma_inv * params.mu));
    let d = b / a.sqrt();
    (1.0 / (2.0 * std::f64::consts::PI * a)).powf(1.5) / params.det.sqrt() * shape_factor(d, c)
}

/// Isotropic projected-normal density. With `c = u·direction`, `D = c/√λ`:
///
/// ```text
/// p(u) = (1/(2π))^{3/2} e^{−1/(2λ)} (D + (D² + 1) R(D)).
/// ```
///
/// Depends on `u` only through `c`. `λ = 0` is a point mass and has no density.
pub fn density(params: &ProjNormParams, u: &SpherePoint) -> Result<f64> {
    if params.lambda <= 0.0 {
        return Err(Error::Domain(
            "density undefined for lambda = 0 (point mass)".into(),
        ));
    }
    Ok(density_at_cosine(params.lambda, u.dot(&params.direction)))
}

/// The isotropic density as a function of `cos` of the angle to the mean direction.
pub fn density_at_cosine(lambda: f64, cos: f64) -> f64 {
    let d = cos / lambda.sqrt();
    INV_2PI_POW_1_5 * shape_factor(d, -0.5 / lambda)
}
