//! Riemannian primitives on the unit sphere S² ⊂ ℝ³.
//!
//! Points are stored as Cartesian unit vectors. Spherical coordinates follow
//! the physics convention used throughout the crate:
//!
//! ```text
//! x = cos θ sin φ,   y = sin θ sin φ,   z = cos φ,
//! θ ∈ [0, 2π) azimuth,   φ ∈ [0, π] polar angle.
//! ```
//!
//! Tangent vectors carry an explicit orthonormal basis of the tangent plane so
//! that quantities living in different tangent spaces (covariances before and
//! after transport, say) can never be mixed up silently.

use std::f64::consts::{PI, TAU};

use nalgebra::{Rotation3, Unit, Vector3};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Angles and tangent norms below this are treated as zero.
pub const ZERO_EPS: f64 = 1e-12;

/// A point on the unit sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "Cartesian", try_from = "Cartesian")]
pub struct SpherePoint(Vector3<f64>);

#[derive(Serialize, Deserialize)]
struct Cartesian {
    x: f64,
    y: f64,
    z: f64,
}

impl From<SpherePoint> for Cartesian {
    fn from(p: SpherePoint) -> Self {
        Cartesian {
            x: p.x(),
            y: p.y(),
            z: p.z(),
        }
    }
}

impl TryFrom<Cartesian> for SpherePoint {
    type Error = Error;

    fn try_from(c: Cartesian) -> Result<Self> {
        SpherePoint::from_nearly_unit(Vector3::new(c.x, c.y, c.z))
    }
}

impl SpherePoint {
    pub const NORTH_POLE: SpherePoint = SpherePoint(Vector3::new(0.0, 0.0, 1.0));

    /// Point at azimuth `theta` and polar angle `phi` (radians).
    ///
    /// `theta` is reduced modulo 2π; `phi` must lie in [0, π].
    pub fn from_spherical(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::NonFinite("from_spherical"));
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(Error::Domain(format!("polar angle {phi} outside [0, π]")));
        }
        let theta = theta.rem_euclid(TAU);
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Ok(SpherePoint(Vector3::new(ct * sp, st * sp, cp)))
    }

    /// Radial projection of an arbitrary Cartesian triple onto the sphere.
    pub fn from_cartesian(x: f64, y: f64, z: f64) -> Result<Self> {
        project(&Vector3::new(x, y, z))
    }

    /// Wraps a vector that is already unit length, without renormalizing.
    ///
    /// Callers must guarantee `‖v‖ = 1` to working precision.
    pub(crate) fn from_unit_unchecked(v: Vector3<f64>) -> Self {
        SpherePoint(v)
    }

    /// Like [`SpherePoint::from_cartesian`], but keeps `v` bit-for-bit when
    /// its norm is already 1 to within a few ulps, so serialized points
    /// round-trip exactly.
    pub fn from_nearly_unit(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if norm.is_finite() && (norm - 1.0).abs() <= 4.0 * f64::EPSILON {
            Ok(SpherePoint(v))
        } else {
            project(&v)
        }
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn x(&self) -> f64 {
        self.0.x
    }

    pub fn y(&self) -> f64 {
        self.0.y
    }

    pub fn z(&self) -> f64 {
        self.0.z
    }

    /// Azimuth in [0, 2π). Zero at the poles.
    pub fn theta(&self) -> f64 {
        if self.0.x == 0.0 && self.0.y == 0.0 {
            return 0.0;
        }
        self.0.y.atan2(self.0.x).rem_euclid(TAU)
    }

    /// Polar angle in [0, π].
    pub fn phi(&self) -> f64 {
        self.0.xy().norm().atan2(self.0.z)
    }

    /// `(theta, phi)`.
    pub fn to_spherical(&self) -> (f64, f64) {
        (self.theta(), self.phi())
    }

    pub fn antipode(&self) -> SpherePoint {
        SpherePoint(-self.0)
    }

    pub fn dot(&self, other: &SpherePoint) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn rotated(&self, rotation: &Rotation3<f64>) -> SpherePoint {
        SpherePoint(rotation * self.0)
    }
}

/// `pr(x) = x / ‖x‖`, defined on ℝ³ ∖ {0}.
pub fn project(v: &Vector3<f64>) -> Result<SpherePoint> {
    if !v.iter().all(|c| c.is_finite()) {
        return Err(Error::NonFinite("project"));
    }
    let norm = v.norm();
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    Ok(SpherePoint(v / norm))
}

/// Great-circle distance in [0, π].
///
/// Evaluated as `atan2(‖p × q‖, p · q)`, which keeps full relative precision
/// both for nearby and for nearly antipodal points.
pub fn geodesic_distance(p: &SpherePoint, q: &SpherePoint) -> f64 {
    let cross = p.0.cross(&q.0).norm();
    let dot = p.0.dot(&q.0).clamp(-1.0, 1.0);
    cross.atan2(dot)
}

/// Orthonormal basis `{e1, e2}` of the tangent plane at `base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentBasis {
    pub base: SpherePoint,
    #[serde(with = "vec3")]
    pub e1: Vector3<f64>,
    #[serde(with = "vec3")]
    pub e2: Vector3<f64>,
}

impl TangentBasis {
    /// The same tangent plane with both axes rotated by `angle` (radians).
    pub fn rotated(&self, angle: f64) -> TangentBasis {
        let (s, c) = angle.sin_cos();
        TangentBasis {
            base: self.base,
            e1: c * self.e1 + s * self.e2,
            e2: -s * self.e1 + c * self.e2,
        }
    }

    /// Components of an ambient vector in this basis (normal part dropped).
    pub fn components(&self, v: &Vector3<f64>) -> (f64, f64) {
        (v.dot(&self.e1), v.dot(&self.e2))
    }
}

/// Deterministic basis of `T_base S²`.
///
/// `e1` is the Gram–Schmidt orthogonalization of the coordinate axis least
/// aligned with `base` (ties go to the lower axis index), `e2 = base × e1`.
/// At the north pole this gives `{(1,0,0), (0,1,0)}`.
pub fn canonical_basis(base: &SpherePoint) -> TangentBasis {
    let p = base.0;
    let mut axis = 0;
    for i in 1..3 {
        if p[i].abs() < p[axis].abs() {
            axis = i;
        }
    }
    let mut a = Vector3::zeros();
    a[axis] = 1.0;
    let e1 = (a - p[axis] * p).normalize();
    let e2 = p.cross(&e1).normalize();
    TangentBasis {
        base: *base,
        e1,
        e2,
    }
}

/// A tangent vector `c1·e1 + c2·e2` at `basis.base`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentVector {
    pub basis: TangentBasis,
    pub c1: f64,
    pub c2: f64,
}

impl TangentVector {
    pub fn new(basis: TangentBasis, c1: f64, c2: f64) -> Self {
        TangentVector { basis, c1, c2 }
    }

    pub fn zero(basis: TangentBasis) -> Self {
        TangentVector::new(basis, 0.0, 0.0)
    }

    /// Tangential part of an ambient vector, expressed in `basis`.
    pub fn from_ambient(basis: TangentBasis, v: &Vector3<f64>) -> Self {
        let (c1, c2) = basis.components(v);
        TangentVector::new(basis, c1, c2)
    }

    pub fn base(&self) -> &SpherePoint {
        &self.basis.base
    }

    pub fn ambient(&self) -> Vector3<f64> {
        self.c1 * self.basis.e1 + self.c2 * self.basis.e2
    }

    pub fn norm(&self) -> f64 {
        self.c1.hypot(self.c2)
    }

    pub fn dot(&self, other: &TangentVector) -> f64 {
        self.ambient().dot(&other.ambient())
    }

    /// Re-expresses the vector in another basis of the same tangent plane.
    pub fn express_in(&self, basis: &TangentBasis) -> TangentVector {
        TangentVector::from_ambient(*basis, &self.ambient())
    }

    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector::new(self.basis, s * self.c1, s * self.c2)
    }
}

/// Riemannian logarithm `log_base(q)`, expressed in `canonical_basis(base)`.
///
/// The antipode of `base` is the cut locus and is rejected.
pub fn log_map(base: &SpherePoint, q: &SpherePoint) -> Result<TangentVector> {
    log_map_in(&canonical_basis(base), q)
}

/// Riemannian logarithm at `basis.base`, expressed in `basis`.
pub fn log_map_in(basis: &TangentBasis, q: &SpherePoint) -> Result<TangentVector> {
    let p = basis.base.0;
    let dot = p.dot(&q.0).clamp(-1.0, 1.0);
    let tangent = q.0 - dot * p;
    let sin = tangent.norm();
    let angle = sin.atan2(dot);
    if angle < ZERO_EPS {
        return Ok(TangentVector::zero(*basis));
    }
    if sin < ZERO_EPS {
        return Err(Error::Antipodal);
    }
    let v = tangent * (angle / sin);
    Ok(TangentVector::from_ambient(*basis, &v))
}

/// Riemannian exponential `exp_{v.base}(v)`.
pub fn exp_map(v: &TangentVector) -> SpherePoint {
    let p = v.basis.base.0;
    let t = v.norm();
    if t < ZERO_EPS {
        return v.basis.base;
    }
    let dir = v.ambient() / t;
    let out = t.cos() * p + t.sin() * dir;
    SpherePoint(out.normalize())
}

fn transport_rotation(from: &SpherePoint, to: &SpherePoint) -> Result<Option<Rotation3<f64>>> {
    let axis = from.0.cross(&to.0);
    let sin = axis.norm();
    let angle = sin.atan2(from.0.dot(&to.0));
    if angle < ZERO_EPS {
        return Ok(None);
    }
    if sin < ZERO_EPS {
        return Err(Error::Antipodal);
    }
    Ok(Some(Rotation3::from_axis_angle(
        &Unit::new_unchecked(axis / sin),
        angle,
    )))
}

/// Parallel transport of `v` from `from` to `to` along the minimizing geodesic.
///
/// On the sphere this is the rotation about `from × to` by the geodesic angle.
/// The result is expressed in `canonical_basis(to)`; when the endpoints
/// coincide `v` is returned unchanged.
pub fn parallel_transport(
    from: &SpherePoint,
    to: &SpherePoint,
    v: &TangentVector,
) -> Result<TangentVector> {
    match transport_rotation(from, to)? {
        None => Ok(*v),
        Some(rot) => Ok(TangentVector::from_ambient(
            canonical_basis(to),
            &(rot * v.ambient()),
        )),
    }
}

/// The 3×3 rotation that realizes transport from `from` to `to`
/// (identity if they coincide).
pub fn transport_matrix(from: &SpherePoint, to: &SpherePoint) -> Result<Rotation3<f64>> {
    Ok(transport_rotation(from, to)?.unwrap_or_else(Rotation3::identity))
}

mod vec3 {
    use nalgebra::Vector3;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(v: &Vector3<f64>, s: S) -> Result<S::Ok, S::Error> {
        [v.x, v.y, v.z].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vector3<f64>, D::Error> {
        let a = <[f64; 3]>::deserialize(d)?;
        Ok(Vector3::new(a[0], a[1], a[2]))
    }
}
