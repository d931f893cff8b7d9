use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rand_distr::StandardNormal;

use super::ProjNormParams;
use crate::geometry::SpherePoint;

/// Draws below this norm are discarded and redrawn.
const MIN_NORM: f64 = 1e-300;

/// Seeded generator used for every simulation in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// `n` independent draws of `pr(X)`, `X ~ N(direction, λ I₃)`.
///
/// Deterministic in `seed`. With `λ = 0` every draw is `direction`.
pub fn sample(params: &ProjNormParams, n: usize, seed: u64) -> Vec<SpherePoint> {
    sample_with_rng(params, n, &mut seeded_rng(seed))
}

pub fn sample_with_rng<R: Rng + ?Sized>(
    params: &ProjNormParams,
    n: usize,
    rng: &mut R,
) -> Vec<SpherePoint> {
    if params.lambda == 0.0 {
        return vec![params.direction; n];
    }
    let mean = params.direction.as_vector();
    let scale = params.lambda.sqrt();
    (0..n)
        .map(|_| loop {
            let z = Vector3::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            );
            let x = mean + scale * z;
            let norm = x.norm();
            if norm >= MIN_NORM {
                break SpherePoint::from_unit_unchecked(x / norm);
            }
        })
        .collect()
}

/// Uniform points on the sphere (normalized standard normals).
pub fn sample_uniform(n: usize, seed: u64) -> Vec<SpherePoint> {
    let mut rng = seeded_rng(seed);
    (0..n)
        .map(|_| loop {
            let z = Vector3::new(
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
                rng.sample::<f64, _>(StandardNormal),
            );
            let norm = z.norm();
            if norm >= MIN_NORM {
                break SpherePoint::from_unit_unchecked(z / norm);
            }
        })
        .collect()
}
