//! Fréchet mean and intrinsic covariance of a sample, and their transport.

use projnormal::frechet::{
    empirical_covariance, frechet_mean_traced, transport_covariance, DEFAULT_MAX_ITER, DEFAULT_TOL,
};
use projnormal::geometry::{geodesic_distance, SpherePoint};
use projnormal::projnorm::{sample, ProjNormParams};

fn main() -> projnormal::Result<()> {
    let truth = ProjNormParams::new(SpherePoint::from_spherical(-2.0, 2.3)?, 0.5)?;
    let pts = sample(&truth, 20_000, 9);

    let (m, trace) = frechet_mean_traced(&pts, DEFAULT_TOL, DEFAULT_MAX_ITER)?;
    for (it, objective) in trace.iter().enumerate() {
        println!("iterate {it:>2}: Σ d² = {objective:.9}");
    }
    println!(
        "converged = {} after {} steps, distance to μ = {:.4}",
        m.converged,
        m.iterations,
        geodesic_distance(&m.mean, &truth.direction)
    );

    let cov = empirical_covariance(&pts, &m.mean)?;
    let [l1, l2] = cov.eigenvalues();
    println!(
        "V̂ = [[{:.5}, {:.5}], [{:.5}, {:.5}]]",
        cov.m11, cov.m12, cov.m12, cov.m22
    );
    println!(
        "eigenvalues {l1:.5}, {l2:.5}; trace/2 = {:.5}",
        cov.trace() / 2.0
    );

    let moved = transport_covariance(&cov, &SpherePoint::NORTH_POLE)?;
    println!(
        "transported to the north pole: trace {:.12} (was {:.12})",
        moved.trace(),
        cov.trace()
    );
    Ok(())
}
