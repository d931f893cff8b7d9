//! Simulate from a projected normal and recover direction and λ.

use projnormal::estimator::estimate;
use projnormal::geometry::{geodesic_distance, SpherePoint};
use projnormal::projnorm::{sample, sample_uniform, ProjNormParams};

fn main() -> projnormal::Result<()> {
    let direction = SpherePoint::from_spherical(0.5, 1.0)?;
    for (lambda, n) in [
        (0.2, 10_000),
        (1.0, 10_000),
        (1.0, 1_000_000),
        (5.0, 100_000),
    ] {
        let truth = ProjNormParams::new(direction, lambda)?;
        let fit = estimate(&sample(&truth, n, 17))?;
        println!(
            "λ = {lambda:<4} n = {n:>7}: λ̂ = {:.4}, angle error = {:.2e}, Fréchet steps = {}",
            fit.lambda_hat,
            geodesic_distance(&fit.direction_hat, &direction),
            fit.mean_diag.iterations
        );
    }

    let fit = estimate(&sample_uniform(5000, 1))?;
    println!(
        "uniform data: half-trace {:.4}, saturated = {}, λ̂ = {}",
        fit.half_trace, fit.saturated, fit.lambda_hat
    );
    Ok(())
}
