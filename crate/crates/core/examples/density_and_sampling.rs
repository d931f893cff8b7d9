//! Projected normal density, its normalization, and a seeded sample checked against it.

use std::f64::consts::PI;

use projnormal::geometry::SpherePoint;
use projnormal::projnorm::{density, density_at_cosine, sample, ProjNormParams};
use projnormal::quadrature::sphere_integral;

fn main() -> projnormal::Result<()> {
    let mu = SpherePoint::from_spherical(1.0, 0.8)?;
    for lambda in [0.1, 1.0, 10.0] {
        let params = ProjNormParams::new(mu, lambda)?;
        let mass = sphere_integral(
            |theta, phi| {
                density(&params, &SpherePoint::from_spherical(theta, phi).unwrap()).unwrap()
            },
            1e-10,
        );
        println!(
            "λ = {lambda:>5}: p(μ) = {:.6}, p(-μ) = {:.3e}, ∫p dΩ = {mass:.12}",
            density_at_cosine(lambda, 1.0),
            density_at_cosine(lambda, -1.0)
        );
    }

    // histogram of cos(angle to μ) against 2π p(t)
    let lambda = 1.0;
    let params = ProjNormParams::new(mu, lambda)?;
    let pts = sample(&params, 200_000, 2024);
    let bins = 10;
    let mut counts = vec![0usize; bins];
    for p in &pts {
        let t = p.dot(&mu).clamp(-1.0, 1.0);
        let i = (((t + 1.0) / 2.0 * bins as f64) as usize).min(bins - 1);
        counts[i] += 1;
    }
    println!("\n  t-bin centre   empirical   model");
    for (i, c) in counts.iter().enumerate() {
        let t = -1.0 + (i as f64 + 0.5) * 2.0 / bins as f64;
        let empirical = *c as f64 / pts.len() as f64 / (2.0 / bins as f64);
        println!(
            "  {t:>12.2} {empirical:>11.4} {:>7.4}",
            2.0 * PI * density_at_cosine(lambda, t)
        );
    }
    Ok(())
}
