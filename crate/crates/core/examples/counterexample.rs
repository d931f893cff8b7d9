//! An anisotropic normal whose projection is not rotationally symmetric about μ.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};
use projnormal::geometry::SpherePoint;
use projnormal::projnorm::{density_general, GeneralNormalParams};

fn main() -> projnormal::Result<()> {
    let sigma = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.5, 0.0, 0.5, 1.0);
    let params = GeneralNormalParams::new(Vector3::new(0.0, 0.0, 1.0), sigma)?;

    println!("p(θ, φ) against its mirror image under (x, y, z) ↦ (x, −y, z)");
    println!("{:>8} {:>8} {:>12} {:>12}", "θ", "φ", "p(u)", "p(Ru)");
    for (theta, phi) in [
        (PI / 2.0, PI / 6.0),
        (PI / 2.0, PI / 3.0),
        (0.0, PI / 4.0),
        (PI / 4.0, PI / 2.0),
    ] {
        let u = SpherePoint::from_spherical(theta, phi)?;
        let mirrored = SpherePoint::from_cartesian(u.x(), -u.y(), u.z())?;
        println!(
            "{theta:>8.4} {phi:>8.4} {:>12.6} {:>12.6}",
            density_general(&params, &u),
            density_general(&params, &mirrored)
        );
    }
    Ok(())
}
