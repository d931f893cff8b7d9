//! Exponential and logarithm maps, geodesic distance and parallel transport on S².

use projnormal::geometry::{
    canonical_basis, exp_map, geodesic_distance, log_map, parallel_transport, SpherePoint,
    TangentVector,
};

fn main() -> projnormal::Result<()> {
    let p = SpherePoint::from_spherical(0.3, 1.1)?;
    let q = SpherePoint::from_spherical(2.0, 0.4)?;

    let v = log_map(&p, &q)?;
    println!("p = {:?}", p.as_vector().as_slice());
    println!("q = {:?}", q.as_vector().as_slice());
    println!("d(p, q)        = {:.15}", geodesic_distance(&p, &q));
    println!("|log_p(q)|     = {:.15}", v.norm());
    println!(
        "exp_p(log_p q) - q = {:.2e}",
        (exp_map(&v).as_vector() - q.as_vector()).amax()
    );

    let basis = canonical_basis(&p);
    let a = TangentVector::new(basis, 0.7, -0.2);
    let b = TangentVector::new(basis, 0.1, 0.5);
    let ta = parallel_transport(&p, &q, &a)?;
    let tb = parallel_transport(&p, &q, &b)?;
    println!("<a, b> at p    = {:.15}", a.dot(&b));
    println!("<Pa, Pb> at q  = {:.15}", ta.dot(&tb));
    println!("Pa · q         = {:.2e}", ta.ambient().dot(q.as_vector()));

    // near-antipodal pairs keep full precision
    let r = SpherePoint::from_cartesian(-p.x(), -p.y(), -p.z() + 1e-9)?;
    println!("d(p, ≈-p)      = {:.15}", geodesic_distance(&p, &r));
    Ok(())
}
