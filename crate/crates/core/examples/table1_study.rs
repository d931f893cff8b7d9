//! Monte Carlo convergence of the half-trace of V̂ to f(λ) as the sample grows.

use projnormal::estimator::{convergence_study, rate_fit};
use projnormal::geometry::SpherePoint;
use projnormal::projnorm::ProjNormParams;

fn main() -> projnormal::Result<()> {
    let truth = ProjNormParams::new(SpherePoint::NORTH_POLE, 1.0)?;
    let study = convergence_study(&truth, &[30, 100, 300, 3000, 10_000], 100, 42)?;
    println!("f(1) = {:.12}", study.f_true);
    println!(
        "{:>6} {:>14} {:>12} {:>14} {:>16}",
        "L", "mean |h − f|", "std error", "rms of mean", "mean |λ̂ − λ|"
    );
    for row in &study.rows {
        println!(
            "{:>6} {:>14.6} {:>12.6} {:>14.6} {:>16.6}",
            row.l, row.mean_abs_error, row.std_error, row.mc_rms_error, row.lambda_mean_abs_error
        );
    }
    println!(
        "log-log slope of mean |h − f| against L: {:.3}",
        rate_fit(&study)?
    );
    Ok(())
}
