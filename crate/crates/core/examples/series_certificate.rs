//! Certified series for F′(x) e^{x²/2}: sign of the derivative of the link.

use projnormal::link::{c_coeff, fprime_series, fprime_series_auto, s_of_k, DEFAULT_K_MAX};
use projnormal::projnorm::SQRT_2PI;

fn main() -> projnormal::Result<()> {
    println!("first coefficients c_k:");
    for k in 0..8 {
        println!("  c_{k} = {:+.12e}", c_coeff(k));
    }
    println!("\n2√(2π) S(k) climbs from π towards π²:");
    for k in [3, 5, 11, 51, 201] {
        println!("  k = {k:>3}: {:.12}", 2.0 * SQRT_2PI * s_of_k(k)?);
    }

    println!(
        "\n{:>5} {:>24} {:>10} {:>6}",
        "x", "series", "tail", "terms"
    );
    for x in [0.25, 1.0, 2.0, 3.0, 5.0, 8.0, 10.0] {
        let s = match fprime_series(x, DEFAULT_K_MAX) {
            Ok(s) => s,
            Err(_) => fprime_series_auto(x)?,
        };
        println!(
            "{x:>5} {:>24.16e} {:>10.2e} {:>6}",
            s.value, s.tail_bound, s.k_max
        );
    }
    Ok(())
}
