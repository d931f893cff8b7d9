//! The link f(λ), its inverse, and a link table written as CSV.

use projnormal::link::{f_of_lambda, invert_f, LinkTable, F_BOUND};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{:>10} {:>22} {:>22}", "λ", "f(λ)", "f⁻¹(f(λ))");
    for lambda in [1e-4, 1e-2, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0] {
        let f = f_of_lambda(lambda)?;
        println!("{lambda:>10} {f:>22.16} {:>22.16}", invert_f(f)?);
    }
    println!("sup f = (π²−4)/4 = {F_BOUND:.16}");
    println!(
        "f⁻¹ near the bound: {:?}",
        invert_f(F_BOUND - 1e-12).map(|l| l > 1e6)
    );

    let grid = LinkTable::grid(0.01, 100.0, 9, true)?;
    let table = LinkTable::build(&grid)?;
    println!();
    table.write_csv(std::io::stdout().lock())?;
    Ok(())
}
