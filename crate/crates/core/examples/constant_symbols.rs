//! Two thermal lattice states with constant symbols: exponents per site and their
//! finite-cube counterparts, which scale exactly with the number of sites.

use gauss_ht::asymptotics::{AsymptoticProblem, QuadratureRule};
use gauss_ht::finite::{Direction, FiniteProblem};
use gauss_ht::{DiscriminationProblem, SymbolSpec};

fn main() -> gauss_ht::Result<()> {
    let problem = DiscriminationProblem::quasi_free(SymbolSpec::constant(1, 1.0)?, SymbolSpec::constant(1, 2.0)?, 0.5)?;
    let asym = AsymptoticProblem::new(&problem, QuadratureRule::default_for(1)?)?;

    let (chernoff, t_star) = asym.mean_chernoff()?;
    println!("psi(1/2)        = {:.12}", asym.psi(0.5)?);
    println!("-log(sqrt6-sqrt2) = {:.12}", -(6f64.sqrt() - 2f64.sqrt()).ln());
    println!("mean Chernoff   = {chernoff:.10} at t* = {t_star:.6}");
    println!("D(1||2) / site  = {:.10}", asym.dpsi_left1()?);
    println!("D(2||1) / site  = {:.10}", -asym.dpsi_right0()?);

    println!("\n n   psi_n(1/2)/n      D12_n/n");
    for n in [1, 2, 4, 8] {
        let fp = FiniteProblem::new(&problem, n)?;
        println!(
            "{n:2}   {:.12}   {:.12}",
            fp.psi(0.5)? / n as f64,
            fp.relative_entropy(Direction::OneTwo)? / n as f64
        );
    }
    Ok(())
}
