//! Displacements enter the exponent only through the factor c_{n,t}. The Fock route
//! recovers it as a ratio of quasi-power traces.

use gauss_ht::finite::FiniteProblem;
use gauss_ht::fock::{SweepCaps, lattice_states};
use gauss_ht::{DiscriminationProblem, DisplacementSpec, GaussianStateSpec, SymbolSpec};
use faer::c64;

fn main() -> gauss_ht::Result<()> {
    let kappa = 0.5;
    let q = SymbolSpec::constant(1, 1.0)?;
    let problem = DiscriminationProblem::new(
        GaussianStateSpec::quasi_free(q.clone(), kappa)?,
        GaussianStateSpec::new(q, DisplacementSpec::single(vec![0], c64::new(1.0, 0.0))?, kappa)?,
    )?;
    println!("closed form exp(-1/(2(3+2 sqrt2))) = {:.9}", (-1.0 / (2.0 * (3.0 + 2.0 * 2f64.sqrt()))).exp());
    let fp = FiniteProblem::new(&problem, 1)?;
    let moved = lattice_states(&problem, 1, 120, SweepCaps::default())?;
    let fixed = lattice_states(&problem.without_displacements(), 1, 120, SweepCaps::default())?;
    println!("   t     c_(1,t)        Fock ratio");
    for t in [0.0, 0.25, 0.5, 0.75, 1.0] {
        println!(
            "{t:5.2}   {:.9}   {:.9}",
            fp.displacement_factor(t)?,
            moved.quasi_power_trace(t)? / fixed.quasi_power_trace(t)?
        );
    }
    Ok(())
}
