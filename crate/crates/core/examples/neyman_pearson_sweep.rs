//! Optimal-test error probabilities on small cubes, compared with the Audenaert
//! upper bound and with the asymptotic rate.

use gauss_ht::asymptotics::{AsymptoticProblem, QuadratureRule};
use gauss_ht::fock::{SweepCaps, error_exponent_sweep};
use gauss_ht::{DiscriminationProblem, SymbolSpec};

fn main() -> gauss_ht::Result<()> {
    let problem = DiscriminationProblem::quasi_free(SymbolSpec::constant(1, 1.0)?, SymbolSpec::constant(1, 2.0)?, 0.5)?;
    let asym = AsymptoticProblem::new(&problem, QuadratureRule::default_for(1)?)?;
    for a in [0.0, 0.05] {
        println!("a = {a}: asymptotic rate phi(a) = {:.6}", asym.polar(a)?);
        println!("  n  alpha      beta       e          -log(e)/n  Audenaert  deficit");
        for r in error_exponent_sweep(&problem, &[1, 2, 3], 25, a, SweepCaps::default())? {
            println!(
                "  {}  {:.6}   {:.6}   {:.6}   {:.6}   {:.6}   {:.1e}",
                r.n, r.alpha, r.beta, r.e, r.exponent, r.audenaert, r.trace_deficit
            );
        }
    }
    Ok(())
}
