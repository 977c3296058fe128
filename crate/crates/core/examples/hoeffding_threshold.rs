//! Hoeffding exponents through the Legendre transform of psi: for each rate r the
//! threshold a_r solves phi(a) - a = r, and H(r) = phi(a_r). Finite cubes take the
//! total rate, so the 32-site column is evaluated at 32 r.

use gauss_ht::asymptotics::{AsymptoticProblem, QuadratureRule};
use gauss_ht::finite::FiniteProblem;
use gauss_ht::{DiscriminationProblem, SymbolSpec, make_trig_symbol};
use faer::c64;

fn main() -> gauss_ht::Result<()> {
    let q1 = make_trig_symbol(1, [(vec![0], c64::new(1.0, 0.0)), (vec![1], c64::new(0.25, 0.25))], 64)?;
    let problem = DiscriminationProblem::quasi_free(q1, SymbolSpec::constant(1, 2.0)?, 0.5)?;
    let asym = AsymptoticProblem::new(&problem, QuadratureRule::default_for(1)?)?;
    let d21 = -asym.dpsi_right0()?;
    println!("d12 = {:.8}  d21 = {d21:.8}", asym.dpsi_left1()?);
    println!("   r      a_r          phi(a_r)     H(r)        H_32(32r)/32");
    let fp = FiniteProblem::new(&problem, 32)?;
    for r in [0.0, 0.02, 0.05, 0.1, 0.15] {
        let a = asym.hoeffding_threshold(r)?;
        println!(
            "{r:5.2}   {a:+.8}  {:.8}   {:.8}  {:.8}",
            asym.polar(a)?,
            asym.mean_hoeffding(r)?,
            fp.hoeffding(32.0 * r)? / 32.0
        );
    }
    Ok(())
}
