//! The closed-form finite-cube exponent against a brute-force truncated Fock space
//! simulation of the same two states.

use gauss_ht::finite::FiniteProblem;
use gauss_ht::fock::{SweepCaps, lattice_states};
use gauss_ht::{DiscriminationProblem, SymbolSpec, make_trig_symbol};
use faer::c64;

fn main() -> gauss_ht::Result<()> {
    let q1 = make_trig_symbol(1, [(vec![0], c64::new(1.5, 0.0)), (vec![1], c64::new(0.5, 0.0))], 64)?;
    let problem = DiscriminationProblem::quasi_free(q1, SymbolSpec::constant(1, 2.0)?, 0.5)?;

    for (n, cutoff) in [(1, 80), (2, 40), (3, 20)] {
        let pair = lattice_states(&problem, n, cutoff, SweepCaps::default())?;
        let fp = FiniteProblem::new(&problem, n)?;
        let ns = pair.nussbaum_szkola();
        println!(
            "n={n} cutoff={cutoff} dim={} deficit={:.2e}",
            pair.state1().basis().dim(),
            pair.trace_deficit()
        );
        for t in [0.25, 0.5, 0.75] {
            let exact = fp.psi(t)?.exp();
            let fock = pair.quasi_power_trace(t)?;
            println!(
                "  t={t:<4}  exp(psi_n)={exact:.10}  Fock={fock:.10}  Nussbaum-Szkola={:.10}  gap={:.1e}",
                ns.hellinger(t),
                (exact - fock).abs()
            );
        }
    }
    Ok(())
}
