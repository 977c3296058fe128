//! Optimal-test error probabilities for lattice problems on small cubes.

use std::sync::Arc;

use super::basis::{DEFAULT_BASIS_CAP, build_basis_with_cap};
use super::state::{FockPair, TruncatedFockState, gaussian_density};
use crate::error::Result;
use crate::finite::FiniteStateData;
use crate::finite::FiniteProblem;
use crate::lattice::DEFAULT_DENSE_CAP;
use crate::symbols::DiscriminationProblem;

/// One cube size in an error-exponent sweep.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SweepRow {
    pub n: usize,
    pub sites: usize,
    pub alpha: f64,
    pub beta: f64,
    pub e: f64,
    /// `−log(e) / n^ν`.
    pub exponent: f64,
    pub trace_deficit: f64,
    /// `min_t e^{−t n^ν a} Tr ρ₁^t ρ₂^{1−t}`.
    pub audenaert: f64,
}

/// Caps used when building lattice states in Fock space.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SweepCaps {
    pub dense: usize,
    pub basis: usize,
}

impl Default for SweepCaps {
    fn default() -> Self {
        Self {
            dense: DEFAULT_DENSE_CAP,
            basis: DEFAULT_BASIS_CAP,
        }
    }
}

/// Both hypotheses restricted to `C_n` and realized on `n^ν` modes with cutoff `M`.
pub fn lattice_states(problem: &DiscriminationProblem, n: usize, cutoff: usize, caps: SweepCaps) -> Result<FockPair> {
    let fp = FiniteProblem::with_cap(problem, n, caps.dense)?;
    let basis = Arc::new(build_basis_with_cap(fp.sites(), cutoff, caps.basis)?);
    let kappa = problem.kappa();
    let realize = |data: &FiniteStateData| -> Result<TruncatedFockState> {
        gaussian_density(&data.r, data.log_n, Arc::clone(&basis))?.displaced(&data.y, kappa)
    };
    FockPair::new(realize(fp.state1())?, realize(fp.state2())?)
}

/// Neyman–Pearson errors and exponents for each `n` in `n_list`.
pub fn error_exponent_sweep(
    problem: &DiscriminationProblem,
    n_list: &[usize],
    cutoff: usize,
    a: f64,
    caps: SweepCaps,
) -> Result<Vec<SweepRow>> {
    n_list
        .iter()
        .map(|&n| {
            let pair = lattice_states(problem, n, cutoff, caps)?;
            let sites = pair.state1().basis().modes();
            let scale = sites as f64;
            let np = pair.neyman_pearson(a, scale)?;
            Ok(SweepRow {
                n,
                sites,
                alpha: np.alpha,
                beta: np.beta,
                e: np.e,
                exponent: -np.e.ln() / scale,
                trace_deficit: np.trace_deficit,
                audenaert: pair.audenaert_bound(a, scale)?,
            })
        })
        .collect()
}
