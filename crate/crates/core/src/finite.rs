//! Closed-form quantities on the finite cube `C_n`.
//!
//! All quantities derive from the restricted symbol `Q⁽ⁿ⁾`; the contraction `R` is built
//! from `Q⁽ⁿ⁾` and is not the restriction of the infinite-volume `R`.

use faer::c64;

use crate::calculus::{EigenSystem, KERNEL_FLOOR, eigh, eigvalsh, sandwich_power_eig, trace_product};
use crate::error::{Error, Result};
use crate::lattice::{DEFAULT_DENSE_CAP, HermitianMatrix, SiteIndexer, restrict_displacement, restrict_symbol_with_cap};
use crate::optimize::{maximize, minimize};
use crate::symbols::{DiscriminationProblem, GaussianStateSpec};

/// Hoeffding objectives are evaluated on `[0, 1 − HOEFFDING_EDGE]`.
pub const HOEFFDING_EDGE: f64 = 1e-6;
/// `W_{n,t}` counts as not trace class once its top eigenvalue reaches `1 − W_EDGE`.
pub const W_EDGE: f64 = 1e-12;

/// Restriction of one hypothesis to `C_n`.
#[derive(Debug, Clone)]
pub struct FiniteStateData {
    pub n: usize,
    pub q: HermitianMatrix,
    pub r: HermitianMatrix,
    /// `log N = −Tr log(I + Q)`.
    pub log_n: f64,
    pub y: Vec<c64>,
    /// Symbol identically zero.
    pub vacuum: bool,
    q_eig: EigenSystem,
    r_eig: EigenSystem,
}

impl FiniteStateData {
    /// Eigensystem of `Q⁽ⁿ⁾`.
    pub fn q_eig(&self) -> &EigenSystem {
        &self.q_eig
    }

    /// Eigensystem of `R` (same eigenvectors as `Q⁽ⁿ⁾`).
    pub fn r_eig(&self) -> &EigenSystem {
        &self.r_eig
    }

    /// `Tr log(I + Q)`.
    pub fn trace_log_one_plus_q(&self) -> f64 {
        -self.log_n
    }
}

/// Build `Q⁽ⁿ⁾`, `R = Q(Q+I)⁻¹`, `log N` and `P_n y` with the default dense cap.
pub fn build_state_data(state: &GaussianStateSpec, n: usize) -> Result<FiniteStateData> {
    build_state_data_with_cap(state, n, DEFAULT_DENSE_CAP)
}

pub fn build_state_data_with_cap(state: &GaussianStateSpec, n: usize, cap: usize) -> Result<FiniteStateData> {
    let indexer = SiteIndexer::with_cap(state.symbol.dim(), n, cap)?;
    let q = restrict_symbol_with_cap(&state.symbol, n, cap)?;
    let q_eig = eigh(&q)?;
    if q_eig.min_value() <= -crate::calculus::NEGATIVE_CLIP {
        return Err(Error::domain(format!(
            "restricted symbol has negative eigenvalue {}",
            q_eig.min_value()
        )));
    }
    let to_r = |s: f64| {
        let s = s.max(0.0);
        s / (1.0 + s)
    };
    let r = q_eig.apply(to_r)?;
    let r_eig = q_eig.map_values(to_r);
    let log_n = -q_eig.trace_fn(|s| s.max(0.0).ln_1p())?;
    Ok(FiniteStateData {
        n,
        q,
        r,
        log_n,
        y: restrict_displacement(&state.displacement, &indexer),
        vacuum: state.symbol.is_vacuum(),
        q_eig,
        r_eig,
    })
}

/// Which relative entropy to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum Direction {
    /// `D(ρ₁ ∥ ρ₂)`.
    #[serde(rename = "1||2")]
    OneTwo,
    /// `D(ρ₂ ∥ ρ₁)`.
    #[serde(rename = "2||1")]
    TwoOne,
}

/// Both hypotheses restricted to one cube, shared across all `t` evaluations.
#[derive(Debug, Clone)]
pub struct FiniteProblem {
    n: usize,
    kappa: f64,
    strict: bool,
    same_displacement: bool,
    /// `Q₁⁽ⁿ⁾ = Q₂⁽ⁿ⁾` entrywise, so `W_{n,t} = R` for every `t`.
    identical: bool,
    s1: FiniteStateData,
    s2: FiniteStateData,
    /// `ȳ⁽ⁿ⁾ = P_n(y₂ − y₁)`.
    ybar: Vec<c64>,
}

impl FiniteProblem {
    pub fn new(problem: &DiscriminationProblem, n: usize) -> Result<Self> {
        Self::with_cap(problem, n, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(problem: &DiscriminationProblem, n: usize, cap: usize) -> Result<Self> {
        let s1 = build_state_data_with_cap(&problem.state1, n, cap)?;
        let s2 = build_state_data_with_cap(&problem.state2, n, cap)?;
        let ybar = s1.y.iter().zip(&s2.y).map(|(a, b)| b - a).collect();
        let identical = s1.q.as_mat() == s2.q.as_mat();
        Ok(Self {
            identical,
            n,
            kappa: problem.kappa(),
            strict: problem.strict_positivity_required(),
            same_displacement: problem.state1.displacement == problem.state2.displacement,
            s1,
            s2,
            ybar,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of sites `n^ν`.
    pub fn sites(&self) -> usize {
        self.s1.q.size()
    }

    pub fn state1(&self) -> &FiniteStateData {
        &self.s1
    }

    pub fn state2(&self) -> &FiniteStateData {
        &self.s2
    }

    pub fn relative_displacement(&self) -> &[c64] {
        &self.ybar
    }

    fn ybar_is_zero(&self) -> bool {
        self.ybar.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    fn swapped(&self) -> Self {
        Self {
            n: self.n,
            kappa: self.kappa,
            strict: self.strict,
            same_displacement: self.same_displacement,
            identical: self.identical,
            s1: self.s2.clone(),
            s2: self.s1.clone(),
            ybar: self.ybar.iter().map(|z| -z).collect(),
        }
    }

    /// `log c_{n,t}`.
    pub fn log_displacement_factor(&self, t: f64) -> Result<f64> {
        check_unit(t)?;
        if self.ybar_is_zero() {
            return Ok(0.0);
        }
        let form = if t == 0.0 {
            if !self.s1.vacuum {
                return Ok(0.0);
            }
            // ⟨(A₂ + I)⁻¹ȳ, ȳ⟩ with A₂ + I = 2(I + Q₂)
            self.s2.q_eig.quadratic_form(&self.ybar, |q| 1.0 / (2.0 * (1.0 + q)))?
        } else if t == 1.0 {
            if !self.s2.vacuum {
                return Ok(0.0);
            }
            self.s1.q_eig.quadratic_form(&self.ybar, |q| 1.0 / (2.0 * (1.0 + q)))?
        } else {
            let f1 = self.s1.q_eig.apply(|q| f_of_q(q, t))?;
            let f2 = self.s2.q_eig.apply(|q| f_of_q(q, 1.0 - t))?;
            let bracket = eigh(&f1.add(&f2))?;
            if bracket.min_value() <= 0.0 {
                return Err(Error::domain(format!(
                    "displacement bracket is singular (eigenvalue {})",
                    bracket.min_value()
                )));
            }
            bracket.quadratic_form(&self.ybar, |l| 1.0 / l)?
        };
        Ok(-2.0 * self.kappa * form)
    }

    /// `c_{n,t} ∈ (0, 1]`.
    pub fn displacement_factor(&self, t: f64) -> Result<f64> {
        Ok(self.log_displacement_factor(t)?.exp())
    }

    /// Eigenvalues of `W_{n,t}` (ascending).
    pub fn w_eigenvalues(&self, t: f64) -> Result<Vec<f64>> {
        let w = sandwich_power_eig(&self.s1.r_eig, &self.s2.r_eig, t)?;
        eigvalsh(&w)
    }

    fn trace_terms(&self, t: f64) -> Result<f64> {
        if self.identical {
            return Ok(0.0);
        }
        let w = self.w_eigenvalues(t)?;
        let top = w.last().copied().unwrap_or(0.0);
        if top >= 1.0 - W_EDGE {
            return Err(Error::NotTraceClass { max_eigenvalue: top });
        }
        let log_det: f64 = w.iter().map(|&x| (-x.max(0.0)).ln_1p()).sum();
        Ok(-t * self.s1.trace_log_one_plus_q() - (1.0 - t) * self.s2.trace_log_one_plus_q() - log_det)
    }

    /// `ψₙ(t) = log Tr ρ₁^t ρ₂^{1−t}` for `t ∈ [0, 1]`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        check_unit(t)?;
        let traces = self.trace_terms(t).map_err(|e| match e {
            Error::NotTraceClass { max_eigenvalue } => {
                Error::domain(format!("W has eigenvalue {max_eigenvalue} ≥ 1 inside [0, 1]"))
            }
            other => other,
        })?;
        Ok(self.log_displacement_factor(t)? + traces)
    }

    /// `ψₙ(t)` for any real `t` when both hypotheses carry the same displacement.
    pub fn psi_extended(&self, t: f64) -> Result<f64> {
        if !self.same_displacement {
            return Err(Error::DisplacementMismatch);
        }
        if !t.is_finite() {
            return Err(Error::invalid(format!("non-finite t = {t}")));
        }
        self.trace_terms(t)
    }

    /// Chernoff distance `−min_{[0,1]} ψₙ` and the minimizing `t`.
    pub fn chernoff(&self) -> Result<(f64, f64)> {
        let (t, v) = minimize(0.0, 1.0, |t| self.psi(t))?;
        Ok(((-v).max(0.0), t))
    }

    /// `D(ρ₁∥ρ₂)` or `D(ρ₂∥ρ₁)` on the cube.
    pub fn relative_entropy(&self, direction: Direction) -> Result<f64> {
        if !self.strict {
            return Err(Error::StrictPositivityRequired);
        }
        let (a, b) = match direction {
            Direction::OneTwo => (&self.s1, &self.s2),
            Direction::TwoOne => (&self.s2, &self.s1),
        };
        let q_log_ra = a.q_eig.trace_fn(|q| if q > 0.0 { q * (q / (1.0 + q)).ln() } else { 0.0 })?;
        let log_rb = b.r_eig.apply(f64::ln)?;
        let q_log_rb = trace_product(a.q.as_mat(), log_rb.as_mat()).re;
        // Tr log(I − R) = −Tr log(I + Q)
        let value = q_log_ra - q_log_rb - a.trace_log_one_plus_q() + b.trace_log_one_plus_q()
            - self.kappa * b.r_eig.quadratic_form(&self.ybar, f64::ln)?;
        Ok(value)
    }

    /// Hoeffding distance with parameter `r`.
    pub fn hoeffding(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::NegativeParameter(r));
        }
        if r == 0.0 {
            return self.relative_entropy(Direction::OneTwo);
        }
        let (_, v) = maximize(0.0, 1.0 - HOEFFDING_EDGE, |t| {
            Ok((-t * r - self.psi(t)?) / (1.0 - t))
        })?;
        Ok(v.max(0.0))
    }

    /// The same cube with hypotheses exchanged.
    pub fn reversed(&self) -> Self {
        self.swapped()
    }
}

/// `f_t(1 + 2q) = (1 + r^t)/(1 − r^t)` with `r = q/(1+q)` and `0^t := 0`.
fn f_of_q(q: f64, t: f64) -> f64 {
    if q <= KERNEL_FLOOR {
        return 1.0;
    }
    let rt = (t * (q / (1.0 + q)).ln()).exp();
    (1.0 + rt) / (1.0 - rt)
}

fn check_unit(t: f64) -> Result<()> {
    if (0.0..=1.0).contains(&t) {
        Ok(())
    } else {
        Err(Error::invalid(format!("t = {t} outside [0, 1]")))
    }
}

/// `c_{n,t}` for a problem restricted to `C_n`.
pub fn displacement_factor(problem: &DiscriminationProblem, n: usize, t: f64) -> Result<f64> {
    FiniteProblem::new(problem, n)?.displacement_factor(t)
}

/// `ψₙ(t)` for `t ∈ [0, 1]`.
pub fn psi_n(problem: &DiscriminationProblem, n: usize, t: f64) -> Result<f64> {
    FiniteProblem::new(problem, n)?.psi(t)
}

/// `ψₙ(t)` for any real `t`; requires equal displacements.
pub fn psi_n_extended(problem: &DiscriminationProblem, n: usize, t: f64) -> Result<f64> {
    FiniteProblem::new(problem, n)?.psi_extended(t)
}

/// `(C, t*)` on `C_n`.
pub fn chernoff_finite(problem: &DiscriminationProblem, n: usize) -> Result<(f64, f64)> {
    FiniteProblem::new(problem, n)?.chernoff()
}

pub fn hoeffding_finite(problem: &DiscriminationProblem, n: usize, r: f64) -> Result<f64> {
    FiniteProblem::new(problem, n)?.hoeffding(r)
}

pub fn relative_entropy_finite(problem: &DiscriminationProblem, n: usize, direction: Direction) -> Result<f64> {
    FiniteProblem::new(problem, n)?.relative_entropy(direction)
}

/// All finite-volume quantities for one `n`.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct FiniteReport {
    pub n: usize,
    pub sites: usize,
    pub t_grid: Vec<f64>,
    pub psi_values: Vec<f64>,
    pub chernoff: f64,
    pub t_star: f64,
    /// `(r, H_r)` pairs in input order.
    pub hoeffding: Vec<(f64, f64)>,
    /// Absent unless both symbols are strictly positive.
    pub rel_entropy_12: Option<f64>,
    pub rel_entropy_21: Option<f64>,
}

impl FiniteProblem {
    pub fn report(&self, t_grid: &[f64], r_list: &[f64]) -> Result<FiniteReport> {
        let psi_values = t_grid.iter().map(|&t| self.psi(t)).collect::<Result<Vec<_>>>()?;
        let (chernoff, t_star) = self.chernoff()?;
        let hoeffding = r_list
            .iter()
            .filter(|&&r| r > 0.0 || self.strict)
            .map(|&r| Ok((r, self.hoeffding(r)?)))
            .collect::<Result<Vec<_>>>()?;
        let (rel_entropy_12, rel_entropy_21) = if self.strict {
            (
                Some(self.relative_entropy(Direction::OneTwo)?),
                Some(self.relative_entropy(Direction::TwoOne)?),
            )
        } else {
            (None, None)
        };
        Ok(FiniteReport {
            n: self.n,
            sites: self.sites(),
            t_grid: t_grid.to_vec(),
            psi_values,
            chernoff,
            t_star,
            hoeffding,
            rel_entropy_12,
            rel_entropy_21,
        })
    }
}
