//! Truncated Gaussian densities and the quantities compared against closed forms.

use std::sync::Arc;

use faer::{Mat, c64};

use super::basis::FockBasis;
use super::operator::{displacement_operator, fock_operator, second_quantization};
use crate::calculus::{EigenSystem, eigh, eigvalsh, trace_product};
use crate::error::{Error, Result};
use crate::lattice::HermitianMatrix;
use crate::optimize::minimize;

/// Eigenvalues below this fraction of their block's largest are treated as kernel.
pub const STATE_FLOOR: f64 = 1e-13;

/// Density matrix on a truncated Fock space; the missing weight is kept in `trace_deficit`.
#[derive(Debug, Clone)]
pub struct TruncatedFockState {
    basis: Arc<FockBasis>,
    matrix: HermitianMatrix,
    trace_deficit: f64,
}

impl TruncatedFockState {
    pub fn basis(&self) -> &Arc<FockBasis> {
        &self.basis
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    /// `1 − Tr ρ`.
    pub fn trace_deficit(&self) -> f64 {
        self.trace_deficit
    }

    /// `W ρ W†` with `W = W_κ(y)` on the same truncated space.
    pub fn displaced(&self, y: &[c64], kappa: f64) -> Result<Self> {
        if y.iter().all(|z| z.norm() == 0.0) {
            return Ok(self.clone());
        }
        let w = displacement_operator(y, kappa, &self.basis)?.matrix;
        let left = &w * self.matrix.as_mat();
        let rho = HermitianMatrix::hermitize(left.as_ref() * w.adjoint());
        let trace_deficit = 1.0 - rho.trace();
        Ok(Self {
            basis: Arc::clone(&self.basis),
            matrix: rho,
            trace_deficit,
        })
    }
}

/// `N · R_F` truncated to the basis.
pub fn gaussian_density(r: &HermitianMatrix, log_n: f64, basis: Arc<FockBasis>) -> Result<TruncatedFockState> {
    if r.size() != basis.modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.modes(),
            found: r.size(),
        });
    }
    let spec = eigvalsh(r)?;
    let top = spec.last().copied().unwrap_or(0.0);
    if top >= 1.0 {
        return Err(Error::SpectralRadiusError(top));
    }
    if spec.first().copied().unwrap_or(0.0) <= -crate::calculus::NEGATIVE_CLIP {
        return Err(Error::domain("one-particle operator is not PSD"));
    }
    let op = fock_operator(r.as_mat(), &basis)?.scaled(log_n.exp());
    let matrix = HermitianMatrix::hermitize(op.to_dense());
    let trace_deficit = 1.0 - matrix.trace();
    Ok(TruncatedFockState {
        basis,
        matrix,
        trace_deficit,
    })
}

/// `(Tr A_F Γ(B), det(I − A)⁻¹ Tr[A(I − A)⁻¹ B])`, the first on the truncated space.
pub fn second_quantized_trace_check(a: &HermitianMatrix, b: &Mat<c64>, basis: &FockBasis) -> Result<(f64, f64)> {
    let es = eigh(a)?;
    let top = es.max_value();
    if top >= 1.0 {
        return Err(Error::SpectralRadiusError(top));
    }
    let af = fock_operator(a.as_mat(), basis)?;
    let gb = second_quantization(b, basis)?;
    let lhs: c64 = af
        .blocks()
        .iter()
        .zip(gb.blocks())
        .map(|(x, y)| trace_product(x, y))
        .sum();
    let inv_det: f64 = es.values().iter().map(|&l| 1.0 / (1.0 - l)).product();
    let resolvent = es.apply(|l| l / (1.0 - l))?;
    let rhs = inv_det * trace_product(resolvent.as_mat(), b).re;
    Ok((lhs.re, rhs))
}

/// Nussbaum–Szkoła weights on pairs of eigenvectors with nonzero overlap.
#[derive(Debug, Clone)]
pub struct NussbaumSzkola {
    /// `(i, j, p₁(i,j), p₂(i,j))`.
    pub entries: Vec<(usize, usize, f64, f64)>,
}

impl NussbaumSzkola {
    pub fn mass1(&self) -> f64 {
        self.entries.iter().map(|e| e.2).sum()
    }

    pub fn mass2(&self) -> f64 {
        self.entries.iter().map(|e| e.3).sum()
    }

    /// `Σ p₁^t p₂^{1−t}` with `0^s := 0`.
    pub fn hellinger(&self, t: f64) -> f64 {
        let pw = |p: f64, s: f64| if p <= 0.0 { 0.0 } else { (s * p.ln()).exp() };
        self.entries.iter().map(|&(_, _, p1, p2)| pw(p1, t) * pw(p2, 1.0 - t)).sum()
    }
}

/// Outcome of the optimal test for one pair of states.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct NeymanPearson {
    /// `1 − Tr ρ₁S`, biased upward by at most the deficit of `ρ₁`.
    pub alpha: f64,
    /// `Tr ρ₂S`.
    pub beta: f64,
    /// `e^{−scale·a} α + β`.
    pub e: f64,
    /// Larger of the two trace deficits.
    pub trace_deficit: f64,
}

/// Two states on a shared basis with their eigensystems.
#[derive(Debug, Clone)]
pub struct FockPair {
    s1: TruncatedFockState,
    s2: TruncatedFockState,
    e1: EigenSystem,
    e2: EigenSystem,
}

impl FockPair {
    pub fn new(s1: TruncatedFockState, s2: TruncatedFockState) -> Result<Self> {
        if s1.basis != s2.basis {
            return Err(Error::BasisMismatch);
        }
        let e1 = eigh(&s1.matrix)?.floored(STATE_FLOOR);
        let e2 = eigh(&s2.matrix)?.floored(STATE_FLOOR);
        Ok(Self { s1, s2, e1, e2 })
    }

    pub fn state1(&self) -> &TruncatedFockState {
        &self.s1
    }

    pub fn state2(&self) -> &TruncatedFockState {
        &self.s2
    }

    pub fn trace_deficit(&self) -> f64 {
        self.s1.trace_deficit.max(self.s2.trace_deficit)
    }

    /// `Tr ρ₁^t ρ₂^{1−t}` from the two matrix powers.
    pub fn quasi_power_trace(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("t = {t} outside [0, 1]")));
        }
        let p1 = self.e1.psd_power(t, 0.0)?;
        let p2 = self.e2.psd_power(1.0 - t, 0.0)?;
        Ok(trace_product(p1.as_mat(), p2.as_mat()).re)
    }

    pub fn nussbaum_szkola(&self) -> NussbaumSzkola {
        let (l1, l2) = (self.e1.values(), self.e2.values());
        let entries = self
            .e1
            .overlaps(&self.e2)
            .into_iter()
            .map(|(i, j, w)| (i, j, l1[i].max(0.0) * w, l2[j].max(0.0) * w))
            .collect();
        NussbaumSzkola { entries }
    }

    /// Optimal test `S = {e^{−scale·a} ρ₁ − ρ₂ > 0}`.
    pub fn neyman_pearson(&self, a: f64, scale: f64) -> Result<NeymanPearson> {
        let weight = (-scale * a).exp();
        let diff = self.s1.matrix.scaled(weight).sub(&self.s2.matrix);
        let proj = eigh(&diff)?.apply(|x| if x > 0.0 { 1.0 } else { 0.0 })?;
        Ok(self.evaluate_test(proj.as_mat(), weight))
    }

    /// Error quantities of an arbitrary test `0 ≤ T ≤ I`.
    pub fn evaluate_test(&self, test: &Mat<c64>, weight: f64) -> NeymanPearson {
        let alpha = 1.0 - trace_product(self.s1.matrix.as_mat(), test).re;
        let beta = trace_product(self.s2.matrix.as_mat(), test).re;
        NeymanPearson {
            alpha,
            beta,
            e: weight * alpha + beta,
            trace_deficit: self.trace_deficit(),
        }
    }

    /// `min_{t ∈ [0,1]} e^{−t·scale·a} Tr ρ₁^t ρ₂^{1−t}`, an upper bound on the optimal `e`.
    pub fn audenaert_bound(&self, a: f64, scale: f64) -> Result<f64> {
        let ns = self.nussbaum_szkola();
        let (_, v) = minimize(0.0, 1.0, |t| Ok((-t * scale * a).exp() * ns.hellinger(t)))?;
        Ok(v)
    }
}

/// `Tr s₁^t s₂^{1−t}`.
pub fn quasi_power_trace(s1: &TruncatedFockState, s2: &TruncatedFockState, t: f64) -> Result<f64> {
    FockPair::new(s1.clone(), s2.clone())?.quasi_power_trace(t)
}

pub fn nussbaum_szkola(s1: &TruncatedFockState, s2: &TruncatedFockState) -> Result<NussbaumSzkola> {
    Ok(FockPair::new(s1.clone(), s2.clone())?.nussbaum_szkola())
}

pub fn neyman_pearson(s1: &TruncatedFockState, s2: &TruncatedFockState, a: f64, scale: f64) -> Result<NeymanPearson> {
    FockPair::new(s1.clone(), s2.clone())?.neyman_pearson(a, scale)
}
