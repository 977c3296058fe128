//! Per-site limits as integrals over the ν-torus.
//!
//! Integrals are normalized, `(2π)^{−ν} ∫_{[0,2π)^ν}`, and evaluated with the periodic
//! trapezoid rule, which is exact for trigonometric polynomials of low enough degree.

use std::f64::consts::PI;

use crate::calculus::{eigh, trace_fn};
use crate::error::{Error, Result};
use crate::lattice::{HermitianMatrix, restrict_symbol_with_cap};
use crate::optimize::{bisect, maximize, minimize};
use crate::symbols::{DiscriminationProblem, SymbolKind, SymbolSpec};

/// Hoeffding objectives are evaluated on `[0, 1 − HOEFFDING_EDGE]`.
pub const HOEFFDING_EDGE: f64 = 1e-6;
/// Bracket padding for the threshold bisection.
pub const THRESHOLD_PAD: f64 = 1e-12;
/// Tolerance on `a_r`.
pub const THRESHOLD_TOL: f64 = 1e-10;

/// Periodic tensor trapezoid rule with equal weights `N^{−ν}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadratureRule {
    dim: usize,
    points_per_axis: usize,
}

impl QuadratureRule {
    pub fn new(dim: usize, points_per_axis: usize) -> Result<Self> {
        if dim == 0 || points_per_axis == 0 {
            return Err(Error::invalid("quadrature needs positive dimension and point count"));
        }
        points_per_axis
            .checked_pow(dim as u32)
            .ok_or_else(|| Error::invalid("quadrature grid too large"))?;
        Ok(Self { dim, points_per_axis })
    }

    /// 512, 64 and 16 points per axis for ν = 1, 2, 3; 8 beyond.
    pub fn default_for(dim: usize) -> Result<Self> {
        let n = match dim {
            1 => 512,
            2 => 64,
            3 => 16,
            _ => 8,
        };
        Self::new(dim, n)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn points_per_axis(&self) -> usize {
        self.points_per_axis
    }

    pub fn len(&self) -> usize {
        self.points_per_axis.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.len() as f64
    }

    /// Node with flat index `i`, `x_axis = 2π j_axis / N`.
    pub fn node(&self, mut i: usize) -> Vec<f64> {
        let step = 2.0 * PI / self.points_per_axis as f64;
        let mut x = vec![0.0; self.dim];
        for axis in (0..self.dim).rev() {
            x[axis] = (i % self.points_per_axis) as f64 * step;
            i /= self.points_per_axis;
        }
        x
    }
}

/// Normalized integral of `f` over the torus.
pub fn integrate(f: impl Fn(&[f64]) -> f64, rule: &QuadratureRule) -> Result<f64> {
    sum_nodes(rule.len(), rule.weight(), |i| f(&rule.node(i)), |i| rule.node(i))
}

/// Compensated (Neumaier) sum of `f` over the nodes, times the weight.
fn sum_nodes(len: usize, weight: f64, f: impl Fn(usize) -> f64, node: impl Fn(usize) -> Vec<f64>) -> Result<f64> {
    let (mut acc, mut carry) = (0.0f64, 0.0f64);
    for i in 0..len {
        let v = f(i);
        if !v.is_finite() {
            return Err(Error::NonFiniteIntegrand { node: node(i) });
        }
        let next = acc + v;
        carry += if acc.abs() >= v.abs() { (acc - next) + v } else { (v - next) + acc };
        acc = next;
    }
    Ok((acc + carry) * weight)
}

/// `r^t` with `0^t := 0`.
fn pow_support(r: f64, t: f64) -> f64 {
    if r <= 0.0 { 0.0 } else { (t * r.ln()).exp() }
}

/// Two-point relative entropy `a log(a/b) + (1−a) log((1−a)/(1−b))`.
fn bernoulli_entropy(a: f64, b: f64) -> f64 {
    let first = if a > 0.0 { a * (a / b).ln() } else { 0.0 };
    first + (1.0 - a) * ((1.0 - a) / (1.0 - b)).ln()
}

/// Both symbols sampled once on the quadrature nodes.
#[derive(Debug, Clone)]
pub struct AsymptoticProblem {
    rule: QuadratureRule,
    q1: Vec<f64>,
    q2: Vec<f64>,
    strict: bool,
}

impl AsymptoticProblem {
    pub fn new(problem: &DiscriminationProblem, rule: QuadratureRule) -> Result<Self> {
        if rule.dim() != problem.dim() {
            return Err(Error::DimensionMismatch {
                expected: problem.dim(),
                found: rule.dim(),
            });
        }
        let sample = |s: &SymbolSpec| -> Vec<f64> {
            (0..rule.len()).map(|i| s.eval(&rule.node(i), SymbolKind::Q).max(0.0)).collect()
        };
        Ok(Self {
            rule,
            q1: sample(&problem.state1.symbol),
            q2: sample(&problem.state2.symbol),
            strict: problem.strict_positivity_required(),
        })
    }

    pub fn rule(&self) -> &QuadratureRule {
        &self.rule
    }

    fn integral(&self, f: impl Fn(f64, f64) -> f64) -> Result<f64> {
        sum_nodes(
            self.rule.len(),
            self.rule.weight(),
            |i| f(self.q1[i], self.q2[i]),
            |i| self.rule.node(i),
        )
    }

    fn require_strict(&self) -> Result<()> {
        if self.strict { Ok(()) } else { Err(Error::StrictPositivityRequired) }
    }

    /// `ψ(t) = −∫ log[(1+q₁)^t (1+q₂)^{1−t} − q₁^t q₂^{1−t}]`.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&t) {
            return Err(Error::invalid(format!("t = {t} outside [0, 1]")));
        }
        self.integral(|q1, q2| {
            if q1 == q2 {
                return 0.0;
            }
            let w = pow_support(q1 / (1.0 + q1), t) * pow_support(q2 / (1.0 + q2), 1.0 - t);
            -(t * q1.ln_1p() + (1.0 - t) * q2.ln_1p() + (-w).ln_1p())
        })
    }

    /// `ψ′(t)` for interior `t`.
    pub fn psi_prime(&self, t: f64) -> Result<f64> {
        self.require_strict()?;
        self.integral(|q1, q2| {
            let (r1, r2) = (q1 / (1.0 + q1), q2 / (1.0 + q2));
            let l = r1.ln() - r2.ln();
            let w = (t * r1.ln() + (1.0 - t) * r2.ln()).exp();
            -((q1.ln_1p() - q2.ln_1p()) - w * l / (1.0 - w))
        })
    }

    /// `ψ″(t) = ∫ w_t (log r₁ − log r₂)² / (1 − w_t)²` with `w_t = r₁^t r₂^{1−t}`.
    pub fn psi_second(&self, t: f64) -> Result<f64> {
        self.require_strict()?;
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::invalid(format!("t = {t} outside (0, 1)")));
        }
        self.integral(|q1, q2| {
            let (r1, r2) = (q1 / (1.0 + q1), q2 / (1.0 + q2));
            let l = r1.ln() - r2.ln();
            let w = (t * r1.ln() + (1.0 - t) * r2.ln()).exp();
            w * l * l / ((1.0 - w) * (1.0 - w))
        })
    }

    /// `∂⁻ψ(1) = ∫ (1+q₁) S₂(r₁ ∥ r₂)`.
    pub fn dpsi_left1(&self) -> Result<f64> {
        self.require_strict()?;
        self.integral(|q1, q2| (1.0 + q1) * bernoulli_entropy(q1 / (1.0 + q1), q2 / (1.0 + q2)))
    }

    /// `∂⁺ψ(0) = −∫ (1+q₂) S₂(r₂ ∥ r₁)`.
    pub fn dpsi_right0(&self) -> Result<f64> {
        self.require_strict()?;
        self.integral(|q1, q2| -(1.0 + q2) * bernoulli_entropy(q2 / (1.0 + q2), q1 / (1.0 + q1)))
    }

    pub fn dpsi_boundary(&self, side: BoundarySide) -> Result<f64> {
        match side {
            BoundarySide::LeftAt1 => self.dpsi_left1(),
            BoundarySide::RightAt0 => self.dpsi_right0(),
        }
    }

    /// Mean Chernoff distance and the minimizing `t`.
    pub fn mean_chernoff(&self) -> Result<(f64, f64)> {
        let (t, v) = minimize(0.0, 1.0, |t| self.psi(t))?;
        Ok(((-v).max(0.0), t))
    }

    /// Mean Hoeffding distance `sup_{[0,1)} (−tr − ψ(t))/(1 − t)`.
    pub fn mean_hoeffding(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::NegativeParameter(r));
        }
        if r == 0.0 {
            return self.dpsi_left1();
        }
        let (_, v) = maximize(0.0, 1.0 - HOEFFDING_EDGE, |t| Ok((-t * r - self.psi(t)?) / (1.0 - t)))?;
        Ok(v.max(0.0))
    }

    /// Polar function `φ(a) = sup_{[0,1]} (ta − ψ(t))` and its maximizer.
    pub fn polar_with_argmax(&self, a: f64) -> Result<(f64, f64)> {
        let (t, v) = maximize(0.0, 1.0, |t| Ok(t * a - self.psi(t)?))?;
        Ok((v, t))
    }

    pub fn polar(&self, a: f64) -> Result<f64> {
        Ok(self.polar_with_argmax(a)?.0)
    }

    /// The unique `a_r` with `φ(a_r) − a_r = r`, for `0 ≤ r < d₂₁`.
    pub fn hoeffding_threshold(&self, r: f64) -> Result<f64> {
        if r < 0.0 || r.is_nan() {
            return Err(Error::NegativeParameter(r));
        }
        let lo = self.dpsi_right0()?;
        let hi = self.dpsi_left1()?;
        let d21 = -lo;
        if r >= d21 {
            return Err(Error::ParameterOutOfRange { value: r, upper: d21 });
        }
        if r == 0.0 {
            return Ok(hi);
        }
        bisect(lo - THRESHOLD_PAD, hi + THRESHOLD_PAD, THRESHOLD_TOL, |a| {
            Ok(self.polar(a)? - a - r)
        })
    }

    /// Everything an asymptotic run reports.
    pub fn report(&self, t_grid: &[f64], r_list: &[f64], a_list: &[f64]) -> Result<AsymptoticReport> {
        let psi = t_grid.iter().map(|&t| self.psi(t)).collect::<Result<Vec<_>>>()?;
        let (mean_chernoff, t_star) = self.mean_chernoff()?;
        let mean_hoeffding = r_list
            .iter()
            .filter(|&&r| r > 0.0 || self.strict)
            .map(|&r| Ok((r, self.mean_hoeffding(r)?)))
            .collect::<Result<Vec<_>>>()?;
        let polar = a_list
            .iter()
            .map(|&a| Ok((a, self.polar(a)?)))
            .collect::<Result<Vec<_>>>()?;
        let (dpsi_left1, dpsi_right0) = if self.strict {
            (Some(self.dpsi_left1()?), Some(self.dpsi_right0()?))
        } else {
            (None, None)
        };
        Ok(AsymptoticReport {
            t_grid: t_grid.to_vec(),
            psi,
            mean_chernoff,
            t_star,
            mean_hoeffding,
            polar,
            d12: dpsi_left1,
            d21: dpsi_right0.map(|v| -v),
            dpsi_left1,
            dpsi_right0,
        })
    }
}

/// Which one-sided boundary derivative.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundarySide {
    /// `∂⁻ψ(1)`.
    LeftAt1,
    /// `∂⁺ψ(0)`.
    RightAt0,
}

/// Asymptotic per-site quantities.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct AsymptoticReport {
    pub t_grid: Vec<f64>,
    pub psi: Vec<f64>,
    pub mean_chernoff: f64,
    pub t_star: f64,
    pub mean_hoeffding: Vec<(f64, f64)>,
    pub polar: Vec<(f64, f64)>,
    /// Absent unless both symbols are strictly positive.
    pub d12: Option<f64>,
    pub d21: Option<f64>,
    pub dpsi_left1: Option<f64>,
    pub dpsi_right0: Option<f64>,
}

pub fn psi_asym(problem: &DiscriminationProblem, t: f64, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.psi(t)
}

pub fn dpsi_boundary(problem: &DiscriminationProblem, side: BoundarySide, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.dpsi_boundary(side)
}

pub fn psi_second(problem: &DiscriminationProblem, t: f64, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.psi_second(t)
}

pub fn mean_chernoff(problem: &DiscriminationProblem, rule: &QuadratureRule) -> Result<(f64, f64)> {
    AsymptoticProblem::new(problem, *rule)?.mean_chernoff()
}

pub fn mean_hoeffding(problem: &DiscriminationProblem, r: f64, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.mean_hoeffding(r)
}

pub fn polar(problem: &DiscriminationProblem, a: f64, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.polar(a)
}

pub fn hoeffding_threshold(problem: &DiscriminationProblem, r: f64, rule: &QuadratureRule) -> Result<f64> {
    AsymptoticProblem::new(problem, *rule)?.hoeffding_threshold(r)
}

/// One row of a Szegő comparison.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SzegoRow {
    pub n: usize,
    /// `n^{−ν} Tr f₁(M₁⁽ⁿ⁾) ⋯ f_k(M_k⁽ⁿ⁾)`.
    pub lhs: f64,
    /// `∫ f₁(m₁) ⋯ f_k(m_k)`.
    pub rhs: f64,
    /// `|lhs − rhs|`.
    pub gap: f64,
}

/// Compare normalized traces of products of matrix functions with their torus integrals.
///
/// `operand` selects whether each `f_k` acts on `Q_k⁽ⁿ⁾` (`SymbolKind::Q`) or on
/// `A_k⁽ⁿ⁾ = I + 2Q_k⁽ⁿ⁾` (`SymbolKind::A`).
pub fn szego_check(
    symbols: &[SymbolSpec],
    functions: &[&dyn Fn(f64) -> f64],
    operand: SymbolKind,
    n_list: &[usize],
    rule: &QuadratureRule,
    dense_cap: usize,
) -> Result<Vec<SzegoRow>> {
    if symbols.is_empty() || symbols.len() != functions.len() {
        return Err(Error::invalid("szego_check needs one function per symbol"));
    }
    if operand == SymbolKind::R {
        return Err(Error::invalid("szego_check operand must be q or a"));
    }
    let dim = symbols[0].dim();
    if let Some(bad) = symbols.iter().find(|s| s.dim() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: bad.dim(),
        });
    }
    if rule.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: rule.dim(),
        });
    }
    let rhs = integrate(
        |x| {
            symbols
                .iter()
                .zip(functions)
                .map(|(s, f)| f(s.eval(x, operand)))
                .product()
        },
        rule,
    )?;
    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let mats = symbols
            .iter()
            .map(|s| {
                let q = restrict_symbol_with_cap(s, n, dense_cap)?;
                Ok(match operand {
                    SymbolKind::A => HermitianMatrix::identity(q.size()).add(&q.scaled(2.0)),
                    _ => q,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let sites = mats[0].size() as f64;
        let trace = if mats.len() == 1 {
            trace_fn(&mats[0], functions[0])?
        } else {
            let mut prod = eigh(&mats[0])?.apply(functions[0])?.into_mat();
            for (m, f) in mats.iter().zip(functions).skip(1) {
                let fm = eigh(m)?.apply(f)?;
                prod = &prod * fm.as_mat();
            }
            (0..prod.nrows()).map(|i| prod[(i, i)].re).sum()
        };
        let lhs = trace / sites;
        rows.push(SzegoRow {
            n,
            lhs,
            rhs,
            gap: (lhs - rhs).abs(),
        });
    }
    Ok(rows)
}
