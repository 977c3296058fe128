//! Translation-invariant symbols on the ν-torus and the hypotheses built from them.
//!
//! A symbol is a trigonometric polynomial `q(x) = Σ_j ĉ(j) e^{i j·x}` with finitely many
//! Fourier coefficients. The derived functions `a = 1 + 2q` and `r = q / (1 + q)` are
//! evaluated pointwise through [`SymbolSpec::eval`].

use std::collections::BTreeMap;
use std::f64::consts::PI;

use faer::c64;

use crate::error::{Error, Result};

/// Tolerance on `ĉ(−j) = conj(ĉ(j))`.
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Grid minima down to `−NEGATIVITY_TOL` are accepted and reported as 0.
pub const NEGATIVITY_TOL: f64 = 1e-12;
/// Default number of grid points per axis used to certify `eta`.
pub const DEFAULT_GRID_POINTS: usize = 64;

/// Which function of the symbol to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymbolKind {
    /// `q` itself.
    Q,
    /// `a = 1 + 2q`.
    A,
    /// `r = q / (1 + q)`.
    R,
}

/// A trigonometric-polynomial symbol with a certified lower bound.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolSpec {
    dim: usize,
    coeffs: BTreeMap<Vec<i64>, c64>,
    eta: f64,
    grid_max: f64,
}

/// Build a symbol from Fourier coefficients, completing missing Hermitian partners.
///
/// The lower bound `eta` is the exact minimum over the uniform tensor grid with
/// `grid_points_per_axis` points per axis.
pub fn make_trig_symbol<I>(dim: usize, coeffs: I, grid_points_per_axis: usize) -> Result<SymbolSpec>
where
    I: IntoIterator<Item = (Vec<i64>, c64)>,
{
    if dim == 0 {
        return Err(Error::invalid("symbol dimension must be at least 1"));
    }
    let mut stored: BTreeMap<Vec<i64>, c64> = BTreeMap::new();
    for (index, value) in coeffs {
        if index.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: index.len(),
            });
        }
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::invalid(format!("non-finite coefficient at {index:?}")));
        }
        if stored.insert(index.clone(), value).is_some() {
            return Err(Error::invalid(format!("duplicate coefficient index {index:?}")));
        }
    }

    let mut completed = stored.clone();
    for (index, value) in &stored {
        let mirror: Vec<i64> = index.iter().map(|k| -k).collect();
        match stored.get(&mirror) {
            Some(partner) => {
                let mismatch = (*partner - value.conj()).norm();
                if mismatch > HERMITIAN_TOL {
                    return Err(Error::NonHermitianCoefficients {
                        index: index.clone(),
                        mismatch,
                    });
                }
            }
            None => {
                completed.insert(mirror, value.conj());
            }
        }
    }
    // exact zeros carry no information and would only slow restriction down
    completed.retain(|_, v| v.re != 0.0 || v.im != 0.0);

    let bandwidth = completed
        .keys()
        .flat_map(|k| k.iter().map(|c| c.unsigned_abs()))
        .max()
        .unwrap_or(0) as usize;
    if grid_points_per_axis < 2 * bandwidth + 1 {
        return Err(Error::invalid(format!(
            "grid_points_per_axis = {grid_points_per_axis} is below 2·{bandwidth}+1"
        )));
    }

    let mut sym = SymbolSpec {
        dim,
        coeffs: completed,
        eta: 0.0,
        grid_max: 0.0,
    };
    let (min, max) = sym.grid_extrema(grid_points_per_axis);
    if min < -NEGATIVITY_TOL {
        return Err(Error::NegativeSymbol { min });
    }
    sym.eta = min.max(0.0);
    sym.grid_max = max.max(0.0);
    Ok(sym)
}

impl SymbolSpec {
    /// Constant symbol `q ≡ value`.
    pub fn constant(dim: usize, value: f64) -> Result<Self> {
        make_trig_symbol(dim, [(vec![0; dim], c64::new(value, 0.0))], 1)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Certified lower bound on `q` (grid minimum).
    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Grid maximum of `q`.
    pub fn grid_max(&self) -> f64 {
        self.grid_max
    }

    /// Nonzero Fourier coefficients, Hermitian-completed.
    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, c64> {
        &self.coeffs
    }

    pub fn coefficient(&self, index: &[i64]) -> c64 {
        self.coeffs.get(index).copied().unwrap_or(c64::new(0.0, 0.0))
    }

    /// Largest absolute coordinate among stored indices.
    pub fn bandwidth(&self) -> usize {
        self.coeffs
            .keys()
            .flat_map(|k| k.iter().map(|c| c.unsigned_abs()))
            .max()
            .unwrap_or(0) as usize
    }

    /// `q ≡ 0`: the quasi-free part is the vacuum.
    pub fn is_vacuum(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|k| k.iter().all(|&c| c == 0))
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.eta > 0.0
    }

    /// Evaluate `q`, `a` or `r` at a point of the torus.
    pub fn eval(&self, x: &[f64], kind: SymbolKind) -> f64 {
        let q = self.eval_q(x);
        match kind {
            SymbolKind::Q => q,
            SymbolKind::A => 1.0 + 2.0 * q,
            SymbolKind::R => q / (1.0 + q),
        }
    }

    fn eval_q(&self, x: &[f64]) -> f64 {
        debug_assert_eq!(x.len(), self.dim);
        let mut acc = c64::new(0.0, 0.0);
        for (index, value) in &self.coeffs {
            let phase: f64 = index.iter().zip(x).map(|(&j, &xi)| j as f64 * xi).sum();
            acc += value * c64::cis(phase);
        }
        debug_assert!(acc.im.abs() < 1e-10 * (1.0 + acc.re.abs()));
        acc.re
    }

    fn grid_extrema(&self, points: usize) -> (f64, f64) {
        let total = points.pow(self.dim as u32);
        let step = 2.0 * PI / points as f64;
        let mut x = vec![0.0; self.dim];
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for flat in 0..total {
            let mut rem = flat;
            for axis in (0..self.dim).rev() {
                x[axis] = (rem % points) as f64 * step;
                rem /= points;
            }
            let v = self.eval_q(&x);
            min = min.min(v);
            max = max.max(v);
        }
        (min, max)
    }
}

/// Finitely supported displacement vector on the nonnegative orthant.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct DisplacementSpec {
    support: BTreeMap<Vec<i64>, c64>,
}

impl DisplacementSpec {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn new<I>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vec<i64>, c64)>,
    {
        let mut support = BTreeMap::new();
        for (site, value) in entries {
            if site.iter().any(|&k| k < 0) {
                return Err(Error::SiteOutsideOrthant { site });
            }
            if value.re != 0.0 || value.im != 0.0 {
                *support.entry(site).or_insert(c64::new(0.0, 0.0)) += value;
            }
        }
        Ok(Self { support })
    }

    /// Single site with amplitude `value`.
    pub fn single(site: Vec<i64>, value: c64) -> Result<Self> {
        Self::new([(site, value)])
    }

    pub fn support(&self) -> &BTreeMap<Vec<i64>, c64> {
        &self.support
    }

    pub fn is_zero(&self) -> bool {
        self.support.is_empty()
    }

    /// `other − self`, the relative displacement `ȳ`.
    pub fn difference(&self, other: &DisplacementSpec) -> DisplacementSpec {
        let mut support = other.support.clone();
        for (site, v) in &self.support {
            *support.entry(site.clone()).or_insert(c64::new(0.0, 0.0)) -= v;
        }
        support.retain(|_, v| v.re != 0.0 || v.im != 0.0);
        DisplacementSpec { support }
    }
}

/// One hypothesis: a gauge-invariant Gaussian state.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianStateSpec {
    pub symbol: SymbolSpec,
    pub displacement: DisplacementSpec,
    pub kappa: f64,
}

impl GaussianStateSpec {
    pub fn new(symbol: SymbolSpec, displacement: DisplacementSpec, kappa: f64) -> Result<Self> {
        if !(kappa > 0.0 && kappa.is_finite()) {
            return Err(Error::invalid(format!("kappa must be positive, got {kappa}")));
        }
        for site in displacement.support().keys() {
            if site.len() != symbol.dim() {
                return Err(Error::DimensionMismatch {
                    expected: symbol.dim(),
                    found: site.len(),
                });
            }
        }
        Ok(Self {
            symbol,
            displacement,
            kappa,
        })
    }

    /// Quasi-free (undisplaced) state.
    pub fn quasi_free(symbol: SymbolSpec, kappa: f64) -> Result<Self> {
        Self::new(symbol, DisplacementSpec::zero(), kappa)
    }
}

/// Ordered pair of hypotheses: `state1` is the null hypothesis.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscriminationProblem {
    pub state1: GaussianStateSpec,
    pub state2: GaussianStateSpec,
}

impl DiscriminationProblem {
    pub fn new(state1: GaussianStateSpec, state2: GaussianStateSpec) -> Result<Self> {
        if state1.symbol.dim() != state2.symbol.dim() {
            return Err(Error::DimensionMismatch {
                expected: state1.symbol.dim(),
                found: state2.symbol.dim(),
            });
        }
        if state1.kappa != state2.kappa {
            return Err(Error::KappaMismatch(state1.kappa, state2.kappa));
        }
        Ok(Self { state1, state2 })
    }

    /// Two quasi-free states with a common `kappa`.
    pub fn quasi_free(q1: SymbolSpec, q2: SymbolSpec, kappa: f64) -> Result<Self> {
        Self::new(
            GaussianStateSpec::quasi_free(q1, kappa)?,
            GaussianStateSpec::quasi_free(q2, kappa)?,
        )
    }

    pub fn dim(&self) -> usize {
        self.state1.symbol.dim()
    }

    pub fn kappa(&self) -> f64 {
        self.state1.kappa
    }

    /// Relative displacement `ȳ = y₂ − y₁`.
    pub fn relative_displacement(&self) -> DisplacementSpec {
        self.state1.displacement.difference(&self.state2.displacement)
    }

    /// The pair with hypotheses exchanged.
    pub fn swapped(&self) -> Self {
        Self {
            state1: self.state2.clone(),
            state2: self.state1.clone(),
        }
    }

    /// Same symbols, both displacements removed.
    pub fn without_displacements(&self) -> Self {
        let mut out = self.clone();
        out.state1.displacement = DisplacementSpec::zero();
        out.state2.displacement = DisplacementSpec::zero();
        out
    }

    /// True iff both symbols carry a positive certified lower bound.
    pub fn strict_positivity_required(&self) -> bool {
        self.state1.symbol.is_strictly_positive() && self.state2.symbol.is_strictly_positive()
    }
}

/// Free-function form of [`DiscriminationProblem::strict_positivity_required`].
pub fn strict_positivity_required(problem: &DiscriminationProblem) -> bool {
    problem.strict_positivity_required()
}
