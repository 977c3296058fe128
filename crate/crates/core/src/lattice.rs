//! Finite-volume restrictions to the cube `C_n = {0,…,n−1}^ν`.

use faer::{Mat, c64};

use crate::error::{Error, Result};
use crate::symbols::{DisplacementSpec, SymbolSpec};

/// Default cap on the dense matrix size `n^ν`.
pub const DEFAULT_DENSE_CAP: usize = 4096;

/// Lexicographic bijection between `C_n` and `0..n^ν`; the first coordinate is most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SiteIndexer {
    dim: usize,
    side: usize,
    total: usize,
}

impl SiteIndexer {
    pub fn new(dim: usize, side: usize) -> Result<Self> {
        Self::with_cap(dim, side, usize::MAX)
    }

    pub fn with_cap(dim: usize, side: usize, cap: usize) -> Result<Self> {
        if dim == 0 || side == 0 {
            return Err(Error::invalid("lattice dimension and side must be positive"));
        }
        let total = (0..dim)
            .try_fold(1usize, |acc, _| acc.checked_mul(side))
            .ok_or(Error::SizeOverflow {
                size: usize::MAX,
                cap,
            })?;
        if total > cap {
            return Err(Error::SizeOverflow { size: total, cap });
        }
        Ok(Self { dim, side, total })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn side(&self) -> usize {
        self.side
    }

    pub fn total(&self) -> usize {
        self.total
    }

    /// Flat index of a site, or `None` when the site is outside the cube.
    pub fn index(&self, site: &[i64]) -> Option<usize> {
        if site.len() != self.dim {
            return None;
        }
        let mut idx = 0usize;
        for &k in site {
            if k < 0 || k as usize >= self.side {
                return None;
            }
            idx = idx * self.side + k as usize;
        }
        Some(idx)
    }

    pub fn site(&self, mut index: usize) -> Vec<i64> {
        debug_assert!(index < self.total);
        let mut site = vec![0i64; self.dim];
        for axis in (0..self.dim).rev() {
            site[axis] = (index % self.side) as i64;
            index /= self.side;
        }
        site
    }
}

/// Dense Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianMatrix(Mat<c64>);

impl HermitianMatrix {
    /// Checks `‖M − M†‖_max < 1e-12 · max(1, ‖M‖_max)`.
    pub fn new(m: Mat<c64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::invalid(format!(
                "matrix is not square: {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let n = m.nrows();
        let mut scale = 1.0f64;
        let mut defect = 0.0f64;
        for j in 0..n {
            for i in 0..n {
                scale = scale.max(m[(i, j)].norm());
                if i <= j {
                    defect = defect.max((m[(i, j)] - m[(j, i)].conj()).norm());
                }
            }
        }
        if defect >= 1e-12 * scale {
            return Err(Error::domain(format!("matrix is not Hermitian (defect {defect:e})")));
        }
        Ok(Self(m))
    }

    /// Average with the adjoint; the result is Hermitian by construction.
    pub fn hermitize(m: Mat<c64>) -> Self {
        let n = m.nrows();
        let half = c64::new(0.5, 0.0);
        Self(Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(m[(i, i)].re, 0.0)
            } else {
                (m[(i, j)] + m[(j, i)].conj()) * half
            }
        }))
    }

    pub fn zeros(n: usize) -> Self {
        Self(Mat::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        Self(Mat::identity(n, n))
    }

    pub fn from_real_diagonal(values: &[f64]) -> Self {
        let n = values.len();
        Self(Mat::from_fn(n, n, |i, j| {
            if i == j {
                c64::new(values[i], 0.0)
            } else {
                c64::new(0.0, 0.0)
            }
        }))
    }

    pub fn size(&self) -> usize {
        self.0.nrows()
    }

    pub fn as_mat(&self) -> &Mat<c64> {
        &self.0
    }

    pub fn into_mat(self) -> Mat<c64> {
        self.0
    }

    pub fn trace(&self) -> f64 {
        (0..self.size()).map(|i| self.0[(i, i)].re).sum()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let s = c64::new(factor, 0.0);
        Self(Mat::from_fn(self.size(), self.size(), |i, j| self.0[(i, j)] * s))
    }

    /// `self + other`.
    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 + &other.0)
    }

    /// `self − other`.
    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self(&self.0 - &other.0)
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        max_abs(&self.0)
    }
}

pub(crate) fn max_abs(m: &Mat<c64>) -> f64 {
    let mut out = 0.0f64;
    for j in 0..m.ncols() {
        for i in 0..m.nrows() {
            out = out.max(m[(i, j)].norm());
        }
    }
    out
}

/// Multilevel Toeplitz matrix `M[idx(k), idx(k′)] = ĉ(k − k′)` on `C_n`.
pub fn restrict_symbol(sym: &SymbolSpec, n: usize) -> Result<HermitianMatrix> {
    restrict_symbol_with_cap(sym, n, DEFAULT_DENSE_CAP)
}

pub fn restrict_symbol_with_cap(sym: &SymbolSpec, n: usize, cap: usize) -> Result<HermitianMatrix> {
    let indexer = SiteIndexer::with_cap(sym.dim(), n, cap)?;
    let size = indexer.total();
    let mut m = Mat::<c64>::zeros(size, size);
    let mut k = vec![0i64; sym.dim()];
    for col in 0..size {
        let base = indexer.site(col);
        for (offset, value) in sym.coeffs() {
            for axis in 0..sym.dim() {
                k[axis] = base[axis] + offset[axis];
            }
            if let Some(row) = indexer.index(&k) {
                m[(row, col)] = *value;
            }
        }
    }
    Ok(HermitianMatrix(m))
}

/// `P_n y` as a vector in the lexicographic site order; sites outside `C_n` are dropped.
pub fn restrict_displacement(disp: &DisplacementSpec, indexer: &SiteIndexer) -> Vec<c64> {
    let mut v = vec![c64::new(0.0, 0.0); indexer.total()];
    for (site, value) in disp.support() {
        if let Some(i) = indexer.index(site) {
            v[i] = *value;
        }
    }
    v
}
