//! Hermitian eigendecomposition and scalar functional calculus.
//!
//! Every matrix function goes through [`eigh`]. The eigensolver first splits the
//! matrix into the connected components of its sparsity pattern (exact zeros only),
//! so block-diagonal inputs such as undisplaced Fock-space densities cost one small
//! dense solve per block instead of one large one.

use faer::{Mat, Side, c64};

use crate::error::{Error, Result};
use crate::lattice::HermitianMatrix;

/// Eigenvalues in `(−NEGATIVE_CLIP, 0)` of nominally PSD matrices are clamped to 0.
pub const NEGATIVE_CLIP: f64 = 1e-12;
/// Eigenvalues at or below this floor count as kernel for the `0^t := 0` convention.
pub const KERNEL_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone)]
struct EigenBlock {
    /// Original row/column indices covered by the block.
    rows: Vec<usize>,
    values: Vec<f64>,
    /// Local eigenvectors, `rows.len()` square.
    vectors: Mat<c64>,
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct EigenSystem {
    n: usize,
    values: Vec<f64>,
    blocks: Vec<EigenBlock>,
    /// Global eigen-index → (block, local column).
    order: Vec<(usize, usize)>,
}

/// Connected components of the nonzero pattern, each sorted ascending.
fn components(m: &Mat<c64>) -> Vec<Vec<usize>> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for j in 0..n {
        for i in 0..j {
            let z = m[(i, j)];
            if z.re != 0.0 || z.im != 0.0 {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let root = find(&mut parent, i);
        if slot[root] == usize::MAX {
            slot[root] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[root]].push(i);
    }
    groups
}

fn dense_eigh(m: &Mat<c64>) -> Result<(Vec<f64>, Mat<c64>)> {
    let n = m.nrows();
    if n == 1 {
        return Ok((vec![m[(0, 0)].re], Mat::identity(1, 1)));
    }
    let evd = m
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))?;
    let s = evd.S().column_vector();
    let values: Vec<f64> = (0..n).map(|i| s[i].re).collect();
    Ok((values, evd.U().to_owned()))
}

/// Full eigendecomposition; values ascending.
pub fn eigh(m: &HermitianMatrix) -> Result<EigenSystem> {
    let mat = m.as_mat();
    let n = mat.nrows();
    let mut blocks = Vec::new();
    for rows in components(mat) {
        let sub = Mat::from_fn(rows.len(), rows.len(), |i, j| mat[(rows[i], rows[j])]);
        let (values, vectors) = dense_eigh(&sub)?;
        blocks.push(EigenBlock {
            rows,
            values,
            vectors,
        });
    }
    Ok(EigenSystem::assemble(n, blocks))
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(m: &HermitianMatrix) -> Result<Vec<f64>> {
    let mat = m.as_mat();
    let mut values = Vec::with_capacity(mat.nrows());
    for rows in components(mat) {
        if rows.len() == 1 {
            values.push(mat[(rows[0], rows[0])].re);
            continue;
        }
        let sub = Mat::from_fn(rows.len(), rows.len(), |i, j| mat[(rows[i], rows[j])]);
        let s = sub
            .self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::ConvergenceFailure(format!("{e:?}")))?;
        values.extend(s);
    }
    values.sort_by(f64::total_cmp);
    Ok(values)
}

impl EigenSystem {
    fn assemble(n: usize, blocks: Vec<EigenBlock>) -> Self {
        let mut order: Vec<(usize, usize)> = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, blk)| (0..blk.values.len()).map(move |k| (b, k)))
            .collect();
        order.sort_by(|&(b1, k1), &(b2, k2)| {
            blocks[b1].values[k1]
                .total_cmp(&blocks[b2].values[k2])
                .then((b1, k1).cmp(&(b2, k2)))
        });
        let values = order.iter().map(|&(b, k)| blocks[b].values[k]).collect();
        Self {
            n,
            values,
            blocks,
            order,
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Ascending eigenvalues.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn max_value(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn min_value(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// Number of decoupled blocks found in the input pattern.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Dense unitary whose `k`-th column is the eigenvector of `values()[k]`.
    pub fn vectors(&self) -> Mat<c64> {
        let mut v = Mat::<c64>::zeros(self.n, self.n);
        for (col, &(b, k)) in self.order.iter().enumerate() {
            let blk = &self.blocks[b];
            for (local, &row) in blk.rows.iter().enumerate() {
                v[(row, col)] = blk.vectors[(local, k)];
            }
        }
        v
    }

    /// Eigenvector `k` as a dense vector.
    pub fn vector(&self, k: usize) -> Vec<c64> {
        let (b, col) = self.order[k];
        let blk = &self.blocks[b];
        let mut v = vec![c64::new(0.0, 0.0); self.n];
        for (local, &row) in blk.rows.iter().enumerate() {
            v[row] = blk.vectors[(local, col)];
        }
        v
    }

    /// Same eigenvectors, eigenvalues replaced by `f(λ)` (re-sorted).
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| EigenBlock {
                rows: b.rows.clone(),
                values: b.values.iter().map(|&x| f(x)).collect(),
                vectors: b.vectors.clone(),
            })
            .collect();
        Self::assemble(self.n, blocks)
    }

    /// Zero every eigenvalue with `|λ| ≤ rel · max |λ|` over its own block.
    ///
    /// Eigenvalue errors scale with the norm of the block they come from, so this keeps
    /// small but resolved eigenvalues of weak blocks.
    pub fn floored(&self, rel: f64) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|b| {
                let scale = b.values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
                EigenBlock {
                    rows: b.rows.clone(),
                    values: b
                        .values
                        .iter()
                        .map(|&v| if v.abs() <= rel * scale { 0.0 } else { v })
                        .collect(),
                    vectors: b.vectors.clone(),
                }
            })
            .collect();
        Self::assemble(self.n, blocks)
    }

    /// `V · diag(f(λ)) · V†`, re-Hermitized.
    pub fn apply(&self, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
        let mut out = Mat::<c64>::zeros(self.n, self.n);
        for blk in &self.blocks {
            let fv: Vec<f64> = blk.values.iter().map(|&x| f(x)).collect();
            if let Some(pos) = fv.iter().position(|v| !v.is_finite()) {
                return Err(Error::domain(format!(
                    "function is not finite at eigenvalue {}",
                    blk.values[pos]
                )));
            }
            let m = blk.rows.len();
            let scaled = Mat::from_fn(m, m, |i, j| blk.vectors[(i, j)] * fv[j]);
            let local = scaled.as_ref() * blk.vectors.adjoint();
            for (li, &i) in blk.rows.iter().enumerate() {
                for (lj, &j) in blk.rows.iter().enumerate() {
                    out[(i, j)] = local[(li, lj)];
                }
            }
        }
        Ok(HermitianMatrix::hermitize(out))
    }

    /// `V · diag(f(λ)) · V†` for complex-valued `f`; the result is normal, not Hermitian.
    pub fn apply_complex(&self, f: impl Fn(f64) -> c64) -> Mat<c64> {
        let mut out = Mat::<c64>::zeros(self.n, self.n);
        for blk in &self.blocks {
            let fv: Vec<c64> = blk.values.iter().map(|&x| f(x)).collect();
            let m = blk.rows.len();
            let scaled = Mat::from_fn(m, m, |i, j| blk.vectors[(i, j)] * fv[j]);
            let local = scaled.as_ref() * blk.vectors.adjoint();
            for (li, &i) in blk.rows.iter().enumerate() {
                for (lj, &j) in blk.rows.iter().enumerate() {
                    out[(i, j)] = local[(li, lj)];
                }
            }
        }
        out
    }

    /// `Σ f(λ)`.
    pub fn trace_fn(&self, f: impl Fn(f64) -> f64) -> Result<f64> {
        sum_fn(self.values.iter().copied(), f)
    }

    /// Power of a PSD matrix with `0^p := 0` on the kernel.
    ///
    /// Eigenvalues in `(−NEGATIVE_CLIP, 0)` are clamped to 0; values at or below `floor`
    /// count as kernel. Negative exponents require a trivial kernel.
    pub fn psd_power(&self, p: f64, floor: f64) -> Result<HermitianMatrix> {
        let min = self.min_value();
        if min <= -NEGATIVE_CLIP {
            return Err(Error::domain(format!("matrix is not PSD (eigenvalue {min})")));
        }
        if p < 0.0 && min <= floor {
            return Err(Error::domain(format!(
                "negative power {p} of a singular matrix (eigenvalue {min})"
            )));
        }
        self.apply(|x| if x <= floor { 0.0 } else { x.powf(p) })
    }

    /// Solve `A x = b` through the eigendecomposition of `A`.
    pub fn solve(&self, b: &[c64]) -> Result<Vec<c64>> {
        let mut x = vec![c64::new(0.0, 0.0); self.n];
        for blk in &self.blocks {
            for (k, &lambda) in blk.values.iter().enumerate() {
                if lambda == 0.0 || !lambda.is_finite() {
                    return Err(Error::domain("singular matrix in linear solve"));
                }
                let mut coef = c64::new(0.0, 0.0);
                for (local, &row) in blk.rows.iter().enumerate() {
                    coef += blk.vectors[(local, k)].conj() * b[row];
                }
                coef /= lambda;
                for (local, &row) in blk.rows.iter().enumerate() {
                    x[row] += blk.vectors[(local, k)] * coef;
                }
            }
        }
        Ok(x)
    }

    /// `⟨v, f(A) v⟩` without forming `f(A)`.
    pub fn quadratic_form(&self, v: &[c64], f: impl Fn(f64) -> f64) -> Result<f64> {
        let mut acc = 0.0;
        for blk in &self.blocks {
            for (k, &lambda) in blk.values.iter().enumerate() {
                let fl = f(lambda);
                if !fl.is_finite() {
                    return Err(Error::domain(format!("function is not finite at eigenvalue {lambda}")));
                }
                let mut coef = c64::new(0.0, 0.0);
                for (local, &row) in blk.rows.iter().enumerate() {
                    coef += blk.vectors[(local, k)].conj() * v[row];
                }
                acc += fl * coef.norm_sqr();
            }
        }
        Ok(acc)
    }

    /// `|⟨e_i, f_j⟩|²` for every pair of eigenvectors with nonzero overlap,
    /// as `(i, j, weight)` with global eigen-indices of `self` and `other`.
    pub fn overlaps(&self, other: &EigenSystem) -> Vec<(usize, usize, f64)> {
        let self_global = self.global_indices();
        let other_global = other.global_indices();
        // row → (block in other, local position)
        let mut row_owner = vec![(0usize, 0usize); other.n];
        for (b, blk) in other.blocks.iter().enumerate() {
            for (local, &row) in blk.rows.iter().enumerate() {
                row_owner[row] = (b, local);
            }
        }
        let mut out = Vec::new();
        for (b1, blk1) in self.blocks.iter().enumerate() {
            let mut touched: Vec<usize> = blk1.rows.iter().map(|&r| row_owner[r].0).collect();
            touched.sort_unstable();
            touched.dedup();
            for b2 in touched {
                let blk2 = &other.blocks[b2];
                let shared: Vec<(usize, usize)> = blk1
                    .rows
                    .iter()
                    .enumerate()
                    .filter(|&(_, &r)| row_owner[r].0 == b2)
                    .map(|(l1, &r)| (l1, row_owner[r].1))
                    .collect();
                for k1 in 0..blk1.values.len() {
                    for k2 in 0..blk2.values.len() {
                        let mut z = c64::new(0.0, 0.0);
                        for &(l1, l2) in &shared {
                            z += blk1.vectors[(l1, k1)].conj() * blk2.vectors[(l2, k2)];
                        }
                        let w = z.norm_sqr();
                        if w > 0.0 {
                            out.push((self_global[b1][k1], other_global[b2][k2], w));
                        }
                    }
                }
            }
        }
        out.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
        out
    }

    /// (block, local column) → global eigen-index.
    fn global_indices(&self) -> Vec<Vec<usize>> {
        let mut out: Vec<Vec<usize>> = self.blocks.iter().map(|b| vec![0; b.values.len()]).collect();
        for (g, &(b, k)) in self.order.iter().enumerate() {
            out[b][k] = g;
        }
        out
    }
}

/// `V · diag(f(λ)) · V†`.
pub fn apply_fn(es: &EigenSystem, f: impl Fn(f64) -> f64) -> Result<HermitianMatrix> {
    es.apply(f)
}

/// `Σ f(λ)` over the eigenvalues of `m`.
pub fn trace_fn(m: &HermitianMatrix, f: impl Fn(f64) -> f64) -> Result<f64> {
    sum_fn(eigvalsh(m)?, f)
}

/// Compensated sum of `f` over eigenvalues; `DomainError` on a non-finite value.
fn sum_fn(values: impl IntoIterator<Item = f64>, f: impl Fn(f64) -> f64) -> Result<f64> {
    let (mut acc, mut carry) = (0.0f64, 0.0f64);
    for x in values {
        let v = f(x);
        if !v.is_finite() {
            return Err(Error::domain(format!("function is not finite at eigenvalue {x}")));
        }
        let next = acc + v;
        carry += if acc.abs() >= v.abs() { (acc - next) + v } else { (v - next) + acc };
        acc = next;
    }
    Ok(acc + carry)
}

/// `R₁^{t/2} · R₂^{1−t} · R₁^{t/2}` for PSD factors.
pub fn sandwich_power(r1: &HermitianMatrix, r2: &HermitianMatrix, t: f64) -> Result<HermitianMatrix> {
    sandwich_power_eig(&eigh(r1)?, &eigh(r2)?, t)
}

/// [`sandwich_power`] from precomputed eigensystems.
pub fn sandwich_power_eig(e1: &EigenSystem, e2: &EigenSystem, t: f64) -> Result<HermitianMatrix> {
    if !t.is_finite() {
        return Err(Error::invalid(format!("non-finite exponent {t}")));
    }
    if e1.size() != e2.size() {
        return Err(Error::DimensionMismatch {
            expected: e1.size(),
            found: e2.size(),
        });
    }
    let outer = e1.psd_power(t / 2.0, KERNEL_FLOOR)?;
    let inner = e2.psd_power(1.0 - t, KERNEL_FLOOR)?;
    let left = outer.as_mat() * inner.as_mat();
    Ok(HermitianMatrix::hermitize(left.as_ref() * outer.as_mat()))
}

/// Orthogonal projector onto eigenvectors with eigenvalue strictly above `zero_tol`.
pub fn positive_part_projector(m: &HermitianMatrix, zero_tol: f64) -> Result<HermitianMatrix> {
    eigh(m)?.apply(|x| if x > zero_tol { 1.0 } else { 0.0 })
}

/// `Tr(A·B)` in `O(n²)`.
pub fn trace_product(a: &Mat<c64>, b: &Mat<c64>) -> c64 {
    let n = a.nrows();
    let mut acc = c64::new(0.0, 0.0);
    for j in 0..n {
        for i in 0..n {
            acc += a[(i, j)] * b[(j, i)];
        }
    }
    acc
}
