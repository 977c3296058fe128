//! Operators on the truncated Fock space.
//!
//! Fock operators `X_F = ⊕ ∨ᵐX` are stored block by block. Block `m` is built from
//! block `m − 1` through `X_F a†ⱼ = (Σᵢ Xᵢⱼ a†ᵢ) X_F`, which gives
//! `F(m′, m) = Σᵢ Xᵢⱼ √m′ᵢ F(m′ − eᵢ, m − eⱼ) / √mⱼ` for any `j` with `mⱼ > 0`.
//! Every entry equals `perm(X[m′; m]) / √(∏m′ᵢ! ∏mⱼ!)`, but the recurrence avoids the
//! cancellation that Ryser sums suffer at large photon numbers.

use faer::{Mat, c64};

use super::basis::FockBasis;
use crate::calculus::eigh;
use crate::error::{Error, Result};
use crate::lattice::HermitianMatrix;

/// Largest admissible defect of a truncated displacement operator.
pub const UNITARITY_TOL: f64 = 1e-6;

/// Block-diagonal operator, one dense block per total photon number.
#[derive(Debug, Clone)]
pub struct BlockOperator {
    blocks: Vec<Mat<c64>>,
}

impl BlockOperator {
    pub fn blocks(&self) -> &[Mat<c64>] {
        &self.blocks
    }

    pub fn block(&self, k: usize) -> &Mat<c64> {
        &self.blocks[k]
    }

    /// Blockwise product `self · other`.
    pub fn mul(&self, other: &BlockOperator) -> BlockOperator {
        BlockOperator {
            blocks: self.blocks.iter().zip(&other.blocks).map(|(a, b)| a * b).collect(),
        }
    }

    pub fn scaled(&self, factor: f64) -> BlockOperator {
        let s = c64::new(factor, 0.0);
        BlockOperator {
            blocks: self
                .blocks
                .iter()
                .map(|b| Mat::from_fn(b.nrows(), b.ncols(), |i, j| b[(i, j)] * s))
                .collect(),
        }
    }

    pub fn trace(&self) -> c64 {
        self.blocks
            .iter()
            .flat_map(|b| (0..b.nrows()).map(move |i| b[(i, i)]))
            .sum()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.nrows()).sum()
    }

    pub fn to_dense(&self) -> Mat<c64> {
        let n = self.dim();
        let mut out = Mat::<c64>::zeros(n, n);
        let mut offset = 0;
        for b in &self.blocks {
            for j in 0..b.ncols() {
                for i in 0..b.nrows() {
                    out[(offset + i, offset + j)] = b[(i, j)];
                }
            }
            offset += b.nrows();
        }
        out
    }
}

/// `lower[i * d + a]` is the index of `mᵢ − e_a`, when that is a valid occupation.
fn lowering_table(basis: &FockBasis) -> Vec<Option<usize>> {
    let d = basis.modes();
    let mut table = vec![None; basis.dim() * d];
    let mut scratch = vec![0u32; d];
    for (i, m) in basis.states().iter().enumerate() {
        for a in 0..d {
            if m[a] > 0 {
                scratch.copy_from_slice(m);
                scratch[a] -= 1;
                table[i * d + a] = basis.index_of(&scratch);
            }
        }
    }
    table
}

fn check_square(x: &Mat<c64>, d: usize) -> Result<()> {
    if x.nrows() != d || x.ncols() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: if x.nrows() != d { x.nrows() } else { x.ncols() },
        });
    }
    Ok(())
}

/// `X_F` restricted to total photon number `≤ M`.
pub fn fock_operator(x: &Mat<c64>, basis: &FockBasis) -> Result<BlockOperator> {
    let d = basis.modes();
    check_square(x, d)?;
    let lower = lowering_table(basis);
    let mut blocks = vec![Mat::from_fn(1, 1, |_, _| c64::new(1.0, 0.0))];
    for k in 1..=basis.cutoff() {
        let range = basis.block(k);
        let prev_off = basis.block(k - 1).start;
        let size = range.len();
        let prev = &blocks[k - 1];
        let mut cur = Mat::<c64>::zeros(size, size);
        for (col, gc) in range.clone().enumerate() {
            let m = basis.state(gc);
            let j = m.iter().position(|&v| v > 0).expect("nonvacuum state");
            let pc = lower[gc * d + j].expect("valid lowering") - prev_off;
            let inv = 1.0 / (m[j] as f64).sqrt();
            for (row, gr) in range.clone().enumerate() {
                let mp = basis.state(gr);
                let mut acc = c64::new(0.0, 0.0);
                for i in 0..d {
                    if mp[i] > 0 {
                        let pr = lower[gr * d + i].expect("valid lowering") - prev_off;
                        acc += x[(i, j)] * prev[(pr, pc)] * (mp[i] as f64).sqrt();
                    }
                }
                cur[(row, col)] = acc * inv;
            }
        }
        blocks.push(cur);
    }
    Ok(BlockOperator { blocks })
}

/// `Γ(B) = Σ Bᵢⱼ a†ᵢ aⱼ`, block-diagonal in total photon number.
pub fn second_quantization(b: &Mat<c64>, basis: &FockBasis) -> Result<BlockOperator> {
    let d = basis.modes();
    check_square(b, d)?;
    let mut blocks = Vec::with_capacity(basis.cutoff() + 1);
    let mut scratch = vec![0u32; d];
    for k in 0..=basis.cutoff() {
        let range = basis.block(k);
        let off = range.start;
        let mut cur = Mat::<c64>::zeros(range.len(), range.len());
        for (col, gc) in range.clone().enumerate() {
            let m = basis.state(gc);
            for j in 0..d {
                if m[j] == 0 {
                    continue;
                }
                for i in 0..d {
                    scratch.copy_from_slice(m);
                    scratch[j] -= 1;
                    scratch[i] += 1;
                    let row = basis.index_of(&scratch).expect("same block") - off;
                    let amp = ((m[j] as f64) * (scratch[i] as f64)).sqrt();
                    cur[(row, col)] += b[(i, j)] * amp;
                }
            }
        }
        blocks.push(cur);
    }
    Ok(BlockOperator { blocks })
}

/// Creation operator `a†ᵢ` on the truncated space (states leaving the cutoff are dropped).
pub fn creation(mode: usize, basis: &FockBasis) -> Result<Mat<c64>> {
    if mode >= basis.modes() {
        return Err(Error::invalid(format!("mode {mode} out of range")));
    }
    let n = basis.dim();
    let mut out = Mat::<c64>::zeros(n, n);
    let mut scratch = vec![0u32; basis.modes()];
    for (col, m) in basis.states().iter().enumerate() {
        scratch.copy_from_slice(m);
        scratch[mode] += 1;
        if let Some(row) = basis.index_of(&scratch) {
            out[(row, col)] = c64::new((scratch[mode] as f64).sqrt(), 0.0);
        }
    }
    Ok(out)
}

/// Annihilation operator `aᵢ`.
pub fn annihilation(mode: usize, basis: &FockBasis) -> Result<Mat<c64>> {
    Ok(creation(mode, basis)?.adjoint().to_owned())
}

/// Components `∏ zᵢ^{mᵢ} / √(mᵢ!)` of the exponential vector `z_F`.
pub fn exponential_vector(z: &[c64], basis: &FockBasis) -> Vec<c64> {
    basis
        .states()
        .iter()
        .map(|m| {
            let mut v = c64::new(1.0, 0.0);
            for (zi, &mi) in z.iter().zip(m) {
                for k in 1..=mi {
                    v *= zi / (k as f64).sqrt();
                }
            }
            v
        })
        .collect()
}

/// Truncated Weyl operator together with its measured truncation defect.
#[derive(Debug, Clone)]
pub struct DisplacementOperator {
    pub matrix: Mat<c64>,
    /// Largest deviation from the exact action on the low-photon block.
    pub defect: f64,
}

/// `W_κ(y) = exp(√κ Σ (yᵢ a†ᵢ − conj(yᵢ) aᵢ))` on the truncated space.
///
/// The result is checked against `W_κ(x) z_F = e^{−κ‖x‖²/2 − √κ⟨x,z⟩} (z + √κ x)_F`
/// (inner product conjugate-linear in the first slot) on states with at most `M/2`
/// photons; `UnitarityDefect` is raised when the mismatch exceeds `UNITARITY_TOL`.
pub fn displacement_operator(y: &[c64], kappa: f64, basis: &FockBasis) -> Result<DisplacementOperator> {
    let d = basis.modes();
    if y.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            found: y.len(),
        });
    }
    if !(kappa > 0.0) {
        return Err(Error::invalid(format!("kappa must be positive, got {kappa}")));
    }
    let n = basis.dim();
    if y.iter().all(|z| z.norm() == 0.0) {
        return Ok(DisplacementOperator {
            matrix: Mat::identity(n, n),
            defect: 0.0,
        });
    }
    // H = −i √κ Σ (yᵢ a†ᵢ − conj(yᵢ) aᵢ) is Hermitian and exp(iH) = W.
    let sk = kappa.sqrt();
    let mut h = Mat::<c64>::zeros(n, n);
    let mut scratch = vec![0u32; d];
    for (col, m) in basis.states().iter().enumerate() {
        for (i, &yi) in y.iter().enumerate() {
            if yi.norm() == 0.0 {
                continue;
            }
            scratch.copy_from_slice(m);
            scratch[i] += 1;
            if let Some(row) = basis.index_of(&scratch) {
                let v = c64::new(0.0, -sk) * yi * (scratch[i] as f64).sqrt();
                h[(row, col)] += v;
                h[(col, row)] += v.conj();
            }
        }
    }
    let es = eigh(&HermitianMatrix::hermitize(h))?;
    let w = es.apply_complex(c64::cis);
    let defect = action_defect(&w, y, kappa, basis);
    if defect > UNITARITY_TOL {
        return Err(Error::UnitarityDefect(defect));
    }
    Ok(DisplacementOperator { matrix: w, defect })
}

/// Compare `W z_F` against the exact action for a few small `z`, on the low-photon block.
fn action_defect(w: &Mat<c64>, y: &[c64], kappa: f64, basis: &FockBasis) -> f64 {
    let d = basis.modes();
    let low = basis.block(basis.cutoff() / 2).end;
    let sk = kappa.sqrt();
    let probes: Vec<Vec<c64>> = vec![
        vec![c64::new(0.0, 0.0); d],
        (0..d).map(|i| c64::new(0.1, 0.05 * (i as f64 + 1.0))).collect(),
        (0..d).map(|i| c64::new(-0.05 * (i as f64), 0.1)).collect(),
    ];
    let norm_y: f64 = y.iter().map(|z| z.norm_sqr()).sum();
    let mut worst = 0.0f64;
    for z in probes {
        let zf = exponential_vector(&z, basis);
        let inner: c64 = y.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
        let pref = (c64::new(-kappa * norm_y / 2.0, 0.0) - inner * sk).exp();
        let shifted: Vec<c64> = z.iter().zip(y).map(|(a, b)| a + b * sk).collect();
        let target = exponential_vector(&shifted, basis);
        for row in 0..low {
            let mut acc = c64::new(0.0, 0.0);
            for (col, v) in zf.iter().enumerate() {
                acc += w[(row, col)] * v;
            }
            worst = worst.max((acc - pref * target[row]).norm());
        }
    }
    // unitarity on the low block
    for a in 0..low {
        for b in a..low {
            let mut acc = c64::new(0.0, 0.0);
            for k in 0..w.nrows() {
                acc += w[(k, a)].conj() * w[(k, b)];
            }
            let expect = if a == b { 1.0 } else { 0.0 };
            worst = worst.max((acc - c64::new(expect, 0.0)).norm());
        }
    }
    worst
}
