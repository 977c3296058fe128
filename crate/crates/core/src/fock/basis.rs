//! Occupation-number basis of the symmetric Fock space with a total-photon cutoff.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// Default cap on the truncated Fock dimension.
pub const DEFAULT_BASIS_CAP: usize = 20_000;

/// Occupation vectors `m` with `Σ mᵢ ≤ M`, ordered by total photon number and then
/// lexicographically.
#[derive(Debug, Clone)]
pub struct FockBasis {
    modes: usize,
    cutoff: usize,
    states: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
    /// `offsets[k]..offsets[k+1]` is the block with total photon number `k`.
    offsets: Vec<usize>,
}

impl PartialEq for FockBasis {
    fn eq(&self, other: &Self) -> bool {
        self.modes == other.modes && self.cutoff == other.cutoff
    }
}

impl Eq for FockBasis {}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<usize> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return None;
        }
    }
    Some(acc as usize)
}

/// Basis for `d` modes and cutoff `M` with the default cap.
pub fn build_basis(modes: usize, cutoff: usize) -> Result<FockBasis> {
    build_basis_with_cap(modes, cutoff, DEFAULT_BASIS_CAP)
}

pub fn build_basis_with_cap(modes: usize, cutoff: usize, cap: usize) -> Result<FockBasis> {
    if modes == 0 {
        return Err(Error::invalid("Fock basis needs at least one mode"));
    }
    let dim = binomial(cutoff + modes, modes).ok_or(Error::SizeOverflow {
        size: usize::MAX,
        cap,
    })?;
    if dim > cap {
        return Err(Error::SizeOverflow { size: dim, cap });
    }
    let mut states = Vec::with_capacity(dim);
    let mut offsets = Vec::with_capacity(cutoff + 2);
    for total in 0..=cutoff {
        offsets.push(states.len());
        let mut current = vec![0u32; modes];
        compositions(total as u32, 0, &mut current, &mut states);
    }
    offsets.push(states.len());
    debug_assert_eq!(states.len(), dim);
    let index = states.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
    Ok(FockBasis {
        modes,
        cutoff,
        states,
        index,
        offsets,
    })
}

/// Append every `m` with `Σ m = remaining` on modes `axis..`, in lexicographic order.
fn compositions(remaining: u32, axis: usize, current: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if axis + 1 == current.len() {
        current[axis] = remaining;
        out.push(current.clone());
        return;
    }
    for k in 0..=remaining {
        current[axis] = k;
        compositions(remaining - k, axis + 1, current, out);
    }
    current[axis] = 0;
}

impl FockBasis {
    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[Vec<u32>] {
        &self.states
    }

    pub fn state(&self, i: usize) -> &[u32] {
        &self.states[i]
    }

    pub fn index_of(&self, occupation: &[u32]) -> Option<usize> {
        self.index.get(occupation).copied()
    }

    /// Index range of the block with total photon number `k ≤ M`.
    pub fn block(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Total photon number of basis state `i`.
    pub fn total(&self, i: usize) -> usize {
        self.states[i].iter().map(|&m| m as usize).sum()
    }
}
