//! Permanents of matrices with repeated rows and columns.

use faer::{Mat, c64};

/// `perm(X[m′; m])`, where row `i` of `X` is repeated `row_mult[i]` times and column `j`
/// is repeated `col_mult[j]` times.
///
/// Ryser's formula with the column subsets compressed to multiplicity vectors
/// `0 ≤ kⱼ ≤ col_mult[j]`, each weighted by `∏ C(col_mult[j], kⱼ)`. Zero when the
/// repeated matrix is not square.
pub fn permanent_repeated(x: &Mat<c64>, row_mult: &[u32], col_mult: &[u32]) -> c64 {
    let n: u32 = row_mult.iter().sum();
    if n != col_mult.iter().sum::<u32>() {
        return c64::new(0.0, 0.0);
    }
    if n == 0 {
        return c64::new(1.0, 0.0);
    }
    let cols: Vec<usize> = (0..col_mult.len()).filter(|&j| col_mult[j] > 0).collect();
    let rows: Vec<usize> = (0..row_mult.len()).filter(|&i| row_mult[i] > 0).collect();
    let mut k = vec![0u32; cols.len()];
    let mut acc = c64::new(0.0, 0.0);
    loop {
        let size: u32 = k.iter().sum();
        if size > 0 {
            let mut weight = 1.0;
            for (slot, &j) in cols.iter().enumerate() {
                weight *= binomial_f64(col_mult[j], k[slot]);
            }
            let mut term = c64::new(weight, 0.0);
            for &i in &rows {
                let mut s = c64::new(0.0, 0.0);
                for (slot, &j) in cols.iter().enumerate() {
                    s += x[(i, j)] * k[slot] as f64;
                }
                term *= s.powu(row_mult[i]);
            }
            if (n - size) % 2 == 1 {
                acc -= term;
            } else {
                acc += term;
            }
        }
        // odometer over the multiplicity vector
        let mut slot = 0;
        loop {
            if slot == k.len() {
                return acc;
            }
            if k[slot] < col_mult[cols[slot]] {
                k[slot] += 1;
                break;
            }
            k[slot] = 0;
            slot += 1;
        }
    }
}

/// `perm(X)` of a square matrix by Ryser's formula.
pub fn permanent(x: &Mat<c64>) -> c64 {
    let ones = vec![1u32; x.nrows()];
    if x.nrows() != x.ncols() {
        return c64::new(0.0, 0.0);
    }
    permanent_repeated(x, &ones, &ones)
}

/// `perm(X)` as a sum over all permutations; only for small matrices.
pub fn permanent_naive(x: &Mat<c64>) -> c64 {
    let n = x.nrows();
    assert_eq!(n, x.ncols());
    let mut perm: Vec<usize> = (0..n).collect();
    let mut acc = c64::new(0.0, 0.0);
    heap_permutations(n, &mut perm, &mut |p| {
        let mut term = c64::new(1.0, 0.0);
        for (i, &j) in p.iter().enumerate() {
            term *= x[(i, j)];
        }
        acc += term;
    });
    acc
}

fn heap_permutations(k: usize, p: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(p);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(k - 1, p, visit);
        if k % 2 == 0 {
            p.swap(i, k - 1);
        } else {
            p.swap(0, k - 1);
        }
    }
    heap_permutations(k - 1, p, visit);
}

fn binomial_f64(n: u32, k: u32) -> f64 {
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Expand `X[m′; m]` explicitly.
pub fn repeat_matrix(x: &Mat<c64>, row_mult: &[u32], col_mult: &[u32]) -> Mat<c64> {
    let rows: Vec<usize> = row_mult
        .iter()
        .enumerate()
        .flat_map(|(i, &m)| std::iter::repeat_n(i, m as usize))
        .collect();
    let cols: Vec<usize> = col_mult
        .iter()
        .enumerate()
        .flat_map(|(j, &m)| std::iter::repeat_n(j, m as usize))
        .collect();
    Mat::from_fn(rows.len(), cols.len(), |a, b| x[(rows[a], cols[b])])
}
