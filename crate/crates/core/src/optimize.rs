//! One-dimensional search on compact intervals.

use crate::error::{Error, Result};

const COARSE_POINTS: usize = 33;
const GOLDEN_TOL: f64 = 1e-10;

/// Minimizer and minimum of `f` on `[lo, hi]`.
///
/// A coarse grid brackets the minimum, then golden-section search refines it.
/// Exact for convex `f`; the endpoints are always candidates.
pub fn minimize(lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    if !(lo <= hi) {
        return Err(Error::invalid(format!("empty interval [{lo}, {hi}]")));
    }
    if lo == hi {
        return Ok((lo, f(lo)?));
    }
    let step = (hi - lo) / (COARSE_POINTS - 1) as f64;
    let grid: Vec<f64> = (0..COARSE_POINTS)
        .map(|i| if i + 1 == COARSE_POINTS { hi } else { lo + step * i as f64 })
        .collect();
    let mut values = Vec::with_capacity(COARSE_POINTS);
    for &x in &grid {
        let v = f(x)?;
        if v.is_nan() {
            return Err(Error::domain(format!("objective is NaN at {x}")));
        }
        values.push(v);
    }
    let best = (0..COARSE_POINTS)
        .min_by(|&i, &j| values[i].total_cmp(&values[j]))
        .unwrap();
    let mut a = grid[best.saturating_sub(1)];
    let mut b = grid[(best + 1).min(COARSE_POINTS - 1)];
    let (mut best_x, mut best_v) = (grid[best], values[best]);

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > GOLDEN_TOL {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d)?;
        }
    }
    for (x, v) in [(c, fc), (d, fd)] {
        if v < best_v {
            best_x = x;
            best_v = v;
        }
    }
    Ok((best_x, best_v))
}

/// Maximizer and maximum of `f` on `[lo, hi]`.
pub fn maximize(lo: f64, hi: f64, mut f: impl FnMut(f64) -> Result<f64>) -> Result<(f64, f64)> {
    let (x, v) = minimize(lo, hi, |t| f(t).map(|v| -v))?;
    Ok((x, -v))
}

/// Root of a monotone `g` on `[lo, hi]` with `g(lo) ≤ 0 ≤ g(hi)` (or reversed), to `tol`.
pub fn bisect(mut lo: f64, mut hi: f64, tol: f64, mut g: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let g_lo = g(lo)?;
    let g_hi = g(hi)?;
    if g_lo == 0.0 {
        return Ok(lo);
    }
    if g_hi == 0.0 {
        return Ok(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return Err(Error::ConvergenceFailure(format!(
            "no sign change on [{lo}, {hi}] ({g_lo}, {g_hi})"
        )));
    }
    let rising = g_hi > 0.0;
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let v = g(mid)?;
        if (v > 0.0) == rising {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
