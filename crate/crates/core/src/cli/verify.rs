//! Cross-oracle verification suite.
//!
//! Each check compares one route against an independent one. Failures are reported
//! as rows with `passed = false`; numerical errors abort the whole suite.

use super::config::RunConfig;
use super::report::{CheckRow, ConvergenceRow};
use crate::asymptotics::{AsymptoticProblem, szego_check};
use crate::error::{Error, Result};
use crate::finite::FiniteProblem;
use crate::fock::{SweepCaps, lattice_states};
use crate::symbols::{DiscriminationProblem, SymbolKind};

/// Fock-route tolerance before adding the truncation deficit.
pub const FOCK_TOL: f64 = 1e-8;
/// Nussbaum–Szkoła against matrix powers.
pub const NS_TOL: f64 = 1e-10;
/// Slack allowed when a sequence must not increase.
pub const TREND_SLACK: f64 = 1e-10;
/// One-sided difference step and tolerance.
pub const BOUNDARY_STEP: f64 = 1e-5;
pub const BOUNDARY_TOL: f64 = 1e-3;
/// Central second difference step and relative tolerance.
pub const SECOND_STEP: f64 = 1e-3;
pub const SECOND_RTOL: f64 = 1e-6;
pub const POLAR_TOL: f64 = 1e-8;
pub const HOEFFDING_TOL: f64 = 1e-7;
pub const CHERNOFF_TOL: f64 = 1e-10;

const FOCK_T: [f64; 3] = [0.25, 0.5, 0.75];
const SECOND_T: [f64; 3] = [0.3, 0.5, 0.7];
const DEFAULT_R: [f64; 3] = [0.02, 0.05, 0.1];
const TREND_T_POINTS: usize = 11;

/// Cube sizes for the finite-n trend and Szegő checks, kept small in higher dimensions.
pub fn trend_sizes(dim: usize) -> Vec<usize> {
    match dim {
        1 => vec![8, 16, 32],
        2 => vec![4, 8, 16],
        _ => vec![2, 4, 6],
    }
}

/// Max over `t_grid` of `|ψₙ(t)/n^ν − ψ(t)|` for each `n`.
pub fn convergence_table(
    problem: &DiscriminationProblem,
    asym: &AsymptoticProblem,
    n_list: &[usize],
    t_grid: &[f64],
    dense_cap: usize,
) -> Result<Vec<ConvergenceRow>> {
    let limit = t_grid.iter().map(|&t| asym.psi(t)).collect::<Result<Vec<_>>>()?;
    n_list
        .iter()
        .map(|&n| {
            let fp = FiniteProblem::with_cap(problem, n, dense_cap)?;
            let sites = fp.sites();
            let mut max_gap = 0.0f64;
            for (&t, &psi) in t_grid.iter().zip(&limit) {
                max_gap = max_gap.max((fp.psi(t)? / sites as f64 - psi).abs());
            }
            Ok(ConvergenceRow { n, sites, max_gap })
        })
        .collect()
}

fn nonincreasing(rows: &mut Vec<CheckRow>, name: &str, seq: &[(usize, f64)]) {
    for w in seq.windows(2) {
        rows.push(CheckRow::at_most(format!("{name}[n={}]", w[1].0), w[1].1, w[0].1, TREND_SLACK));
    }
}

fn fock_checks(config: &RunConfig, rows: &mut Vec<CheckRow>) -> Result<f64> {
    let caps = SweepCaps {
        dense: config.dense_cap,
        basis: config.basis_cap,
    };
    let mut max_deficit = 0.0f64;
    for &n in &config.n_list {
        let pair = lattice_states(&config.problem, n, config.fock_cutoff, caps)?;
        let fp = FiniteProblem::with_cap(&config.problem, n, config.dense_cap)?;
        let deficit = pair.trace_deficit();
        max_deficit = max_deficit.max(deficit);
        let ns = pair.nussbaum_szkola();
        for t in FOCK_T {
            let fock = pair.quasi_power_trace(t)?;
            rows.push(CheckRow::close(
                format!("finite_vs_fock[n={n},t={t}]"),
                fock,
                fp.psi(t)?.exp(),
                FOCK_TOL + deficit,
            ));
            if config.problem.relative_displacement().is_zero() {
                rows.push(CheckRow::close(
                    format!("nussbaum_szkola[n={n},t={t}]"),
                    ns.hellinger(t),
                    fock,
                    NS_TOL * fock.abs().max(1.0),
                ));
            }
        }
        let sites = pair.state1().basis().modes() as f64;
        let np = pair.neyman_pearson(config.np_a, sites)?;
        rows.push(CheckRow::at_most(
            format!("audenaert[n={n}]"),
            np.e,
            pair.audenaert_bound(config.np_a, sites)?,
            0.0,
        ));
    }
    Ok(max_deficit)
}

fn derivative_checks(asym: &AsymptoticProblem, rows: &mut Vec<CheckRow>) -> Result<()> {
    let h = BOUNDARY_STEP;
    let left = (asym.psi(1.0)? - asym.psi(1.0 - h)?) / h;
    rows.push(CheckRow::close("dpsi_left1", asym.dpsi_left1()?, left, BOUNDARY_TOL));
    let right = (asym.psi(h)? - asym.psi(0.0)?) / h;
    rows.push(CheckRow::close("dpsi_right0", asym.dpsi_right0()?, right, BOUNDARY_TOL));
    let h = SECOND_STEP;
    for t in SECOND_T {
        let fd = (asym.psi(t + h)? - 2.0 * asym.psi(t)? + asym.psi(t - h)?) / (h * h);
        rows.push(CheckRow::close(
            format!("psi_second[t={t}]"),
            asym.psi_second(t)?,
            fd,
            SECOND_RTOL * fd.abs() + 1e-12,
        ));
    }
    Ok(())
}

fn structure_checks(config: &RunConfig, asym: &AsymptoticProblem, rows: &mut Vec<CheckRow>) -> Result<()> {
    let (chernoff, _) = asym.mean_chernoff()?;
    rows.push(CheckRow::close("polar_at_zero", asym.polar(0.0)?, chernoff, CHERNOFF_TOL));
    let d12 = asym.dpsi_left1()?;
    let d21 = -asym.dpsi_right0()?;
    rows.push(CheckRow::at_most("chernoff_below_entropies", chernoff, d12.min(d21), CHERNOFF_TOL));
    rows.push(CheckRow::close("hoeffding_at_zero", asym.mean_hoeffding(0.0)?, d12, 0.0));
    let r_list: Vec<f64> = if config.r_list.is_empty() {
        DEFAULT_R.to_vec()
    } else {
        config.r_list.clone()
    };
    for r in r_list.into_iter().filter(|&r| r > 0.0 && r < d21) {
        let a = asym.hoeffding_threshold(r)?;
        let phi = asym.polar(a)?;
        rows.push(CheckRow::close(format!("polar_threshold[r={r}]"), phi - a, r, POLAR_TOL));
        rows.push(CheckRow::close(
            format!("hoeffding_polar[r={r}]"),
            asym.mean_hoeffding(r)?,
            phi,
            HOEFFDING_TOL,
        ));
    }
    Ok(())
}

/// Run every applicable check. Returns the rows and the largest Fock trace deficit.
pub fn verify_suite(config: &RunConfig) -> Result<(Vec<CheckRow>, f64)> {
    let problem = &config.problem;
    let asym = AsymptoticProblem::new(problem, config.quadrature)?;
    let mut rows = Vec::new();

    let max_deficit = fock_checks(config, &mut rows)?;

    let sizes = trend_sizes(problem.dim());
    let grid = super::config::uniform_grid(TREND_T_POINTS);
    let table = convergence_table(problem, &asym, &sizes, &grid, config.dense_cap)?;
    let gaps: Vec<_> = table.iter().map(|r| (r.n, r.max_gap)).collect();
    nonincreasing(&mut rows, "asymptotic_trend", &gaps);

    let log1p: &dyn Fn(f64) -> f64 = &|x: f64| x.ln_1p();
    for (name, symbol) in [("szego_q1", &problem.state1.symbol), ("szego_q2", &problem.state2.symbol)] {
        let szego = szego_check(
            std::slice::from_ref(symbol),
            &[log1p],
            SymbolKind::Q,
            &sizes,
            &config.quadrature,
            config.dense_cap,
        )?;
        let gaps: Vec<_> = szego.iter().map(|r| (r.n, r.gap)).collect();
        nonincreasing(&mut rows, name, &gaps);
    }

    if problem.strict_positivity_required() {
        derivative_checks(&asym, &mut rows)?;
        structure_checks(config, &asym, &mut rows)?;
    }
    if rows.iter().any(|r| !r.value.is_finite()) {
        return Err(Error::domain("verification produced a non-finite value"));
    }
    Ok((rows, max_deficit))
}
