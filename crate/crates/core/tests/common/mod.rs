//! Independent oracles and invariant properties shared by the integration targets.
//!
//! Oracles here never call the routes they check: scalar thermal formulas, periodic
//! trapezoid sums, classical photon-count distributions.

#![allow(dead_code)]

use std::f64::consts::PI;
use std::sync::Arc;

use faer::{Mat, c64};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};

use gauss_ht::asymptotics::{AsymptoticProblem, QuadratureRule};
use gauss_ht::calculus::{apply_fn, eigh, eigvalsh, sandwich_power, trace_fn};
use gauss_ht::finite::{Direction, FiniteProblem};
use gauss_ht::fock::{FockPair, build_basis, fock_operator, gaussian_density, lattice_states, SweepCaps};
use gauss_ht::lattice::{HermitianMatrix, SiteIndexer, restrict_symbol};
use gauss_ht::{DiscriminationProblem, DisplacementSpec, GaussianStateSpec, SymbolKind, SymbolSpec, make_trig_symbol};

pub const SEED: u64 = 0x6761_7573_735f_6874;

// ---------------------------------------------------------------- oracles

/// `q ↦ q/(1+q)`.
pub fn ratio(q: f64) -> f64 {
    q / (1.0 + q)
}

fn pow0(x: f64, s: f64) -> f64 {
    if x == 0.0 { if s == 0.0 { 1.0 } else { 0.0 } } else { x.powf(s) }
}

/// `log Tr ρ₁^t ρ₂^{1−t}` for two single-mode thermal states with mean photon numbers `q1`, `q2`.
pub fn thermal_psi(q1: f64, q2: f64, t: f64) -> f64 {
    let (r1, r2) = (ratio(q1), ratio(q2));
    let w = pow0(r1, t) * pow0(r2, 1.0 - t);
    t * (1.0 - r1).ln() + (1.0 - t) * (1.0 - r2).ln() - (1.0 - w).ln()
}

/// Classical relative entropy of two geometric photon-count laws.
pub fn thermal_entropy(q1: f64, q2: f64) -> f64 {
    let (r1, r2) = (ratio(q1), ratio(q2));
    ((1.0 - r1) / (1.0 - r2)).ln() + q1 * (r1 / r2).ln()
}

/// `(2π)^{-1} ∫ f` by the periodic trapezoid rule on `points` nodes.
pub fn periodic_mean(f: impl Fn(f64) -> f64, points: usize) -> f64 {
    (0..points).map(|k| f(2.0 * PI * k as f64 / points as f64)).sum::<f64>() / points as f64
}

/// Asymptotic `ψ(t)` for one-dimensional symbols given as plain closures.
pub fn psi_oracle(q1: impl Fn(f64) -> f64, q2: impl Fn(f64) -> f64, t: f64) -> f64 {
    periodic_mean(|x| thermal_psi(q1(x), q2(x), t), 4096)
}

/// `(2π)^{-1} ∫ w L²/(1−w)²` with `w = r₁^t r₂^{1−t}`, `L = log r₁ − log r₂`.
pub fn psi_second_with_w(q1: impl Fn(f64) -> f64, q2: impl Fn(f64) -> f64, t: f64) -> f64 {
    periodic_mean(
        |x| {
            let (r1, r2) = (ratio(q1(x)), ratio(q2(x)));
            let w = r1.powf(t) * r2.powf(1.0 - t);
            let l = r1.ln() - r2.ln();
            w * l * l / ((1.0 - w) * (1.0 - w))
        },
        4096,
    )
}

/// The same integrand without the leading `w`.
pub fn psi_second_without_w(q1: impl Fn(f64) -> f64, q2: impl Fn(f64) -> f64, t: f64) -> f64 {
    periodic_mean(
        |x| {
            let (r1, r2) = (ratio(q1(x)), ratio(q2(x)));
            let w = r1.powf(t) * r2.powf(1.0 - t);
            let l = r1.ln() - r2.ln();
            l * l / ((1.0 - w) * (1.0 - w))
        },
        4096,
    )
}

fn ln_binomial(n: usize, k: usize) -> f64 {
    (1..=k).map(|i| ((n - k + i) as f64 / i as f64).ln()).sum()
}

/// Optimal `weight·α + β` for `modes` independent thermal modes, untruncated.
///
/// Both states are diagonal in the occupation basis and depend only on the total
/// photon number `N`, which has multiplicity `C(N+modes−1, modes−1)`.
pub fn thermal_np_error(q1: f64, q2: f64, modes: usize, weight: f64) -> f64 {
    let (r1, r2) = (ratio(q1), ratio(q2));
    let (l1, l2) = (modes as f64 * (1.0 - r1).ln(), modes as f64 * (1.0 - r2).ln());
    let mut total = 0.0;
    for n in 0..20_000usize {
        let mult = ln_binomial(n + modes - 1, modes - 1);
        let p1 = weight * (l1 + mult + n as f64 * r1.ln()).exp();
        let p2 = (l2 + mult + n as f64 * r2.ln()).exp();
        total += p1.min(p2);
        if n > 50 && p1.max(p2) < 1e-20 {
            break;
        }
    }
    total
}

/// `(2π)^{-1} ∫ log(1 + c + cos x) = log((1 + c + √((1+c)² − 1))/2)`.
pub fn log_cosine_mean(c: f64) -> f64 {
    let b = 1.0 + c;
    ((b + (b * b - 1.0).sqrt()) / 2.0).ln()
}

/// Tail `Σ_{m>M} C(m+d−1, d−1) x^m`, the exact truncation loss of `Tr Γ(x·I_d)`.
pub fn photon_tail(x: f64, modes: usize, cutoff: usize) -> f64 {
    let full = (1.0 - x).powi(-(modes as i32));
    let head: f64 = (0..=cutoff)
        .map(|m| (ln_binomial(m + modes - 1, modes - 1) + m as f64 * x.ln()).exp())
        .sum();
    (full - head).max(0.0)
}

// ---------------------------------------------------------------- fixtures

pub fn constant(v: f64) -> SymbolSpec {
    SymbolSpec::constant(1, v).unwrap()
}

/// `c + cos x`.
pub fn cosine(c: f64) -> SymbolSpec {
    make_trig_symbol(1, [(vec![0], c64::new(c, 0.0)), (vec![1], c64::new(0.5, 0.0))], 64).unwrap()
}

pub fn quasi_free(q1: SymbolSpec, q2: SymbolSpec) -> DiscriminationProblem {
    DiscriminationProblem::quasi_free(q1, q2, 0.5).unwrap()
}

pub fn displaced(q1: SymbolSpec, q2: SymbolSpec, y2: DisplacementSpec, kappa: f64) -> DiscriminationProblem {
    DiscriminationProblem::new(
        GaussianStateSpec::quasi_free(q1, kappa).unwrap(),
        GaussianStateSpec::new(q2, y2, kappa).unwrap(),
    )
    .unwrap()
}

pub fn rule1() -> QuadratureRule {
    QuadratureRule::default_for(1).unwrap()
}

// ---------------------------------------------------------------- strategies

/// One-dimensional bandwidth-2 symbol with `min q ≥ 0.1·c0`.
#[derive(Debug, Clone, Copy)]
pub struct SymbolDraw {
    pub c0: f64,
    pub c1: (f64, f64),
    pub c2: (f64, f64),
}

impl SymbolDraw {
    pub fn spec(&self) -> SymbolSpec {
        make_trig_symbol(
            1,
            [
                (vec![0], c64::new(self.c0, 0.0)),
                (vec![1], c64::new(self.c1.0, self.c1.1)),
                (vec![2], c64::new(self.c2.0, self.c2.1)),
            ],
            64,
        )
        .unwrap()
    }

    pub fn eval(&self, x: f64) -> f64 {
        let term = |(re, im): (f64, f64), k: f64| 2.0 * (re * (k * x).cos() - im * (k * x).sin());
        self.c0 + term(self.c1, 1.0) + term(self.c2, 2.0)
    }
}

pub fn symbol_draw(lo: f64, hi: f64) -> impl Strategy<Value = SymbolDraw> {
    (lo..hi, 0.0..1.0f64, 0.0..1.0f64, 0.0..2.0 * PI, 0.0..2.0 * PI).prop_map(|(c0, s, u, p1, p2)| {
        let budget = 0.45 * c0 * s;
        let (a, b) = (budget * u, budget * (1.0 - u));
        SymbolDraw {
            c0,
            c1: (a * p1.cos(), a * p1.sin()),
            c2: (b * p2.cos(), b * p2.sin()),
        }
    })
}

fn hermitian(n: usize) -> impl Strategy<Value = HermitianMatrix> {
    proptest::collection::vec(-1.0..1.0f64, 2 * n * n)
        .prop_map(move |v| HermitianMatrix::hermitize(Mat::from_fn(n, n, |i, j| c64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1]))))
}

fn complex_matrix(n: usize) -> impl Strategy<Value = Mat<c64>> {
    proptest::collection::vec(-1.0..1.0f64, 2 * n * n)
        .prop_map(move |v| Mat::from_fn(n, n, |i, j| c64::new(v[2 * (i * n + j)], v[2 * (i * n + j) + 1])))
}

/// `B B† + shift·I`.
fn positive_definite(m: &HermitianMatrix, shift: f64) -> HermitianMatrix {
    let b = m.as_mat();
    let n = b.nrows();
    let mut p = b * b.adjoint();
    for i in 0..n {
        p[(i, i)] += c64::new(shift, 0.0);
    }
    HermitianMatrix::hermitize(p)
}

// ---------------------------------------------------------------- runner

/// Run `test` on `cases` draws from `strategy` with the fixed seed.
pub fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let config = Config {
        cases,
        rng_seed: RngSeed::Fixed(SEED),
        failure_persistence: None,
        max_shrink_iters: 64,
        ..Config::default()
    };
    TestRunner::new(config).run(&strategy, test).map_err(|e| e.to_string())
}

fn fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn ok<T>(r: gauss_ht::Result<T>) -> Result<T, TestCaseError> {
    r.map_err(|e| fail(format!("{}: {e}", e.name())))
}

// ---------------------------------------------------------------- symbols

pub fn prop_symbol_identities(cases: u32) -> Result<(), String> {
    check(cases, (symbol_draw(0.0, 3.0), 0.0..2.0 * PI), |(d, x)| {
        let s = d.spec();
        let (q, a, r) = (s.eval(&[x], SymbolKind::Q), s.eval(&[x], SymbolKind::A), s.eval(&[x], SymbolKind::R));
        prop_assert!((a - (1.0 + 2.0 * q)).abs() < 1e-12);
        prop_assert!((r * (1.0 + q) - q).abs() < 1e-12);
        prop_assert!((q - d.eval(x)).abs() < 1e-12);
        let max = s.grid_max();
        prop_assert!(r >= 0.0 && r <= max / (1.0 + max) + 1e-12);
        Ok(())
    })
}

/// Imaginary part of `Σ ĉ(j) e^{ijx}` over stored coefficients, on 10³ points.
pub fn prop_symbol_real(cases: u32) -> Result<(), String> {
    check(cases, symbol_draw(0.0, 3.0), |d| {
        let s = d.spec();
        for k in 0..1000 {
            let x = 2.0 * PI * k as f64 / 1000.0;
            let im: f64 = s
                .coeffs()
                .iter()
                .map(|(j, c)| (*c * c64::new((j[0] as f64 * x).cos(), (j[0] as f64 * x).sin())).im)
                .sum();
            prop_assert!(im.abs() < 1e-10);
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- lattice

fn symbol2d() -> impl Strategy<Value = SymbolSpec> {
    (1.0..3.0f64, proptest::collection::vec(-0.15..0.15f64, 8)).prop_map(|(c0, v)| {
        make_trig_symbol(
            2,
            [
                (vec![0, 0], c64::new(c0, 0.0)),
                (vec![1, 0], c64::new(v[0], v[1])),
                (vec![0, 1], c64::new(v[2], v[3])),
                (vec![1, -1], c64::new(v[4], v[5])),
                (vec![2, 1], c64::new(v[6], v[7])),
            ],
            256,
        )
        .unwrap()
    })
}

pub fn prop_toeplitz_structure(cases: u32) -> Result<(), String> {
    check(cases, (symbol2d(), 2usize..6, proptest::collection::vec(0i64..6, 6)), |(s, n, p)| {
        let m = ok(restrict_symbol(&s, n))?;
        let idx = ok(SiteIndexer::new(2, n))?;
        let m = m.as_mat();
        let w = n as i64;
        let (k, kp) = (vec![p[0] % w, p[1] % w], vec![p[2] % w, p[3] % w]);
        let shift = [p[4] % w, p[5] % w];
        let moved = |v: &[i64]| vec![v[0] + shift[0], v[1] + shift[1]];
        let (a, b) = (idx.index(&k).unwrap(), idx.index(&kp).unwrap());
        let diff = vec![k[0] - kp[0], k[1] - kp[1]];
        prop_assert!((m[(a, b)] - s.coefficient(&diff)).norm() < 1e-15);
        if let (Some(c), Some(d)) = (idx.index(&moved(&k)), idx.index(&moved(&kp))) {
            prop_assert_eq!(m[(a, b)], m[(c, d)]);
        }
        Ok(())
    })
}

pub fn prop_spectrum_containment(cases: u32) -> Result<(), String> {
    check(cases, (symbol2d(), 1usize..7), |(s, n)| {
        let values = ok(eigvalsh(&ok(restrict_symbol(&s, n))?))?;
        let (lo, hi) = (s.eta(), s.grid_max());
        for v in values {
            prop_assert!(v >= lo - 1e-9 && v <= hi + 1e-9, "{v} outside [{lo}, {hi}]");
        }
        Ok(())
    })
}

pub fn prop_nesting(cases: u32) -> Result<(), String> {
    check(cases, (symbol2d(), 2usize..7), |(s, n)| {
        let big = ok(restrict_symbol(&s, n))?;
        let small = ok(restrict_symbol(&s, n - 1))?;
        let (ib, is) = (ok(SiteIndexer::new(2, n))?, ok(SiteIndexer::new(2, n - 1))?);
        for a in 0..is.total() {
            for b in 0..is.total() {
                let (ga, gb) = (ib.index(&is.site(a)).unwrap(), ib.index(&is.site(b)).unwrap());
                prop_assert_eq!(small.as_mat()[(a, b)], big.as_mat()[(ga, gb)]);
            }
        }
        Ok(())
    })
}

// ---------------------------------------------------------------- calculus

pub fn prop_apply_composition(cases: u32) -> Result<(), String> {
    check(cases, hermitian(5), |m| {
        let es = ok(eigh(&m))?;
        let g = |x: f64| (x / 4.0).exp();
        let f = |x: f64| x * x.ln();
        let direct = ok(apply_fn(&es, |x| f(g(x))))?;
        let inner = ok(apply_fn(&es, g))?;
        let staged = ok(apply_fn(&ok(eigh(&inner))?, f))?;
        prop_assert!(direct.sub(&staged).max_abs() < 1e-9);
        Ok(())
    })
}

pub fn prop_trace_fn(cases: u32) -> Result<(), String> {
    check(cases, hermitian(6), |m| {
        let f = |x: f64| (x * x + 0.5).ln();
        let lhs = ok(trace_fn(&m, f))?;
        let rhs = ok(apply_fn(&ok(eigh(&m))?, f))?.trace();
        prop_assert!((lhs - rhs).abs() < 1e-10);
        Ok(())
    })
}

pub fn prop_sandwich_endpoints(cases: u32) -> Result<(), String> {
    check(cases, (hermitian(4), hermitian(4)), |(a, b)| {
        let (r1, r2) = (positive_definite(&a, 0.1), positive_definite(&b, 0.1));
        prop_assert!(ok(sandwich_power(&r1, &r2, 0.0))?.sub(&r2).max_abs() < 1e-10);
        prop_assert!(ok(sandwich_power(&r1, &r2, 1.0))?.sub(&r1).max_abs() < 1e-10);
        Ok(())
    })
}

// ---------------------------------------------------------------- finite exponents

fn problem_draw() -> impl Strategy<Value = (SymbolDraw, SymbolDraw)> {
    (symbol_draw(0.2, 2.0), symbol_draw(0.2, 2.0))
}

fn displacement_draw() -> impl Strategy<Value = (i64, f64, f64)> {
    (0i64..3, -0.6..0.6f64, -0.6..0.6f64)
}

pub fn prop_convexity(cases: u32) -> Result<(), String> {
    let strategy = (problem_draw(), displacement_draw(), 1usize..5, 0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64);
    check(cases, strategy, |((d1, d2), (site, re, im), n, s, t, lam)| {
        let y = DisplacementSpec::single(vec![site], c64::new(re, im)).unwrap();
        let fp = ok(FiniteProblem::new(&displaced(d1.spec(), d2.spec(), y, 0.5), n))?;
        let mid = lam * s + (1.0 - lam) * t;
        let lhs = ok(fp.psi(mid))?;
        let rhs = lam * ok(fp.psi(s))? + (1.0 - lam) * ok(fp.psi(t))?;
        prop_assert!(lhs <= rhs + 1e-9, "{lhs} > {rhs}");
        Ok(())
    })
}

pub fn prop_displacement_separation(cases: u32) -> Result<(), String> {
    check(cases, (problem_draw(), displacement_draw(), 1usize..5, 0.0..=1.0f64), |((d1, d2), (site, re, im), n, t)| {
        let y = DisplacementSpec::single(vec![site], c64::new(re, im)).unwrap();
        let with = ok(FiniteProblem::new(&displaced(d1.spec(), d2.spec(), y, 0.7), n))?;
        let without = ok(FiniteProblem::new(&quasi_free(d1.spec(), d2.spec()), n))?;
        let lhs = ok(with.psi(t))? - ok(without.psi(t))?;
        prop_assert!((lhs - ok(with.log_displacement_factor(t))?).abs() < 1e-9);
        Ok(())
    })
}

pub fn prop_constant_scaling(cases: u32) -> Result<(), String> {
    check(cases, (0.0..3.0f64, 0.0..3.0f64, 1usize..9, 0.0..=1.0f64), |(a, b, n, t)| {
        let p = quasi_free(constant(a), constant(b));
        let one = ok(FiniteProblem::new(&p, 1))?;
        let many = ok(FiniteProblem::new(&p, n))?;
        let (x, y) = (ok(many.psi(t))?, n as f64 * ok(one.psi(t))?);
        prop_assert!((x - y).abs() <= 1e-12 * n as f64 * y.abs().max(1.0), "{x} vs {y}");
        Ok(())
    })
}

/// `ψₙ` against the logarithm of the Fock-space quasi-power trace at cutoff 60.
pub fn prop_oracle_equivalence(cases: u32) -> Result<(), String> {
    let strategy = (symbol_draw(0.2, 1.2), symbol_draw(0.2, 1.2), 1usize..3, 0.05..0.95f64);
    check(cases, strategy, |(d1, d2, n, t)| {
        let p = quasi_free(d1.spec(), d2.spec());
        let pair = ok(lattice_states(&p, n, 60, SweepCaps::default()))?;
        let fock = ok(pair.quasi_power_trace(t))?;
        let psi = ok(FiniteProblem::new(&p, n))?.psi(t).unwrap();
        let tol = 1e-6 + pair.trace_deficit();
        prop_assert!((fock - psi.exp()).abs() <= tol, "{fock} vs {} (tol {tol})", psi.exp());
        Ok(())
    })
}

pub fn prop_entropy_difference(cases: u32) -> Result<(), String> {
    check(cases, (problem_draw(), displacement_draw(), 1usize..5), |((d1, d2), (site, re, im), n)| {
        let y = DisplacementSpec::single(vec![site], c64::new(re, im)).unwrap();
        let fp = ok(FiniteProblem::new(&displaced(d1.spec(), d2.spec(), y, 0.5), n))?;
        let h = 1e-5;
        let fd = (ok(fp.psi(1.0))? - ok(fp.psi(1.0 - h))?) / h;
        let d = ok(fp.relative_entropy(Direction::OneTwo))?;
        prop_assert!((fd - d).abs() < 1e-3 * n as f64, "{fd} vs {d}");
        Ok(())
    })
}

// ---------------------------------------------------------------- asymptotics

pub fn prop_asymptotic_endpoints(cases: u32) -> Result<(), String> {
    check(cases, problem_draw(), |(d1, d2)| {
        let a = ok(AsymptoticProblem::new(&quasi_free(d1.spec(), d2.spec()), rule1()))?;
        prop_assert!(ok(a.psi(0.0))?.abs() < 1e-12 && ok(a.psi(1.0))?.abs() < 1e-12);
        Ok(())
    })
}

pub fn prop_uniform_convergence(cases: u32) -> Result<(), String> {
    check(cases, problem_draw(), |(d1, d2)| {
        let p = quasi_free(d1.spec(), d2.spec());
        let a = ok(AsymptoticProblem::new(&p, rule1()))?;
        let grid: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
        let rows = ok(gauss_ht::cli::verify::convergence_table(&p, &a, &[8, 16, 32, 64], &grid, 4096))?;
        for w in rows.windows(2) {
            prop_assert!(w[1].max_gap <= 1.1 * w[0].max_gap + 1e-13, "{:?}", rows);
        }
        Ok(())
    })
}

pub fn prop_legendre(cases: u32) -> Result<(), String> {
    check(cases, (problem_draw(), 0.05..0.95f64), |((d1, d2), t0)| {
        let a = ok(AsymptoticProblem::new(&quasi_free(d1.spec(), d2.spec()), rule1()))?;
        let slope = ok(a.psi_prime(t0))?;
        let phi = ok(a.polar(slope))?;
        prop_assert!((phi - (t0 * slope - ok(a.psi(t0))?)).abs() < 1e-8);
        Ok(())
    })
}

pub fn prop_swap_symmetry(cases: u32) -> Result<(), String> {
    check(cases, problem_draw(), |(d1, d2)| {
        let p = quasi_free(d1.spec(), d2.spec());
        let a = ok(AsymptoticProblem::new(&p, rule1()))?;
        let b = ok(AsymptoticProblem::new(&p.swapped(), rule1()))?;
        for i in 0..=20 {
            let t = i as f64 / 20.0;
            prop_assert!((ok(a.psi(t))? - ok(b.psi(1.0 - t))?).abs() < 1e-12);
        }
        Ok(())
    })
}

pub fn prop_chernoff_below_entropies(cases: u32) -> Result<(), String> {
    check(cases, problem_draw(), |(d1, d2)| {
        let a = ok(AsymptoticProblem::new(&quasi_free(d1.spec(), d2.spec()), rule1()))?;
        let (c, _) = ok(a.mean_chernoff())?;
        let (d12, d21) = (ok(a.dpsi_left1())?, -ok(a.dpsi_right0())?);
        prop_assert!(c <= d12.min(d21) + 1e-12);
        Ok(())
    })
}

// ---------------------------------------------------------------- Fock oracle

fn block_gap(x: &gauss_ht::fock::BlockOperator, y: &gauss_ht::fock::BlockOperator) -> (f64, f64) {
    let mut gap = 0.0f64;
    let mut scale = 0.0f64;
    for (a, b) in x.blocks().iter().zip(y.blocks()) {
        for j in 0..a.ncols() {
            for i in 0..a.nrows() {
                gap = gap.max((a[(i, j)] - b[(i, j)]).norm());
                scale = scale.max(b[(i, j)].norm());
            }
        }
    }
    (gap, scale)
}

pub fn prop_fock_multiplicative(cases: u32) -> Result<(), String> {
    let strategy = (2usize..4).prop_flat_map(|d| (complex_matrix(d), complex_matrix(d), 0usize..7));
    check(cases, strategy, |(x, y, cutoff)| {
        let basis = ok(build_basis(x.nrows(), cutoff))?;
        let xy = &x * &y;
        let lhs = ok(fock_operator(&x, &basis))?.mul(&ok(fock_operator(&y, &basis))?);
        let rhs = ok(fock_operator(&xy, &basis))?;
        let (gap, scale) = block_gap(&lhs, &rhs);
        prop_assert!(gap <= 1e-13 * scale.max(1.0), "gap {gap} at scale {scale}");
        Ok(())
    })
}

/// `det(I−A)⁻¹ − Tr Γ_M(A)` lies in `[0, tail]` where `tail` is the exact loss for `‖A‖·I`.
pub fn prop_trace_identity(cases: u32) -> Result<(), String> {
    let strategy = (1usize..4).prop_flat_map(|d| (hermitian(d), 0.05..0.8f64, 2usize..16));
    check(cases, strategy, |(m, norm, cutoff)| {
        let d = m.size();
        let p = positive_definite(&m, 0.0);
        let top = ok(eigvalsh(&p))?.into_iter().fold(0.0, f64::max);
        let a = p.scaled(norm / top.max(1e-300));
        let lambdas = ok(eigvalsh(&a))?;
        let exact: f64 = lambdas.iter().map(|l| 1.0 / (1.0 - l)).product();
        let basis = ok(build_basis(d, cutoff))?;
        let tr = ok(fock_operator(a.as_mat(), &basis))?.trace().re;
        let residual = exact - tr;
        let tail = photon_tail(norm, d, cutoff);
        prop_assert!(residual >= -1e-12 && residual <= tail * (1.0 + 1e-9) + 1e-12, "{residual} vs {tail}");
        Ok(())
    })
}

pub fn prop_eigenstructure(cases: u32) -> Result<(), String> {
    let strategy = (1usize..4).prop_flat_map(|d| (proptest::collection::vec(0.0..0.8f64, d), 1usize..9));
    check(cases, strategy, |(lambdas, cutoff)| {
        let log_n: f64 = lambdas.iter().map(|l| (1.0 - l).ln()).sum();
        let basis = Arc::new(ok(build_basis(lambdas.len(), cutoff))?);
        let r = HermitianMatrix::from_real_diagonal(&lambdas);
        let rho = ok(gaussian_density(&r, log_n, Arc::clone(&basis)))?;
        let mut got = ok(eigvalsh(rho.matrix()))?;
        let mut want: Vec<f64> = basis
            .states()
            .iter()
            .map(|m| log_n.exp() * m.iter().zip(&lambdas).map(|(&k, l)| l.powi(k as i32)).product::<f64>())
            .collect();
        got.sort_by(f64::total_cmp);
        want.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() < 1e-12);
        }
        Ok(())
    })
}

fn pair_draw() -> impl Strategy<Value = (SymbolDraw, SymbolDraw, usize, (i64, f64, f64))> {
    (symbol_draw(0.2, 1.5), symbol_draw(0.2, 1.5), 1usize..3, displacement_draw())
}

fn small_pair(d1: SymbolDraw, d2: SymbolDraw, n: usize, y: (i64, f64, f64), cutoff: usize) -> Result<FockPair, TestCaseError> {
    let site = y.0.min(n as i64 - 1);
    // Keep the truncated displacement within its unitarity tolerance at small cutoffs.
    let amp = if cutoff < 6 { 0.05 } else { 0.5 };
    let y = DisplacementSpec::single(vec![site], c64::new(y.1 * amp, y.2 * amp)).unwrap();
    ok(lattice_states(&displaced(d1.spec(), d2.spec(), y, 0.5), n, cutoff, SweepCaps::default()))
}

pub fn prop_nussbaum_szkola(cases: u32) -> Result<(), String> {
    check(cases, pair_draw(), |(d1, d2, n, y)| {
        let pair = small_pair(d1, d2, n, y, 14)?;
        let ns = pair.nussbaum_szkola();
        for i in 0..=10 {
            let t = i as f64 / 10.0;
            let qpt = ok(pair.quasi_power_trace(t))?;
            prop_assert!((ns.hellinger(t) - qpt).abs() < 1e-10, "t={t}: {} vs {qpt}", ns.hellinger(t));
        }
        Ok(())
    })
}

/// Orthonormalize the first `rank` columns of `m` and return the projector onto their span.
fn projector(m: &Mat<c64>, rank: usize) -> Mat<c64> {
    let n = m.nrows();
    let mut basis: Vec<Vec<c64>> = Vec::new();
    for j in 0..n {
        if basis.len() == rank {
            break;
        }
        let mut v: Vec<c64> = (0..n).map(|i| m[(i, j)]).collect();
        for b in &basis {
            let dot: c64 = b.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi -= dot * bi;
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            basis.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    Mat::from_fn(n, n, |i, k| basis.iter().map(|b| b[i] * b[k].conj()).sum())
}

const MAX_TEST_DIM: usize = 10;

/// The optimal test beats 50 random projectors.
pub fn prop_np_optimality(cases: u32) -> Result<(), String> {
    let noise = proptest::collection::vec(-1.0..1.0f64, 50 * 2 * MAX_TEST_DIM * MAX_TEST_DIM);
    let ranks = proptest::collection::vec(0usize..=MAX_TEST_DIM, 50);
    check(cases, (pair_draw(), -0.5..0.5f64, noise, ranks), |((d1, d2, n, y), a, noise, ranks)| {
        let pair = small_pair(d1, d2, n, y, if n == 1 { 9 } else { 3 })?;
        let dim = pair.state1().basis().dim();
        prop_assert!(dim <= MAX_TEST_DIM);
        let scale = n as f64;
        let best = ok(pair.neyman_pearson(a, scale))?;
        for (k, &rank) in ranks.iter().enumerate() {
            let off = k * 2 * MAX_TEST_DIM * MAX_TEST_DIM;
            let m = Mat::from_fn(dim, dim, |i, j| {
                let p = off + 2 * (i * MAX_TEST_DIM + j);
                c64::new(noise[p], noise[p + 1])
            });
            let other = pair.evaluate_test(&projector(&m, rank.min(dim)), (-scale * a).exp());
            prop_assert!(best.e <= other.e + 1e-12, "{} > {}", best.e, other.e);
        }
        Ok(())
    })
}

pub fn prop_audenaert(cases: u32) -> Result<(), String> {
    check(cases, (pair_draw(), -0.5..0.5f64), |((d1, d2, n, y), a)| {
        let pair = small_pair(d1, d2, n, y, 12)?;
        let scale = n as f64;
        let weight = (-scale * a).exp();
        let np = ok(pair.neyman_pearson(a, scale))?;
        let bound = ok(pair.audenaert_bound(a, scale))?;
        // `alpha` counts the missing weight of the first state as an error.
        let slack = weight * pair.state1().trace_deficit() + 1e-12;
        prop_assert!(np.e <= bound + slack, "{} > {bound} + {slack}", np.e);
        Ok(())
    })
}

pub fn prop_displacement_covariance(cases: u32) -> Result<(), String> {
    check(cases, (pair_draw(), -0.5..0.5f64, -0.5..0.5f64, 0.0..=1.0f64), |((d1, d2, n, y), re, im, t)| {
        let base = small_pair(d1, d2, n, y, 12)?;
        let shift: Vec<c64> = (0..base.state1().basis().modes())
            .map(|k| c64::new(re / (k + 1) as f64, im))
            .collect();
        let moved = ok(FockPair::new(
            ok(base.state1().displaced(&shift, 0.5))?,
            ok(base.state2().displaced(&shift, 0.5))?,
        ))?;
        let (x, z) = (ok(base.quasi_power_trace(t))?, ok(moved.quasi_power_trace(t))?);
        prop_assert!((x - z).abs() < 1e-8, "{x} vs {z}");
        Ok(())
    })
}

/// Every property with the case count used by both integration targets.
pub fn all_properties() -> Vec<(&'static str, fn(u32) -> Result<(), String>, u32)> {
    vec![
        ("symbol_identities", prop_symbol_identities, 64),
        ("symbol_real", prop_symbol_real, 16),
        ("toeplitz_structure", prop_toeplitz_structure, 64),
        ("spectrum_containment", prop_spectrum_containment, 32),
        ("nesting", prop_nesting, 32),
        ("apply_composition", prop_apply_composition, 64),
        ("trace_fn", prop_trace_fn, 64),
        ("sandwich_endpoints", prop_sandwich_endpoints, 64),
        ("convexity", prop_convexity, 48),
        ("displacement_separation", prop_displacement_separation, 32),
        ("constant_scaling", prop_constant_scaling, 48),
        ("oracle_equivalence", prop_oracle_equivalence, 8),
        ("entropy_difference", prop_entropy_difference, 32),
        ("asymptotic_endpoints", prop_asymptotic_endpoints, 32),
        ("uniform_convergence", prop_uniform_convergence, 8),
        ("legendre", prop_legendre, 24),
        ("swap_symmetry", prop_swap_symmetry, 24),
        ("chernoff_below_entropies", prop_chernoff_below_entropies, 24),
        ("fock_multiplicative", prop_fock_multiplicative, 32),
        ("trace_identity", prop_trace_identity, 48),
        ("eigenstructure", prop_eigenstructure, 48),
        ("nussbaum_szkola", prop_nussbaum_szkola, 16),
        ("np_optimality", prop_np_optimality, 16),
        ("audenaert", prop_audenaert, 16),
        ("displacement_covariance", prop_displacement_covariance, 16),
    ]
}
