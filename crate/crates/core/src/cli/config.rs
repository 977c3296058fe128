//! JSON run configuration.

use std::collections::BTreeMap;

use faer::c64;
use serde::{Deserialize, Serialize};

use crate::asymptotics::QuadratureRule;
use crate::error::{Error, Result};
use crate::fock::DEFAULT_BASIS_CAP;
use crate::lattice::DEFAULT_DENSE_CAP;
use crate::symbols::{
    DEFAULT_GRID_POINTS, DiscriminationProblem, DisplacementSpec, GaussianStateSpec, SymbolSpec, make_trig_symbol,
};

/// What a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Finite,
    Asymptotic,
    Simulate,
    Verify,
    Sweep,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Finite => "finite",
            Command::Asymptotic => "asymptotic",
            Command::Simulate => "simulate",
            Command::Verify => "verify",
            Command::Sweep => "sweep",
        }
    }
}

/// Report encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A Fourier coefficient record.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CoefficientRecord {
    index: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// Symbols are either `{"i,j": re}` maps or lists of `{index, re, im}` records.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
enum SymbolInput {
    Map(BTreeMap<String, f64>),
    Records(Vec<CoefficientRecord>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SiteRecord {
    site: Vec<i64>,
    re: f64,
    #[serde(default)]
    im: f64,
}

/// The document as written, before validation.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    dim: i64,
    kappa: f64,
    q1: SymbolInput,
    q2: SymbolInput,
    #[serde(default)]
    y1: Vec<SiteRecord>,
    #[serde(default)]
    y2: Vec<SiteRecord>,
    command: Command,
    t_points: Option<i64>,
    n_list: Option<Vec<i64>>,
    r_list: Option<Vec<f64>>,
    a_list: Option<Vec<f64>>,
    a: Option<f64>,
    quadrature_points: Option<i64>,
    fock_cutoff: Option<i64>,
    dense_cap: Option<i64>,
    basis_cap: Option<i64>,
    grid_points: Option<i64>,
    format: Option<Format>,
    out: Option<String>,
}

/// A fully validated run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub problem: DiscriminationProblem,
    pub command: Command,
    pub t_grid: Vec<f64>,
    pub n_list: Vec<usize>,
    pub r_list: Vec<f64>,
    pub a_list: Vec<f64>,
    /// Exponent weight of the simulated Neyman–Pearson tests.
    pub np_a: f64,
    pub quadrature: QuadratureRule,
    pub fock_cutoff: usize,
    pub dense_cap: usize,
    pub basis_cap: usize,
    pub format: Format,
    pub out: Option<String>,
}

/// Default number of `t` points on `[0, 1]`.
pub const DEFAULT_T_POINTS: usize = 101;
/// Default total-photon cutoff.
pub const DEFAULT_FOCK_CUTOFF: usize = 25;

/// Uniform grid of `count` points on `[0, 1]`.
pub fn uniform_grid(count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..count).map(|i| i as f64 / (count - 1) as f64).collect(),
    }
}

/// Parse and validate a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let de = &mut serde_json::Deserializer::from_str(text);
    let raw: RawConfig = serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        Error::Parse {
            line: inner.line(),
            column: inner.column(),
            path,
            message: inner.to_string(),
        }
    })?;
    validate(raw)
}

fn positive(field: &str, value: Option<i64>, default: usize) -> Result<usize> {
    match value {
        None => Ok(default),
        Some(v) if v >= 1 => Ok(v as usize),
        Some(v) => Err(Error::validation(field, format!("must be a positive integer, got {v}"))),
    }
}

fn symbol(field: &str, dim: usize, input: &SymbolInput, grid: usize) -> Result<SymbolSpec> {
    let coeffs: Vec<(Vec<i64>, c64)> = match input {
        SymbolInput::Map(map) => map
            .iter()
            .map(|(key, &re)| {
                let index = key
                    .split(',')
                    .map(|p| p.trim().parse::<i64>())
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|_| Error::validation(field, format!("bad multi-index key {key:?}")))?;
                Ok((index, c64::new(re, 0.0)))
            })
            .collect::<Result<_>>()?,
        SymbolInput::Records(list) => list.iter().map(|r| (r.index.clone(), c64::new(r.re, r.im))).collect(),
    };
    if let Some((index, _)) = coeffs.iter().find(|(index, _)| index.len() != dim) {
        return Err(Error::validation(
            "dim",
            format!("{field} index {index:?} has {} entries, expected {dim}", index.len()),
        ));
    }
    if let Some((index, _)) = coeffs.iter().find(|(_, v)| !(v.re.is_finite() && v.im.is_finite())) {
        return Err(Error::validation(field, format!("non-finite coefficient at {index:?}")));
    }
    let bandwidth = coeffs
        .iter()
        .flat_map(|(k, _)| k.iter().map(|c| c.unsigned_abs() as usize))
        .max()
        .unwrap_or(0);
    let points = grid.max(2 * bandwidth + 1);
    make_trig_symbol(dim, coeffs, points).map_err(|e| Error::validation(field, e.to_string()))
}

fn displacement(field: &str, dim: usize, list: &[SiteRecord]) -> Result<DisplacementSpec> {
    if let Some(r) = list.iter().find(|r| r.site.len() != dim) {
        return Err(Error::validation(
            "dim",
            format!("{field} site {:?} has {} entries, expected {dim}", r.site, r.site.len()),
        ));
    }
    if list.iter().any(|r| !(r.re.is_finite() && r.im.is_finite())) {
        return Err(Error::validation(field, "non-finite amplitude"));
    }
    DisplacementSpec::new(list.iter().map(|r| (r.site.clone(), c64::new(r.re, r.im))))
        .map_err(|e| Error::validation(field, e.to_string()))
}

fn validate(raw: RawConfig) -> Result<RunConfig> {
    if raw.dim < 1 {
        return Err(Error::validation("dim", format!("must be at least 1, got {}", raw.dim)));
    }
    let dim = raw.dim as usize;
    if !(raw.kappa > 0.0 && raw.kappa.is_finite()) {
        return Err(Error::validation("kappa", format!("must be positive, got {}", raw.kappa)));
    }
    let grid = positive("grid_points", raw.grid_points, DEFAULT_GRID_POINTS)?;
    let q1 = symbol("q1", dim, &raw.q1, grid)?;
    let q2 = symbol("q2", dim, &raw.q2, grid)?;
    let y1 = displacement("y1", dim, &raw.y1)?;
    let y2 = displacement("y2", dim, &raw.y2)?;
    let s1 = GaussianStateSpec::new(q1, y1, raw.kappa).map_err(|e| Error::validation("q1", e.to_string()))?;
    let s2 = GaussianStateSpec::new(q2, y2, raw.kappa).map_err(|e| Error::validation("q2", e.to_string()))?;
    let problem = DiscriminationProblem::new(s1, s2).map_err(|e| Error::validation("dim", e.to_string()))?;

    let t_points = match raw.t_points {
        None => DEFAULT_T_POINTS,
        Some(v) if v >= 0 => v as usize,
        Some(v) => return Err(Error::validation("t_points", format!("must be nonnegative, got {v}"))),
    };
    if raw.command == Command::Sweep && t_points == 0 {
        return Err(Error::validation("t_points", "sweep needs at least one t value"));
    }
    let default_n: &[i64] = match raw.command {
        Command::Finite => &[1, 2, 4, 8],
        Command::Sweep => &[8, 16, 32, 64],
        Command::Simulate | Command::Verify => &[1, 2, 3],
        Command::Asymptotic => &[],
    };
    let n_list = raw.n_list.unwrap_or_else(|| default_n.to_vec());
    if let Some(&bad) = n_list.iter().find(|&&n| n < 1) {
        return Err(Error::validation("n_list", format!("entries must be positive, got {bad}")));
    }
    let r_list = raw.r_list.unwrap_or_default();
    if let Some(&bad) = r_list.iter().find(|&&r| !(r >= 0.0 && r.is_finite())) {
        return Err(Error::validation("r_list", format!("entries must be nonnegative, got {bad}")));
    }
    let a_list = raw.a_list.unwrap_or_else(|| vec![0.0]);
    if a_list.iter().any(|a| !a.is_finite()) {
        return Err(Error::validation("a_list", "entries must be finite"));
    }
    let np_a = raw.a.unwrap_or(0.0);
    if !np_a.is_finite() {
        return Err(Error::validation("a", "must be finite"));
    }
    let quadrature = match raw.quadrature_points {
        None => QuadratureRule::default_for(dim)?,
        Some(v) if v >= 1 => QuadratureRule::new(dim, v as usize).map_err(|e| Error::validation("quadrature_points", e.to_string()))?,
        Some(v) => return Err(Error::validation("quadrature_points", format!("must be positive, got {v}"))),
    };
    if matches!(raw.command, Command::Simulate | Command::Verify) && raw.fock_cutoff == Some(0) {
        return Err(Error::validation("fock_cutoff", "must be positive"));
    }
    Ok(RunConfig {
        problem,
        command: raw.command,
        t_grid: uniform_grid(t_points),
        n_list: n_list.into_iter().map(|n| n as usize).collect(),
        r_list,
        a_list,
        np_a,
        quadrature,
        fock_cutoff: positive("fock_cutoff", raw.fock_cutoff, DEFAULT_FOCK_CUTOFF)?,
        dense_cap: positive("dense_cap", raw.dense_cap, DEFAULT_DENSE_CAP)?,
        basis_cap: positive("basis_cap", raw.basis_cap, DEFAULT_BASIS_CAP)?,
        format: raw.format.unwrap_or_default(),
        out: raw.out,
    })
}
