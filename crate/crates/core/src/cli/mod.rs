//! Batch front end: JSON config in, CSV or JSON reports out.
//!
//! Exit codes: 0 success, 1 bad config, 2 numerical failure, 3 verification failure.

pub mod config;
pub mod report;
pub mod verify;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub use config::{Command, Format, RunConfig, parse_config, uniform_grid};
pub use report::{CheckRow, ConvergenceRow, Report, ReportBody, emit, fmt_g, from_json, to_csv, to_json};
pub use verify::verify_suite;

use crate::asymptotics::AsymptoticProblem;
use crate::calculus::{KERNEL_FLOOR, NEGATIVE_CLIP};
use crate::error::{Error, Result};
use crate::finite::FiniteProblem;
use crate::fock::state::STATE_FLOOR;
use crate::fock::{SweepCaps, error_exponent_sweep};

/// Command-line overrides applied on top of the config document.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub cap: Option<usize>,
}

/// Where a finished run left its files.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub report: Report,
    pub files: Vec<PathBuf>,
    pub exit_code: i32,
}

/// Lowercase hex SHA-256.
pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().fold(String::with_capacity(64), |mut s, b| {
        let _ = write!(s, "{b:02x}");
        s
    })
}

fn metadata(config: &RunConfig) -> BTreeMap<String, String> {
    let mut m = BTreeMap::new();
    let mut put = |k: &str, v: String| {
        m.insert(k.to_string(), v);
    };
    put("dense_cap", config.dense_cap.to_string());
    put("negative_clip", fmt_g(NEGATIVE_CLIP));
    put("kernel_floor", fmt_g(KERNEL_FLOOR));
    match config.command {
        Command::Finite => {}
        Command::Asymptotic | Command::Sweep => {
            put("quadrature_points", config.quadrature.points_per_axis().to_string());
        }
        Command::Simulate | Command::Verify => {
            put("quadrature_points", config.quadrature.points_per_axis().to_string());
            put("fock_cutoff", config.fock_cutoff.to_string());
            put("basis_cap", config.basis_cap.to_string());
            put("state_floor", fmt_g(STATE_FLOOR));
            put("np_a", fmt_g(config.np_a));
        }
    }
    m
}

/// Compute the report for `config` without touching the filesystem.
pub fn execute(config: &RunConfig, config_sha256: &str) -> Result<Report> {
    let mut meta = metadata(config);
    let body = match config.command {
        Command::Finite => ReportBody::Finite(
            config
                .n_list
                .iter()
                .map(|&n| FiniteProblem::with_cap(&config.problem, n, config.dense_cap)?.report(&config.t_grid, &config.r_list))
                .collect::<Result<_>>()?,
        ),
        Command::Asymptotic => {
            let asym = AsymptoticProblem::new(&config.problem, config.quadrature)?;
            ReportBody::Asymptotic(asym.report(&config.t_grid, &config.r_list, &config.a_list)?)
        }
        Command::Simulate => {
            let caps = SweepCaps {
                dense: config.dense_cap,
                basis: config.basis_cap,
            };
            let rows = error_exponent_sweep(&config.problem, &config.n_list, config.fock_cutoff, config.np_a, caps)?;
            let deficit = rows.iter().map(|r| r.trace_deficit).fold(0.0, f64::max);
            meta.insert("max_trace_deficit".into(), fmt_g(deficit));
            ReportBody::Simulate(rows)
        }
        Command::Verify => {
            let (rows, deficit) = verify_suite(config)?;
            meta.insert("max_trace_deficit".into(), fmt_g(deficit));
            ReportBody::Verify(rows)
        }
        Command::Sweep => {
            let asym = AsymptoticProblem::new(&config.problem, config.quadrature)?;
            ReportBody::Sweep(verify::convergence_table(
                &config.problem,
                &asym,
                &config.n_list,
                &config.t_grid,
                config.dense_cap,
            )?)
        }
    };
    Ok(Report {
        config_sha256: config_sha256.to_string(),
        command: config.command.name().to_string(),
        metadata: meta,
        body,
    })
}

/// Execute and write the report into `dir`.
pub fn run(config: &RunConfig, config_sha256: &str, dir: &Path) -> Result<RunOutcome> {
    let report = execute(config, config_sha256)?;
    let files = emit(&report, config.format, dir)?;
    let exit_code = if report.body.failed_checks().is_empty() { 0 } else { 3 };
    Ok(RunOutcome {
        report,
        files,
        exit_code,
    })
}

/// Parse a config document, apply overrides and run it.
pub fn run_document(text: &str, overrides: &Overrides) -> Result<RunOutcome> {
    let mut config = parse_config(text)?;
    if let Some(format) = overrides.format {
        config.format = format;
    }
    if let Some(cap) = overrides.cap {
        if cap == 0 {
            return Err(Error::validation("dense_cap", "--cap must be positive"));
        }
        config.dense_cap = cap;
    }
    let dir = overrides
        .out
        .clone()
        .or_else(|| config.out.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));
    run(&config, &sha256_hex(text.as_bytes()), &dir)
}

/// Whole-process entry point. Diagnostics go to stderr; returns the exit code.
pub fn main_with(path: &Path, overrides: &Overrides) -> i32 {
    let outcome = std::fs::read_to_string(path)
        .map_err(Error::from)
        .and_then(|text| run_document(&text, overrides));
    match outcome {
        Ok(outcome) => {
            for f in &outcome.files {
                eprintln!("wrote {}", f.display());
            }
            for name in outcome.report.body.failed_checks() {
                eprintln!("verification failed: {name}");
            }
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {}: {e}", e.name());
            e.exit_code()
        }
    }
}
