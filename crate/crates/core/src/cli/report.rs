//! Report types and their CSV/JSON encodings.
//!
//! Every CSV file opens with `# key=value` comment lines carrying the config digest
//! and the tolerances in force, followed by one header line and the data rows.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::config::Format;
use crate::asymptotics::AsymptoticReport;
use crate::error::Result;
use crate::finite::FiniteReport;
use crate::fock::SweepRow;

/// `|ψₙ(t)/n^ν − ψ(t)|` maximized over the t-grid.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub sites: usize,
    pub max_gap: f64,
}

/// One named cross-oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub check: String,
    pub value: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl CheckRow {
    /// Passes when `|value − reference| ≤ tolerance`.
    pub fn close(check: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            value,
            reference,
            tolerance,
            passed: (value - reference).abs() <= tolerance,
        }
    }

    /// Passes when `value ≤ reference + tolerance`.
    pub fn at_most(check: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        Self {
            check: check.into(),
            value,
            reference,
            tolerance,
            passed: value <= reference + tolerance,
        }
    }
}

/// Command-specific payload.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportBody {
    Finite(Vec<FiniteReport>),
    Asymptotic(AsymptoticReport),
    Simulate(Vec<SweepRow>),
    Verify(Vec<CheckRow>),
    Sweep(Vec<ConvergenceRow>),
}

impl ReportBody {
    pub fn command(&self) -> &'static str {
        match self {
            ReportBody::Finite(_) => "finite",
            ReportBody::Asymptotic(_) => "asymptotic",
            ReportBody::Simulate(_) => "simulate",
            ReportBody::Verify(_) => "verify",
            ReportBody::Sweep(_) => "sweep",
        }
    }

    /// Names of failed checks; empty for every command except `verify`.
    pub fn failed_checks(&self) -> Vec<&str> {
        match self {
            ReportBody::Verify(rows) => rows.iter().filter(|r| !r.passed).map(|r| r.check.as_str()).collect(),
            _ => Vec::new(),
        }
    }
}

/// A report with its provenance bookkeeping.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    /// Hex SHA-256 of the config document bytes.
    pub config_sha256: String,
    pub command: String,
    /// Tolerances, caps and truncation deficits in force.
    pub metadata: BTreeMap<String, String>,
    pub body: ReportBody,
}

/// Render `x` with 15 significant digits, `%.15g` style.
pub fn fmt_g(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.14e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..15).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        return format!("{mantissa}e{sign}{:02}", exp.abs());
    }
    let decimals = (14 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_g).unwrap_or_default()
}

struct Table {
    text: String,
}

impl Table {
    fn new(report: &Report, header: &str) -> Self {
        let mut text = String::new();
        let _ = writeln!(text, "# config_sha256={}", report.config_sha256);
        let _ = writeln!(text, "# command={}", report.command);
        for (k, v) in &report.metadata {
            let _ = writeln!(text, "# {k}={v}");
        }
        let _ = writeln!(text, "{header}");
        Self { text }
    }

    fn row(&mut self, cells: &[String]) {
        let _ = writeln!(self.text, "{}", cells.join(","));
    }
}

/// Named CSV documents for a report, in a fixed order.
pub fn to_csv(report: &Report) -> Vec<(String, String)> {
    let cmd = report.body.command();
    match &report.body {
        ReportBody::Finite(rows) => {
            let mut main = Table::new(report, "n,t,psi_n,psi_n_per_site");
            let mut scalars = Table::new(report, "n,sites,quantity,parameter,value");
            for r in rows {
                for (&t, &psi) in r.t_grid.iter().zip(&r.psi_values) {
                    main.row(&[r.n.to_string(), fmt_g(t), fmt_g(psi), fmt_g(psi / r.sites as f64)]);
                }
                let head = [r.n.to_string(), r.sites.to_string()];
                let mut scalar = |name: &str, param: String, value: String| {
                    scalars.row(&[head[0].clone(), head[1].clone(), name.into(), param, value]);
                };
                scalar("chernoff", String::new(), fmt_g(r.chernoff));
                scalar("t_star", String::new(), fmt_g(r.t_star));
                scalar("rel_entropy_12", String::new(), opt(r.rel_entropy_12));
                scalar("rel_entropy_21", String::new(), opt(r.rel_entropy_21));
                for &(rr, h) in &r.hoeffding {
                    scalar("hoeffding", fmt_g(rr), fmt_g(h));
                }
            }
            vec![(format!("{cmd}.csv"), main.text), (format!("{cmd}_scalars.csv"), scalars.text)]
        }
        ReportBody::Asymptotic(r) => {
            let mut main = Table::new(report, "t,psi");
            for (&t, &psi) in r.t_grid.iter().zip(&r.psi) {
                main.row(&[fmt_g(t), fmt_g(psi)]);
            }
            let mut scalars = Table::new(report, "quantity,parameter,value");
            let mut scalar = |name: &str, param: String, value: String| scalars.row(&[name.into(), param, value]);
            scalar("mean_chernoff", String::new(), fmt_g(r.mean_chernoff));
            scalar("t_star", String::new(), fmt_g(r.t_star));
            scalar("d12", String::new(), opt(r.d12));
            scalar("d21", String::new(), opt(r.d21));
            scalar("dpsi_left1", String::new(), opt(r.dpsi_left1));
            scalar("dpsi_right0", String::new(), opt(r.dpsi_right0));
            for &(rr, h) in &r.mean_hoeffding {
                scalar("mean_hoeffding", fmt_g(rr), fmt_g(h));
            }
            for &(a, p) in &r.polar {
                scalar("polar", fmt_g(a), fmt_g(p));
            }
            vec![(format!("{cmd}.csv"), main.text), (format!("{cmd}_scalars.csv"), scalars.text)]
        }
        ReportBody::Simulate(rows) => {
            let mut main = Table::new(report, "n,alpha,beta,e,exponent,trace_deficit");
            for r in rows {
                main.row(&[
                    r.n.to_string(),
                    fmt_g(r.alpha),
                    fmt_g(r.beta),
                    fmt_g(r.e),
                    fmt_g(r.exponent),
                    fmt_g(r.trace_deficit),
                ]);
            }
            vec![(format!("{cmd}.csv"), main.text)]
        }
        ReportBody::Verify(rows) => {
            let mut main = Table::new(report, "check,value,reference,tolerance,passed");
            for r in rows {
                main.row(&[
                    r.check.clone(),
                    fmt_g(r.value),
                    fmt_g(r.reference),
                    fmt_g(r.tolerance),
                    r.passed.to_string(),
                ]);
            }
            vec![(format!("{cmd}.csv"), main.text)]
        }
        ReportBody::Sweep(rows) => {
            let mut main = Table::new(report, "n,sites,max_gap");
            for r in rows {
                main.row(&[r.n.to_string(), r.sites.to_string(), fmt_g(r.max_gap)]);
            }
            vec![(format!("{cmd}.csv"), main.text)]
        }
    }
}

/// Pretty JSON with struct field order; map keys are sorted.
pub fn to_json(report: &Report) -> Result<String> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| crate::Error::invalid(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn from_json(text: &str) -> Result<Report> {
    serde_json::from_str(text).map_err(|e| crate::Error::Parse {
        line: e.line(),
        column: e.column(),
        path: String::new(),
        message: e.to_string(),
    })
}

/// Write the report into `dir`, creating it if needed. Returns the written paths.
pub fn emit(report: &Report, format: Format, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir)?;
    let docs = match format {
        Format::Csv => to_csv(report),
        Format::Json => vec![(format!("{}.json", report.body.command()), to_json(report)?)],
    };
    docs.into_iter()
        .map(|(name, text)| {
            let path = dir.join(name);
            fs::write(&path, text)?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(body: ReportBody) -> Report {
        Report {
            config_sha256: "00".into(),
            command: body.command().into(),
            metadata: BTreeMap::from([("dense_cap".to_string(), "4096".to_string())]),
            body,
        }
    }

    fn data_lines(text: &str) -> Vec<&str> {
        text.lines().filter(|l| !l.starts_with('#')).collect()
    }

    #[test]
    fn fifteen_significant_digits() {
        assert_eq!(fmt_g(0.0), "0");
        assert_eq!(fmt_g(1.0), "1");
        assert_eq!(fmt_g(-0.034668), "-0.034668");
        assert_eq!(fmt_g(1.0 / 3.0), "0.333333333333333");
        assert_eq!(fmt_g(2.0 / 3.0), "0.666666666666667");
        assert_eq!(fmt_g(123456.0), "123456");
        assert_eq!(fmt_g(1e-5), "1e-05");
        assert_eq!(fmt_g(1.5e20), "1.5e+20");
        assert_eq!(fmt_g(0.0001), "0.0001");
        assert_eq!(fmt_g(f64::NAN), "nan");
        assert_eq!(fmt_g(0.1 + 0.2), "0.3");
        assert_eq!(fmt_g(-2.5e-7), "-2.5e-07");
    }

    #[test]
    fn empty_grid_is_header_only() {
        let r = report(ReportBody::Finite(vec![FiniteReport {
            n: 2,
            sites: 2,
            t_grid: vec![],
            psi_values: vec![],
            chernoff: 0.1,
            t_star: 0.5,
            hoeffding: vec![],
            rel_entropy_12: None,
            rel_entropy_21: None,
        }]));
        let docs = to_csv(&r);
        assert_eq!(data_lines(&docs[0].1), vec!["n,t,psi_n,psi_n_per_site"]);
        assert!(docs[0].1.starts_with("# config_sha256=00\n# command=finite\n# dense_cap=4096\n"));
        assert_eq!(data_lines(&docs[1].1).len(), 5);
    }

    #[test]
    fn row_count_matches_grid() {
        let r = report(ReportBody::Finite(vec![FiniteReport {
            n: 1,
            sites: 1,
            t_grid: vec![0.0, 0.5, 1.0],
            psi_values: vec![0.0, -0.03, 0.0],
            chernoff: 0.03,
            t_star: 0.5,
            hoeffding: vec![(0.1, 0.01)],
            rel_entropy_12: Some(0.1),
            rel_entropy_21: Some(0.2),
        }]));
        let docs = to_csv(&r);
        assert_eq!(data_lines(&docs[0].1).len(), 4);
        assert_eq!(data_lines(&docs[0].1)[2], "1,0.5,-0.03,-0.03");
        assert!(docs[1].1.contains("1,1,hoeffding,0.1,0.01\n"));
    }

    #[test]
    fn json_round_trip() {
        let bodies = vec![
            ReportBody::Simulate(vec![SweepRow {
                n: 1,
                sites: 1,
                alpha: 0.1,
                beta: 0.2,
                e: 0.3,
                exponent: 1.2,
                trace_deficit: 1e-9,
                audenaert: 0.9,
            }]),
            ReportBody::Verify(vec![CheckRow::close("x", 1.0, 1.0 + 1e-12, 1e-10)]),
            ReportBody::Sweep(vec![ConvergenceRow { n: 8, sites: 8, max_gap: 1e-3 }]),
        ];
        for body in bodies {
            let r = report(body);
            assert_eq!(from_json(&to_json(&r).unwrap()).unwrap(), r);
        }
    }

    #[test]
    fn failed_checks_are_named() {
        let body = ReportBody::Verify(vec![
            CheckRow::close("good", 1.0, 1.0, 0.0),
            CheckRow::at_most("bad", 2.0, 1.0, 0.5),
        ]);
        assert_eq!(body.failed_checks(), vec!["bad"]);
    }
}
