//! The `isosym` command line: `check`, `gen`, `verify` and `search`.
//!
//! Every subcommand builds one report, then writes it once (JSON with
//! 17 significant digits, or a short text projection).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bundle::{self, Manifest};
use crate::classify::{classify_operator, minimal_order, MinimalOrder, OperatorClassification, OrderKind};
use crate::error::{Error, Result};
use crate::generators::{Family, GenSpec};
use crate::harness::{run_suite, Suite, SuiteConfig, SuiteReport};
use crate::json;
use crate::matrix::{CMatrix, Limits};
use crate::tolerance::{ToleranceContext, DEFAULT_ATOL, DEFAULT_RTOL};

#[derive(Debug, Clone, PartialEq, Parser, Serialize, Deserialize)]
#[command(name = "isosym", version, about = "Defect-transform classifiers and identity checks for complex matrices")]
#[serde(deny_unknown_fields)]
pub struct CliConfig {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Absolute tolerance override.
    #[arg(long, global = true)]
    pub atol: Option<f64>,
    /// Relative tolerance override.
    #[arg(long, global = true)]
    pub rtol: Option<f64>,
    /// Report file (bundle directory for `gen`); stdout when absent.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, PartialEq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Classify operators read from matrix JSON files.
    Check(CheckArgs),
    /// Generate an instance bundle directory.
    Gen(GenArgs),
    /// Run verification suites.
    Verify(VerifyArgs),
    /// Minimal-order sweeps on operators read from matrix JSON files.
    Search(SearchArgs),
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    /// Weight operator X (identity when absent).
    #[arg(long)]
    pub x: Option<PathBuf>,
    #[arg(long, default_value_t = 4)]
    pub mmax: usize,
    #[arg(long, default_value_t = 4)]
    pub nmax: usize,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenArgs {
    #[arg(long)]
    pub family: Family,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// `key=value` pairs; booleans as `true`/`false` or `1`/`0`.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    pub params: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyArgs {
    /// Suite names or `all`.
    #[arg(long, value_delimiter = ',', default_value = "all")]
    pub suite: Vec<String>,
    #[arg(long, default_value_t = 20)]
    pub seeds: u64,
    #[arg(long, value_delimiter = ',', default_value = "2,4,6")]
    pub dims: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    pub orders: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchKind {
    MinimalOrder,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Transform {
    Isometry,
    Symmetry,
    Both,
}

#[derive(Debug, Clone, PartialEq, Args, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SearchArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = SearchKind::MinimalOrder)]
    pub kind: SearchKind,
    #[arg(long, default_value_t = 10)]
    pub bound: usize,
    #[arg(long, value_enum, default_value_t = Transform::Both)]
    pub transform: Transform,
    /// Weight operator X (identity when absent).
    #[arg(long)]
    pub x: Option<PathBuf>,
}

impl CliConfig {
    pub fn tolerance(&self) -> Result<ToleranceContext> {
        ToleranceContext::new(self.atol.unwrap_or(DEFAULT_ATOL), self.rtol.unwrap_or(DEFAULT_RTOL))
    }

    pub fn to_json(&self) -> Result<String> {
        json::to_string(self)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Exit status for an error: 1 when generation failed, 2 otherwise.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::GenerationFailed { .. } => 1,
        _ => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub input: PathBuf,
    pub classification: OperatorClassification,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchEntry {
    pub input: PathBuf,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isometry: Option<MinimalOrder>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub symmetry: Option<MinimalOrder>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub bound: usize,
    pub entries: Vec<SearchEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenReport {
    pub directory: PathBuf,
    pub manifest: Manifest,
}

pub fn read_matrix(path: &Path, limits: &Limits) -> Result<CMatrix> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let m = CMatrix::from_json_str(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        Error::BadLength { len, expected } => Error::Parse(format!("{}: field `data` has length {len}, expected {expected}", path.display())),
        Error::NonFinite { index } => Error::Parse(format!("{}: field `data` has a non-finite entry at index {index}", path.display())),
        other => other,
    })?;
    limits.check_dim(m.dim())?;
    Ok(m)
}

fn read_weight(x: Option<&Path>, dim: usize, limits: &Limits) -> Result<CMatrix> {
    match x {
        Some(p) => {
            let m = read_matrix(p, limits)?;
            if m.dim() != dim {
                return Err(Error::DimMismatch { left: dim, right: m.dim() });
            }
            Ok(m)
        }
        None => Ok(CMatrix::identity(dim)),
    }
}

pub fn parse_params(raw: &[String]) -> Result<BTreeMap<String, f64>> {
    let mut out = BTreeMap::new();
    for item in raw.iter().map(|s| s.trim()).filter(|s| !s.is_empty()) {
        let (k, v) = item.split_once('=').ok_or_else(|| Error::InvalidParam(format!("expected key=value, got `{item}`")))?;
        let value = match v.trim() {
            "true" => 1.0,
            "false" => 0.0,
            s => s.parse::<f64>().map_err(|_| Error::InvalidParam(format!("parameter `{k}`: `{s}` is not a number")))?,
        };
        if out.insert(k.trim().to_string(), value).is_some() {
            return Err(Error::InvalidParam(format!("parameter `{k}` given twice")));
        }
    }
    Ok(out)
}

pub fn parse_suites(raw: &[String]) -> Result<Vec<Suite>> {
    let mut out = Vec::new();
    for s in raw {
        if s == "all" {
            out.extend(Suite::ALL);
        } else {
            out.push(s.parse()?);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn gen_spec(args: &GenArgs) -> Result<GenSpec> {
    Ok(GenSpec { family: args.family, seed: args.seed, dim: args.dim, params: parse_params(&args.params)? })
}

/// Default bundle directory: `<family>-s<seed>-d<dim>`.
pub fn default_bundle_dir(spec: &GenSpec) -> PathBuf {
    PathBuf::from(format!("{}-s{}-d{}", spec.family, spec.seed, spec.dim))
}

pub fn cmd_check(args: &CheckArgs, tol: &ToleranceContext, limits: &Limits) -> Result<CheckReport> {
    let mut entries = Vec::new();
    for input in &args.inputs {
        let a = read_matrix(input, limits)?;
        let x = read_weight(args.x.as_deref(), a.dim(), limits)?;
        let classification = classify_operator(&a, &x, args.mmax, args.nmax, tol)?;
        entries.push(CheckEntry { input: input.clone(), classification });
    }
    Ok(CheckReport { entries })
}

pub fn cmd_search(args: &SearchArgs, tol: &ToleranceContext, limits: &Limits) -> Result<SearchReport> {
    let mut entries = Vec::new();
    for input in &args.inputs {
        let a = read_matrix(input, limits)?;
        let x = read_weight(args.x.as_deref(), a.dim(), limits)?;
        let b = a.adjoint();
        let sweep = |kind| minimal_order(kind, &b, &a, &x, args.bound, tol);
        let isometry = matches!(args.transform, Transform::Isometry | Transform::Both).then(|| sweep(OrderKind::Triangle)).transpose()?;
        let symmetry = matches!(args.transform, Transform::Symmetry | Transform::Both).then(|| sweep(OrderKind::Delta)).transpose()?;
        entries.push(SearchEntry { input: input.clone(), isometry, symmetry });
    }
    Ok(SearchReport { bound: args.bound, entries })
}

pub fn cmd_verify(args: &VerifyArgs, tol: &ToleranceContext) -> Result<SuiteReport> {
    let config = SuiteConfig { suites: parse_suites(&args.suite)?, seeds: args.seeds, dims: args.dims.clone(), orders: args.orders, tol: *tol };
    run_suite(&config)
}

pub fn cmd_gen(args: &GenArgs, dir: Option<&Path>) -> Result<GenReport> {
    let spec = gen_spec(args)?;
    let b = bundle::generate(&spec)?;
    let directory = dir.map(Path::to_path_buf).unwrap_or_else(|| default_bundle_dir(&spec));
    b.write_dir(&directory)?;
    Ok(GenReport { directory, manifest: b.manifest() })
}

fn order_text(m: &MinimalOrder) -> String {
    match m.order {
        Some(k) => k.to_string(),
        None => format!("none ≤ {}", m.bound),
    }
}

fn opt_order(o: Option<usize>, bound: usize) -> String {
    o.map(|k| k.to_string()).unwrap_or_else(|| format!("none ≤ {bound}"))
}

pub fn check_text(r: &CheckReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let c = &e.classification;
        let pareto: Vec<String> = c.pareto.iter().map(|[m, n]| format!("({m},{n})")).collect();
        let _ = writeln!(
            s,
            "{}: dim {}, isometry {}, symmetry {}, isosymmetric cells {}",
            e.input.display(),
            c.dim,
            opt_order(c.minimal_isometry, c.m_max),
            opt_order(c.minimal_symmetry, c.n_max),
            if pareto.is_empty() { format!("none ≤ ({},{})", c.m_max, c.n_max) } else { pareto.join(" ") }
        );
    }
    s
}

pub fn search_text(r: &SearchReport) -> String {
    let mut s = String::new();
    for e in &r.entries {
        let mut parts = Vec::new();
        if let Some(m) = &e.isometry {
            parts.push(format!("isometry {}", order_text(m)));
        }
        if let Some(m) = &e.symmetry {
            parts.push(format!("symmetry {}", order_text(m)));
        }
        let _ = writeln!(s, "{}: {}", e.input.display(), parts.join(", "));
    }
    s
}

pub fn verify_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    for c in r.failures() {
        let _ = writeln!(s, "FAIL {} {} seed={} dim={} {}", c.suite, c.result_id, c.seed, c.dim, c.variant);
    }
    let m = &r.summary;
    let _ = writeln!(s, "pass {} fail {} vacuous {} skipped {}", m.pass, m.fail, m.vacuous, m.skipped);
    s
}

pub fn gen_text(r: &GenReport) -> String {
    let m = &r.manifest;
    let mut s = format!("{} ({} files)\n", r.directory.display(), m.files.len() + 1);
    for (k, v) in &m.orders {
        let _ = writeln!(s, "  {k} = {v}");
    }
    let failed = m.hypotheses.iter().filter(|h| !h.pass).count();
    let _ = writeln!(s, "  hypotheses: {} checked, {failed} failed", m.hypotheses.len());
    s
}

fn emit<T: Serialize>(cfg: &CliConfig, value: &T, text: impl FnOnce(&T) -> String, out: &mut dyn Write, to_file: bool) -> Result<()> {
    let body = match cfg.format {
        Format::Json => json::to_string(value)?,
        Format::Text => text(value),
    };
    match (&cfg.output, to_file) {
        (Some(p), true) => fs::write(p, body).map_err(|e| Error::io(p, e)),
        _ => out.write_all(body.as_bytes()).map_err(|e| Error::io(Path::new("<stdout>"), e)),
    }
}

/// Runs one parsed invocation, writing the report to `--output` or `out`.
/// Returns the exit status for a completed run.
pub fn run(cfg: &CliConfig, out: &mut dyn Write) -> Result<i32> {
    let tol = cfg.tolerance()?;
    match &cfg.command {
        Command::Check(a) => {
            let r = cmd_check(a, &tol, &Limits::from_env()?)?;
            emit(cfg, &r, check_text, out, true)?;
            Ok(0)
        }
        Command::Search(a) => {
            let r = cmd_search(a, &tol, &Limits::from_env()?)?;
            emit(cfg, &r, search_text, out, true)?;
            Ok(0)
        }
        Command::Verify(a) => {
            let r = cmd_verify(a, &tol)?;
            emit(cfg, &r, verify_text, out, true)?;
            Ok(r.exit_code())
        }
        Command::Gen(a) => {
            let r = cmd_gen(a, cfg.output.as_deref())?;
            emit(cfg, &r, gen_text, out, false)?;
            Ok(if r.manifest.hypotheses_hold { 0 } else { 1 })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(args: &[&str]) -> CliConfig {
        CliConfig::try_parse_from(std::iter::once("isosym").chain(args.iter().copied())).unwrap()
    }

    #[test]
    fn configs_round_trip_through_json() {
        for args in [
            &["check", "a.json", "--x", "x.json", "--mmax", "3"][..],
            &["gen", "--family", "mr", "--dim", "2", "--params", "n=2,lambda=1", "-o", "out"],
            &["verify", "--suite", "thm1,thm3", "--seeds", "3", "--dims", "2,3", "--format", "text", "--atol", "1e-11"],
            &["search", "--kind", "minimal-order", "--bound", "7", "u.json"],
        ] {
            let cfg = parse(args);
            let back = CliConfig::from_json_str(&cfg.to_json().unwrap()).unwrap();
            assert_eq!(cfg, back);
        }
    }

    #[test]
    fn params_and_suites() {
        let p = parse_params(&["n=2".into(), "strict=true".into()]).unwrap();
        assert_eq!(p["n"], 2.0);
        assert_eq!(p["strict"], 1.0);
        assert!(parse_params(&["n".into()]).is_err());
        assert!(parse_params(&["n=x".into()]).is_err());
        assert!(parse_params(&["n=1".into(), "n=2".into()]).is_err());
        assert_eq!(parse_suites(&["all".into()]).unwrap(), Suite::ALL.to_vec());
        assert!(parse_suites(&["thm9".into()]).is_err());
    }

    #[test]
    fn usage_errors() {
        assert!(CliConfig::try_parse_from(["isosym", "check"]).is_err());
        assert!(CliConfig::try_parse_from(["isosym", "gen", "--family", "nope"]).is_err());
        assert!(CliConfig::try_parse_from(["isosym", "search", "a.json", "--kind", "other"]).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&Error::GenerationFailed { family: "thm1".into(), attempts: 50 }), 1);
        assert_eq!(exit_code_for(&Error::OrderTooLarge { order: 63, max: 62 }), 2);
        let cfg = parse(&["verify", "--orders", "63"]);
        let err = run(&cfg, &mut Vec::new()).unwrap_err();
        assert_eq!(exit_code_for(&err), 2);
    }
}
