//! Batch driver: argument parsing, config resolution, suite execution and
//! report output.

pub mod config;
pub mod report;
mod suites;

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::Parser;

use crate::error::{Error, Result};
use crate::fock::Exponent;
pub use config::{resolve, FileConfig, Overrides, RunConfig, Suite};
pub use report::{csv_string, export_csv, Case, VerificationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURES: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Optional thread count for the worker pool.
pub const THREADS_ENV: &str = "FOCKSPACE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "fockspace", version, allow_negative_numbers = true, about = "Seeded verification suites for Fock, Bergman and Hardy spaces")]
struct Args {
    /// Suite to run; may instead come from the config file.
    #[arg(value_enum)]
    suite: Option<Suite>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Exponent: a real >= 1 or `inf`.
    #[arg(long, value_parser = parse_exponent)]
    p: Option<Exponent>,
    /// Degree cap for truncated series.
    #[arg(long)]
    cap: Option<usize>,
    /// Lattice spacing (atomic suite).
    #[arg(long)]
    delta: Option<f64>,
    /// Lattice radius (atomic suite).
    #[arg(long)]
    radius: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// TOML config file; flags take precedence over its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Also write a CSV table of the cases.
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Override a case tolerance, `NAME=VALUE`; repeatable.
    #[arg(long = "tol", value_parser = parse_override)]
    tol: Vec<(String, f64)>,
}

fn parse_exponent(s: &str) -> std::result::Result<Exponent, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_override(s: &str) -> std::result::Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got {s:?}"))?;
    let value: f64 = value.trim().parse().map_err(|_| format!("bad tolerance value in {s:?}"))?;
    Ok((name.trim().to_string(), value))
}

fn overrides(args: Args) -> (Overrides, Option<PathBuf>) {
    let flags = Overrides {
        suite: args.suite,
        alpha: args.alpha,
        p: args.p,
        degree_cap: args.cap,
        delta: args.delta,
        radius: args.radius,
        seed: args.seed,
        tol_overrides: args.tol.into_iter().collect::<BTreeMap<_, _>>(),
        output_path: args.report,
        csv_path: args.csv,
    };
    (flags, args.config)
}

/// Runs the configured suite and assembles its report. Nothing is written.
pub fn run(config: &RunConfig) -> Result<VerificationReport> {
    config.validate()?;
    let mut cases = suites::run_cases(config)?;
    for (name, tol) in &config.tol_overrides {
        let hit = cases.iter_mut().filter(|c| &c.name == name).fold(false, |_, c| {
            c.set_tolerance(*tol);
            true
        });
        if !hit {
            return Err(Error::Config(format!("tolerance override for unknown case {name:?} in suite {}", config.suite)));
        }
    }
    Ok(VerificationReport::new(config, cases))
}

/// Writes the report (to `output_path` or stdout) and the optional CSV.
pub fn emit(report: &VerificationReport, config: &RunConfig) -> Result<()> {
    match &config.output_path {
        Some(path) => report.write_json(path)?,
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(report.to_json().as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| Error::Io { path: "<stdout>".into(), source })?;
        }
    }
    if let Some(path) = &config.csv_path {
        export_csv(report, path)?;
    }
    Ok(())
}

fn exit_for(err: &Error) -> i32 {
    match err {
        Error::Config(_) => EXIT_CONFIG,
        _ => EXIT_RUNTIME,
    }
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Error::Config(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    // a pool that already exists keeps its size
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

/// Full command-line entry point; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let (flags, config_path) = overrides(args);
    let config = config_path
        .map(|p| FileConfig::load(&p).map_err(|e| match e {
            Error::Io { .. } => Error::Config(e.to_string()),
            other => other,
        }))
        .transpose()
        .and_then(|file| resolve(flags, file.unwrap_or_default()))
        .and_then(|c| configure_threads().map(|_| c));
    let config = match config {
        Ok(c) => c,
        Err(e) => {
            eprintln!("fockspace: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("fockspace: {e}");
            return exit_for(&e);
        }
    };
    if let Err(e) = emit(&report, &config) {
        eprintln!("fockspace: {e}");
        return EXIT_RUNTIME;
    }
    let s = &report.summary;
    eprintln!("fockspace {}: {} cases, {} passed, {} failed", report.suite, s.total, s.passed, s.failed);
    if report.all_passed() { EXIT_PASS } else { EXIT_FAILURES }
}
