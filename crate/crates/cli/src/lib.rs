//! Command-line front end: analyse one photon-number distribution or sweep a
//! family parameter, and emit JSON reports or CSV summaries.
//!
//! Exit codes: 0 on success whatever the verdict, 2 for usage errors, 3 for input
//! and validation errors, 4 when a report fails its theorem-consistency check.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

pub mod error;
pub mod input;
pub mod report;
pub mod sweep;

pub use error::{CliError, Result};
pub use input::{load_pnd_file, InputSource};
pub use report::{analyze, AnalysisReport};
pub use sweep::{run_sweep, Grid};

#[derive(Debug, Parser)]
#[command(name = "photon-npt", version, about = "Certify beam-splitter NPT entanglement from photon statistics")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyse a single distribution.
    Analyze(AnalyzeArgs),
    /// Sweep one family parameter over a grid.
    Sweep(SweepArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    CsvSummary,
}

#[derive(Debug, Args)]
pub struct Options {
    /// Highest Hankel / submatrix order (default: chosen from the cutoff).
    #[arg(long)]
    pub orders: Option<usize>,
    /// Eigenvalue tolerance, relative to max(max|entry|, 1).
    #[arg(long, default_value_t = photon_npt_core::DEFAULT_TOL)]
    pub tol: f64,
    /// Tail mass allowed when truncating poisson and thermal families.
    #[arg(long, default_value_t = 1e-12)]
    pub tail_target: f64,
    /// Write here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// fock, poisson, thermal, binomial, vacuum-two-mixture or mixture.
    #[arg(long)]
    pub family: Option<String>,
    /// Family parameter as key=value, repeatable.
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// JSON file {"probs": [...], "tail_bound": 0}.
    #[arg(long)]
    pub pnd_file: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[command(flatten)]
    pub options: Options,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub family: String,
    #[arg(long = "param")]
    pub params: Vec<String>,
    /// param=start:stop:step, stop included.
    #[arg(long)]
    pub sweep: String,
    /// Worker threads (default: all cores).
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::CsvSummary)]
    pub format: Format,
    #[command(flatten)]
    pub options: Options,
}

/// Whether every emitted report passed its consistency check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    pub consistent: bool,
}

fn check_options(o: &Options) -> Result<()> {
    if !(o.tol.is_finite() && o.tol > 0.0) {
        return Err(CliError::BadFlag(format!("--tol {} must be a positive number", o.tol)));
    }
    if o.orders == Some(0) {
        return Err(CliError::BadFlag("--orders must be at least 1".into()));
    }
    Ok(())
}

fn emit(out: &Option<PathBuf>, body: &[u8]) -> Result<()> {
    let target = out.as_ref().map_or_else(|| "stdout".to_string(), |p| p.display().to_string());
    let wrap = |source| CliError::Write { target: target.clone(), source };
    match out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path).map_err(wrap)?);
            w.write_all(body).and_then(|_| w.flush()).map_err(wrap)
        }
        None => {
            let mut w = std::io::stdout().lock();
            w.write_all(body).and_then(|_| w.flush()).map_err(wrap)
        }
    }
}

fn to_json<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut body = serde_json::to_vec_pretty(value).expect("reports serialize");
    body.push(b'\n');
    body
}

fn to_csv(param: Option<&str>, rows: &[(Option<f64>, &AnalysisReport)]) -> Vec<u8> {
    let mut body = Vec::new();
    report::write_csv(&mut body, param, rows).expect("in-memory csv");
    body
}

pub fn cmd_analyze(args: &AnalyzeArgs) -> Result<Outcome> {
    check_options(&args.options)?;
    let source =
        input::resolve(args.family.as_deref(), &args.params, args.pnd_file.as_ref(), args.options.tail_target)?;
    let report = analyze(&source, args.options.orders, args.options.tol)?;
    let body = match args.format {
        Format::Json => to_json(&report),
        Format::CsvSummary => to_csv(None, &[(None, &report)]),
    };
    emit(&args.options.out, &body)?;
    Ok(Outcome { consistent: report.theorem_consistency.ok() })
}

#[derive(serde::Serialize)]
struct SweepDocument<'a> {
    schema_version: u32,
    param: &'a str,
    reports: Vec<&'a AnalysisReport>,
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<Outcome> {
    check_options(&args.options)?;
    if args.jobs == Some(0) {
        return Err(CliError::BadFlag("--jobs must be at least 1".into()));
    }
    let grid = Grid::parse(&args.sweep)?;
    let InputSource::Family(base) = input::resolve(Some(&args.family), &args.params, None, args.options.tail_target)?
    else {
        unreachable!("a family name always resolves to a family")
    };
    let points = run_sweep(&base, &grid, args.options.orders, args.options.tol, args.jobs)?;
    let body = match args.format {
        Format::Json => to_json(&SweepDocument {
            schema_version: report::SCHEMA_VERSION,
            param: &grid.param,
            reports: points.iter().map(|(_, r)| r).collect(),
        }),
        Format::CsvSummary => {
            let rows: Vec<_> = points.iter().map(|(v, r)| (Some(*v), r)).collect();
            to_csv(Some(&grid.param), &rows)
        }
    };
    emit(&args.options.out, &body)?;
    Ok(Outcome { consistent: points.iter().all(|(_, r)| r.theorem_consistency.ok()) })
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Analyze(args) => cmd_analyze(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}
