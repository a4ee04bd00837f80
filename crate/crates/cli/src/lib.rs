//! Command-line front end: exact exponent ranges, region rasters, the worked
//! examples, empirical decay estimates and solver runs.
//!
//! Exit codes: 0 success, 1 hypothesis or domain error, 2 input error,
//! 3 non-convergence.

pub mod estimate;
pub mod examples;
pub mod ranges;
pub mod region;
pub mod solve;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use radial_embed::exponent::{parse_ratio, ProblemDims};
use radial_embed::{Dims, Rational};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "radial-embed", version, about = "Radial weighted Sobolev embeddings: exponent ranges, estimates and solvers")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Best exponent ranges for a pair of potentials.
    Ranges(ranges::RangesArgs),
    /// Rasterize the admissible (α, q) region at the origin.
    Region(region::RegionArgs),
    /// Reproduce one of the worked examples.
    Example(examples::ExampleArgs),
    /// Empirical decay of the embedding functionals.
    Estimate(estimate::EstimateArgs),
    /// Solve the radial equation described by a JSON problem file.
    Solve(solve::SolveArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("input error: {0}")]
    Input(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Domain(_) | CliError::Hypothesis(_) => 1,
            CliError::NonConvergence(_) => 3,
        }
    }
}

/// A finished command: its report and exit code. Runs that did not converge
/// still produce a report, with code 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

impl Outcome {
    pub fn ok(report: String) -> Self {
        Self { code: 0, report }
    }
}

/// Everything a process would emit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Execution {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Ranges(a) => ranges::run(a),
        Command::Region(a) => region::run(a),
        Command::Example(a) => examples::run(a),
        Command::Estimate(a) => estimate::run(a),
        Command::Solve(a) => solve::run(a),
    }
}

/// Parse arguments, run, and route the report to stdout or `--out`.
pub fn execute<I, S>(args: I) -> Execution
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Execution { code: 2, stdout: String::new(), stderr: text }
            } else {
                Execution { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => return Execution { code: e.exit_code(), stdout: String::new(), stderr: format!("error: {e}\n") },
    };
    let mut stderr = String::new();
    if outcome.code == 3 {
        stderr.push_str("warning: the run did not converge; the report holds the best iterate\n");
    }
    match &cli.out {
        Some(path) => match std::fs::write(path, &outcome.report) {
            Ok(()) => Execution { code: outcome.code, stdout: String::new(), stderr },
            Err(e) => Execution { code: 2, stdout: String::new(), stderr: format!("error: cannot write {}: {e}\n", path.display()) },
        },
        None => Execution { code: outcome.code, stdout: outcome.report, stderr },
    }
}

pub(crate) fn rational(s: &str, what: &str) -> Result<Rational, CliError> {
    parse_ratio::<BigInt>(s).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub(crate) fn dims(p: &str, n: u32) -> Result<Dims, CliError> {
    ProblemDims::new(rational(p, "p")?, n).map_err(|e| CliError::Domain(e.to_string()))
}

pub(crate) fn to_json<T: Serialize + ?Sized>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

pub(crate) fn unsupported(format: Format, command: &str) -> CliError {
    CliError::Input(format!("{command} does not support --format {}", format.to_possible_value().map(|v| v.get_name().to_owned()).unwrap_or_default()))
}
