use std::path::PathBuf;

use clap::{Args, ValueEnum};
use radial_embed::solver::{
    HypothesisReport, Mode, ProblemConfig, ProblemError, RangeCheck, Solution, SolutionKind, SolverError,
};
use serde::Serialize;

use crate::{to_json, unsupported, CliError, Format, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Min,
    Mp,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON problem file.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the mode in the problem file.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Also write the nodal solution `r,u` to this CSV file.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// `json` for the summary, `csv` for the nodal solution.
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Serialize)]
pub struct SolutionSummary {
    pub kind: SolutionKind,
    pub energy: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub nonneg_violation: f64,
    pub iterations: usize,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rim_level: Option<f64>,
    pub u_max: f64,
    pub nodes: usize,
}

impl From<&Solution<f64>> for SolutionSummary {
    fn from(s: &Solution<f64>) -> Self {
        Self {
            kind: s.kind,
            energy: s.energy,
            residual: s.residual,
            tolerance: s.tolerance,
            nonneg_violation: s.nonneg_violation,
            iterations: s.iterations,
            delta: s.delta,
            rim_level: s.rim_level,
            u_max: s.u.u.iter().fold(0.0f64, |m, &x| m.max(x.abs())),
            nodes: s.u.u.len(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SolveReport {
    pub config: ProblemConfig,
    pub range_check: RangeCheck,
    pub hypotheses: HypothesisReport<f64>,
    pub converged: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub solution: Option<SolutionSummary>,
}

fn problem_error(e: ProblemError) -> CliError {
    match e {
        ProblemError::Input(s) => CliError::Input(s),
        ProblemError::Domain(s) => CliError::Domain(s),
    }
}

fn table(s: &Solution<f64>) -> Result<String, CliError> {
    let mut buf = Vec::new();
    s.u.write_csv(&mut buf).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8(buf).expect("csv output is UTF-8"))
}

pub fn run(a: &SolveArgs) -> Result<Outcome, CliError> {
    if !matches!(a.format, Format::Json | Format::Csv) {
        return Err(unsupported(a.format, "solve"));
    }
    let src = std::fs::read_to_string(&a.config).map_err(|e| CliError::Input(format!("{}: {e}", a.config.display())))?;
    let mut cfg = ProblemConfig::from_json(&src).map_err(problem_error)?;
    if let Some(m) = a.mode {
        cfg.mode = match m {
            ModeArg::Min => Mode::Min,
            ModeArg::Mp => Mode::Mp,
        };
    }
    if let Some(s) = a.seed {
        cfg.seed = s;
    }
    let problem = cfg.build::<f64>().map_err(problem_error)?;
    let range_check = problem.range_check().map_err(problem_error)?;
    let hypotheses = problem.hypotheses();
    let (solution, reason) = match problem.solve() {
        Ok(s) => (Some(s), None),
        Err(SolverError::Hypothesis(s)) => return Err(CliError::Hypothesis(s)),
        Err(SolverError::NonConvergence { reason, best }) => (best.map(|b| *b), Some(reason)),
        Err(SolverError::Numeric(e)) => (None, Some(e.to_string())),
    };
    let converged = reason.is_none();
    if let (Some(path), Some(s)) = (&a.csv, &solution) {
        std::fs::write(path, table(s)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    }
    let text = match a.format {
        Format::Csv => match &solution {
            Some(s) => table(s)?,
            None => return Err(CliError::NonConvergence(reason.unwrap_or_default())),
        },
        _ => to_json(&SolveReport {
            config: cfg,
            range_check,
            hypotheses,
            converged,
            reason,
            solution: solution.as_ref().map(SolutionSummary::from),
        }),
    };
    Ok(Outcome { code: if converged { 0 } else { 3 }, report: text })
}
