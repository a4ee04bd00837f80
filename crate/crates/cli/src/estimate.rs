use std::path::{Path, PathBuf};

use clap::Args;
use num_bigint::BigInt;
use radial_embed::catalog::PotentialSpec;
use radial_embed::estimator::{
    decay_report, dyadic_schedule, read_table_csv, DecayClass, DecayReport, DecayRow, Discretization, EstimatorOptions,
    RadialGrid,
};
use radial_embed::exponent::{ratio_to_f64, Side};
use radial_embed::solver::{GridConfig, RationalInput};
use radial_embed::{ExtRational, QSet};
use serde::{Deserialize, Serialize};

use crate::ranges::{compute, spec};
use crate::{dims, to_json, unsupported, CliError, Format, Outcome};

#[derive(Debug, Args)]
pub struct EstimateArgs {
    /// JSON run configuration.
    #[arg(long)]
    pub config: PathBuf,
    /// Overrides the seed in the configuration.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    Origin,
    Infinity,
    #[default]
    Both,
}

fn default_steps() -> u32 {
    5
}

/// Potentials come either as catalog specs `V`, `K` or as a CSV `table`
/// with columns `r,V,K` (a relative path is taken from the config's folder).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateConfig {
    pub p: RationalInput,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "V", default, skip_serializing_if = "Option::is_none")]
    pub v: Option<String>,
    #[serde(rename = "K", default, skip_serializing_if = "Option::is_none")]
    pub k: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<PathBuf>,
    pub q: Vec<RationalInput>,
    #[serde(default)]
    pub side: Sides,
    /// Schedule `R = 2^{∓k}`, `k = 0..=steps`.
    #[serde(default = "default_steps")]
    pub steps: u32,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub options: EstimatorOptions,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    #[serde(flatten)]
    pub decay: DecayRow<f64>,
    /// Exact range at this end, when the potentials are catalog specs.
    pub proven_range: Option<QSet>,
    pub inside_proven_range: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<&'static str>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EstimateReport {
    pub status: &'static str,
    pub config: EstimateConfig,
    pub rows: Vec<Row>,
    /// One `origin/infinity` class pair per exponent.
    pub summary: Vec<String>,
}

fn exact(q: &RationalInput) -> Result<ExtRational, CliError> {
    q.to_rational().map(ExtRational::Finite).map_err(|e| CliError::Input(format!("q: {e}")))
}

pub fn load(path: &Path) -> Result<EstimateConfig, CliError> {
    let src = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&src).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn report(cfg: &EstimateConfig, base: &Path) -> Result<(EstimateReport, bool), CliError> {
    let p = cfg.p.to_rational().map_err(|e| CliError::Input(format!("p: {e}")))?;
    let d = dims(&p.to_string(), cfg.n)?;
    if cfg.q.is_empty() {
        return Err(CliError::Input("q: at least one exponent needed".into()));
    }
    let qs: Vec<ExtRational> = cfg.q.iter().map(exact).collect::<Result<_, _>>()?;
    for q in &qs {
        if *q <= ExtRational::one() {
            return Err(CliError::Domain(format!("q = {q} must exceed 1")));
        }
    }
    let grid = RadialGrid::log_spaced(cfg.grid.rmin, cfg.grid.rmax, cfg.grid.m, cfg.n, ratio_to_f64(&p))
        .map_err(|e| CliError::Input(e.to_string()))?;
    let numeric = |e: radial_embed::estimator::NumericError| CliError::Domain(e.to_string());
    let (disc, specs): (Discretization<f64>, Option<(PotentialSpec<BigInt>, PotentialSpec<BigInt>)>) =
        match (&cfg.v, &cfg.k, &cfg.table) {
            (Some(v), Some(k), None) => {
                let (v, k) = (spec(v, "V")?, spec(k, "K")?);
                (Discretization::new(grid, &v, &k, None).map_err(numeric)?, Some((v, k)))
            }
            (None, None, Some(t)) => {
                let path = base.join(t);
                let file = std::fs::File::open(&path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
                let (v, k) = read_table_csv::<f64, _>(file).map_err(|e| CliError::Input(e.to_string()))?;
                (Discretization::new(grid, &v, &k, None).map_err(numeric)?, None)
            }
            _ => return Err(CliError::Input("give either both V and K, or a table".into())),
        };
    let proven = specs.as_ref().map(|(v, k)| compute(v, k, &d)).transpose()?;
    let sides: &[Side] = match cfg.side {
        Sides::Origin => &[Side::Origin],
        Sides::Infinity => &[Side::Infinity],
        Sides::Both => &[Side::Origin, Side::Infinity],
    };
    let qf: Vec<f64> = qs.iter().map(|q| q.to_f64()).collect();
    let mut rows = Vec::new();
    for &side in sides {
        let radii = dyadic_schedule(side, cfg.steps);
        let rep = decay_report(&disc, side, &qf, &radii, &cfg.options).map_err(|e| CliError::NonConvergence(e.to_string()))?;
        for (row, q) in rep.rows.into_iter().zip(&qs) {
            let range = proven.as_ref().map(|b| match side {
                Side::Origin => b.origin.range.clone(),
                Side::Infinity => b.infinity.range.clone(),
            });
            let inside = range.as_ref().map(|r| r.contains(q));
            let note = (row.class == DecayClass::Decaying && inside == Some(false)).then_some("outside proven range");
            rows.push(Row { decay: row, proven_range: range, inside_proven_range: inside, note });
        }
    }
    let class = |q: f64, side: Side| {
        rows.iter().find(|r| r.decay.q == q && r.decay.side == side).map(|r| serde_json::to_value(r.decay.class).expect("class").as_str().unwrap_or("").to_owned())
    };
    let summary = qs
        .iter()
        .zip(&qf)
        .map(|(q, &x)| {
            let parts: Vec<String> = sides.iter().filter_map(|&s| class(x, s)).collect();
            format!("q = {q}: {}", parts.join("/"))
        })
        .collect();
    let converged = rows.iter().all(|r| r.decay.converged.iter().all(|&c| c));
    Ok((EstimateReport { status: "empirical", config: cfg.clone(), rows, summary }, converged))
}

pub fn run(a: &EstimateArgs) -> Result<Outcome, CliError> {
    let mut cfg = load(&a.config)?;
    if let Some(s) = a.seed {
        cfg.options.seed = s;
    }
    let base = a.config.parent().unwrap_or(Path::new("."));
    let (rep, converged) = report(&cfg, base)?;
    let text = match a.format {
        Format::Json => to_json(&rep),
        Format::Csv => {
            let flat = DecayReport { status: rep.status, rows: rep.rows.iter().map(|r| r.decay.clone()).collect() };
            let mut buf = Vec::new();
            flat.write_csv(&mut buf).map_err(|e| CliError::Input(e.to_string()))?;
            String::from_utf8(buf).expect("csv output is UTF-8")
        }
        f => return Err(unsupported(f, "estimate")),
    };
    Ok(Outcome { code: if converged { 0 } else { 3 }, report: text })
}
