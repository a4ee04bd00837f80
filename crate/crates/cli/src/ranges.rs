use std::fmt::Write as _;

use clap::Args;
use num_bigint::BigInt;
use radial_embed::catalog::{best_ranges, parse_potential, BestRanges, CatalogError, EndRange, PotentialSpec};
use radial_embed::exponent::EmbeddingKind;
use radial_embed::Dims;
use serde::Serialize;

use crate::{dims, to_json, unsupported, CliError, Format, Outcome};

#[derive(Debug, Args)]
pub struct RangesArgs {
    /// Potential V, e.g. "r^-1" or "piecewise[(0,1): r^-1; (1,inf): 0]".
    #[arg(long = "V", allow_hyphen_values = true)]
    pub v: String,
    /// Weight K.
    #[arg(long = "K", allow_hyphen_values = true)]
    pub k: String,
    /// Exponent p, exact ("3/2" or "2").
    #[arg(long)]
    pub p: String,
    #[arg(long = "N")]
    pub n: u32,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

#[derive(Serialize)]
pub struct RangesReport<'a> {
    pub p: String,
    #[serde(rename = "N")]
    pub n: u32,
    #[serde(rename = "V")]
    pub v: &'a str,
    #[serde(rename = "K")]
    pub k: &'a str,
    #[serde(flatten)]
    pub ranges: &'a BestRanges<BigInt>,
}

pub(crate) fn spec(src: &str, what: &str) -> Result<PotentialSpec<BigInt>, CliError> {
    parse_potential(src).map_err(|e| CliError::Input(format!("{what}: {e}")))
}

pub(crate) fn compute(v: &PotentialSpec<BigInt>, k: &PotentialSpec<BigInt>, d: &Dims) -> Result<BestRanges<BigInt>, CliError> {
    best_ranges(v, k, d).map_err(|e| match e {
        CatalogError::Spec(e) => CliError::Domain(e.to_string()),
        CatalogError::Calculus(e) => CliError::Domain(e.to_string()),
    })
}

pub fn run(a: &RangesArgs) -> Result<Outcome, CliError> {
    let d = dims(&a.p, a.n)?;
    let v = spec(&a.v, "V")?;
    let k = spec(&a.k, "K")?;
    let r = compute(&v, &k, &d)?;
    let report = RangesReport { p: d.p().to_string(), n: a.n, v: &a.v, k: &a.k, ranges: &r };
    match a.format {
        Format::Json => Ok(Outcome::ok(to_json(&report))),
        Format::Text => Ok(Outcome::ok(render_text(&report))),
        f => Err(unsupported(f, "ranges")),
    }
}

fn render_end(out: &mut String, e: &EndRange<BigInt>) {
    let _ = writeln!(out, "{}: {} ({})", e.side, e.range, e.optimization);
    for (m, s) in &e.per_method {
        let _ = writeln!(out, "  {m}: {s}");
    }
    for c in &e.contributions {
        for w in &c.witnesses {
            let g = w.profile.gamma.as_ref().map(|g| format!(", gamma = {g}")).unwrap_or_default();
            let lim = if w.limit { " (limit)" } else { "" };
            let _ = writeln!(out, "  {} profile: alpha = {}, beta = {}{g}{lim}", c.method, w.profile.alpha, w.profile.beta);
        }
    }
    if let Some(g) = &e.gamma_best {
        let _ = writeln!(out, "  best gamma: {g}");
    }
    for d in &e.diagnostics {
        let _ = writeln!(out, "  note: {d}");
    }
}

pub(crate) fn render_text(r: &RangesReport<'_>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p = {}, N = {}, V = {}, K = {}", r.p, r.n, r.v, r.k);
    render_end(&mut out, &r.ranges.origin);
    render_end(&mut out, &r.ranges.infinity);
    let _ = writeln!(out, "conclusion: {}", r.ranges.conclusion);
    if let EmbeddingKind::None { diagnostics } = &r.ranges.conclusion.kind {
        for d in diagnostics {
            let _ = writeln!(out, "  violated: {d}");
        }
    }
    out
}
