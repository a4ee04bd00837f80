use clap::Args;
use num_bigint::BigInt;
use num_traits::One;
use radial_embed::exponent::{q_double_star, q_lower_star, region_case, region_membership};
use radial_embed::Rational;
use serde::Serialize;

use crate::{dims, rational, to_json, unsupported, CliError, Format, Outcome};

#[derive(Debug, Args)]
pub struct RegionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub beta: String,
    /// γ ≥ p.
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: String,
    #[arg(long)]
    pub p: String,
    #[arg(long = "N")]
    pub n: u32,
    /// α span as "lo:hi".
    #[arg(long, allow_hyphen_values = true, default_value = "-4:4")]
    pub alpha: String,
    /// q span as "lo:hi".
    #[arg(long, allow_hyphen_values = true, default_value = "0:12")]
    pub q: String,
    /// Lattice intervals per axis.
    #[arg(long, default_value_t = 24)]
    pub steps: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
}

/// One CSV row. Lattice rows carry `in`/`out`; threshold rows carry the
/// curve value in `q` and an empty `value`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Row {
    pub series: &'static str,
    pub alpha: String,
    pub q: String,
    pub value: &'static str,
}

fn span(s: &str, what: &str) -> Result<(Rational, Rational), CliError> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| CliError::Input(format!("{what}: expected lo:hi, got {s:?}")))?;
    let (lo, hi) = (rational(lo, what)?, rational(hi, what)?);
    if lo >= hi {
        return Err(CliError::Input(format!("{what}: empty span {lo}:{hi}")));
    }
    Ok((lo, hi))
}

fn lattice(lo: &Rational, hi: &Rational, steps: u32) -> Vec<Rational> {
    let n = Rational::from_integer(BigInt::from(steps));
    (0..=steps).map(|i| lo + (hi - lo) * Rational::from_integer(BigInt::from(i)) / &n).collect()
}

pub fn rows(a: &RegionArgs) -> Result<Vec<Row>, CliError> {
    if a.steps == 0 {
        return Err(CliError::Input("steps must be positive".into()));
    }
    let d = dims(&a.p, a.n)?;
    let beta = rational(&a.beta, "beta")?;
    let gamma = rational(&a.gamma, "gamma")?;
    region_case(&gamma, &d).map_err(|e| CliError::Domain(e.to_string()))?;
    let (alo, ahi) = span(&a.alpha, "alpha")?;
    let (qlo, qhi) = span(&a.q, "q")?;
    let alphas = lattice(&alo, &ahi, a.steps);
    let qs = lattice(&qlo, &qhi, a.steps);
    let mut out = Vec::with_capacity(alphas.len() * (qs.len() + 3));
    for al in &alphas {
        for q in &qs {
            let inside = region_membership(al, q, &beta, &gamma, &d).map_err(|e| CliError::Domain(e.to_string()))?;
            out.push(Row { series: "region", alpha: al.to_string(), q: q.to_string(), value: if inside { "in" } else { "out" } });
        }
    }
    let pb = d.p() * &beta;
    let base = if pb > Rational::one() { pb } else { Rational::one() };
    // a threshold whose denominator vanishes at this γ is left out
    let curves: [(&'static str, fn(&Rational, &Rational, &Rational, &radial_embed::Dims) -> Result<Rational, _>); 2] =
        [("q_lower_star", q_lower_star), ("q_double_star", q_double_star)];
    for (name, curve) in curves {
        if let Ok(vals) = alphas.iter().map(|al| curve(al, &beta, &gamma, &d)).collect::<Result<Vec<_>, _>>() {
            out.extend(alphas.iter().zip(vals).map(|(al, v)| Row { series: name, alpha: al.to_string(), q: v.to_string(), value: "" }));
        }
    }
    out.extend(alphas.iter().map(|al| Row { series: "base", alpha: al.to_string(), q: base.to_string(), value: "" }));
    Ok(out)
}

pub fn run(a: &RegionArgs) -> Result<Outcome, CliError> {
    let rows = rows(a)?;
    match a.format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in &rows {
                w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
            Ok(Outcome::ok(String::from_utf8(bytes).expect("csv output is UTF-8")))
        }
        Format::Json => Ok(Outcome::ok(to_json(&rows))),
        f => Err(unsupported(f, "region")),
    }
}
