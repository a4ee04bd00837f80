//! The worked examples, each recomputed by the catalog and checked against
//! its closed-form ranges.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use clap::Args;
use num_bigint::BigInt;
use num_traits::{One, Zero};
use radial_embed::exponent::{example35_exponents, EmbeddingKind, Example35};
use radial_embed::{Conclusion, Dims, ExtRational, QSet, Rational};
use serde::Serialize;

use crate::ranges::{compute, spec};
use crate::{dims, rational, to_json, unsupported, CliError, Format, Outcome};

#[derive(Debug, Args)]
pub struct ExampleArgs {
    /// One of 3.1, 3.2, 3.3, 3.4, 3.5, 4.2.
    pub id: String,
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long = "N", default_value_t = 3)]
    pub n: u32,
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub b0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
}

/// What the closed form predicts for one pair of potentials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Expected {
    /// Single-space range equal to `q`.
    Single { q: QSet },
    /// Sum-space only, with these exact end ranges.
    Sum { q1: QSet, q2: QSet },
    /// End ranges at least as wide as these.
    Covers { q1: QSet, q2: QSet },
}

#[derive(Debug, Clone, Serialize)]
pub struct Case {
    pub label: String,
    #[serde(rename = "V")]
    pub v: String,
    #[serde(rename = "K")]
    pub k: String,
    pub origin: QSet,
    pub infinity: QSet,
    pub conclusion: Conclusion,
    pub expected: Expected,
    pub matches: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquationReport {
    pub q_bar: ExtRational,
    pub q_underline: ExtRational,
    /// Exponents with a positive-energy solution, if any.
    pub superlinear: Option<QSet>,
    /// Exponents with a negative-energy solution, if any.
    pub sublinear: Option<QSet>,
    pub single_space: bool,
    pub note: String,
    /// Ranges for a two-power nonlinearity when a single power is out of reach.
    pub fallback: Option<Fallback>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Fallback {
    pub family: &'static str,
    pub q1: QSet,
    pub q2: QSet,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExampleReport {
    pub id: String,
    pub p: ExtRational,
    #[serde(rename = "N")]
    pub n: u32,
    pub params: BTreeMap<&'static str, ExtRational>,
    pub cases: Vec<Case>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub comparison: Option<Example35<BigInt>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equation: Option<EquationReport>,
    pub reproduced: bool,
}

fn fin(x: Rational) -> ExtRational {
    ExtRational::Finite(x)
}

fn max(a: Rational, b: Rational) -> Rational {
    if a > b {
        a
    } else {
        b
    }
}

fn pow(e: &Rational) -> String {
    format!("r^{e}")
}

struct Ctx {
    d: Dims,
    p: Rational,
    n: Rational,
}

impl Ctx {
    /// `p(x + N)/(N − p)`
    fn sob(&self, x: &Rational) -> Rational {
        &self.p * (x + &self.n) / (&self.n - &self.p)
    }

    fn case(&self, label: &str, v: String, k: String, expected: Expected) -> Result<Case, CliError> {
        let got = compute(&spec(&v, "V")?, &spec(&k, "K")?, &self.d)?;
        let (o, i) = (got.origin.range, got.infinity.range);
        let matches = match &expected {
            Expected::Single { q } => got.conclusion.single() == Some(q),
            Expected::Sum { q1, q2 } => {
                matches!(got.conclusion.kind, EmbeddingKind::SumSpace { .. }) && o == *q1 && i == *q2
            }
            Expected::Covers { q1, q2 } => o.contains_set(q1) && i.contains_set(q2),
        };
        Ok(Case { label: label.into(), v, k, origin: o, infinity: i, conclusion: got.conclusion, expected, matches })
    }
}

fn params(a: &ExampleArgs, used: &[&'static str], defaults: &[&str]) -> Result<BTreeMap<&'static str, Rational>, CliError> {
    let given = [("a", &a.a), ("b", &a.b), ("b0", &a.b0), ("d", &a.d)];
    let mut out = BTreeMap::new();
    for (name, val) in given {
        match used.iter().position(|u| *u == name) {
            Some(i) => {
                out.insert(used[i], rational(val.as_deref().unwrap_or(defaults[i]), name)?);
            }
            None if val.is_some() => return Err(CliError::Input(format!("example {} takes no parameter {name}", a.id))),
            None => {}
        }
    }
    Ok(out)
}

fn domain(cond: bool, msg: impl FnOnce() -> String) -> Result<(), CliError> {
    if cond {
        Ok(())
    } else {
        Err(CliError::Domain(msg()))
    }
}

pub fn report(a: &ExampleArgs) -> Result<ExampleReport, CliError> {
    let d = dims(&a.p, a.n)?;
    let c = Ctx { p: d.p().clone(), n: d.n_q(), d };
    let (p, n) = (c.p.clone(), c.n.clone());
    let one = Rational::one();
    let mut comparison = None;
    let mut equation = None;
    let (prm, cases) = match a.id.as_str() {
        "3.1" => {
            let prm = params(a, &["a"], &["1"])?;
            let av = &prm["a"];
            domain(*av <= p, || format!("example 3.1 needs a <= p, got a = {av}"))?;
            let upper = &p * (&n - av + &one) / (&n - &p);
            let lower = &p * (&p * &n - av * (&p - &one)) / (&p * (&n - &one) - av * (&p - &one));
            let expected = if *av < p {
                Expected::Single { q: QSet::open(fin(lower), fin(upper)) }
            } else {
                Expected::Sum { q1: QSet::open(fin(one.clone()), fin(upper.clone())), q2: QSet::half_line(fin(upper)) }
            };
            let case = c.case("V = r^-a, K = r^(1-a)", pow(&-av), pow(&(&one - av)), expected)?;
            (prm, vec![case])
        }
        "3.2" => {
            let prm = params(a, &["d"], &["0"])?;
            let dv = &prm["d"];
            let floor = -&one - &n * (&p - &one) / &p;
            domain(*dv > floor, || format!("example 3.2 needs d > -1 - N(p-1)/p = {floor}, got d = {dv}"))?;
            let s = c.sob(dv);
            let expected = Expected::Sum { q1: QSet::open(fin(one.clone()), fin(s.clone())), q2: QSet::half_line(fin(max(one.clone(), s))) };
            (prm.clone(), vec![c.case("V = 0, K = r^d", "0".into(), pow(dv), expected)?])
        }
        "3.3" => {
            let prm = params(a, &["a", "b", "d"], &["1", "1", "0"])?;
            let (av, bv, dv) = (&prm["a"], &prm["b"], &prm["d"]);
            let floor = -&one - &n * (&p - &one) / &p;
            domain(av.is_positive() && bv.is_positive(), || format!("example 3.3 needs a, b > 0, got a = {av}, b = {bv}"))?;
            domain(*dv > floor, || format!("example 3.3 needs d > -1 - N(p-1)/p = {floor}, got d = {dv}"))?;
            let s = c.sob(dv);
            let v = format!("exp(-{av}r)");
            let k1 = c.case(
                "K1 = r^d",
                v.clone(),
                pow(dv),
                Expected::Sum { q1: QSet::open(fin(one.clone()), fin(s.clone())), q2: QSet::half_line(fin(s.clone())) },
            )?;
            let k2 = c.case("K2 = r^d exp(-br)", v, format!("{}*exp(-{bv}r)", pow(dv)), Expected::Single { q: QSet::open(fin(one.clone()), fin(s)) })?;
            (prm.clone(), vec![k1, k2])
        }
        "3.4" => {
            let prm = params(a, &["b"], &["1/2"])?;
            let bv = &prm["b"];
            domain(bv.is_positive() && *bv <= one, || format!("example 3.4 needs 0 < b <= 1, got b = {bv}"))?;
            let k = format!("exp({bv}/r)");
            let pstar = &n * &p / (&n - &p);
            let low = max(one.clone(), &p * bv);
            let cases = vec![
                c.case("V = exp(1/r)", "exp(1/r)".into(), k.clone(), Expected::Single { q: QSet::half_line(fin(p.clone())) })?,
                c.case(
                    "V1 = exp(1/r) near 0, compact support",
                    "piecewise[(0,2): exp(1/r); (2,inf): 0]".into(),
                    k.clone(),
                    Expected::Single { q: QSet::half_line(fin(pstar)) },
                )?,
                c.case(
                    "V2 = exp(1/r) near 0, r^N near infinity",
                    format!("asym[0: exp(1/r); inf: r^{}]", a.n),
                    k,
                    Expected::Single { q: QSet::half_line(fin(low)) },
                )?,
            ];
            (prm.clone(), cases)
        }
        "3.5" => {
            let prm = params(a, &["a", "b", "b0"], &["-7/2", "-9/4", "-2"])?;
            let (av, bv, b0) = (&prm["a"], &prm["b"], &prm["b0"]);
            let ex = example35_exponents(av, bv, b0, &c.d).map_err(|e| CliError::Domain(format!("example 3.5: {e}")))?;
            let k = format!("piecewise[(0,1): {}; (1,inf): {}]", pow(b0), pow(bv));
            let case = c.case("V = r^a, K = r^b0 near 0, r^b near infinity", pow(av), k, Expected::Covers { q1: ex.q1.clone(), q2: ex.q2.clone() })?;
            comparison = Some(ex);
            (prm.clone(), vec![case])
        }
        "4.2" => {
            let prm = params(a, &["a", "b", "b0"], &["1", "-5/2", "-1"])?;
            let (av, bv, b0) = (&prm["a"], &prm["b"], &prm["b0"]);
            domain(av.is_positive(), || format!("example 4.2 needs a > 0, got a = {av}"))?;
            domain(*b0 > -n.clone(), || format!("example 4.2 needs b0 > -N, got b0 = {b0}"))?;
            let q_bar = &p * (&one + (&n + b0) * &p / (&n - &p));
            let q_under = max(one.clone(), c.sob(bv));
            let single = *bv < &p * (&n + b0 - &one);
            let superlinear = single.then(|| QSet::open(fin(max(p.clone(), c.sob(bv))), fin(q_bar.clone())));
            let sublinear = (*bv < -p.clone()).then(|| QSet::open(fin(q_under.clone()), fin(p.clone())));
            let fallback = (!single).then(|| Fallback {
                family: "min-power",
                q1: QSet::open(fin(p.clone()), fin(q_bar.clone())),
                q2: QSet::half_line(fin(q_under.clone())),
            });
            let note = if single {
                "single power nonlinearities admissible".to_string()
            } else {
                format!("no single-space range; sum-space only (b >= p(N+b0-1) = {})", &p * (&n + b0 - &one))
            };
            let v = format!("exp(-{av}r)*r^-{}", a.n);
            let k = format!("piecewise[(0,1): {}; (1,inf): {}]", pow(b0), pow(bv));
            let expected = Expected::Covers { q1: QSet::open(fin(one.clone()), fin(q_bar.clone())), q2: QSet::half_line(fin(q_under.clone())) };
            let case = c.case("V = exp(-ar)/r^N, K = r^b0 near 0, r^b near infinity", v, k, expected)?;
            equation = Some(EquationReport { q_bar: fin(q_bar), q_underline: fin(q_under), superlinear, sublinear, single_space: single, note, fallback });
            (prm.clone(), vec![case])
        }
        other => return Err(CliError::Input(format!("unknown example {other:?}; expected 3.1, 3.2, 3.3, 3.4, 3.5 or 4.2"))),
    };
    let dominated = comparison.as_ref().and_then(|e: &Example35<BigInt>| e.dominates).unwrap_or(true);
    let reproduced = cases.iter().all(|c| c.matches) && dominated;
    let params = prm.into_iter().map(|(k, v)| (k, fin(v))).collect();
    Ok(ExampleReport { id: a.id.clone(), p: fin(p), n: a.n, params, cases, comparison, equation, reproduced })
}

trait Positive {
    fn is_positive(&self) -> bool;
}

impl Positive for Rational {
    fn is_positive(&self) -> bool {
        *self > Rational::zero()
    }
}

fn render_text(rep: &ExampleReport) -> String {
    let mut out = String::new();
    let prm: Vec<String> = rep.params.iter().map(|(k, v)| format!("{k} = {v}")).collect();
    let _ = writeln!(out, "example {} (p = {}, N = {}{}{})", rep.id, rep.p, rep.n, if prm.is_empty() { "" } else { ", " }, prm.join(", "));
    for c in &rep.cases {
        let _ = writeln!(out, "{}: V = {}, K = {}", c.label, c.v, c.k);
        let _ = writeln!(out, "  origin {}, infinity {}", c.origin, c.infinity);
        let _ = writeln!(out, "  {}", c.conclusion);
        let _ = writeln!(out, "  matches closed form: {}", c.matches);
    }
    if let Some(e) = &rep.comparison {
        let show = |x: &Option<ExtRational>| x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "undefined".into());
        let _ = writeln!(
            out,
            "comparison: q_lower' = {}, q_upper' = {}, q_lower'' = {}, q_bar = {}, dominates: {:?}",
            show(&e.q_lower_prime),
            show(&e.q_upper_prime),
            e.q_lower_second,
            e.q_bar,
            e.dominates
        );
    }
    if let Some(e) = &rep.equation {
        let show = |x: &Option<QSet>| x.as_ref().map(|v| v.to_string()).unwrap_or_else(|| "none".into());
        let _ = writeln!(out, "q_bar = {}, q_underline = {}", e.q_bar, e.q_underline);
        let _ = writeln!(out, "superlinear q in {}, sublinear q in {}", show(&e.superlinear), show(&e.sublinear));
        let _ = writeln!(out, "{}", e.note);
        if let Some(f) = &e.fallback {
            let _ = writeln!(out, "fallback {}: q1 in {}, q2 in {}", f.family, f.q1, f.q2);
        }
    }
    let _ = writeln!(out, "reproduced: {}", rep.reproduced);
    out
}

pub fn run(a: &ExampleArgs) -> Result<Outcome, CliError> {
    let rep = report(a)?;
    match a.format {
        Format::Json => Ok(Outcome::ok(to_json(&rep))),
        Format::Text => Ok(Outcome::ok(render_text(&rep))),
        f => Err(unsupported(f, "example")),
    }
}
