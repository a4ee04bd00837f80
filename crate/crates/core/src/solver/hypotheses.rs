//! Verdicts on the growth and structure conditions the existence theorems
//! place on `g(r, t) = K(r) f(t) + Q(r)`.

use num_traits::Signed;
use serde::Serialize;

use super::nonlinearity::Nonlinearity;
use crate::catalog::{forcing_integrable, is_k_l1_global, PotentialSpec};
use crate::exponent::ProblemDims;
use crate::scalar::{ExactInt, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisCheck<T> {
    pub name: &'static str,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t0: Option<T>,
    /// `m` of (g₄)/(g₆), or `M` of the growth bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl<T> HypothesisCheck<T> {
    fn new(name: &'static str, verdict: Verdict) -> Self {
        Self { name, verdict, theta: None, t0: None, m: None, note: None }
    }

    fn theta(mut self, v: T) -> Self {
        self.theta = Some(v);
        self
    }

    fn t0(mut self, v: T) -> Self {
        self.t0 = Some(v);
        self
    }

    fn m(mut self, v: T) -> Self {
        self.m = Some(v);
        self
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.note = Some(s.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HypothesisReport<T> {
    pub family: &'static str,
    pub checks: Vec<HypothesisCheck<T>>,
}

impl<T> HypothesisReport<T> {
    pub fn get(&self, name: &str) -> Option<&HypothesisCheck<T>> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn holds(&self, name: &str) -> bool {
        self.get(name).is_some_and(|c| c.verdict == Verdict::Holds)
    }
}

/// What is known about `K` and `Q` beyond the nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightFacts {
    /// `K > 0` almost everywhere (`None`: unknown, e.g. tabulated input).
    pub k_positive: Option<bool>,
    pub k_integrable: Option<bool>,
    pub forcing: ForcingFacts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ForcingFacts {
    Absent,
    Present { nonnegative: bool, integrable: Option<bool> },
}

impl WeightFacts {
    pub fn from_specs<I: ExactInt>(k: &PotentialSpec<I>, forcing: Option<&PotentialSpec<I>>, dims: &ProblemDims<I>) -> Self {
        let k_positive = !k.pieces().iter().any(|pc| pc.term.is_zero());
        let forcing = match forcing {
            None => ForcingFacts::Absent,
            Some(q) if q.is_identically_zero() => ForcingFacts::Absent,
            Some(q) => ForcingFacts::Present {
                nonnegative: q.pieces().iter().all(|pc| !pc.term.coef.is_negative()),
                integrable: forcing_integrable(q, dims).then_some(true),
            },
        };
        Self { k_positive: Some(k_positive), k_integrable: Some(is_k_l1_global(k, dims)), forcing }
    }
}

fn holds_if<T>(name: &'static str, b: bool) -> HypothesisCheck<T> {
    HypothesisCheck::new(name, if b { Verdict::Holds } else { Verdict::Fails })
}

impl<T: Real> Nonlinearity<T> {
    /// `M` with `|f(t)| ≤ M min{|t|^{q₁−1}, |t|^{q₂−1}}`.
    pub fn growth_constant(&self) -> Option<T> {
        match *self {
            Nonlinearity::Zero | Nonlinearity::PurePower { .. } | Nonlinearity::MinPower { .. } | Nonlinearity::RationalPower { .. } => {
                Some(T::one())
            }
            // t^ε |ln t| ≤ 1/(eε) on both sides of t = 1
            Nonlinearity::LogPerturbed { epsilon, .. } => Some(T::one() / (T::c(std::f64::consts::E) * epsilon)),
            Nonlinearity::Custom { .. } => None,
        }
    }

    /// θ > p of (g₁), valid for every `t ≥ 0`.
    pub fn ar_exponent(&self, p: T) -> Option<T> {
        let theta = match *self {
            Nonlinearity::PurePower { q } => q,
            Nonlinearity::MinPower { q1, q2 } => q1.min(q2),
            Nonlinearity::RationalPower { q1, .. } => q1,
            _ => return None,
        };
        (theta > p).then_some(theta)
    }

    /// `(θ, t₀, m)` of (g₆).
    pub fn sublinear_witness(&self, p: T) -> Option<(T, T, T)> {
        let one = T::one();
        let w = match *self {
            Nonlinearity::PurePower { q } => (q, one, one / q),
            Nonlinearity::MinPower { q1, q2 } => {
                let th = q1.max(q2);
                (th, one, one / th)
            }
            Nonlinearity::RationalPower { q2, .. } => (q2, one, one / (T::c(2.0) * q2)),
            _ => return None,
        };
        (w.0 < p).then_some(w)
    }

    /// Smallest dyadic `t₀ ∈ [2⁻²⁰, 2²⁰]` with `F(t₀) > 0`.
    fn positive_primitive_point(&self) -> Option<T> {
        (-20..=20).map(|k| T::c(2f64.powi(k))).find(|&t| self.primitive(t) > T::zero())
    }
}

/// Verdicts for (f_{q₁,q₂}) and (g₀)–(g₇).
pub fn check_hypotheses<T: Real>(nl: &Nonlinearity<T>, p: T, facts: &WeightFacts) -> HypothesisReport<T> {
    use Verdict::*;
    let one = T::one();
    let forced = matches!(facts.forcing, ForcingFacts::Present { .. });
    let mut checks = Vec::new();

    checks.push(match nl.growth_constant() {
        Some(m) => HypothesisCheck::new("f", Holds).m(m),
        None => HypothesisCheck::new("f", Unknown).note("tabulated nonlinearity"),
    });

    checks.push(match facts.forcing {
        ForcingFacts::Absent => HypothesisCheck::new("g0", Holds).note("g(·,0) = 0"),
        ForcingFacts::Present { integrable: Some(true), .. } => {
            HypothesisCheck::new("g0", Holds).note("g(·,0) ∈ L^{p/(p−1)}(r^{N+1/(p−1)} dr)")
        }
        ForcingFacts::Present { .. } => HypothesisCheck::new("g0", Unknown).note("sufficient integrability condition not met"),
    });

    let forced_unknown = |name: &'static str| HypothesisCheck::new(name, Unknown).note("forcing term present");
    let k_pos = facts.k_positive;

    // (g1)
    checks.push(if forced {
        forced_unknown("g1")
    } else {
        match nl {
            Nonlinearity::Zero => HypothesisCheck::new("g1", Holds).theta(p + one).note("G = 0"),
            Nonlinearity::LogPerturbed { .. } => HypothesisCheck::new("g1", Fails).note("G < 0 on (0, 1)"),
            Nonlinearity::Custom { .. } => HypothesisCheck::new("g1", Unknown),
            _ => match nl.ar_exponent(p) {
                Some(th) => HypothesisCheck::new("g1", Holds).theta(th),
                None => HypothesisCheck::new("g1", Fails).note("growth exponent not above p"),
            },
        }
    });

    // (g2)
    checks.push(if forced {
        forced_unknown("g2")
    } else if k_pos == Some(false) {
        HypothesisCheck::new("g2", Fails).note("K vanishes on an interval")
    } else {
        match nl {
            Nonlinearity::Zero => HypothesisCheck::new("g2", Fails).note("G = 0"),
            _ => match (nl.positive_primitive_point(), k_pos) {
                (Some(t0), Some(true)) => HypothesisCheck::new("g2", Holds).t0(t0),
                (Some(t0), _) => HypothesisCheck::new("g2", Unknown).t0(t0).note("positivity of K unknown"),
                (None, _) => HypothesisCheck::new("g2", Unknown).note("no t0 found with F(t0) > 0"),
            },
        }
    });

    // (g3)
    checks.push(if forced {
        forced_unknown("g3")
    } else {
        match *nl {
            Nonlinearity::Zero => HypothesisCheck::new("g3", Fails).note("G = 0"),
            Nonlinearity::Custom { .. } => HypothesisCheck::new("g3", Unknown),
            Nonlinearity::LogPerturbed { q1, epsilon, .. } => {
                if q1 - epsilon > p {
                    let theta = (p + q1 - epsilon) / T::c(2.0);
                    match log_g3_threshold(nl, theta) {
                        Some(t0) => HypothesisCheck::new("g3", Holds).theta(theta).t0(t0).note("t0 located on a sampled range"),
                        None => HypothesisCheck::new("g3", Unknown).theta(theta),
                    }
                } else {
                    HypothesisCheck::new("g3", Fails).note("q1 − ε ≤ p")
                }
            }
            _ => match (nl.ar_exponent(p), nl.positive_primitive_point()) {
                (Some(th), Some(t0)) => HypothesisCheck::new("g3", Holds).theta(th).t0(t0),
                _ => HypothesisCheck::new("g3", Fails).note("growth exponent not above p"),
            },
        }
    });

    // (g4)
    checks.push(if forced {
        forced_unknown("g4")
    } else {
        match *nl {
            Nonlinearity::PurePower { q } => HypothesisCheck::new("g4", Holds).m(one / q),
            Nonlinearity::MinPower { q1, q2 } => HypothesisCheck::new("g4", Holds).m(one / q1.max(q2)),
            Nonlinearity::RationalPower { q2, .. } => HypothesisCheck::new("g4", Holds).m(one / (T::c(2.0) * q2)),
            Nonlinearity::Zero => HypothesisCheck::new("g4", Fails).note("G = 0"),
            Nonlinearity::LogPerturbed { .. } => HypothesisCheck::new("g4", Fails).note("G < 0 near 0"),
            Nonlinearity::Custom { .. } => HypothesisCheck::new("g4", Unknown),
        }
    });

    // (g5)
    checks.push(if forced {
        HypothesisCheck::new("g5", Fails).note("g(·,0) ≠ 0")
    } else {
        match nl {
            Nonlinearity::LogPerturbed { .. } => HypothesisCheck::new("g5", Fails).note("f is even"),
            _ => HypothesisCheck::new("g5", Holds),
        }
    });

    // (g6)
    let nonneg_forcing = match facts.forcing {
        ForcingFacts::Absent => true,
        ForcingFacts::Present { nonnegative, .. } => nonnegative,
    };
    checks.push(match nl.sublinear_witness(p) {
        Some((th, t0, m)) if nonneg_forcing => HypothesisCheck::new("g6", Holds).theta(th).t0(t0).m(m),
        Some((th, t0, m)) => HypothesisCheck::new("g6", Unknown).theta(th).t0(t0).m(m).note("forcing changes sign"),
        None => match nl {
            Nonlinearity::Custom { .. } => HypothesisCheck::new("g6", Unknown),
            _ => HypothesisCheck::new("g6", Fails),
        },
    });

    checks.push(holds_if("g7", forced));
    HypothesisReport { family: nl.name(), checks }
}

/// Smallest dyadic `t₀` from which `0 < θF(t) ≤ f(t)t` on a sample of
/// `[t₀, 2⁴⁰ t₀]`.
fn log_g3_threshold<T: Real>(nl: &Nonlinearity<T>, theta: T) -> Option<T> {
    let ok = |t: T| {
        let big = nl.primitive(t);
        big > T::zero() && theta * big <= nl.f(t) * t
    };
    (0..40).map(|k| T::c(2f64.powi(k))).find(|&t0| (0..=160).all(|j| ok(t0 * T::c(2f64.powf(j as f64 / 4.0)))))
}
