//! Power potentials `V = r^a` with `−p(N−1)/(p−1) < a < −N` and
//! `K = O(r^{b₀})` at 0, `O(r^b)` at infinity: ranges from the calculus side by
//! side with the comparison exponents of earlier power-weight results.

use num_rational::Ratio;
use num_traits::One;
use serde::Serialize;

use super::ext::ExtendedRational;
use super::theorems::{combine, q1_set_thm3, q2_range_thm1};
use super::types::{AsymptoticProfile, CalculusError, EmbeddingConclusion, ExponentSet, ProblemDims, Side};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Example35<I: ExactInt> {
    pub b1: E<I>,
    pub b2: E<I>,
    pub b3: E<I>,
    /// Lower comparison exponent, defined for `b ∈ [b₃,−p) ∪ [b₁,b₂)`.
    pub q_lower_prime: Option<E<I>>,
    /// Upper comparison exponent, defined for `b₀ ∈ (b₃,−p] ∪ (b₁,b₂]`.
    pub q_upper_prime: Option<E<I>>,
    /// `max{1, p(N+b₀)/(N+a), p(N+b)/(N−p)}`
    pub q_lower_second: E<I>,
    /// `p(p(N−1)+pb₀−a)/(p(N−1)+a(p−1))`
    pub q_bar: E<I>,
    /// `(N+b)/(N−p) < q̄/p`, the condition for a single-space range.
    pub further: bool,
    pub q1: ExponentSet<I>,
    pub q2: ExponentSet<I>,
    pub conclusion: EmbeddingConclusion<I>,
    /// When both comparison exponents exist: `q̲″ ≤ q̲′` and `q̄′ < q̄`.
    pub dominates: Option<bool>,
}

pub fn example35_exponents<I: ExactInt>(
    a: &Ratio<I>,
    b: &Ratio<I>,
    b0: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<Example35<I>, CalculusError> {
    let one = Ratio::<I>::one();
    let p = dims.p().clone();
    let n = dims.n_q();
    let gc = dims.gamma_critical();
    if !(-gc.clone() < *a && *a < -n.clone()) {
        return Err(CalculusError::Domain(format!("need -p(N-1)/(p-1) = {} < a < -N = {}, got a = {a}", -gc, -n)));
    }
    if b0 <= a {
        return Err(CalculusError::Domain(format!("need b0 > a, got b0 = {b0}, a = {a}")));
    }
    let pn1 = p.clone() * (n.clone() - one.clone());
    let m = pn1.clone() + a.clone() * (p.clone() - one.clone());
    let b1 = m.clone() / (p.clone() * p.clone()) - n.clone();
    let b2 = m.clone() / p.clone() - n.clone();
    let b3 = (n.clone() - p.clone()) / p.clone() - n.clone();
    let sob = |x: &Ratio<I>| p.clone() * (n.clone() + x.clone()) / (n.clone() - p.clone());
    let st = |x: &Ratio<I>| p.clone() * p.clone() * (n.clone() + x.clone()) / m.clone();

    let q_lower_prime = if b3 <= *b && *b < -p.clone() {
        Some(sob(b))
    } else if b1 <= *b && *b < b2 {
        Some(st(b))
    } else {
        None
    };
    let q_upper_prime = if b3 < *b0 && *b0 <= -p.clone() {
        Some(sob(b0))
    } else if b1 < *b0 && *b0 <= b2 {
        Some(st(b0))
    } else {
        None
    };
    let q_bar = p.clone() * (pn1 + p.clone() * b0.clone() - a.clone()) / m;
    let lower_terms = [one.clone(), p.clone() * (n.clone() + b0.clone()) / (n.clone() + a.clone()), sob(b)];
    let q_lower_second = lower_terms.into_iter().max().expect("nonempty");
    let further = (n.clone() + b.clone()) / (n.clone() - p.clone()) < q_bar.clone() / p.clone();

    let zero = Ratio::from_integer(I::zero());
    let origin = AsymptoticProfile::new(
        Side::Origin,
        E::Finite(b0.clone()),
        zero.clone(),
        Some(E::Finite(-a.clone())),
        dims,
    )?;
    let infinity = AsymptoticProfile::new(Side::Infinity, E::Finite(b.clone()), zero, None, dims)?;
    let q1 = q1_set_thm3(&origin, dims)?;
    let q2 = q2_range_thm1(&infinity, dims)?;
    let conclusion = combine(&q1, &q2);

    let dominates = match (&q_lower_prime, &q_upper_prime) {
        (Some(lo), Some(hi)) => Some(q_lower_second <= *lo && *hi < q_bar),
        _ => None,
    };
    Ok(Example35 {
        b1: b1.into(),
        b2: b2.into(),
        b3: b3.into(),
        q_lower_prime: q_lower_prime.map(E::Finite),
        q_upper_prime: q_upper_prime.map(E::Finite),
        q_lower_second: q_lower_second.into(),
        q_bar: q_bar.into(),
        further,
        q1,
        q2,
        conclusion,
        dominates,
    })
}
