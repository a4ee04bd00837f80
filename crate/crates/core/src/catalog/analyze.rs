//! Exact boundedness and lower-bound analysis of catalog potentials at the two
//! ends of `(0, ∞)`.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::spec::{PotentialSpec, Term};
use crate::exponent::{ExtendedRational, ProblemDims, Side};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

/// Best `α` bound for the ratio `K / (r^α V^β)` at one end, for a fixed `β`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "", tag = "kind", content = "alpha")]
pub enum AlphaBound<I: ExactInt> {
    /// The ratio is unbounded for every `α`.
    Infeasible,
    /// Bounded for all `α` at or beyond this value (`≤` at the origin, `≥` at
    /// infinity); `±∞` when every `α` works.
    Bound(E<I>),
}

/// Everything the range selection needs to know about `(V, K)` at one end.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct EndAnalysis<I: ExactInt> {
    pub side: Side,
    #[serde(skip)]
    pub v: Term<I>,
    #[serde(skip)]
    pub k: Term<I>,
    /// Largest admissible `γ₀ ≥ p` at the origin, smallest `γ∞ ≤ p` at
    /// infinity; `±∞` when every such `γ` is admissible.
    pub gamma_best: Option<E<I>>,
}

impl<I: ExactInt> EndAnalysis<I> {
    /// The power of `r` in `K / V^β` and its dominant exponential rate.
    fn ratio_parts(&self, beta: &Ratio<I>) -> (Ratio<I>, Ratio<I>) {
        let e = self.k.power.clone() - beta.clone() * self.v.power.clone();
        let s = self.k.dominant_rate(self.side).clone() - beta.clone() * self.v.dominant_rate(self.side).clone();
        (e, s)
    }

    pub fn v_vanishes(&self) -> bool {
        self.v.is_zero()
    }

    pub fn k_vanishes(&self) -> bool {
        self.k.is_zero()
    }

    /// `ᾱ(β)` at the origin (supremum of admissible `α₀`), `α̲(β)` at infinity
    /// (infimum of admissible `α∞`).
    pub fn alpha_bound(&self, beta: &Ratio<I>) -> AlphaBound<I> {
        let free = match self.side {
            Side::Origin => E::PosInf,
            Side::Infinity => E::NegInf,
        };
        if self.v_vanishes() && !beta.is_zero() {
            // V^0 = 1 is the only meaningful power of a vanishing V.
            return AlphaBound::Infeasible;
        }
        if self.k_vanishes() {
            return AlphaBound::Bound(free);
        }
        let (e, s) = if self.v_vanishes() {
            (self.k.power.clone(), self.k.dominant_rate(self.side).clone())
        } else {
            self.ratio_parts(beta)
        };
        if s.is_negative() {
            AlphaBound::Bound(free)
        } else if s.is_zero() {
            AlphaBound::Bound(E::Finite(e))
        } else {
            AlphaBound::Infeasible
        }
    }

    /// The `β` where the dominant exponential rate of `K / V^β` vanishes, if
    /// `V` has a nonzero rate at this end.
    pub fn critical_beta(&self) -> Option<Ratio<I>> {
        if self.v_vanishes() || self.k_vanishes() {
            return None;
        }
        let sv = self.v.dominant_rate(self.side);
        if sv.is_zero() {
            None
        } else {
            Some(self.k.dominant_rate(self.side).clone() / sv.clone())
        }
    }
}

fn gamma_best<I: ExactInt>(v: &Term<I>, side: Side, dims: &ProblemDims<I>) -> Option<E<I>> {
    if v.is_zero() {
        return None;
    }
    let p = dims.p().clone();
    let s = v.dominant_rate(side);
    match side {
        // r^γ V ≥ c near 0
        Side::Origin => {
            if s.is_positive() {
                Some(E::PosInf)
            } else if s.is_negative() {
                None
            } else {
                let g = -v.power.clone();
                (g >= p).then_some(E::Finite(g))
            }
        }
        Side::Infinity => {
            if s.is_positive() {
                Some(E::NegInf)
            } else if s.is_negative() {
                None
            } else {
                let g = -v.power.clone();
                (g <= p).then_some(E::Finite(g))
            }
        }
    }
}

pub fn analyze_end<I: ExactInt>(
    v: &PotentialSpec<I>,
    k: &PotentialSpec<I>,
    side: Side,
    dims: &ProblemDims<I>,
) -> EndAnalysis<I> {
    let vt = v.end_term(side).clone();
    EndAnalysis { side, gamma_best: gamma_best(&vt, side, dims), v: vt, k: k.end_term(side).clone() }
}

/// Whether `∫ term(r)^m r^w dr` converges near `side` (for `m > 0`).
pub fn integrable_near<I: ExactInt>(term: &Term<I>, m: &Ratio<I>, w: &Ratio<I>, side: Side) -> bool {
    if term.is_zero() {
        return true;
    }
    let s = term.dominant_rate(side).clone() * m.clone();
    if !s.is_zero() {
        return s.is_negative();
    }
    let e = term.power.clone() * m.clone() + w.clone();
    match side {
        Side::Origin => e > -Ratio::<I>::one(),
        Side::Infinity => e < -Ratio::<I>::one(),
    }
}

/// `K(|·|) ∈ L¹(B₁)`.
pub fn is_k_l1_ball<I: ExactInt>(k: &PotentialSpec<I>, dims: &ProblemDims<I>) -> bool {
    let w = dims.n_q() - Ratio::one();
    integrable_near(k.end_term(Side::Origin), &Ratio::one(), &w, Side::Origin)
}

/// `K(|·|) ∈ L¹(ℝ^N)`.
pub fn is_k_l1_global<I: ExactInt>(k: &PotentialSpec<I>, dims: &ProblemDims<I>) -> bool {
    let w = dims.n_q() - Ratio::one();
    is_k_l1_ball(k, dims) && integrable_near(k.end_term(Side::Infinity), &Ratio::one(), &w, Side::Infinity)
}

/// `Q ∈ L^{p'}((0,∞), r^{N + 1/(p−1)} dr)`, a sufficient condition for the
/// forcing term to be admissible.
pub fn forcing_integrable<I: ExactInt>(q: &PotentialSpec<I>, dims: &ProblemDims<I>) -> bool {
    let one = Ratio::<I>::one();
    let p = dims.p().clone();
    let m = p.clone() / (p.clone() - one.clone());
    let w = dims.n_q() + one.clone() / (p - one);
    integrable_near(q.end_term(Side::Origin), &m, &w, Side::Origin)
        && integrable_near(q.end_term(Side::Infinity), &m, &w, Side::Infinity)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::parse_potential;
    use crate::exponent::ratio;
    use num_bigint::BigInt;

    type S = PotentialSpec<BigInt>;

    fn sp(s: &str) -> S {
        parse_potential(s).unwrap()
    }

    fn d23() -> ProblemDims<BigInt> {
        ProblemDims::new(ratio(2, 1), 3).unwrap()
    }

    #[test]
    fn example_3_1_at_infinity() {
        let a = analyze_end(&sp("r^-1"), &sp("r^0"), Side::Infinity, &d23());
        assert_eq!(a.alpha_bound(&ratio(0, 1)), AlphaBound::Bound(E::zero()));
        assert_eq!(a.gamma_best, Some(E::one()));
        // α̲(β) = b − aβ for V = r^a, K = r^b
        let a = analyze_end(&sp("r^-2"), &sp("r^-1"), Side::Infinity, &d23());
        assert_eq!(a.alpha_bound(&ratio(1, 2)), AlphaBound::Bound(E::zero()));
    }

    #[test]
    fn example_3_4_at_origin() {
        let a = analyze_end(&sp("exp(1/r)"), &sp("exp(1/2/r)"), Side::Origin, &d23());
        assert_eq!(a.alpha_bound(&ratio(1, 4)), AlphaBound::Infeasible);
        assert_eq!(a.alpha_bound(&ratio(1, 2)), AlphaBound::Bound(E::zero()));
        assert_eq!(a.alpha_bound(&ratio(3, 4)), AlphaBound::Bound(E::PosInf));
        assert_eq!(a.gamma_best, Some(E::PosInf));
        assert_eq!(a.critical_beta(), Some(ratio(1, 2)));
    }

    #[test]
    fn example_3_3_at_infinity() {
        let a = analyze_end(&sp("exp(-2r)"), &sp("r^1/2"), Side::Infinity, &d23());
        assert_eq!(a.alpha_bound(&ratio(0, 1)), AlphaBound::Bound(E::new(1, 2)));
        assert_eq!(a.alpha_bound(&ratio(1, 3)), AlphaBound::Infeasible);
        assert_eq!(a.gamma_best, None);
    }

    #[test]
    fn vanishing_v_allows_only_beta_zero() {
        let v = sp("piecewise[(0,1): exp(1/r); (1,inf): 0]");
        let a = analyze_end(&v, &sp("exp(1/r)"), Side::Infinity, &d23());
        assert_eq!(a.alpha_bound(&ratio(0, 1)), AlphaBound::Bound(E::zero()));
        assert_eq!(a.alpha_bound(&ratio(1, 2)), AlphaBound::Infeasible);
        assert_eq!(a.gamma_best, None);
    }

    #[test]
    fn integrability() {
        let d = d23();
        assert!(is_k_l1_global(&sp("r^-4"), &d) == false);
        assert!(!is_k_l1_global(&sp("piecewise[(0,1): 1; (1,inf): r^-3]"), &d));
        assert!(is_k_l1_global(&sp("piecewise[(0,1): 1; (1,inf): r^-7/2]"), &d));
        assert!(is_k_l1_ball(&sp("r^-5/2"), &d));
        assert!(!is_k_l1_ball(&sp("r^-3"), &d));
        assert!(!is_k_l1_ball(&sp("exp(1/r)"), &d));
        assert!(is_k_l1_global(&sp("exp(-r)*r^-2"), &d));
        assert!(forcing_integrable(&sp("exp(-r)"), &d));
        assert!(!forcing_integrable(&sp("1"), &d));
    }
}
