//! The admissible region `𝒜_{β,γ}` of `(α, q)` pairs at the origin.

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::ext::ExtendedRational;
use super::thresholds::{q_double_star, q_lower_star};
use super::types::{check_beta_unit, max_one_p_beta, CalculusError, ExponentSet, ProblemDims};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

/// Which of the five definitions of the region applies for a given `γ ≥ p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionCase {
    /// `p ≤ γ < N`
    BelowN,
    /// `γ = N`
    AtN,
    /// `N < γ < p(N−1)/(p−1)`
    BetweenNAndCritical,
    /// `γ = p(N−1)/(p−1)`
    AtCritical,
    /// `γ > p(N−1)/(p−1)`
    AboveCritical,
}

pub fn region_case<I: ExactInt>(gamma: &Ratio<I>, dims: &ProblemDims<I>) -> Result<RegionCase, CalculusError> {
    if gamma < dims.p() {
        return Err(CalculusError::Domain(format!("gamma = {gamma} must be >= p = {}", dims.p())));
    }
    let n = dims.n_q();
    let gc = dims.gamma_critical();
    Ok(if *gamma < n {
        RegionCase::BelowN
    } else if *gamma == n {
        RegionCase::AtN
    } else if *gamma < gc {
        RegionCase::BetweenNAndCritical
    } else if *gamma == gc {
        RegionCase::AtCritical
    } else {
        RegionCase::AboveCritical
    })
}

/// Membership of `(α, q)` in `𝒜_{β,γ}`, all inequalities strict.
pub fn region_membership<I: ExactInt>(
    alpha: &Ratio<I>,
    q: &Ratio<I>,
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<bool, CalculusError> {
    let slice = region_slice(&E::Finite(alpha.clone()), beta, &E::Finite(gamma.clone()), dims)?;
    Ok(slice.contains(&E::Finite(q.clone())))
}

/// `{q : (α, q) ∈ 𝒜_{β,γ}}` as one open interval.
///
/// `α = +∞` and `γ = +∞` return the limiting slice `(max{1,pβ}, ∞)`: every
/// upper bound in the region definition grows without bound with `α`, and the
/// region is nested increasing in `γ` with that union.
pub fn region_slice<I: ExactInt>(
    alpha: &E<I>,
    beta: &Ratio<I>,
    gamma: &E<I>,
    dims: &ProblemDims<I>,
) -> Result<ExponentSet<I>, CalculusError> {
    check_beta_unit(beta)?;
    let base = E::Finite(max_one_p_beta(beta, dims));
    let gamma = match gamma {
        E::PosInf => return Ok(ExponentSet::half_line(base)),
        E::NegInf => return Err(CalculusError::Domain("gamma = -inf at the origin".into())),
        E::Finite(g) => g,
    };
    let case = region_case(gamma, dims)?;
    let alpha = match alpha {
        E::PosInf => return Ok(ExponentSet::half_line(base)),
        E::NegInf => return Ok(ExponentSet::empty_at(base)),
        E::Finite(a) => a,
    };
    let one = Ratio::<I>::one();
    let slice = match case {
        RegionCase::BelowN => {
            let upper = q_lower_star(alpha, beta, gamma, dims)?.min(q_double_star(alpha, beta, gamma, dims)?);
            ExponentSet::open(base, E::Finite(upper))
        }
        RegionCase::AtN => {
            if *alpha > -(one - beta.clone()) * dims.n_q() {
                ExponentSet::open(base, E::Finite(q_double_star(alpha, beta, gamma, dims)?))
            } else {
                ExponentSet::empty_at(base)
            }
        }
        RegionCase::BetweenNAndCritical => {
            let lower = base.max(E::Finite(q_lower_star(alpha, beta, gamma, dims)?));
            ExponentSet::open(lower, E::Finite(q_double_star(alpha, beta, gamma, dims)?))
        }
        RegionCase::AtCritical => {
            let lower = base.max(E::Finite(q_lower_star(alpha, beta, gamma, dims)?));
            if *alpha > -(one - beta.clone()) * gamma.clone() {
                ExponentSet::half_line(lower)
            } else {
                ExponentSet::empty_at(lower)
            }
        }
        RegionCase::AboveCritical => {
            let lower = base
                .max(E::Finite(q_lower_star(alpha, beta, gamma, dims)?))
                .max(E::Finite(q_double_star(alpha, beta, gamma, dims)?));
            ExponentSet::half_line(lower)
        }
    };
    Ok(if slice.is_empty() { ExponentSet::empty_at(slice.lower) } else { slice })
}

/// Rational sample points spread over a slice, including points just inside
/// and just outside each finite endpoint.
pub(crate) fn probe_points<I: ExactInt>(set: &ExponentSet<I>, count: usize) -> Vec<Ratio<I>> {
    let lo = set.lower.finite().cloned();
    let hi = set.upper.finite().cloned();
    let (a, b) = match (lo, hi) {
        (Some(a), Some(b)) if a < b => (a, b),
        (Some(a), Some(b)) => (b.clone() - Ratio::one(), a + Ratio::one()),
        (Some(a), None) => (a.clone(), a + Ratio::from_integer(I::from_u32(16).unwrap())),
        (None, Some(b)) => (b.clone() - Ratio::from_integer(I::from_u32(16).unwrap()), b),
        (None, None) => (Ratio::zero(), Ratio::from_integer(I::from_u32(16).unwrap())),
    };
    let span = b.clone() - a.clone();
    let denom = I::from_usize(count + 1).unwrap();
    let mut out = Vec::with_capacity(count + 4);
    for k in 0..=count + 1 {
        let t = Ratio::new(I::from_usize(k).unwrap(), denom.clone());
        out.push(a.clone() + span.clone() * t);
    }
    let tiny = Ratio::new(I::one(), I::from_u32(1_000_003).unwrap());
    out.push(a.clone() - tiny.clone());
    out.push(b.clone() + tiny);
    out
}
