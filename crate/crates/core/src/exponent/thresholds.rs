//! Closed-form exponents and thresholds.

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::ext::ExtendedRational;
use super::types::{check_beta_unit, max_one_p_beta, CalculusError, ProblemDims};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

fn check_beta_le_one<I: ExactInt>(beta: &Ratio<I>) -> Result<(), CalculusError> {
    if *beta > Ratio::one() {
        return Err(CalculusError::Domain(format!("beta = {beta} > 1")));
    }
    Ok(())
}

/// `α*(β) = max{pβ − 1 − (p−1)N/p, −(1−β)N}` for `β ∈ [0, 1]`.
pub fn alpha_star<I: ExactInt>(beta: &Ratio<I>, dims: &ProblemDims<I>) -> Result<Ratio<I>, CalculusError> {
    check_beta_unit(beta)?;
    let one = Ratio::<I>::one();
    let p = dims.p().clone();
    let n = dims.n_q();
    let first = p.clone() * beta.clone() - one.clone() - (p.clone() - one.clone()) * n.clone() / p;
    let second = -(one - beta.clone()) * n;
    Ok(if first > second { first } else { second })
}

/// `q*(α,β) = p(α − pβ + N)/(N − p)`, extended by monotonicity to `α = ±∞`.
pub fn q_star_upper<I: ExactInt>(alpha: &E<I>, beta: &Ratio<I>, dims: &ProblemDims<I>) -> Result<E<I>, CalculusError> {
    check_beta_le_one(beta)?;
    Ok(match alpha {
        E::PosInf => E::PosInf,
        E::NegInf => E::NegInf,
        E::Finite(a) => {
            let p = dims.p().clone();
            let n = dims.n_q();
            E::Finite(p.clone() * (a.clone() - p.clone() * beta.clone() + n.clone()) / (n - p))
        }
    })
}

/// `q_*(α,β,γ) = p(α − γβ + N)/(N − γ)`; undefined at `γ = N`.
pub fn q_lower_star<I: ExactInt>(
    alpha: &Ratio<I>,
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<Ratio<I>, CalculusError> {
    check_beta_le_one(beta)?;
    let n = dims.n_q();
    if *gamma == n {
        return Err(CalculusError::Undefined { quantity: "q_*", gamma: gamma.to_string() });
    }
    let p = dims.p().clone();
    Ok(p * (alpha.clone() - gamma.clone() * beta.clone() + n.clone()) / (n - gamma.clone()))
}

/// `q_**(α,β,γ) = p(pα + (1−pβ)γ + p(N−1))/(p(N−1) − γ(p−1))`; undefined at
/// `γ = p(N−1)/(p−1)`.
pub fn q_double_star<I: ExactInt>(
    alpha: &Ratio<I>,
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<Ratio<I>, CalculusError> {
    check_beta_le_one(beta)?;
    let one = Ratio::<I>::one();
    let p = dims.p().clone();
    let pn1 = p.clone() * (dims.n_q() - one.clone());
    let den = pn1.clone() - gamma.clone() * (p.clone() - one.clone());
    if den.is_zero() {
        return Err(CalculusError::Undefined { quantity: "q_**", gamma: gamma.to_string() });
    }
    let num = p.clone() * alpha.clone() + (one - p.clone() * beta.clone()) * gamma.clone() + pn1;
    Ok(p * num / den)
}

/// `(α₁, α₂, α₃) = (−(1−β)γ, −(1−β)N, −((p−1)N + (1−pβ)γ)/p)`.
pub fn alpha_thresholds<I: ExactInt>(
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<(Ratio<I>, Ratio<I>, Ratio<I>), CalculusError> {
    check_beta_le_one(beta)?;
    let one = Ratio::<I>::one();
    let p = dims.p().clone();
    let n = dims.n_q();
    let a1 = -(one.clone() - beta.clone()) * gamma.clone();
    let a2 = -(one.clone() - beta.clone()) * n.clone();
    let a3 = -((p.clone() - one.clone()) * n + (one - p.clone() * beta.clone()) * gamma.clone()) / p;
    Ok((a1, a2, a3))
}

/// `max{1, pβ, q*(α,β)}`, evaluated directly and through its two-branch
/// description; a disagreement is reported as an internal error.
pub fn max_threshold_thm1<I: ExactInt>(alpha: &E<I>, beta: &Ratio<I>, dims: &ProblemDims<I>) -> Result<E<I>, CalculusError> {
    let base = E::Finite(max_one_p_beta(beta, dims));
    let qs = q_star_upper(alpha, beta, dims)?;
    let direct = base.clone().max(qs.clone());
    let a_star = E::Finite(alpha_star(beta, dims)?);
    let piecewise = if *alpha >= a_star { qs } else { base };
    if piecewise != direct {
        return Err(CalculusError::Inconsistent(format!(
            "threshold branches disagree at alpha = {alpha}, beta = {beta}: {piecewise} vs {direct}"
        )));
    }
    Ok(direct)
}

/// Direct four-term maximum `max{1, pβ, q_*, q_**}` for finite `γ < N`.
pub fn max_threshold_thm2_direct<I: ExactInt>(
    alpha: &E<I>,
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<E<I>, CalculusError> {
    let base = E::Finite(max_one_p_beta(beta, dims));
    match alpha {
        // q_* and q_** are increasing in α for γ < N, so α = ±∞ takes their limits.
        E::NegInf => Ok(base),
        E::PosInf => Ok(E::PosInf),
        E::Finite(a) => {
            let qa = E::Finite(q_lower_star(a, beta, gamma, dims)?);
            let qb = E::Finite(q_double_star(a, beta, gamma, dims)?);
            Ok(base.max(qa).max(qb))
        }
    }
}

/// Threshold of the half-line for `q₂` with a lower bound on `V` at
/// infinity, through the three-branch description in `α`. The result is
/// checked against the direct maximum.
///
/// The description is valid for `β ≤ 1` and `γ ≤ p`. For `p < γ < N` it can
/// pick `q_*` where `q_**` is larger (e.g. `p=2, N=3, β=0, γ=5/2, α=−11/4`),
/// so that range is rejected; [`max_threshold_thm2_direct`] covers it.
pub fn max_threshold_thm2<I: ExactInt>(
    alpha: &E<I>,
    beta: &Ratio<I>,
    gamma: &Ratio<I>,
    dims: &ProblemDims<I>,
) -> Result<E<I>, CalculusError> {
    check_beta_le_one(beta)?;
    if gamma > dims.p() {
        return Err(CalculusError::Domain(format!("gamma = {gamma} must be <= p = {}", dims.p())));
    }
    let (a1, a2, a3) = alpha_thresholds(beta, gamma, dims)?;
    let low = if a2 > a3 { a2 } else { a3 };
    let piecewise = match alpha {
        E::NegInf => E::Finite(max_one_p_beta(beta, dims)),
        E::PosInf => E::PosInf,
        E::Finite(a) if *a >= a1 => E::Finite(q_double_star(a, beta, gamma, dims)?),
        E::Finite(a) if *a >= low => E::Finite(q_lower_star(a, beta, gamma, dims)?),
        E::Finite(_) => E::Finite(max_one_p_beta(beta, dims)),
    };
    let direct = max_threshold_thm2_direct(alpha, beta, gamma, dims)?;
    if piecewise != direct {
        return Err(CalculusError::Inconsistent(format!(
            "threshold branches disagree at alpha = {alpha}, beta = {beta}, gamma = {gamma}: {piecewise} vs {direct}"
        )));
    }
    Ok(piecewise)
}
