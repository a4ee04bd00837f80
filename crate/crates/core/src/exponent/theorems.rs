//! Exponent ranges delivered by each embedding theorem, and their combination.

use num_rational::Ratio;
use num_traits::Zero;

use super::ext::ExtendedRational;
use super::region::{probe_points, region_membership, region_slice};
use super::thresholds::{alpha_star, max_threshold_thm1, max_threshold_thm2, q_star_upper};
use super::types::{
    check_beta_unit, max_one_p_beta, AsymptoticProfile, CalculusError, EmbeddingConclusion, EmbeddingKind, ExponentSet,
    ProblemDims, Side,
};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

fn expect_side<I: ExactInt>(profile: &AsymptoticProfile<I>, side: Side) -> Result<(), CalculusError> {
    if profile.side != side {
        return Err(CalculusError::Precondition(format!("profile is at {}, expected {side}", profile.side)));
    }
    Ok(())
}

/// Replaces a negative `β` by `0` and `α` by `α − βγ`. Identity for `β ≥ 0`.
pub fn normalize_beta<I: ExactInt>(profile: &AsymptoticProfile<I>) -> Result<AsymptoticProfile<I>, CalculusError> {
    let beta = profile.beta().clone();
    if beta >= Ratio::zero() {
        return Ok(profile.clone());
    }
    let gamma = profile.gamma.as_ref().ok_or_else(|| {
        CalculusError::Precondition(format!("beta = {beta} < 0 needs a lower bound exponent gamma to normalize"))
    })?;
    let shift = E::Finite(beta).checked_mul(gamma)?;
    let alpha = profile.alpha.checked_sub(&shift)?;
    Ok(AsymptoticProfile { side: profile.side, alpha, beta: E::zero(), gamma: Some(gamma.clone()) })
}

/// Range of `q₁` near the origin without a lower bound on `V`:
/// `(max{1,pβ₀}, q*(α₀,β₀))`, requiring `α₀ > α*(β₀)`.
pub fn q1_range_thm0<I: ExactInt>(
    profile: &AsymptoticProfile<I>,
    dims: &ProblemDims<I>,
) -> Result<ExponentSet<I>, CalculusError> {
    expect_side(profile, Side::Origin)?;
    let beta = profile.beta();
    check_beta_unit(beta)?;
    let a_star = alpha_star(beta, dims)?;
    if profile.alpha <= E::Finite(a_star.clone()) {
        return Err(CalculusError::HypothesisViolated {
            inequality: format!("alpha_0 > alpha*(beta_0) fails: alpha_0 = {} <= {}", profile.alpha, a_star),
            threshold: a_star.to_string(),
        });
    }
    let upper = q_star_upper(&profile.alpha, beta, dims)?;
    Ok(ExponentSet::open(E::Finite(max_one_p_beta(beta, dims)), upper))
}

/// Range of `q₂` near infinity without a lower bound on `V`:
/// `q₂ > max{1, pβ∞, q*(α∞,β∞)}`.
pub fn q2_range_thm1<I: ExactInt>(
    profile: &AsymptoticProfile<I>,
    dims: &ProblemDims<I>,
) -> Result<ExponentSet<I>, CalculusError> {
    expect_side(profile, Side::Infinity)?;
    let beta = profile.beta();
    check_beta_unit(beta)?;
    Ok(ExponentSet::half_line(max_threshold_thm1(&profile.alpha, beta, dims)?))
}

/// Range of `q₂` near infinity using `r^γ V ≥ c > 0` with `γ∞ ≤ p`:
/// `q₂ > max{1, pβ∞, q_*, q_**}`. `γ∞ = −∞` gives the limit `q₂ > max{1,pβ∞}`.
pub fn q2_range_thm2<I: ExactInt>(
    profile: &AsymptoticProfile<I>,
    dims: &ProblemDims<I>,
) -> Result<ExponentSet<I>, CalculusError> {
    expect_side(profile, Side::Infinity)?;
    if profile.gamma.is_none() {
        return Err(CalculusError::Precondition("a lower bound exponent gamma_inf is required".into()));
    }
    let profile = normalize_beta(profile)?;
    let beta = profile.beta();
    match profile.gamma.as_ref().expect("checked above") {
        E::NegInf => Ok(ExponentSet::half_line(E::Finite(max_one_p_beta(beta, dims)))),
        E::PosInf => Err(CalculusError::Domain("gamma_inf = +inf exceeds p".into())),
        E::Finite(g) => {
            if g > dims.p() {
                return Err(CalculusError::Domain(format!("gamma_inf = {g} must be <= p")));
            }
            Ok(ExponentSet::half_line(max_threshold_thm2(&profile.alpha, beta, g, dims)?))
        }
    }
}

/// Slice of the region `𝒜_{β₀,γ₀}` at `α₀`, using `r^γ V ≥ c > 0` near the
/// origin with `γ₀ ≥ p`. Needs `N ≥ 3`.
pub fn q1_set_thm3<I: ExactInt>(
    profile: &AsymptoticProfile<I>,
    dims: &ProblemDims<I>,
) -> Result<ExponentSet<I>, CalculusError> {
    expect_side(profile, Side::Origin)?;
    if dims.n() < 3 {
        return Err(CalculusError::Precondition(format!("needs N >= 3, got N = {}", dims.n())));
    }
    if profile.gamma.is_none() {
        return Err(CalculusError::Precondition("a lower bound exponent gamma_0 is required".into()));
    }
    let profile = normalize_beta(profile)?;
    let beta = profile.beta();
    let gamma = profile.gamma.as_ref().expect("checked above");
    let slice = region_slice(&profile.alpha, beta, gamma, dims)?;
    if let (E::Finite(a), E::Finite(g)) = (&profile.alpha, gamma) {
        for qv in probe_points(&slice, 32) {
            let inside = region_membership(a, &qv, beta, g, dims)?;
            if inside != slice.contains(&E::Finite(qv.clone())) {
                return Err(CalculusError::Inconsistent(format!("slice {slice} disagrees with membership at q = {qv}")));
            }
        }
    }
    Ok(slice)
}

/// Combines the ranges at the two ends into an embedding conclusion.
pub fn combine<I: ExactInt>(q1: &ExponentSet<I>, q2: &ExponentSet<I>) -> EmbeddingConclusion<I> {
    let mut diagnostics = Vec::new();
    if q1.is_empty() {
        diagnostics.push(format!("empty q1 range: need {} < q1 < {}", q1.lower, q1.upper));
    }
    if q2.is_empty() {
        diagnostics.push(format!("empty q2 range: need {} < q2 < {}", q2.lower, q2.upper));
    }
    let kind = if !diagnostics.is_empty() {
        EmbeddingKind::None { diagnostics }
    } else {
        let q = q1.intersect(q2);
        if q.is_empty() {
            EmbeddingKind::SumSpace { q1: q1.clone(), q2: q2.clone() }
        } else {
            EmbeddingKind::SingleSpace { q1: q1.clone(), q2: q2.clone(), q }
        }
    };
    let compact = !matches!(kind, EmbeddingKind::None { .. });
    EmbeddingConclusion { kind, compact }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::ext::ratio;
    use num_bigint::BigInt;

    type R = Ratio<BigInt>;

    fn q(n: i64, d: i64) -> R {
        ratio(n, d)
    }

    fn d23() -> ProblemDims<BigInt> {
        ProblemDims::new(q(2, 1), 3).unwrap()
    }

    fn prof(side: Side, alpha: E<BigInt>, beta: R, gamma: Option<E<BigInt>>) -> AsymptoticProfile<BigInt> {
        AsymptoticProfile::new(side, alpha, beta, gamma, &d23()).unwrap()
    }

    #[test]
    fn thm0_values() {
        let d = d23();
        let s = q1_range_thm0(&prof(Side::Origin, E::zero(), q(0, 1), None), &d).unwrap();
        assert_eq!(s, ExponentSet::open(E::one(), E::int(6)));
        let s = q1_range_thm0(&prof(Side::Origin, E::int(-1), q(0, 1), None), &d).unwrap();
        assert_eq!(s, ExponentSet::open(E::one(), E::int(4)));
        let err = q1_range_thm0(&prof(Side::Origin, E::new(-5, 2), q(0, 1), None), &d).unwrap_err();
        assert!(matches!(err, CalculusError::HypothesisViolated { ref threshold, .. } if threshold == "-5/2"));
    }

    #[test]
    fn thm1_values() {
        let d = d23();
        let r = |a, b| q2_range_thm1(&prof(Side::Infinity, a, b, None), &d).unwrap();
        assert_eq!(r(E::zero(), q(0, 1)), ExponentSet::half_line(E::int(6)));
        assert_eq!(r(E::zero(), q(1, 1)), ExponentSet::half_line(E::int(2)));
        assert_eq!(r(E::new(-3, 2), q(1, 2)), ExponentSet::half_line(E::one()));
    }

    #[test]
    fn thm2_values() {
        let d = d23();
        let s = q2_range_thm2(&prof(Side::Infinity, E::zero(), q(0, 1), Some(E::one())), &d).unwrap();
        assert_eq!(s, ExponentSet::half_line(E::new(10, 3)));
        let s = q2_range_thm2(&prof(Side::Infinity, E::int(-3), q(0, 1), Some(E::one())), &d).unwrap();
        assert_eq!(s, ExponentSet::half_line(E::one()));
        let s = q2_range_thm2(&prof(Side::Infinity, E::int(5), q(1, 3), Some(E::NegInf)), &d).unwrap();
        assert_eq!(s, ExponentSet::half_line(E::one()));
        let missing = q2_range_thm2(&prof(Side::Infinity, E::zero(), q(0, 1), None), &d);
        assert!(matches!(missing, Err(CalculusError::Precondition(_))));
    }

    #[test]
    fn thm3_example_3_4_variant() {
        let d = d23();
        let s = q1_set_thm3(&prof(Side::Origin, E::zero(), q(1, 1), Some(E::int(5))), &d).unwrap();
        assert_eq!(s, ExponentSet::half_line(E::int(2)));
    }

    #[test]
    fn thm3_needs_three_dimensions() {
        let d = ProblemDims::<BigInt>::new(q(3, 2), 2).unwrap();
        let p = AsymptoticProfile::new(Side::Origin, E::zero(), q(0, 1), Some(E::int(2)), &d).unwrap();
        assert!(matches!(q1_set_thm3(&p, &d), Err(CalculusError::Precondition(_))));
    }

    #[test]
    fn normalize_examples() {
        let p = prof(Side::Infinity, E::zero(), q(-1, 1), Some(E::int(2)));
        let n = normalize_beta(&p).unwrap();
        assert_eq!(n.alpha, E::int(2));
        assert_eq!(n.beta(), &q(0, 1));
        let p = prof(Side::Infinity, E::zero(), q(-1, 1), None);
        assert!(normalize_beta(&p).is_err());
        let p = prof(Side::Origin, E::int(3), q(1, 2), None);
        assert_eq!(normalize_beta(&p).unwrap(), p);
    }

    #[test]
    fn combine_cases() {
        let single = combine::<BigInt>(&ExponentSet::open(E::one(), E::int(6)), &ExponentSet::half_line(E::new(10, 3)));
        assert_eq!(single.single(), Some(&ExponentSet::open(E::new(10, 3), E::int(6))));
        assert!(single.compact);
        let sum = combine::<BigInt>(&ExponentSet::open(E::one(), E::int(4)), &ExponentSet::half_line(E::int(4)));
        assert!(matches!(sum.kind, EmbeddingKind::SumSpace { .. }));
        let none = combine::<BigInt>(&ExponentSet::empty_at(E::one()), &ExponentSet::half_line(E::int(4)));
        assert!(matches!(none.kind, EmbeddingKind::None { .. }));
        assert!(!none.compact);
    }
}
