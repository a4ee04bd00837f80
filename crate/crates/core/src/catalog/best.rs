//! Selection of the best exponent ranges for a pair of catalog potentials.
//!
//! At each end the admissible `(α, β)` pairs form, for each `β ∈ [0, 1]`,
//! either nothing, every `α` (the ratio's exponential part decays), or a
//! half-line `α ≤ A(β)` (origin) / `α ≥ A(β)` (infinity) with `A` affine in
//! `β`. The range endpoints delivered by the theorems are maxima and minima of
//! functions affine in `β` along such a family, so the union of ranges over a
//! family is attained at pairwise crossing points of those functions, at the
//! ends of the family, and at the breakpoint `β = 1/p`. Evaluating those
//! finitely many candidates (plus midpoints, to detect open stretches) makes
//! the optimization exact.

use std::fmt;

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::analyze::{analyze_end, AlphaBound, EndAnalysis};
use super::spec::{PotentialSpec, SpecError};
use crate::exponent::{
    combine, max_threshold_thm1, max_threshold_thm2, q_double_star, q_lower_star, q_star_upper, region_case,
    region_slice, AsymptoticProfile, CalculusError, EmbeddingConclusion, ExponentSet, ExtendedRational, ProblemDims,
    RegionCase, Side,
};
use crate::scalar::ExactInt;

type E<I> = ExtendedRational<I>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Boundedness of `K / (r^α V^β)` alone.
    Ratio,
    /// Boundedness of the ratio together with `r^γ V ≥ c > 0`.
    RatioLowerBound,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Ratio => "ratio",
            Method::RatioLowerBound => "ratio + lower bound",
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CatalogError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
}

/// Union of ranges along one family of parameters.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Contribution<I: ExactInt> {
    pub method: Method,
    pub range: ExponentSet<I>,
    /// Parameter choices attaining the two endpoints of `range`. A choice
    /// with `limit = true` is approached, not attained.
    pub witnesses: Vec<Witness<I>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct Witness<I: ExactInt> {
    pub profile: AsymptoticProfile<I>,
    pub limit: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct EndRange<I: ExactInt> {
    pub side: Side,
    /// Best range at this end; empty when no method applies.
    pub range: ExponentSet<I>,
    /// Best range per method, if the method applies.
    pub per_method: Vec<(Method, ExponentSet<I>)>,
    pub contributions: Vec<Contribution<I>>,
    pub gamma_best: Option<E<I>>,
    pub optimization: &'static str,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(bound = "")]
pub struct BestRanges<I: ExactInt> {
    pub origin: EndRange<I>,
    pub infinity: EndRange<I>,
    pub conclusion: EmbeddingConclusion<I>,
}

/// `f(β) = f0 + (f1 − f0)β`
#[derive(Clone)]
struct Aff<I: ExactInt> {
    f0: Ratio<I>,
    f1: Ratio<I>,
}

impl<I: ExactInt> Aff<I> {
    fn crossing(&self, o: &Self) -> Option<Ratio<I>> {
        let den = (self.f1.clone() - self.f0.clone()) - (o.f1.clone() - o.f0.clone());
        if den.is_zero() {
            return None;
        }
        Some((o.f0.clone() - self.f0.clone()) / den)
    }
}

/// One candidate point of a family, with closure bounds.
struct Cand<I: ExactInt> {
    profile: AsymptoticProfile<I>,
    lower: E<I>,
    upper: E<I>,
    closed_ok: bool,
    strict: Option<ExponentSet<I>>,
    limit: bool,
}

fn base<I: ExactInt>(beta: &Ratio<I>, dims: &ProblemDims<I>) -> Ratio<I> {
    let pb = dims.p().clone() * beta.clone();
    if pb > Ratio::one() {
        pb
    } else {
        Ratio::one()
    }
}

fn free_alpha<I: ExactInt>(side: Side) -> E<I> {
    match side {
        Side::Origin => E::PosInf,
        Side::Infinity => E::NegInf,
    }
}

struct Ctx<'a, I: ExactInt> {
    a: &'a EndAnalysis<I>,
    dims: &'a ProblemDims<I>,
    lower_bound_ok: bool,
}

impl<I: ExactInt> Ctx<'_, I> {
    fn profile(&self, alpha: E<I>, beta: &Ratio<I>, gamma: Option<E<I>>) -> Result<AsymptoticProfile<I>, CalculusError> {
        AsymptoticProfile::new(self.a.side, alpha, beta.clone(), gamma, self.dims)
    }

    fn eval(&self, method: Method, beta: &Ratio<I>, alpha: &E<I>, limit: bool) -> Result<Cand<I>, CalculusError> {
        let dims = self.dims;
        let b = E::Finite(base(beta, dims));
        let gamma = match method {
            Method::Ratio => None,
            Method::RatioLowerBound => self.a.gamma_best.clone(),
        };
        let profile = self.profile(alpha.clone(), beta, gamma.clone())?;
        let half = |lower: E<I>| Cand {
            profile: profile.clone(),
            lower: lower.clone(),
            upper: E::PosInf,
            closed_ok: true,
            strict: Some(ExponentSet::half_line(lower)),
            limit,
        };
        match (self.a.side, method) {
            (Side::Origin, Method::Ratio) => {
                if *alpha == E::PosInf {
                    return Ok(half(b));
                }
                let up = q_star_upper(alpha, beta, dims)?;
                let strict = (up > b).then(|| ExponentSet::open(b.clone(), up.clone()));
                Ok(Cand { profile, lower: b.clone(), upper: up.clone(), closed_ok: up >= b, strict, limit })
            }
            (Side::Origin, Method::RatioLowerBound) => {
                let g = gamma.expect("method requires gamma");
                let (E::Finite(a), E::Finite(gr)) = (alpha, &g) else {
                    return Ok(half(b));
                };
                let one = Ratio::<I>::one();
                let qs = || q_lower_star(a, beta, gr, dims).map(E::Finite);
                let qss = || q_double_star(a, beta, gr, dims).map(E::Finite);
                let (lower, upper, constraint) = match region_case(gr, dims)? {
                    RegionCase::BelowN => (b, qs()?.min(qss()?), None),
                    RegionCase::AtN => (b, qss()?, Some(a.clone() + (one - beta.clone()) * dims.n_q())),
                    RegionCase::BetweenNAndCritical => (b.max(qs()?), qss()?, None),
                    RegionCase::AtCritical => (b.max(qs()?), E::PosInf, Some(a.clone() + (one - beta.clone()) * gr.clone())),
                    RegionCase::AboveCritical => (b.max(qs()?).max(qss()?), E::PosInf, None),
                };
                let c_closed = constraint.as_ref().map_or(true, |c| !c.is_negative());
                let c_strict = constraint.as_ref().map_or(true, |c| c.is_positive());
                let strict = if lower < upper && c_strict {
                    let s = region_slice(alpha, beta, &g, dims)?;
                    debug_assert_eq!(s, ExponentSet::open(lower.clone(), upper.clone()));
                    Some(s)
                } else {
                    None
                };
                Ok(Cand { profile, closed_ok: lower <= upper && c_closed, lower, upper, strict, limit })
            }
            (Side::Infinity, Method::Ratio) => Ok(half(max_threshold_thm1(alpha, beta, dims)?)),
            (Side::Infinity, Method::RatioLowerBound) => {
                let g = gamma.expect("method requires gamma");
                match (&g, alpha) {
                    (E::Finite(gr), _) => Ok(half(max_threshold_thm2(alpha, beta, gr, dims)?)),
                    _ => Ok(half(b)),
                }
            }
        }
    }

    fn methods(&self) -> Vec<Method> {
        let mut m = vec![Method::Ratio];
        if self.lower_bound_ok {
            m.push(Method::RatioLowerBound);
        }
        m
    }

    /// Affine functions whose crossings can be kinks of the range endpoints
    /// along `α = A(β)`.
    fn kink_functions(&self, a_of: &dyn Fn(&Ratio<I>) -> Ratio<I>) -> Result<Vec<Aff<I>>, CalculusError> {
        let dims = self.dims;
        let zero = Ratio::<I>::zero();
        let one = Ratio::<I>::one();
        let at = |f: &dyn Fn(&Ratio<I>, &Ratio<I>) -> Result<Ratio<I>, CalculusError>| -> Result<Aff<I>, CalculusError> {
            Ok(Aff { f0: f(&a_of(&zero), &zero)?, f1: f(&a_of(&one), &one)? })
        };
        let mut out = vec![
            Aff { f0: zero.clone(), f1: zero.clone() },
            Aff { f0: one.clone(), f1: one.clone() },
            Aff { f0: zero.clone(), f1: dims.p().clone() },
        ];
        out.push(at(&|a, b| Ok(q_star_upper(&E::Finite(a.clone()), b, dims)?.finite().expect("finite").clone()))?);
        if let Some(E::Finite(g)) = &self.a.gamma_best {
            if *g != dims.n_q() {
                out.push(at(&|a, b| q_lower_star(a, b, g, dims))?);
            }
            if *g != dims.gamma_critical() {
                out.push(at(&|a, b| q_double_star(a, b, g, dims))?);
            }
            let n = dims.n_q();
            out.push(at(&|a, b| Ok(a.clone() + (Ratio::one() - b.clone()) * n.clone()))?);
            out.push(at(&|a, b| Ok(a.clone() + (Ratio::one() - b.clone()) * g.clone()))?);
        }
        Ok(out)
    }
}

fn unique_sorted<I: ExactInt>(mut v: Vec<Ratio<I>>) -> Vec<Ratio<I>> {
    v.sort();
    v.dedup();
    v
}

fn family_range<I: ExactInt>(method: Method, side: Side, cands: Vec<Cand<I>>) -> Option<Contribution<I>> {
    if !cands.iter().any(|c| c.strict.is_some()) {
        return None;
    }
    let closed: Vec<&Cand<I>> = cands.iter().filter(|c| c.closed_ok).collect();
    let lo = closed.iter().map(|c| c.lower.clone()).min().expect("nonempty");
    let hi = closed.iter().map(|c| c.upper.clone()).max().expect("nonempty");
    let mut witnesses = Vec::new();
    let pick_lo = closed.iter().filter(|c| c.lower == lo).min_by_key(|c| c.limit || c.strict.is_none());
    let pick_hi = closed.iter().filter(|c| c.upper == hi).min_by_key(|c| c.limit || c.strict.is_none());
    for c in [pick_lo, pick_hi].into_iter().flatten() {
        let w = Witness { profile: c.profile.clone(), limit: c.limit || c.strict.is_none() };
        if !witnesses.contains(&w) {
            witnesses.push(w);
        }
    }
    let _ = side;
    Some(Contribution { method, range: ExponentSet::open(lo, hi), witnesses })
}

/// Connected components of a union of open intervals; touching endpoints do
/// not connect.
fn components<I: ExactInt>(mut sets: Vec<ExponentSet<I>>) -> Vec<ExponentSet<I>> {
    sets.retain(|s| !s.is_empty());
    sets.sort_by(|a, b| a.lower.cmp(&b.lower));
    let mut out: Vec<ExponentSet<I>> = Vec::new();
    for s in sets {
        if let Some(last) = out.last_mut() {
            if s.lower < last.upper {
                if s.upper > last.upper {
                    last.upper = s.upper;
                }
                continue;
            }
        }
        out.push(s);
    }
    out
}

fn choose<I: ExactInt>(side: Side, comps: Vec<ExponentSet<I>>) -> Option<ExponentSet<I>> {
    match side {
        // widest reach toward large q, then smallest lower end
        Side::Origin => comps.into_iter().max_by(|a, b| a.upper.cmp(&b.upper).then(b.lower.cmp(&a.lower))),
        Side::Infinity => comps.into_iter().min_by(|a, b| a.lower.cmp(&b.lower)),
    }
}

/// Best range at one end.
pub fn best_end<I: ExactInt>(a: &EndAnalysis<I>, dims: &ProblemDims<I>) -> Result<EndRange<I>, CalculusError> {
    let side = a.side;
    let mut diagnostics = Vec::new();
    let lower_bound_ok = match (&a.gamma_best, side) {
        (None, _) => false,
        (Some(_), Side::Origin) if dims.n() < 3 => {
            diagnostics.push("lower bound on V near the origin is not used for N < 3".to_string());
            false
        }
        _ => true,
    };
    let ctx = Ctx { a, dims, lower_bound_ok };
    let zero = Ratio::<I>::zero();
    let one = Ratio::<I>::one();
    let inv_p = one.clone() / dims.p().clone();
    let in_unit = |b: &Ratio<I>| *b >= zero && *b <= one;
    let free = free_alpha::<I>(side);
    let mut contributions = Vec::new();

    // β values where the ratio is bounded for every α: a closed β-interval of
    // limit points of an open region, or all of [0, 1].
    let free_closure: Option<(Ratio<I>, Ratio<I>)> = if a.v_vanishes() {
        matches!(a.alpha_bound(&zero), AlphaBound::Bound(ref x) if *x == free).then(|| (zero.clone(), zero.clone()))
    } else {
        match a.critical_beta() {
            None => matches!(a.alpha_bound(&zero), AlphaBound::Bound(ref x) if *x == free)
                .then(|| (zero.clone(), one.clone())),
            Some(bc) => {
                let sv = a.v.dominant_rate(side).clone();
                if sv.is_positive() && bc < one {
                    Some((if bc > zero { bc } else { zero.clone() }, one.clone()))
                } else if sv.is_negative() && bc > zero {
                    Some((zero.clone(), if bc < one { bc } else { one.clone() }))
                } else {
                    None
                }
            }
        }
    };
    if let Some((lo, hi)) = free_closure {
        let mut pts = vec![lo.clone(), hi.clone()];
        if lo < inv_p && inv_p < hi {
            pts.push(inv_p.clone());
        }
        for m in ctx.methods() {
            let cands = unique_sorted(pts.clone())
                .iter()
                .map(|b| ctx.eval(m, b, &free, true))
                .collect::<Result<Vec<_>, _>>()?;
            contributions.extend(family_range(m, side, cands));
        }
    }

    // β values with a finite extreme α.
    let finite_points: Vec<Ratio<I>> = if a.v_vanishes() {
        vec![zero.clone()]
    } else if let Some(bc) = a.critical_beta() {
        if in_unit(&bc) {
            vec![bc]
        } else {
            vec![]
        }
    } else {
        vec![]
    };
    let segment = !a.v_vanishes() && a.critical_beta().is_none();
    let finite_alpha = |b: &Ratio<I>| match a.alpha_bound(b) {
        AlphaBound::Bound(E::Finite(x)) => Some(x),
        _ => None,
    };
    for b in &finite_points {
        if let Some(alpha) = finite_alpha(b) {
            for m in ctx.methods() {
                let c = ctx.eval(m, b, &E::Finite(alpha.clone()), false)?;
                contributions.extend(family_range(m, side, vec![c]));
            }
        }
    }
    if segment && finite_alpha(&zero).is_some() {
        let a_of = |b: &Ratio<I>| finite_alpha(b).expect("affine on the whole segment");
        let funcs = ctx.kink_functions(&a_of)?;
        let mut pts = vec![zero.clone(), one.clone(), inv_p.clone()];
        for (i, f) in funcs.iter().enumerate() {
            for g in &funcs[i + 1..] {
                if let Some(x) = f.crossing(g) {
                    if in_unit(&x) {
                        pts.push(x);
                    }
                }
            }
        }
        let pts = unique_sorted(pts);
        let two = Ratio::from_integer(I::from_u32(2).expect("small"));
        let mut all = pts.clone();
        for w in pts.windows(2) {
            all.push((w[0].clone() + w[1].clone()) / two.clone());
        }
        let all = unique_sorted(all);
        for m in ctx.methods() {
            let cands =
                all.iter().map(|b| ctx.eval(m, b, &E::Finite(a_of(b)), false)).collect::<Result<Vec<_>, _>>()?;
            contributions.extend(family_range(m, side, cands));
        }
    }

    let mut per_method = Vec::new();
    for m in [Method::Ratio, Method::RatioLowerBound] {
        let sets: Vec<_> = contributions.iter().filter(|c| c.method == m).map(|c| c.range.clone()).collect();
        if let Some(best) = choose(side, components(sets)) {
            per_method.push((m, best));
        }
    }
    let all: Vec<_> = contributions.iter().map(|c| c.range.clone()).collect();
    let range = match choose(side, components(all)) {
        Some(r) => r,
        None => {
            diagnostics.push(format!(
                "no admissible parameters at {side}: K/(r^alpha V^beta) is unbounded for every beta in [0,1] and alpha"
            ));
            ExponentSet::empty_at(E::one())
        }
    };
    contributions.retain(|c| range.contains_set(&c.range));
    Ok(EndRange {
        side,
        range,
        per_method,
        contributions,
        gamma_best: a.gamma_best.clone(),
        optimization: "exact",
        diagnostics,
    })
}

/// Best ranges at both ends and their combination.
pub fn best_ranges<I: ExactInt>(
    v: &PotentialSpec<I>,
    k: &PotentialSpec<I>,
    dims: &ProblemDims<I>,
) -> Result<BestRanges<I>, CatalogError> {
    if k.is_identically_zero() {
        return Err(SpecError::Invalid("K must not vanish identically".into()).into());
    }
    let origin = best_end(&analyze_end(v, k, Side::Origin, dims), dims)?;
    let infinity = best_end(&analyze_end(v, k, Side::Infinity, dims), dims)?;
    let mut conclusion = combine(&origin.range, &infinity.range);
    if let crate::exponent::EmbeddingKind::None { diagnostics } = &mut conclusion.kind {
        diagnostics.extend(origin.diagnostics.iter().cloned());
        diagnostics.extend(infinity.diagnostics.iter().cloned());
    }
    Ok(BestRanges { origin, infinity, conclusion })
}

/// Union of the strict ranges at `β = k/d` for `d ≤ max_den`, each evaluated
/// at the extreme admissible `α`. Used to cross-check the exact optimizer.
pub fn grid_range<I: ExactInt>(a: &EndAnalysis<I>, dims: &ProblemDims<I>, max_den: u32) -> Result<Option<ExponentSet<I>>, CalculusError> {
    let lower_bound_ok = a.gamma_best.is_some() && (a.side == Side::Infinity || dims.n() >= 3);
    let ctx = Ctx { a, dims, lower_bound_ok };
    let mut sets = Vec::new();
    for d in 1..=max_den {
        for k in 0..=d {
            let b = Ratio::new(I::from_u32(k).expect("small"), I::from_u32(d).expect("small"));
            if let AlphaBound::Bound(alpha) = a.alpha_bound(&b) {
                for m in ctx.methods() {
                    if let Some(s) = ctx.eval(m, &b, &alpha, false)?.strict {
                        sets.push(s);
                    }
                }
            }
        }
    }
    Ok(choose(a.side, components(sets)))
}
