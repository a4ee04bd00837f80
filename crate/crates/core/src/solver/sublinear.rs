//! Global minimization of `I` for sub-`p`-linear nonlinearities.

use super::common::{descend, finish, scaled, starts, Solution, SolutionKind, SolverError, SolverOptions, State};
use super::energy::Functional;
use super::nonlinearity::Nonlinearity;
use crate::estimator::Discretization;
use crate::scalar::Real;

pub const SUBLINEAR_TOL: f64 = 1e-6;

/// `Ok(true)` if (g₆) holds for the family, so the minimum must be negative.
fn preconditions<T: Real>(disc: &Discretization<T>, nl: &Nonlinearity<T>) -> Result<bool, SolverError<T>> {
    let p = disc.p();
    let forced = disc.forcing.iter().any(|&q| q != T::zero());
    if let Some((q1, q2)) = nl.exponents() {
        let (lo, hi) = (q1.min(q2), q1.max(q2));
        let sub = lo > T::one() && hi < p;
        let borderline = forced && lo > T::one() && hi == p && lo < p;
        if !(sub || borderline) {
            return Err(SolverError::Hypothesis(format!(
                "exponents ({q1}, {q2}) must lie in (1, p) = (1, {p}), or max = p with a nonzero forcing term"
            )));
        }
    }
    let g6 = nl.sublinear_witness(p).is_some();
    if !g6 && !forced && !matches!(nl, Nonlinearity::Zero) {
        return Err(SolverError::Hypothesis("neither (g6) nor (g7) holds".into()));
    }
    Ok(g6)
}

/// Multi-start minimization. Each start `u₀` is first scaled to the best
/// `λu₀` over dyadic `λ`, then descended to a critical point.
pub fn solve_sublinear<T: Real>(
    disc: &Discretization<T>,
    nl: &Nonlinearity<T>,
    opts: &SolverOptions,
) -> Result<Solution<T>, SolverError<T>> {
    let g6 = preconditions(disc, nl)?;
    let tol = T::c(opts.tol.unwrap_or(SUBLINEAR_TOL));
    let f = Functional::new(disc, nl);
    let metric = disc.metric();
    let mut best: Option<(State<T>, usize, bool)> = None;
    let mut total = 0;
    for u0 in starts(&f, opts.starts.max(1), opts.seed) {
        let mut lam = T::one();
        let mut e_best = f.energy(&u0)?;
        for k in -40..=40 {
            let l = T::c(2f64.powi(k));
            let e = f.energy(&scaled(&u0, l))?;
            if e < e_best {
                e_best = e;
                lam = l;
            }
        }
        let (s, it, ok) = descend(&f, &metric, scaled(&u0, lam), tol, opts.max_iter)?;
        total += it;
        let better = match &best {
            None => true,
            Some((b, _, bok)) => (ok && !bok) || (ok == *bok && s.energy < b.energy),
        };
        if better {
            best = Some((s, it, ok));
        }
    }
    let (s, _, ok) = best.ok_or_else(|| SolverError::Hypothesis("no start function fits the grid".into()))?;
    let sol = finish(&f, SolutionKind::GlobalMin, s, tol, total, None);
    if !ok {
        return Err(SolverError::NonConvergence {
            reason: format!("residual {} above tolerance", sol.residual),
            best: Some(Box::new(sol)),
        });
    }
    if g6 && !(sol.energy < T::zero()) {
        return Err(SolverError::NonConvergence {
            reason: "minimum energy is not negative although (g6) holds".into(),
            best: Some(Box::new(sol)),
        });
    }
    Ok(sol)
}
