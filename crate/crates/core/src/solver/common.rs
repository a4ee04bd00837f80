use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::energy::{Functional, GRADIENT_DELTA};
use crate::estimator::{bump, NumericError, RadialFunction};
use crate::linalg::{dot, SymTridiagonal};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolutionKind {
    GlobalMin,
    MountainPass,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Solution<T> {
    pub kind: SolutionKind,
    pub u: RadialFunction<T>,
    pub energy: T,
    /// Dual norm of the discrete derivative.
    pub residual: T,
    pub tolerance: T,
    /// `max(0, −min u)`
    pub nonneg_violation: T,
    pub iterations: usize,
    /// Gradient smoothing parameter.
    pub delta: T,
    /// Positive energy level on a small sphere (mountain pass only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rim_level: Option<T>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SolverError<T: std::fmt::Debug> {
    #[error("hypothesis not met: {0}")]
    Hypothesis(String),
    #[error("no convergence: {reason}")]
    NonConvergence { reason: String, best: Option<Box<Solution<T>>> },
    #[error(transparent)]
    Numeric(#[from] NumericError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverOptions {
    /// Residual tolerance; `None` picks the mode default.
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub starts: usize,
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self { tol: None, max_iter: 20_000, starts: 8, seed: 1 }
    }
}

/// Nonnegative bump starts spread over the grid in `ln r`.
pub(crate) fn starts<T: Real>(f: &Functional<'_, T>, count: usize, seed: u64) -> Vec<Vec<T>> {
    let nodes = f.disc.nodes();
    let (lo, hi) = (nodes[0].ln(), nodes[nodes.len() - 1].ln());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|k| {
            let frac = (k as f64 + 0.5) / count as f64;
            let c = lo + (hi - lo) * T::c(0.2 + 0.6 * frac + rng.gen_range(-0.02..0.02));
            let w = (hi - lo) * T::c(0.15 * (1.0 + rng.gen_range(-0.2..0.2)));
            bump(f.disc, c, w)
        })
        .filter(|u| u.iter().any(|&x| x != T::zero()))
        .collect()
}

pub(crate) fn scaled<T: Real>(u: &[T], t: T) -> Vec<T> {
    u.iter().map(|&x| t * x).collect()
}

pub(crate) struct State<T> {
    pub u: Vec<T>,
    pub energy: T,
    pub grad: Vec<T>,
    pub residual: T,
}

impl<T: Real> State<T> {
    pub fn at(f: &Functional<'_, T>, metric: &SymTridiagonal<T>, u: Vec<T>) -> Result<Self, NumericError> {
        let energy = f.energy(&u)?;
        let grad = f.gradient_vector(&u)?;
        let residual = f.dual_norm(metric, &grad)?;
        Ok(Self { u, energy, grad, residual })
    }
}

/// One safeguarded Newton step on `I`; `Some` if it lowers the residual.
/// `max_rise` bounds how much the energy may increase (none for minimization).
pub(crate) fn newton_step<T: Real>(
    f: &Functional<'_, T>,
    metric: &SymTridiagonal<T>,
    s: &State<T>,
    max_rise: Option<T>,
) -> Option<State<T>> {
    let mut step = f.hessian(&s.u).solve(&s.grad)?;
    f.disc.project(&mut step);
    let mut lambda = T::one();
    for _ in 0..8 {
        let trial: Vec<T> = s.u.iter().zip(&step).map(|(&a, &b)| a - lambda * b).collect();
        if let Ok(t) = State::at(f, metric, trial) {
            let energy_ok = max_rise.map_or(true, |m| t.energy <= s.energy + m);
            if t.residual < s.residual && energy_ok {
                return Some(t);
            }
        }
        lambda *= T::c(0.5);
    }
    None
}

pub(crate) fn finish<T: Real>(
    f: &Functional<'_, T>,
    kind: SolutionKind,
    s: State<T>,
    tol: T,
    iterations: usize,
    rim_level: Option<T>,
) -> Solution<T> {
    let min = s.u.iter().fold(T::zero(), |m, &x| m.min(x));
    Solution {
        kind,
        energy: s.energy,
        residual: s.residual,
        tolerance: tol,
        nonneg_violation: T::zero() - min,
        iterations,
        delta: T::c(GRADIENT_DELTA),
        rim_level,
        u: f.disc.function(s.u),
    }
}

/// Steepest descent for `I` in the metric `P` with Armijo backtracking,
/// interleaved with Newton attempts. Stops when the residual is below
/// `tol · max(1, |I|)`.
pub(crate) fn descend<T: Real>(
    f: &Functional<'_, T>,
    metric: &SymTridiagonal<T>,
    u: Vec<T>,
    tol: T,
    max_iter: usize,
) -> Result<(State<T>, usize, bool), NumericError> {
    let mut s = State::at(f, metric, u)?;
    let mut tau = T::one();
    for it in 0..max_iter {
        if s.residual <= tol * s.energy.abs().max(T::one()) {
            return Ok((s, it, true));
        }
        if it % 8 == 7 {
            if let Some(t) = newton_step(f, metric, &s, Some(T::zero())) {
                s = t;
                continue;
            }
        }
        let mut d = metric.solve(&s.grad).ok_or_else(|| NumericError::Other("singular metric".into()))?;
        f.disc.project(&mut d);
        let slope = dot(&s.grad, &d);
        let mut accepted = None;
        tau = (tau * T::c(2.0)).min(T::one());
        for _ in 0..60 {
            let trial: Vec<T> = s.u.iter().zip(&d).map(|(&a, &b)| a - tau * b).collect();
            if let Ok(e) = f.energy(&trial) {
                if e <= s.energy - T::c(1e-4) * tau * slope {
                    accepted = Some(trial);
                    break;
                }
            }
            tau *= T::c(0.5);
        }
        match accepted {
            Some(u) => s = State::at(f, metric, u)?,
            None => match newton_step(f, metric, &s, Some(T::zero())) {
                Some(t) => s = t,
                None => return Ok((s, it, false)),
            },
        }
    }
    let ok = s.residual <= tol * s.energy.abs().max(T::one());
    Ok((s, max_iter, ok))
}
