//! Lower bounds for `sup_{‖u‖=1} ∫ K|u|^q` over a ball or its complement.
//!
//! The quotient `Φ(u) = ∫_E K|u|^q / ‖u‖^q` is homogeneous of degree 0, so
//! it is maximized without constraints by preconditioned gradient ascent with
//! Armijo backtracking and renormalized after every step. Several bump starts
//! are tried and the best value kept.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::grid::{Discretization, NumericError, RadialFunction};
use crate::exponent::Side;
use crate::linalg::{dot, SymTridiagonal};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, serde::Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EstimatorOptions {
    pub max_iter: usize,
    pub rel_tol: f64,
    pub starts: usize,
    pub seed: u64,
}

impl Default for EstimatorOptions {
    fn default() -> Self {
        Self { max_iter: 4000, rel_tol: 1e-7, starts: 8, seed: 1 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupremumEstimate<T> {
    pub side: Side,
    pub q: T,
    pub radius: T,
    /// Best value found: a lower bound of the supremum.
    pub value: T,
    pub iterations: usize,
    pub converged: bool,
    pub diverged: bool,
    /// Maximizing candidate, `‖u‖ = 1`.
    pub witness: RadialFunction<T>,
}

const REGULARIZATION: f64 = 1e-10;

struct Quotient<'a, T> {
    disc: &'a Discretization<T>,
    /// `mass · K` on the integration region, zero elsewhere
    weight: Vec<T>,
    q: T,
}

impl<'a, T: Real> Quotient<'a, T> {
    fn new(disc: &'a Discretization<T>, side: Side, q: T, radius: T) -> Self {
        let weight = disc
            .nodes()
            .iter()
            .enumerate()
            .map(|(i, &r)| {
                let inside = match side {
                    Side::Origin => r <= radius,
                    Side::Infinity => r >= radius,
                };
                if inside && !disc.pinned[i] {
                    disc.mass[i] * disc.k[i]
                } else {
                    T::zero()
                }
            })
            .collect();
        Self { disc, weight, q }
    }

    fn mass(&self, u: &[T]) -> T {
        self.weight.iter().zip(u).map(|(&w, &x)| w * x.abs().powf(self.q)).sum()
    }

    fn value(&self, u: &[T]) -> Result<T, NumericError> {
        let n = self.disc.norm_pow(u)?;
        Ok(self.mass(u) / n.powf(self.q / self.disc.p()))
    }

    fn gradient(&self, u: &[T]) -> Result<(T, Vec<T>), NumericError> {
        let p = self.disc.p();
        let n = self.disc.norm_pow(u)?;
        let j = self.mass(u);
        let scale = n.powf(-self.q / p);
        let gn = self.disc.norm_gradient(u, T::c(REGULARIZATION));
        let mut g: Vec<T> = (0..u.len())
            .map(|i| {
                let dj = self.q * self.weight[i] * u[i].abs().powf(self.q - T::one()) * u[i].signum();
                // ∇‖u‖^p = p · ∇((1/p)‖u‖^p)
                scale * (dj - self.q * j / n * gn[i])
            })
            .collect();
        self.disc.project(&mut g);
        Ok((j * scale, g))
    }
}

fn normalize<T: Real>(disc: &Discretization<T>, u: &mut [T]) -> Result<(), NumericError> {
    let n = disc.w_norm(u)?;
    if !(n > T::zero()) || !n.is_finite() {
        return Err(NumericError::Other("start has zero or infinite norm".into()));
    }
    for x in u.iter_mut() {
        *x /= n;
    }
    Ok(())
}

/// Smooth bump `(1 − x²)²` in `x = (ln r − c)/w`, zero at pinned nodes.
pub fn bump<T: Real>(disc: &Discretization<T>, center: T, width: T) -> Vec<T> {
    let mut u: Vec<T> = disc
        .nodes()
        .iter()
        .map(|&r| {
            let x = (r.ln() - center) / width;
            if x.abs() < T::one() {
                let y = T::one() - x * x;
                y * y
            } else {
                T::zero()
            }
        })
        .collect();
    disc.project(&mut u);
    u
}

fn default_starts<T: Real>(disc: &Discretization<T>, side: Side, radius: T, count: usize, seed: u64) -> Vec<Vec<T>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lr = radius.ln();
    let offsets: [f64; 4] = match side {
        Side::Origin => [-6.0, -3.0, -1.5, -0.5],
        Side::Infinity => [0.5, 1.5, 3.0, 6.0],
    };
    (0..count)
        .map(|k| {
            let off = offsets[k % 4] + rng.gen_range(-0.25..0.25);
            let width = if (k / 4) % 2 == 0 { 0.75 } else { 2.0 } * (1.0 + rng.gen_range(-0.1..0.1));
            bump(disc, lr + T::c(off), T::c(width))
        })
        .filter(|u| u.iter().any(|&x| x != T::zero()))
        .collect()
}

struct Ascent<T> {
    u: Vec<T>,
    value: T,
    iterations: usize,
    converged: bool,
    diverged: bool,
}

fn ascend<T: Real>(
    f: &Quotient<'_, T>,
    precond: &SymTridiagonal<T>,
    mut u: Vec<T>,
    opts: &EstimatorOptions,
) -> Result<Ascent<T>, NumericError> {
    normalize(f.disc, &mut u)?;
    let (mut value, mut g) = f.gradient(&u)?;
    let mut tau = T::zero();
    let mut quiet = 0;
    let tol = T::c(opts.rel_tol);
    let huge = T::c(1e200);
    for it in 0..opts.max_iter {
        if !value.is_finite() || value > huge {
            return Ok(Ascent { u, value, iterations: it, converged: false, diverged: true });
        }
        let mut d = precond.solve(&g).ok_or_else(|| NumericError::Other("singular preconditioner".into()))?;
        f.disc.project(&mut d);
        let slope = dot(&g, &d);
        if !(slope > T::zero()) {
            return Ok(Ascent { u, value, iterations: it, converged: true, diverged: false });
        }
        if tau == T::zero() {
            let scale = d.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            let umax = u.iter().fold(T::zero(), |m, x| m.max(x.abs()));
            tau = T::c(0.1) * umax / scale;
        } else {
            tau *= T::c(2.0);
        }
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<T> = u.iter().zip(&d).map(|(&a, &b)| a + tau * b).collect();
            if let Ok(v) = f.value(&trial) {
                if v.is_finite() && v >= value + T::c(1e-4) * tau * slope {
                    accepted = Some((trial, v));
                    break;
                }
            }
            tau *= T::c(0.5);
        }
        let Some((mut next, v)) = accepted else {
            return Ok(Ascent { u, value, iterations: it, converged: true, diverged: false });
        };
        normalize(f.disc, &mut next)?;
        let change = (v - value).abs() / value.abs().max(T::min_positive_value());
        u = next;
        let (nv, ng) = f.gradient(&u)?;
        value = nv;
        g = ng;
        quiet = if change < tol { quiet + 1 } else { 0 };
        if quiet >= 5 {
            return Ok(Ascent { u, value, iterations: it + 1, converged: true, diverged: false });
        }
    }
    Ok(Ascent { u, value, iterations: opts.max_iter, converged: false, diverged: false })
}

/// Estimate `𝒮₀(q, R)` (side = origin) or `𝒮∞(q, R)` (side = infinity).
/// `extra_starts` are tried in addition to the default bumps.
pub fn estimate_sup<T: Real>(
    disc: &Discretization<T>,
    side: Side,
    q: T,
    radius: T,
    opts: &EstimatorOptions,
    extra_starts: &[Vec<T>],
) -> Result<SupremumEstimate<T>, NumericError> {
    if !(q > T::one()) {
        return Err(NumericError::Other(format!("q = {q} must exceed 1")));
    }
    let nodes = disc.nodes();
    if !(radius > nodes[0] && radius < nodes[nodes.len() - 1]) {
        return Err(NumericError::Other(format!("R = {radius} outside the grid span")));
    }
    let f = Quotient::new(disc, side, q, radius);
    let precond = disc.metric();
    let mut starts = default_starts(disc, side, radius, opts.starts, opts.seed);
    starts.extend(extra_starts.iter().cloned());
    let mut best: Option<Ascent<T>> = None;
    let mut total = 0;
    for s in starts {
        if f.mass(&s) == T::zero() && extra_starts.is_empty() {
            continue;
        }
        let a = ascend(&f, &precond, s, opts)?;
        total += a.iterations;
        if a.diverged {
            best = Some(a);
            break;
        }
        if best.as_ref().map_or(true, |b| a.value > b.value) {
            best = Some(a);
        }
    }
    let best = best.ok_or_else(|| NumericError::Other("no start meets the integration region".into()))?;
    let value = if best.diverged { best.value } else { f.value(&best.u)? };
    Ok(SupremumEstimate {
        side,
        q,
        radius,
        value,
        iterations: total,
        converged: best.converged,
        diverged: best.diverged,
        witness: disc.function(best.u),
    })
}

/// `∫_E K|u|^q / ‖u‖^q` on the grid, `E` the ball (origin) or its
/// complement (infinity).
pub fn quotient<T: Real>(disc: &Discretization<T>, side: Side, q: T, radius: T, u: &[T]) -> Result<T, NumericError> {
    Quotient::new(disc, side, q, radius).value(u)
}

pub fn estimate_s0<T: Real>(disc: &Discretization<T>, q: T, radius: T, opts: &EstimatorOptions) -> Result<SupremumEstimate<T>, NumericError> {
    estimate_sup(disc, Side::Origin, q, radius, opts, &[])
}

pub fn estimate_sinf<T: Real>(disc: &Discretization<T>, q: T, radius: T, opts: &EstimatorOptions) -> Result<SupremumEstimate<T>, NumericError> {
    estimate_sup(disc, Side::Infinity, q, radius, opts, &[])
}

/// Estimates over a schedule of radii, returned in input order. The radii
/// are visited so that each integration region contains the previous one
/// and every run also starts from the previous witness; reported values are
/// then monotone in `R` by construction.
pub fn estimate_schedule<T: Real>(
    disc: &Discretization<T>,
    side: Side,
    q: T,
    radii: &[T],
    opts: &EstimatorOptions,
) -> Result<Vec<SupremumEstimate<T>>, NumericError> {
    let mut order: Vec<usize> = (0..radii.len()).collect();
    order.sort_by(|&a, &b| {
        let c = radii[a].partial_cmp(&radii[b]).expect("finite radii");
        match side {
            Side::Origin => c,
            Side::Infinity => c.reverse(),
        }
    });
    let mut out: Vec<Option<SupremumEstimate<T>>> = vec![None; radii.len()];
    let mut prev: Option<Vec<T>> = None;
    for i in order {
        let extra: Vec<Vec<T>> = prev.iter().cloned().collect();
        let est = estimate_sup(disc, side, q, radii[i], opts, &extra)?;
        prev = Some(est.witness.u.clone());
        out[i] = Some(est);
    }
    Ok(out.into_iter().map(|e| e.expect("every radius visited")).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::RadialGrid;

    fn disc(v: impl Fn(f64) -> f64 + 'static, k: impl Fn(f64) -> f64 + 'static) -> Discretization<f64> {
        let grid = RadialGrid::log_spaced(1e-4, 1e2, 128, 3, 2.0).unwrap();
        Discretization::new(grid, &v, &k, None).unwrap()
    }

    #[test]
    fn witness_is_normalized_and_value_recomputes() {
        let d = disc(|r| 1.0 / r, |_| 1.0);
        let opts = EstimatorOptions { max_iter: 500, ..Default::default() };
        let e = estimate_s0(&d, 4.0, 1.0, &opts).unwrap();
        let n = d.w_norm(&e.witness.u).unwrap();
        assert!((n - 1.0).abs() < 1e-8);
        let f = Quotient::new(&d, Side::Origin, 4.0, 1.0);
        assert!((f.mass(&e.witness.u) - e.value).abs() <= 1e-9 * e.value);
        assert!(e.value > 0.0);
    }

    #[test]
    fn gradient_matches_differences() {
        let d = disc(|r| 1.0 / r, |r| r.powf(-0.5));
        let f = Quotient::new(&d, Side::Infinity, 3.0, 0.5);
        let mut u = bump(&d, 0.3, 2.0);
        normalize(&d, &mut u).unwrap();
        let (_, g) = f.gradient(&u).unwrap();
        let h = bump(&d, 0.8, 1.0);
        let eps = 1e-6;
        let plus: Vec<f64> = u.iter().zip(&h).map(|(a, b)| a + eps * b).collect();
        let minus: Vec<f64> = u.iter().zip(&h).map(|(a, b)| a - eps * b).collect();
        let fd = (f.value(&plus).unwrap() - f.value(&minus).unwrap()) / (2.0 * eps);
        let an = dot(&g, &h);
        assert!((fd - an).abs() <= 1e-6 * an.abs().max(1e-12), "{fd} vs {an}");
    }

    #[test]
    fn schedules_are_monotone() {
        let d = disc(|r| 1.0 / r, |_| 1.0);
        let opts = EstimatorOptions { max_iter: 300, ..Default::default() };
        let radii = [1.0, 0.5, 0.25];
        let e = estimate_schedule(&d, Side::Origin, 4.0, &radii, &opts).unwrap();
        assert!(e[0].value >= e[1].value && e[1].value >= e[2].value);
        let radii = [1.0, 2.0, 4.0];
        let e = estimate_schedule(&d, Side::Infinity, 4.0, &radii, &opts).unwrap();
        assert!(e[0].value >= e[1].value && e[1].value >= e[2].value);
    }
}
