//! Mountain-pass critical points for super-`p`-linear nonlinearities.
//!
//! 1. Rim: shrink `ρ` until `I(ρu) > 0` for every sampled unit bump.
//! 2. Valley: grow `λ` until `I(λu₀) < 0`.
//! 3. Path: 32 points from 0 to `λu₀`; the highest interior point is moved
//!    by descent steps until the path maximum stalls.
//!    Steps keep the neighbouring segment midpoints below the path maximum.
//! 4. Nehari descent on `Ψ(w) = max_t I(tw)` from the highest point (or a
//!    start bump, whichever has the lower `Ψ`), using
//!    `∇Ψ(w) = t*∇I(t*w)`.
//! 5. Newton polish on `I`.

use super::common::{finish, newton_step, scaled, starts, Solution, SolutionKind, SolverError, SolverOptions, State};
use super::energy::Functional;
use super::nonlinearity::Nonlinearity;
use crate::estimator::{Discretization, NumericError};
use crate::linalg::{dot, SymTridiagonal};
use crate::scalar::Real;

pub const MOUNTAIN_PASS_TOL: f64 = 1e-5;
pub const PATH_POINTS: usize = 32;

fn preconditions<T: Real>(disc: &Discretization<T>, nl: &Nonlinearity<T>) -> Result<(), SolverError<T>> {
    let p = disc.p();
    if disc.forcing.iter().any(|&q| q != T::zero()) {
        return Err(SolverError::Hypothesis("mountain pass needs g(·,0) = 0".into()));
    }
    match nl.exponents() {
        Some((q1, q2)) if q1 > p && q2 > p => {}
        Some((q1, q2)) => return Err(SolverError::Hypothesis(format!("exponents ({q1}, {q2}) must exceed p = {p}"))),
        None => return Err(SolverError::Hypothesis(format!("family {} has no super-p-linear growth", nl.name()))),
    }
    let g3 = matches!(*nl, Nonlinearity::LogPerturbed { q1, epsilon, .. } if q1 - epsilon > p);
    if nl.ar_exponent(p).is_none() && !g3 {
        return Err(SolverError::Hypothesis("neither (g1) nor (g3) holds".into()));
    }
    Ok(())
}

/// `t* > 0` maximizing `t ↦ I(tw)`: root of `t ↦ I′(tw)w` by Illinois
/// regula falsi on a dyadic bracket.
fn fiber_max<T: Real>(f: &Functional<'_, T>, w: &[T]) -> Result<T, NumericError> {
    let phi = |t: T| -> Result<T, NumericError> { f.derivative(&scaled(w, t), w) };
    let (mut a, mut b) = (T::one(), T::one());
    let mut fa = phi(a)?;
    let mut fb = fa;
    let mut k = 0;
    while fa <= T::zero() {
        b = a;
        fb = fa;
        a *= T::c(0.5);
        fa = phi(a)?;
        k += 1;
        if k > 200 {
            return Err(NumericError::Other("fiber is not increasing near 0".into()));
        }
    }
    k = 0;
    while fb >= T::zero() {
        a = b;
        fa = fb;
        b *= T::c(2.0);
        fb = phi(b)?;
        k += 1;
        if k > 200 {
            return Err(NumericError::Other("fiber energy does not turn down".into()));
        }
    }
    let mut side = 0;
    for _ in 0..200 {
        let c = (a * fb - b * fa) / (fb - fa);
        if (b - a).abs() <= T::c(1e-15) * b {
            return Ok(c);
        }
        let fc = phi(c)?;
        if fc == T::zero() {
            return Ok(c);
        }
        if (fc > T::zero()) == (fa > T::zero()) {
            a = c;
            fa = fc;
            if side == -1 {
                fb *= T::c(0.5);
            }
            side = -1;
        } else {
            b = c;
            fb = fc;
            if side == 1 {
                fa *= T::c(0.5);
            }
            side = 1;
        }
    }
    Ok((a + b) / T::c(2.0))
}

struct Nehari<T> {
    w: Vec<T>,
    t: T,
    value: T,
    grad: Vec<T>,
}

fn nehari_point<T: Real>(f: &Functional<'_, T>, w: Vec<T>) -> Result<Nehari<T>, NumericError> {
    let t = fiber_max(f, &w)?;
    let u = scaled(&w, t);
    let value = f.energy(&u)?;
    let grad = scaled(&f.gradient_vector(&u)?, t);
    Ok(Nehari { w, t, value, grad })
}

fn nehari_descent<T: Real>(
    f: &Functional<'_, T>,
    metric: &SymTridiagonal<T>,
    w: Vec<T>,
    tol: T,
    max_iter: usize,
) -> Result<(Vec<T>, usize), NumericError> {
    let mut n = nehari_point(f, w)?;
    let mut tau = T::one();
    let mut quiet = 0;
    for it in 0..max_iter {
        let u = scaled(&n.w, n.t);
        let res = f.dual_norm(metric, &f.gradient_vector(&u)?)?;
        if res <= tol * n.value.abs().max(T::one()) {
            return Ok((u, it));
        }
        let mut d = metric.solve(&n.grad).ok_or_else(|| NumericError::Other("singular metric".into()))?;
        f.disc.project(&mut d);
        let slope = dot(&n.grad, &d);
        tau = (tau * T::c(2.0)).min(T::c(1e6));
        let mut next = None;
        for _ in 0..60 {
            let trial: Vec<T> = n.w.iter().zip(&d).map(|(&a, &b)| a - tau * b).collect();
            if let Ok(m) = nehari_point(f, trial) {
                if m.value <= n.value - T::c(1e-4) * tau * slope {
                    next = Some(m);
                    break;
                }
            }
            tau *= T::c(0.5);
        }
        let Some(m) = next else {
            return Ok((u, it));
        };
        let change = (n.value - m.value) / n.value.abs().max(T::min_positive_value());
        // keep w on the Nehari set so the step scale stays meaningful
        n = Nehari { w: scaled(&m.w, m.t), t: T::one(), value: m.value, grad: scaled(&m.grad, T::one() / m.t) };
        quiet = if change < T::c(1e-13) { quiet + 1 } else { 0 };
        if quiet >= 5 {
            return Ok((scaled(&n.w, n.t), it + 1));
        }
    }
    Ok((scaled(&n.w, n.t), max_iter))
}

pub fn solve_mountain_pass<T: Real>(
    disc: &Discretization<T>,
    nl: &Nonlinearity<T>,
    opts: &SolverOptions,
) -> Result<Solution<T>, SolverError<T>> {
    preconditions(disc, nl)?;
    let tol = T::c(opts.tol.unwrap_or(MOUNTAIN_PASS_TOL));
    let f = Functional::new(disc, nl);
    let metric = disc.metric();

    // 1. rim
    let mut dirs = starts(&f, opts.starts.max(1), opts.seed);
    for d in dirs.iter_mut() {
        let n = disc.w_norm(d)?;
        d.iter_mut().for_each(|x| *x /= n);
    }
    let mut rho = T::one();
    let rim_ok = |rho: T, dirs: &[Vec<T>]| -> Result<bool, NumericError> {
        for d in dirs {
            if !(f.energy(&scaled(d, rho))? > T::zero()) {
                return Ok(false);
            }
        }
        Ok(true)
    };
    let mut k = 0;
    while !rim_ok(rho, &dirs)? {
        rho *= T::c(0.5);
        k += 1;
        if k > 80 {
            return Err(SolverError::Hypothesis("no sphere with positive energy found; check the growth hypotheses".into()));
        }
    }

    // 2. valley point along the direction with the largest potential term
    let mut u0 = dirs[0].clone();
    let mut best_pot = f.potential_energy(&u0)?;
    for d in &dirs[1..] {
        let pot = f.potential_energy(d)?;
        if pot > best_pot {
            best_pot = pot;
            u0 = d.clone();
        }
    }
    let mut lam = rho;
    k = 0;
    while !(f.energy(&scaled(&u0, lam))? < T::zero()) {
        lam *= T::c(2.0);
        k += 1;
        if k > 400 {
            return Err(SolverError::Hypothesis("energy stays nonnegative along the ray".into()));
        }
    }

    // 3. path
    let n = PATH_POINTS;
    let mut path: Vec<Vec<T>> = (0..n).map(|j| scaled(&u0, lam * T::c(j as f64 / (n - 1) as f64))).collect();
    let mut levels: Vec<T> = path.iter().map(|u| f.energy(u)).collect::<Result<_, _>>()?;
    let mut iterations = 0;
    let mut prev_max = T::infinity();
    let mut tau = T::one();
    for _ in 0..opts.max_iter.min(500) {
        iterations += 1;
        let j = (1..n - 1).max_by(|&a, &b| levels[a].partial_cmp(&levels[b]).expect("finite energies")).expect("interior points");
        if prev_max.is_finite() && (prev_max - levels[j]).abs() <= T::c(1e-6) * levels[j].abs() {
            break;
        }
        prev_max = levels[j];
        let g = f.gradient_vector(&path[j])?;
        let mut d = metric.solve(&g).ok_or_else(|| NumericError::Other("singular metric".into()))?;
        disc.project(&mut d);
        let slope = dot(&g, &d);
        // a point may not move past its neighbours, which keeps the path connected
        let gap: Vec<T> = path[j + 1].iter().zip(&path[j - 1]).map(|(&a, &b)| a - b).collect();
        let reach = T::c(0.5) * (dot(&gap, &metric.mul_vec(&gap)) / dot(&d, &metric.mul_vec(&d))).sqrt();
        tau = (tau * T::c(2.0)).min(T::one()).min(reach);
        for _ in 0..40 {
            let trial: Vec<T> = path[j].iter().zip(&d).map(|(&a, &b)| a - tau * b).collect();
            let e = f.energy(&trial)?;
            let mid = |other: &[T]| -> Result<T, NumericError> {
                let m: Vec<T> = trial.iter().zip(other).map(|(&a, &b)| (a + b) / T::c(2.0)).collect();
                f.energy(&m)
            };
            if e <= levels[j] - T::c(1e-4) * tau * slope && mid(&path[j - 1])? <= levels[j] && mid(&path[j + 1])? <= levels[j] {
                path[j] = trial;
                levels[j] = e;
                break;
            }
            tau *= T::c(0.5);
        }
    }
    let j = (1..n - 1).max_by(|&a, &b| levels[a].partial_cmp(&levels[b]).expect("finite energies")).expect("interior points");

    // 4. Nehari descent
    let mut start = nehari_point(&f, path[j].clone())?;
    for d in &dirs {
        let c = nehari_point(&f, d.clone())?;
        if c.value < start.value {
            start = c;
        }
    }
    let (u, it) = nehari_descent(&f, &metric, start.w, tol * T::c(10.0), opts.max_iter)?;
    iterations += it;

    // 5. Newton polish
    let mut s = State::at(&f, &metric, u)?;
    for _ in 0..50 {
        if s.residual <= tol * T::c(1e-4) {
            break;
        }
        match newton_step(&f, &metric, &s, None) {
            Some(t) => s = t,
            None => break,
        }
        iterations += 1;
    }

    // rim level, including the direction of the solution
    let unorm = disc.w_norm(&s.u)?;
    let udir: Vec<T> = s.u.iter().map(|&x| x / unorm).collect();
    dirs.push(udir);
    k = 0;
    while !rim_ok(rho, &dirs)? {
        rho *= T::c(0.5);
        k += 1;
        if k > 80 {
            return Err(SolverError::Hypothesis("no sphere with positive energy found".into()));
        }
    }
    let mut rim = T::infinity();
    for d in &dirs {
        rim = rim.min(f.energy(&scaled(d, rho))?);
    }

    let ok = s.residual <= tol;
    let sol = finish(&f, SolutionKind::MountainPass, s, tol, iterations, Some(rim));
    if !ok {
        return Err(SolverError::NonConvergence {
            reason: format!("residual {} above tolerance", sol.residual),
            best: Some(Box::new(sol)),
        });
    }
    if !(sol.energy >= rim && rim > T::zero()) {
        return Err(SolverError::NonConvergence {
            reason: format!("energy {} below the rim level {rim}", sol.energy),
            best: Some(Box::new(sol)),
        });
    }
    Ok(sol)
}
