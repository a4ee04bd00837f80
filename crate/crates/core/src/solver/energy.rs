//! Discrete energy `I(u) = ‖u‖^p/p − ∫ G(|x|, u)` and its derivatives.
//!
//! `G(r, t) = K(r) F̃(t) + Q(r) t`, where `F̃` is `F` on `t > 0` and 0 on
//! `t ≤ 0` when truncation is on. The forcing term is never truncated.

use crate::estimator::{Discretization, NumericError};
use crate::linalg::{dot, SymTridiagonal};
use crate::scalar::Real;

use super::nonlinearity::Nonlinearity;

/// Smoothing of `|s|^{p−2}s` in gradient assembly.
pub const GRADIENT_DELTA: f64 = 1e-10;

#[derive(Debug, Clone, Copy)]
pub struct Functional<'a, T> {
    pub disc: &'a Discretization<T>,
    pub nl: &'a Nonlinearity<T>,
    /// Replace `f` by `χ_{ℝ₊} f` (nonnegative solutions).
    pub truncate: bool,
}

impl<'a, T: Real> Functional<'a, T> {
    pub fn new(disc: &'a Discretization<T>, nl: &'a Nonlinearity<T>) -> Self {
        Self { disc, nl, truncate: true }
    }

    fn cut(&self, t: T) -> bool {
        self.truncate && t <= T::zero()
    }

    fn big_f(&self, t: T) -> T {
        if self.cut(t) {
            T::zero()
        } else {
            self.nl.primitive(t)
        }
    }

    fn small_f(&self, t: T) -> T {
        if self.cut(t) {
            T::zero()
        } else {
            self.nl.f(t)
        }
    }

    fn small_df(&self, t: T) -> T {
        if self.cut(t) {
            T::zero()
        } else {
            self.nl.derivative(t)
        }
    }

    fn check(&self, what: &'static str, i: usize, x: T) -> Result<T, NumericError> {
        if x.is_finite() {
            Ok(x)
        } else {
            Err(NumericError::NonFinite { what, index: i, r: self.disc.nodes()[i].to_f64_lossy() })
        }
    }

    /// `∫ G(|x|, u)` with the lumped weights.
    pub fn potential_energy(&self, u: &[T]) -> Result<T, NumericError> {
        let d = self.disc;
        let mut total = T::zero();
        for i in 0..u.len() {
            if d.pinned[i] {
                continue;
            }
            let g = d.mass[i] * (d.k[i] * self.big_f(u[i]) + d.forcing[i] * u[i]);
            total += self.check("integrand", i, g)?;
        }
        Ok(total)
    }

    pub fn energy(&self, u: &[T]) -> Result<T, NumericError> {
        let n = self.disc.norm_pow(u)?;
        let e = n / self.disc.p() - self.potential_energy(u)?;
        if e.is_finite() {
            Ok(e)
        } else {
            Err(NumericError::Other("non-finite energy".into()))
        }
    }

    /// Nodal gradient `I′(u)eᵢ`; pinned entries are zero.
    pub fn gradient_vector(&self, u: &[T]) -> Result<Vec<T>, NumericError> {
        self.disc.norm_pow(u)?;
        let d = self.disc;
        let mut g = d.norm_gradient(u, T::c(GRADIENT_DELTA));
        for i in 0..u.len() {
            if d.pinned[i] {
                continue;
            }
            g[i] -= d.mass[i] * (d.k[i] * self.small_f(u[i]) + d.forcing[i]);
            self.check("gradient", i, g[i])?;
        }
        Ok(g)
    }

    /// `I′(u)h`
    pub fn derivative(&self, u: &[T], h: &[T]) -> Result<T, NumericError> {
        Ok(dot(&self.gradient_vector(u)?, h))
    }

    /// Tridiagonal `I″(u)`, same smoothing as the gradient.
    pub fn hessian(&self, u: &[T]) -> SymTridiagonal<T> {
        let d = self.disc;
        let mut h = d.norm_hessian(u, T::c(GRADIENT_DELTA));
        for i in 0..u.len() {
            if !d.pinned[i] {
                h.diag[i] -= d.mass[i] * d.k[i] * self.small_df(u[i]);
            }
        }
        h
    }

    /// Dual norm `sqrt(gᵀP⁻¹g)` of a gradient in the `p = 2` metric `P`.
    pub fn dual_norm(&self, metric: &SymTridiagonal<T>, g: &[T]) -> Result<T, NumericError> {
        let z = metric.solve(g).ok_or_else(|| NumericError::Other("singular metric".into()))?;
        Ok(dot(g, &z).max(T::zero()).sqrt())
    }
}
