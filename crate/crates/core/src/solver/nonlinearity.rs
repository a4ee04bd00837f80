//! Model nonlinearities `f`, their primitives `F` and derivatives.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid nonlinearity: {0}")]
pub struct NonlinearityError(pub String);

/// Piecewise-linear `f` on `t ≥ 0`, extended oddly and linearly beyond the
/// last point. `F` is integrated exactly.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CustomTable<T> {
    t: Vec<T>,
    f: Vec<T>,
    /// `F(t_k)`
    big_f: Vec<T>,
}

impl<T: Real> CustomTable<T> {
    pub fn new(points: &[(T, T)]) -> Result<Self, NonlinearityError> {
        if points.len() < 2 {
            return Err(NonlinearityError("custom table needs at least two points".into()));
        }
        if points[0] != (T::zero(), T::zero()) {
            return Err(NonlinearityError("custom table must start at (0, 0)".into()));
        }
        if points.iter().any(|(a, b)| !a.is_finite() || !b.is_finite()) {
            return Err(NonlinearityError("custom table has non-finite entries".into()));
        }
        if points.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(NonlinearityError("custom table t values must increase strictly".into()));
        }
        let t: Vec<T> = points.iter().map(|p| p.0).collect();
        let f: Vec<T> = points.iter().map(|p| p.1).collect();
        let mut big_f = vec![T::zero(); t.len()];
        for k in 1..t.len() {
            big_f[k] = big_f[k - 1] + (t[k] - t[k - 1]) * (f[k] + f[k - 1]) / T::c(2.0);
        }
        Ok(Self { t, f, big_f })
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.t.iter().copied().zip(self.f.iter().copied())
    }

    fn segment(&self, s: T) -> usize {
        let j = self.t.partition_point(|&x| x <= s);
        j.clamp(1, self.t.len() - 1) - 1
    }

    fn slope(&self, k: usize) -> T {
        (self.f[k + 1] - self.f[k]) / (self.t[k + 1] - self.t[k])
    }

    /// `(f, F, f′)` at `s ≥ 0`
    fn at(&self, s: T) -> (T, T, T) {
        let k = self.segment(s);
        let a = self.slope(k);
        let d = s - self.t[k];
        (self.f[k] + a * d, self.big_f[k] + self.f[k] * d + a * d * d / T::c(2.0), a)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum Nonlinearity<T> {
    /// `f = 0`
    Zero,
    /// `|t|^{q−2} t`
    PurePower { q: T },
    /// `sign(t) min{|t|^{q₁−1}, |t|^{q₂−1}}`
    MinPower { q1: T, q2: T },
    /// `|t|^{q₂−2} t / (1 + |t|^{q₂−q₁})`, `q₁ ≤ q₂`
    RationalPower { q1: T, q2: T },
    /// `|t|^{q₂−1+ε} ln|t| / (1 + |t|^{q₂−q₁+2ε})`, `q₁ ≤ q₂`, 0 at 0
    LogPerturbed { q1: T, q2: T, epsilon: T },
    Custom { table: CustomTable<T> },
}

fn gauss_legendre() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        const N: usize = 20;
        let mut rule = Vec::with_capacity(N);
        for i in 0..N {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (N as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=N {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = N as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            rule.push(((1.0 + x) / 2.0, 1.0 / ((1.0 - x * x) * dp * dp)));
        }
        rule
    })
}

/// `∫₀^s f` for `s ≥ 0` via `σ = s x²` on dyadic panels in `x`; the
/// substitution tames the power singularity at 0.
fn primitive_by_quadrature<T: Real>(s: T, f: impl Fn(T) -> T) -> T {
    if s == T::zero() {
        return T::zero();
    }
    let rule = gauss_legendre();
    let mut total = T::zero();
    let mut hi = T::one();
    for _ in 0..12 {
        let lo = hi / T::c(2.0);
        let width = hi - lo;
        for &(x, w) in rule {
            let x = lo + width * T::c(x);
            total += T::c(w) * width * T::c(2.0) * s * x * f(s * x * x);
        }
        hi = lo;
    }
    // innermost panel [0, 2⁻¹²]
    for &(x, w) in rule {
        let x = hi * T::c(x);
        total += T::c(w) * hi * T::c(2.0) * s * x * f(s * x * x);
    }
    total
}

impl<T: Real> Nonlinearity<T> {
    pub fn validate(&self) -> Result<(), NonlinearityError> {
        let one = T::one();
        let bad = |msg: String| Err(NonlinearityError(msg));
        match *self {
            Nonlinearity::Zero | Nonlinearity::Custom { .. } => Ok(()),
            Nonlinearity::PurePower { q } if !(q > one) => bad(format!("need q > 1, got {q}")),
            Nonlinearity::MinPower { q1, q2 } if !(q1 > one && q2 > one) => bad(format!("need q1, q2 > 1, got {q1}, {q2}")),
            Nonlinearity::RationalPower { q1, q2 } | Nonlinearity::LogPerturbed { q1, q2, .. }
                if !(q1 > one && q2 >= q1) =>
            {
                bad(format!("need 1 < q1 <= q2, got {q1}, {q2}"))
            }
            Nonlinearity::LogPerturbed { epsilon, .. } if !(epsilon > T::zero()) => bad(format!("need epsilon > 0, got {epsilon}")),
            _ => Ok(()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Nonlinearity::Zero => "zero",
            Nonlinearity::PurePower { .. } => "pure-power",
            Nonlinearity::MinPower { .. } => "min-power",
            Nonlinearity::RationalPower { .. } => "rational-power",
            Nonlinearity::LogPerturbed { .. } => "log-perturbed",
            Nonlinearity::Custom { .. } => "custom",
        }
    }

    /// Growth exponents `(q₁, q₂)` of the family, if it has them.
    pub fn exponents(&self) -> Option<(T, T)> {
        match *self {
            Nonlinearity::PurePower { q } => Some((q, q)),
            Nonlinearity::MinPower { q1, q2 } | Nonlinearity::RationalPower { q1, q2 } | Nonlinearity::LogPerturbed { q1, q2, .. } => {
                Some((q1, q2))
            }
            Nonlinearity::Zero | Nonlinearity::Custom { .. } => None,
        }
    }

    pub fn f(&self, t: T) -> T {
        let s = t.abs();
        if s == T::zero() {
            return T::zero();
        }
        match *self {
            Nonlinearity::Zero => T::zero(),
            Nonlinearity::PurePower { q } => s.powf(q - T::one()) * t.signum(),
            Nonlinearity::MinPower { q1, q2 } => s.powf(q1 - T::one()).min(s.powf(q2 - T::one())) * t.signum(),
            Nonlinearity::RationalPower { q1, q2 } => s.powf(q2 - T::one()) / (T::one() + s.powf(q2 - q1)) * t.signum(),
            Nonlinearity::LogPerturbed { q1, q2, epsilon } => {
                s.powf(q2 - T::one() + epsilon) * s.ln() / (T::one() + s.powf(q2 - q1 + epsilon * T::c(2.0)))
            }
            Nonlinearity::Custom { ref table } => table.at(s).0 * t.signum(),
        }
    }

    /// `F(t) = ∫₀ᵗ f`
    pub fn primitive(&self, t: T) -> T {
        let s = t.abs();
        if s == T::zero() {
            return T::zero();
        }
        match *self {
            Nonlinearity::Zero => T::zero(),
            Nonlinearity::PurePower { q } => s.powf(q) / q,
            Nonlinearity::MinPower { q1, q2 } => {
                let (lo, hi) = (q1.min(q2), q1.max(q2));
                if s <= T::one() {
                    s.powf(hi) / hi
                } else {
                    T::one() / hi + (s.powf(lo) - T::one()) / lo
                }
            }
            Nonlinearity::RationalPower { .. } => primitive_by_quadrature(s, |x| self.f(x)),
            Nonlinearity::LogPerturbed { .. } => {
                // f is even, so F is odd
                primitive_by_quadrature(s, |x| self.f(x)) * t.signum()
            }
            Nonlinearity::Custom { ref table } => table.at(s).1,
        }
    }

    /// `f′(t)`; 0 at `t = 0` by convention.
    pub fn derivative(&self, t: T) -> T {
        let s = t.abs();
        if s == T::zero() {
            return T::zero();
        }
        let one = T::one();
        match *self {
            Nonlinearity::Zero => T::zero(),
            Nonlinearity::PurePower { q } => (q - one) * s.powf(q - T::c(2.0)),
            Nonlinearity::MinPower { q1, q2 } => {
                let e = if s <= one { q1.max(q2) } else { q1.min(q2) };
                (e - one) * s.powf(e - T::c(2.0))
            }
            Nonlinearity::RationalPower { q1, q2 } => {
                let d = q2 - q1;
                let den = one + s.powf(d);
                ((q2 - one) * s.powf(q2 - T::c(2.0)) * den - d * s.powf(q2 + d - T::c(2.0))) / (den * den)
            }
            Nonlinearity::LogPerturbed { q1, q2, epsilon } => {
                let a = q2 - one + epsilon;
                let b = q2 - q1 + epsilon * T::c(2.0);
                let den = one + s.powf(b);
                let num = s.powf(a) * s.ln();
                let dnum = s.powf(a - one) * (a * s.ln() + one);
                let v = (dnum * den - num * b * s.powf(b - one)) / (den * den);
                v * t.signum()
            }
            Nonlinearity::Custom { ref table } => table.at(s).2,
        }
    }
}

/// Flat JSON form `{family, q1, q2, epsilon?, forcing?, table?}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearityConfig {
    pub family: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// Catalog spec of `g(·, 0)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub forcing: Option<String>,
    /// `(t, f(t))` pairs for the custom family.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<(f64, f64)>>,
}

impl NonlinearityConfig {
    pub fn build<T: Real>(&self) -> Result<Nonlinearity<T>, NonlinearityError> {
        let need = |v: Option<f64>, name: &str| {
            v.map(T::c).ok_or_else(|| NonlinearityError(format!("family {} needs {name}", self.family)))
        };
        let nl = match self.family.as_str() {
            "zero" => Nonlinearity::Zero,
            "pure-power" => {
                let q = need(self.q1, "q1")?;
                if let Some(q2) = self.q2 {
                    if T::c(q2) != q {
                        return Err(NonlinearityError("pure-power takes a single exponent (q1 = q2)".into()));
                    }
                }
                Nonlinearity::PurePower { q }
            }
            "min-power" => Nonlinearity::MinPower { q1: need(self.q1, "q1")?, q2: need(self.q2, "q2")? },
            "rational-power" => Nonlinearity::RationalPower { q1: need(self.q1, "q1")?, q2: need(self.q2, "q2")? },
            "log-perturbed" => Nonlinearity::LogPerturbed {
                q1: need(self.q1, "q1")?,
                q2: need(self.q2, "q2")?,
                epsilon: need(self.epsilon, "epsilon")?,
            },
            "custom" => {
                let pts = self.table.as_ref().ok_or_else(|| NonlinearityError("family custom needs table".into()))?;
                let pts: Vec<(T, T)> = pts.iter().map(|&(a, b)| (T::c(a), T::c(b))).collect();
                Nonlinearity::Custom { table: CustomTable::new(&pts)? }
            }
            other => return Err(NonlinearityError(format!("unknown family {other:?}"))),
        };
        nl.validate()?;
        Ok(nl)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<Nonlinearity<f64>> {
        vec![
            Nonlinearity::PurePower { q: 3.5 },
            Nonlinearity::MinPower { q1: 1.5, q2: 4.0 },
            Nonlinearity::MinPower { q1: 4.0, q2: 1.5 },
            Nonlinearity::RationalPower { q1: 1.3, q2: 3.7 },
            Nonlinearity::LogPerturbed { q1: 3.0, q2: 4.0, epsilon: 0.1 },
            Nonlinearity::Custom { table: CustomTable::new(&[(0.0, 0.0), (0.5, 0.1), (1.0, 1.0), (2.0, 1.5)]).unwrap() },
        ]
    }

    #[test]
    fn gauss_rule_integrates_polynomials() {
        let s: f64 = gauss_legendre().iter().map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 1.0 / 31.0).abs() < 1e-15);
    }

    #[test]
    fn primitive_differentiates_to_f() {
        for nl in families() {
            for &t in &[-2.7f64, -0.3, 0.05, 0.4, 0.9, 1.3, 3.0, 7.5] {
                let h: f64 = 1e-5 * t.abs().max(1e-3);
                let fd = (nl.primitive(t + h) - nl.primitive(t - h)) / (2.0 * h);
                assert!((fd - nl.f(t)).abs() < 1e-7 * nl.f(t).abs().max(1.0), "{} at {t}: {fd} vs {}", nl.name(), nl.f(t));
                let fd = (nl.f(t + h) - nl.f(t - h)) / (2.0 * h);
                assert!((fd - nl.derivative(t)).abs() < 1e-6 * nl.derivative(t).abs().max(1.0), "{} f' at {t}", nl.name());
            }
        }
    }

    #[test]
    fn closed_forms() {
        // rational with q1 = q2 = q is f = t^{q-1}/2
        let r = Nonlinearity::RationalPower { q1: 3.0, q2: 3.0 };
        assert!((r.primitive(2.0) - 8.0f64 / 6.0).abs() < 1e-14);
        let m = Nonlinearity::MinPower { q1: 2.0, q2: 4.0 };
        assert_eq!(m.primitive(1.0), 0.25);
        assert_eq!(m.primitive(3.0), 0.25 + 4.0);
        assert_eq!(m.f(-2.0), -2.0);
    }

    #[test]
    fn custom_table_checks() {
        assert!(CustomTable::<f64>::new(&[(0.0, 0.0)]).is_err());
        assert!(CustomTable::<f64>::new(&[(0.0, 1.0), (1.0, 1.0)]).is_err());
        assert!(CustomTable::<f64>::new(&[(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
        let t = CustomTable::new(&[(0.0, 0.0), (1.0, 2.0)]).unwrap();
        let nl = Nonlinearity::Custom { table: t };
        // linear extrapolation: f = 2t, F = t²
        assert!((nl.primitive(3.0) - 9.0f64).abs() < 1e-14);
        assert_eq!(nl.f(-3.0), -6.0);
    }

    #[test]
    fn config_round_trip() {
        let c: NonlinearityConfig = serde_json::from_str(r#"{"family":"min-power","q1":3,"q2":5}"#).unwrap();
        assert_eq!(c.build::<f64>().unwrap(), Nonlinearity::MinPower { q1: 3.0, q2: 5.0 });
        assert!(serde_json::from_str::<NonlinearityConfig>(r#"{"family":"zero","bogus":1}"#).is_err());
        let bad = NonlinearityConfig { family: "rational-power".into(), q1: Some(4.0), q2: Some(3.0), epsilon: None, forcing: None, table: None };
        assert!(bad.build::<f64>().is_err());
    }
}
