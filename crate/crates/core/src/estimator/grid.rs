//! Log-spaced radial grid, piecewise-linear radial functions and the
//! discrete `W`-norm.
//!
//! A nodal vector `u₀ … u_M` stands for the function that is linear between
//! nodes, equal to `u₀` on `(0, r₀)` and to zero beyond `r_M`; `u_M = 0` is
//! pinned so the function is continuous. The gradient term is integrated
//! exactly on each shell, potential terms with lumped trapezoid weights of
//! `ω_{N−1} r^{N−1} dr` (node 0 also carries the core ball `B_{r₀}`).

use serde::Serialize;

use crate::linalg::SymTridiagonal;
use crate::scalar::{ExactInt, Real};
use crate::catalog::PotentialSpec;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericError {
    #[error("invalid grid: {0}")]
    Grid(String),
    #[error("invalid table: {0}")]
    Table(String),
    #[error("non-finite {what} at node {index} (r = {r})")]
    NonFinite { what: &'static str, index: usize, r: f64 },
    #[error("nonzero value at node {index} (r = {r}) where the potential is singular")]
    Singular { index: usize, r: f64 },
    #[error("{0}")]
    Other(String),
}

/// Area of the unit sphere in ℝ^N.
pub fn sphere_area<T: Real>(n: u32) -> T {
    let pi = T::c(std::f64::consts::PI);
    let (mut area, mut k) = if n % 2 == 1 { (T::c(2.0), 1) } else { (T::c(2.0) * pi, 2) };
    while k < n {
        area = area * T::c(2.0) * pi / T::c(k as f64);
        k += 2;
    }
    area
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialGrid<T> {
    pub nodes: Vec<T>,
    pub n: u32,
    pub p: T,
}

impl<T: Real> RadialGrid<T> {
    /// `M + 1` nodes from `r_min` to `r_max`, geometric.
    pub fn log_spaced(r_min: T, r_max: T, m: usize, n: u32, p: T) -> Result<Self, NumericError> {
        if m < 16 {
            return Err(NumericError::Grid(format!("M = {m} < 16")));
        }
        if !(r_min > T::zero() && r_max > r_min && r_max.is_finite()) {
            return Err(NumericError::Grid(format!("need 0 < r_min < r_max, got {r_min}, {r_max}")));
        }
        let ratio = (r_max / r_min).ln();
        let nodes = (0..=m).map(|i| r_min * (ratio * T::c(i as f64) / T::c(m as f64)).exp()).collect();
        Self::from_nodes(nodes, n, p)
    }

    pub fn from_nodes(nodes: Vec<T>, n: u32, p: T) -> Result<Self, NumericError> {
        if nodes.len() < 17 {
            return Err(NumericError::Grid(format!("{} nodes, need at least 17", nodes.len())));
        }
        if nodes[0] <= T::zero() || nodes.windows(2).any(|w| w[1] <= w[0]) {
            return Err(NumericError::Grid("nodes must be positive and strictly increasing".into()));
        }
        if !(p > T::one() && p < T::c(n as f64)) {
            return Err(NumericError::Grid(format!("need 1 < p < N, got p = {p}, N = {n}")));
        }
        Ok(Self { nodes, n, p })
    }

    /// Default grid: `r ∈ [10⁻⁶, 10³]`, `M = 512`.
    pub fn standard(n: u32, p: T) -> Result<Self, NumericError> {
        Self::log_spaced(T::c(1e-6), T::c(1e3), 512, n, p)
    }

    /// Same span, twice the intervals.
    pub fn refined(&self) -> Self {
        let mut nodes = Vec::with_capacity(2 * self.nodes.len() - 1);
        for w in self.nodes.windows(2) {
            nodes.push(w[0]);
            nodes.push((w[0] * w[1]).sqrt());
        }
        nodes.push(*self.nodes.last().expect("nonempty"));
        Self { nodes, n: self.n, p: self.p }
    }

    pub fn m(&self) -> usize {
        self.nodes.len() - 1
    }
}

/// A radial function of `r > 0` that can be sampled.
pub trait RadialPotential<T: Real> {
    fn at(&self, r: T) -> T;
}

impl<I: ExactInt, T: Real> RadialPotential<T> for PotentialSpec<I> {
    fn at(&self, r: T) -> T {
        self.eval(r)
    }
}

impl<T: Real, F: Fn(T) -> T> RadialPotential<T> for F {
    fn at(&self, r: T) -> T {
        self(r)
    }
}

/// Samples `(r, value)` with strictly increasing `r`; linear in between and
/// constant beyond the ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated<T> {
    r: Vec<T>,
    v: Vec<T>,
}

impl<T: Real> Tabulated<T> {
    pub fn new(r: Vec<T>, v: Vec<T>) -> Result<Self, NumericError> {
        if r.len() != v.len() || r.is_empty() {
            return Err(NumericError::Table("need equally many r and values, at least one".into()));
        }
        if let Some(i) = r.windows(2).position(|w| w[1] <= w[0]) {
            return Err(NumericError::Table(format!("r not strictly increasing at row {}", i + 1)));
        }
        if r[0] <= T::zero() {
            return Err(NumericError::Table("r must be positive".into()));
        }
        if let Some(i) = v.iter().position(|x| !x.is_finite() || *x < T::zero()) {
            return Err(NumericError::Table(format!("value at row {i} is negative or not finite")));
        }
        Ok(Self { r, v })
    }
}

impl<T: Real> RadialPotential<T> for Tabulated<T> {
    fn at(&self, r: T) -> T {
        let n = self.r.len();
        if r <= self.r[0] {
            return self.v[0];
        }
        if r >= self.r[n - 1] {
            return self.v[n - 1];
        }
        let j = self.r.partition_point(|&x| x <= r);
        let (r0, r1) = (self.r[j - 1], self.r[j]);
        let t = (r - r0) / (r1 - r0);
        self.v[j - 1] + t * (self.v[j] - self.v[j - 1])
    }
}

/// Read a table with header `r,V,K` (extra columns ignored).
pub fn read_table_csv<T: Real, R: std::io::Read>(src: R) -> Result<(Tabulated<T>, Tabulated<T>), NumericError> {
    let mut rd = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(src);
    let headers = rd.headers().map_err(|e| NumericError::Table(e.to_string()))?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h.eq_ignore_ascii_case(name))
            .ok_or_else(|| NumericError::Table(format!("missing column {name}")))
    };
    let (ir, iv, ik) = (col("r")?, col("V")?, col("K")?);
    let (mut r, mut v, mut k) = (Vec::new(), Vec::new(), Vec::new());
    for (row, rec) in rd.records().enumerate() {
        let rec = rec.map_err(|e| NumericError::Table(e.to_string()))?;
        let num = |i: usize| -> Result<T, NumericError> {
            let s = rec.get(i).unwrap_or("");
            s.parse::<f64>()
                .map(T::c)
                .map_err(|_| NumericError::Table(format!("row {}: cannot parse {s:?}", row + 1)))
        };
        r.push(num(ir)?);
        v.push(num(iv)?);
        k.push(num(ik)?);
    }
    Ok((Tabulated::new(r.clone(), v)?, Tabulated::new(r, k)?))
}

/// Nodal samples of a potential. Where the potential is infinite at a node,
/// the finite values at the neighbouring geometric midpoints are averaged;
/// if none is finite the node is reported singular.
fn sample<T: Real>(pot: &dyn RadialPotential<T>, r: &[T]) -> Vec<Option<T>> {
    let m = r.len() - 1;
    (0..=m)
        .map(|i| {
            let x = pot.at(r[i]);
            if x.is_finite() {
                return Some(x);
            }
            let mids: Vec<T> = [i.checked_sub(1), (i < m).then_some(i)]
                .into_iter()
                .flatten()
                .map(|j| pot.at((r[j] * r[j + 1]).sqrt()))
                .filter(|y| y.is_finite())
                .collect();
            (!mids.is_empty()).then(|| mids.iter().copied().sum::<T>() / T::c(mids.len() as f64))
        })
        .collect()
}

/// Precomputed weights and potential samples on a grid.
#[derive(Debug, Clone)]
pub struct Discretization<T> {
    pub grid: RadialGrid<T>,
    /// `ω (r_{i+1}^N − r_i^N) / N`
    pub shell: Vec<T>,
    pub h: Vec<T>,
    /// lumped `ω r^{N−1} dr` weights
    pub mass: Vec<T>,
    pub v: Vec<T>,
    pub k: Vec<T>,
    pub forcing: Vec<T>,
    /// Nodes held at zero: the last node and nodes where V or K is singular.
    pub pinned: Vec<bool>,
}

impl<T: Real> Discretization<T> {
    pub fn new(
        grid: RadialGrid<T>,
        v: &dyn RadialPotential<T>,
        k: &dyn RadialPotential<T>,
        forcing: Option<&dyn RadialPotential<T>>,
    ) -> Result<Self, NumericError> {
        let r = &grid.nodes;
        let m = grid.m();
        let nn = T::c(grid.n as f64);
        let omega = sphere_area::<T>(grid.n);
        let h: Vec<T> = r.windows(2).map(|w| w[1] - w[0]).collect();
        let shell: Vec<T> = r.windows(2).map(|w| omega * (w[1].powf(nn) - w[0].powf(nn)) / nn).collect();
        let mut mass: Vec<T> = (0..=m)
            .map(|i| {
                let left = if i > 0 { h[i - 1] } else { T::zero() };
                let right = if i < m { h[i] } else { T::zero() };
                omega * r[i].powf(nn - T::one()) * (left + right) / T::c(2.0)
            })
            .collect();
        mass[0] += omega * r[0].powf(nn) / nn;
        let vs = sample(v, r);
        let ks = sample(k, r);
        let fs = forcing.map(|f| sample(f, r));
        let mut pinned = vec![false; m + 1];
        pinned[m] = true;
        let mut vv = vec![T::zero(); m + 1];
        let mut kv = vec![T::zero(); m + 1];
        let mut fv = vec![T::zero(); m + 1];
        for i in 0..=m {
            match (vs[i], ks[i]) {
                (Some(a), Some(b)) => {
                    vv[i] = a;
                    kv[i] = b;
                }
                _ => pinned[i] = true,
            }
            if let Some(fs) = &fs {
                match fs[i] {
                    Some(x) => fv[i] = x,
                    None => pinned[i] = true,
                }
            }
            if vv[i] < T::zero() || kv[i] < T::zero() {
                return Err(NumericError::Other(format!("negative potential at node {i}")));
            }
        }
        if pinned[..m].iter().all(|&b| b) {
            return Err(NumericError::Other("every node is singular".into()));
        }
        Ok(Self { grid, shell, h, mass, v: vv, k: kv, forcing: fv, pinned })
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    pub fn p(&self) -> T {
        self.grid.p
    }

    pub fn nodes(&self) -> &[T] {
        &self.grid.nodes
    }

    fn check_pinned(&self, u: &[T]) -> Result<(), NumericError> {
        for (i, (&x, &pin)) in u.iter().zip(&self.pinned).enumerate() {
            if !x.is_finite() {
                return Err(NumericError::NonFinite { what: "value", index: i, r: self.nodes()[i].to_f64_lossy() });
            }
            if pin && x != T::zero() {
                return Err(NumericError::Singular { index: i, r: self.nodes()[i].to_f64_lossy() });
            }
        }
        Ok(())
    }

    /// Zero the pinned entries.
    pub fn project(&self, u: &mut [T]) {
        for (x, &pin) in u.iter_mut().zip(&self.pinned) {
            if pin {
                *x = T::zero();
            }
        }
    }

    /// `‖u‖^p`
    pub fn norm_pow(&self, u: &[T]) -> Result<T, NumericError> {
        self.check_pinned(u)?;
        let p = self.p();
        let grad: T = (0..self.h.len()).map(|i| self.shell[i] * ((u[i + 1] - u[i]) / self.h[i]).abs().powf(p)).sum();
        let pot: T = (0..u.len()).map(|i| self.mass[i] * self.v[i] * u[i].abs().powf(p)).sum();
        Ok(grad + pot)
    }

    pub fn w_norm(&self, u: &[T]) -> Result<T, NumericError> {
        Ok(self.norm_pow(u)?.powf(T::one() / self.p()))
    }

    /// Gradient of `(1/p)‖u‖^p`, with `|s|^{p−2}s` regularized as
    /// `(s² + δ²)^{(p−2)/2} s`. Pinned entries are zero.
    pub fn norm_gradient(&self, u: &[T], delta: T) -> Vec<T> {
        let p = self.p();
        let e = (p - T::c(2.0)) / T::c(2.0);
        let mut g: Vec<T> = (0..u.len()).map(|i| self.mass[i] * self.v[i] * phi(u[i], p)).collect();
        for i in 0..self.h.len() {
            let s = (u[i + 1] - u[i]) / self.h[i];
            let flux = self.shell[i] / self.h[i] * (s * s + delta * delta).powf(e) * s;
            g[i] -= flux;
            g[i + 1] += flux;
        }
        self.project(&mut g);
        g
    }

    /// Hessian of `(1/p)‖u‖^p` (tridiagonal), same regularization.
    pub fn norm_hessian(&self, u: &[T], delta: T) -> SymTridiagonal<T> {
        let p = self.p();
        let n = u.len();
        let mut hs = SymTridiagonal::zeros(n);
        for i in 0..n {
            hs.diag[i] = self.mass[i] * self.v[i] * (p - T::one()) * (u[i] * u[i] + delta * delta).powf((p - T::c(2.0)) / T::c(2.0));
        }
        for i in 0..self.h.len() {
            let s = (u[i + 1] - u[i]) / self.h[i];
            let w = self.shell[i] / (self.h[i] * self.h[i]) * (p - T::one()) * (s * s + delta * delta).powf((p - T::c(2.0)) / T::c(2.0));
            hs.diag[i] += w;
            hs.diag[i + 1] += w;
            hs.off[i] -= w;
        }
        self.pin_matrix(&mut hs);
        hs
    }

    /// The `p = 2` norm matrix, used as a fixed preconditioner and for the
    /// dual norm of residuals.
    pub fn metric(&self) -> SymTridiagonal<T> {
        let n = self.len();
        let mut a = SymTridiagonal::zeros(n);
        for i in 0..n {
            a.diag[i] = self.mass[i] * self.v[i];
        }
        for i in 0..self.h.len() {
            let w = self.shell[i] / (self.h[i] * self.h[i]);
            a.diag[i] += w;
            a.diag[i + 1] += w;
            a.off[i] -= w;
        }
        self.pin_matrix(&mut a);
        a
    }

    pub fn pin_matrix(&self, a: &mut SymTridiagonal<T>) {
        for i in 0..self.len() {
            if self.pinned[i] {
                a.diag[i] = T::one();
                if i > 0 {
                    a.off[i - 1] = T::zero();
                }
                if i + 1 < self.len() {
                    a.off[i] = T::zero();
                }
            }
        }
    }

    pub fn function(&self, values: Vec<T>) -> RadialFunction<T> {
        RadialFunction { r: self.grid.nodes.clone(), u: values }
    }
}

/// `|t|^{p−2} t`
pub fn phi<T: Real>(t: T, p: T) -> T {
    if t == T::zero() {
        T::zero()
    } else {
        t.abs().powf(p - T::one()) * t.signum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RadialFunction<T> {
    pub r: Vec<T>,
    pub u: Vec<T>,
}

impl<T: Real> RadialFunction<T> {
    pub fn eval(&self, r: T) -> T {
        let m = self.r.len() - 1;
        if r <= self.r[0] {
            return self.u[0];
        }
        if r >= self.r[m] {
            return T::zero();
        }
        let j = self.r.partition_point(|&x| x <= r);
        let t = (r - self.r[j - 1]) / (self.r[j] - self.r[j - 1]);
        self.u[j - 1] + t * (self.u[j] - self.u[j - 1])
    }

    /// Nodal interpolation onto other nodes.
    pub fn resample(&self, nodes: &[T]) -> Vec<T> {
        nodes.iter().map(|&r| self.eval(r)).collect()
    }

    pub fn write_csv<W: std::io::Write>(&self, w: W) -> Result<(), NumericError> {
        let mut wr = csv::Writer::from_writer(w);
        let err = |e: csv::Error| NumericError::Other(e.to_string());
        wr.write_record(["r", "u"]).map_err(err)?;
        for (r, u) in self.r.iter().zip(&self.u) {
            wr.write_record([format!("{r:e}"), format!("{u:e}")]).map_err(err)?;
        }
        wr.flush().map_err(|e| NumericError::Other(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zero(_: f64) -> f64 {
        0.0
    }

    #[test]
    fn sphere_areas() {
        let pi = std::f64::consts::PI;
        assert!((sphere_area::<f64>(2) - 2.0 * pi).abs() < 1e-14);
        assert!((sphere_area::<f64>(3) - 4.0 * pi).abs() < 1e-13);
        assert!((sphere_area::<f64>(4) - 2.0 * pi * pi).abs() < 1e-12);
        assert!((sphere_area::<f64>(5) - 8.0 * pi * pi / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tent_gradient_is_exact() {
        // tent on [1, 2] with slopes ±2, kinks on nodes
        let base = RadialGrid::log_spaced(1e-6, 1e3, 509, 3, 2.0).unwrap();
        let mut nodes = base.nodes.clone();
        nodes.extend([1.0, 1.5, 2.0]);
        nodes.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let grid = RadialGrid::from_nodes(nodes, 3, 2.0).unwrap();
        assert_eq!(grid.m(), 512);
        let d = Discretization::new(grid, &zero, &zero, None).unwrap();
        let tent = |r: f64| (1.0 - (2.0 * (r - 1.5)).abs()).max(0.0);
        let u: Vec<f64> = d.nodes().iter().map(|&r| tent(r)).collect();
        let exact = 4.0 * std::f64::consts::PI * 4.0 * (2f64.powi(3) - 1.0) / 3.0;
        let got = d.norm_pow(&u).unwrap();
        assert!((got - exact).abs() / exact < 1e-3, "{got} vs {exact}");
    }

    #[test]
    fn homogeneity_and_zero() {
        let grid = RadialGrid::log_spaced(1e-3, 1e2, 64, 3, 1.5).unwrap();
        let v = |r: f64| 1.0 / r;
        let d = Discretization::new(grid, &v, &v, None).unwrap();
        let mut u: Vec<f64> = d.nodes().iter().map(|&r| (-r).exp() * r).collect();
        d.project(&mut u);
        assert_eq!(d.w_norm(&vec![0.0; u.len()]).unwrap(), 0.0);
        let a = d.w_norm(&u).unwrap();
        let b = d.w_norm(&u.iter().map(|x| -3.5 * x).collect::<Vec<_>>()).unwrap();
        assert!((b - 3.5 * a).abs() / b < 1e-12);
    }

    #[test]
    fn singular_nodes_are_pinned() {
        let grid = RadialGrid::log_spaced(1e-4, 10.0, 32, 3, 2.0).unwrap();
        let v = |r: f64| (1.0 / r).exp();
        let d = Discretization::new(grid, &v, &v, None).unwrap();
        assert!(d.pinned[0]);
        assert!(!d.pinned[d.len() - 2]);
        let mut u = vec![1.0; d.len()];
        *u.last_mut().unwrap() = 0.0;
        assert!(matches!(d.w_norm(&u), Err(NumericError::Singular { index: 0, .. })));
    }

    #[test]
    fn tables_interpolate_and_validate() {
        let t = Tabulated::new(vec![1.0, 2.0, 4.0], vec![0.0, 2.0, 6.0]).unwrap();
        assert_eq!(t.at(1.5), 1.0);
        assert_eq!(t.at(3.0), 4.0);
        assert_eq!(t.at(0.5), 0.0);
        assert_eq!(t.at(9.0), 6.0);
        assert!(Tabulated::new(vec![1.0, 1.0], vec![0.0, 0.0]).is_err());
        let (v, k) = read_table_csv::<f64, _>("r, V, K\n1, 2, 3\n2, 4, 5\n".as_bytes()).unwrap();
        assert_eq!((v.at(1.5), k.at(1.5)), (3.0, 4.0));
        assert!(read_table_csv::<f64, _>("r,V\n1,2\n".as_bytes()).is_err());
    }

    #[test]
    fn refinement_interleaves_nodes() {
        let g = RadialGrid::log_spaced(1e-2, 1e2, 16, 3, 2.0).unwrap();
        let f = g.refined();
        assert_eq!(f.m(), 32);
        assert_eq!(f.nodes[2], g.nodes[1]);
    }
}
