//! Tridiagonal systems, the only linear algebra the one-dimensional radial
//! discretization needs.

use crate::scalar::Real;

/// Symmetric tridiagonal matrix: `diag[i]`, `off[i]` couples `i` and `i + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal<T> {
    pub diag: Vec<T>,
    pub off: Vec<T>,
}

impl<T: Real> SymTridiagonal<T> {
    pub fn zeros(n: usize) -> Self {
        Self { diag: vec![T::zero(); n], off: vec![T::zero(); n.saturating_sub(1)] }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        let n = self.len();
        let mut y: Vec<T> = (0..n).map(|i| self.diag[i] * x[i]).collect();
        for i in 0..n.saturating_sub(1) {
            y[i] += self.off[i] * x[i + 1];
            y[i + 1] += self.off[i] * x[i];
        }
        y
    }

    /// Thomas algorithm. No pivoting: fine for the diagonally dominant and
    /// mildly indefinite matrices used here. `None` on a zero pivot or a
    /// non-finite result.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.len();
        assert_eq!(b.len(), n);
        if n == 0 {
            return Some(Vec::new());
        }
        let mut c = vec![T::zero(); n];
        let mut d = vec![T::zero(); n];
        let mut piv = self.diag[0];
        if piv == T::zero() {
            return None;
        }
        if n > 1 {
            c[0] = self.off[0] / piv;
        }
        d[0] = b[0] / piv;
        for i in 1..n {
            piv = self.diag[i] - self.off[i - 1] * c[i - 1];
            if piv == T::zero() {
                return None;
            }
            if i + 1 < n {
                c[i] = self.off[i] / piv;
            }
            d[i] = (b[i] - self.off[i - 1] * d[i - 1]) / piv;
        }
        for i in (0..n - 1).rev() {
            let next = d[i + 1];
            d[i] -= c[i] * next;
        }
        d.iter().all(|x| x.is_finite()).then_some(d)
    }
}

pub fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn axpy<T: Real>(alpha: T, x: &[T], y: &[T]) -> Vec<T> {
    x.iter().zip(y).map(|(&xi, &yi)| alpha * xi + yi).collect()
}

pub fn max_abs<T: Real>(x: &[T]) -> T {
    x.iter().fold(T::zero(), |m, &v| m.max(v.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thomas_matches_multiplication() {
        let a = SymTridiagonal { diag: vec![4.0f64, 5.0, 6.0, 7.0], off: vec![1.0, -2.0, 0.5] };
        let x = vec![1.0, -1.0, 2.0, 0.25];
        let b = a.mul_vec(&x);
        let got = a.solve(&b).unwrap();
        for (g, e) in got.iter().zip(&x) {
            assert!((g - e).abs() < 1e-14);
        }
    }

    #[test]
    fn indefinite_but_nonsingular() {
        let a = SymTridiagonal { diag: vec![-2.0f64, 3.0, 1.0], off: vec![1.0, 1.0] };
        let x = vec![0.5, 2.0, -1.0];
        let got = a.solve(&a.mul_vec(&x)).unwrap();
        assert!(got.iter().zip(&x).all(|(g, e)| (g - e).abs() < 1e-14));
        assert!(SymTridiagonal { diag: vec![0.0f64, 1.0], off: vec![1.0] }.solve(&[1.0, 1.0]).is_none());
    }
}
