//! Small dense symmetric solves for the Newton systems.

use crate::scalar::Scalar;

/// Row-major square matrix.
#[derive(Debug, Clone)]
pub struct SymMatrix<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: Scalar> SymMatrix<T> {
    pub fn zeros(n: usize) -> Self {
        Self { n, a: vec![T::zero(); n * n] }
    }

    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        self.a[i * self.n + j] += v;
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.a[i * self.n + j]
    }

    /// Solves `A x = b` by Cholesky, adding a diagonal shift (scaled by the
    /// largest diagonal entry) if the factorization breaks down.
    pub fn solve(&self, b: &[T]) -> Option<Vec<T>> {
        let n = self.n;
        if n == 0 {
            return Some(Vec::new());
        }
        let dmax = (0..n).map(|i| self.get(i, i).abs()).fold(T::zero(), T::max).max(T::min_positive_value());
        let mut shift = T::zero();
        for _ in 0..8 {
            if let Some(l) = self.cholesky(shift) {
                return Some(cholesky_solve(&l, n, b));
            }
            shift = if shift == T::zero() { dmax * T::lit(1e-14) } else { shift * T::lit(100.0) };
        }
        None
    }

    fn cholesky(&self, shift: T) -> Option<Vec<T>> {
        let n = self.n;
        let mut l = vec![T::zero(); n * n];
        for j in 0..n {
            let mut d = self.get(j, j) + shift;
            for k in 0..j {
                d -= l[j * n + k] * l[j * n + k];
            }
            if !(d > T::zero()) {
                return None;
            }
            let d = d.sqrt();
            l[j * n + j] = d;
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l[i * n + k] * l[j * n + k];
                }
                l[i * n + j] = s / d;
            }
        }
        Some(l)
    }
}

fn cholesky_solve<T: Scalar>(l: &[T], n: usize, b: &[T]) -> Vec<T> {
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in (i + 1)..n {
            s -= l[k * n + i] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    y
}
