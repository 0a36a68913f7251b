//! Dense Gaussian elimination for the small systems the optimizers build.

use crate::scalar::Real;

pub(crate) fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub(crate) fn norm<T: Real>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

/// LU factors with partial pivoting of a square row-major matrix.
pub(crate) struct Lu<T> {
    lu: Vec<Vec<T>>,
    perm: Vec<usize>,
}

impl<T: Real> Lu<T> {
    /// `None` when a pivot falls below `rel_tol` times the largest entry.
    pub fn factor(mut a: Vec<Vec<T>>, rel_tol: T) -> Option<Self> {
        let n = a.len();
        let scale = a
            .iter()
            .flatten()
            .fold(T::zero(), |m, &x| m.max(x.abs()));
        if !(scale > T::zero()) || !scale.is_finite() {
            return None;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().partial_cmp(&a[j][k].abs()).unwrap())
                .unwrap();
            if a[p][k].abs() <= rel_tol * scale {
                return None;
            }
            a.swap(k, p);
            perm.swap(k, p);
            for i in k + 1..n {
                let m = a[i][k] / a[k][k];
                a[i][k] = m;
                for j in k + 1..n {
                    let akj = a[k][j];
                    a[i][j] = a[i][j] - m * akj;
                }
            }
        }
        Some(Self { lu: a, perm })
    }

    /// Solve `A x = b`.
    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.len();
        let mut y: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                y[i] = y[i] - self.lu[i][j] * y[j];
            }
            y[i] = y[i] / self.lu[i][i];
        }
        y
    }

    /// Solve `Aᵀ x = b`.
    pub fn solve_transpose(&self, b: &[T]) -> Vec<T> {
        let n = self.lu.len();
        // Aᵀ = Uᵀ Lᵀ P
        let mut z = b.to_vec();
        for i in 0..n {
            for j in 0..i {
                z[i] = z[i] - self.lu[j][i] * z[j];
            }
            z[i] = z[i] / self.lu[i][i];
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                z[i] = z[i] - self.lu[j][i] * z[j];
            }
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = z[k];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_transposes() {
        let a = vec![vec![0.0, 2.0, 1.0], vec![1.0, 1.0, 0.0], vec![3.0, 0.0, 1.0]];
        let lu = Lu::factor(a.clone(), 1e-14).unwrap();
        let b = [1.0, 2.0, 3.0];
        let x = lu.solve(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[i][j] * x[j]).sum();
            assert!((r - b[i]).abs() < 1e-12);
        }
        let y = lu.solve_transpose(&b);
        for i in 0..3 {
            let r: f64 = (0..3).map(|j| a[j][i] * y[j]).sum();
            assert!((r - b[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn singular_detected() {
        assert!(Lu::factor(vec![vec![1.0, 2.0], vec![2.0, 4.0]], 1e-12).is_none());
        assert!(Lu::factor(vec![vec![0.0f64]], 1e-12).is_none());
    }
}
