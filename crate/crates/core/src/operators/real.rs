//! Dense real matrices and the Moore–Penrose pseudoinverse.
//!
//! The conditional-probability matrix `P`, Born matrices `Φ`, and the Jordan
//! multiplication matrix are all real; this module gives them a home without
//! round-tripping through complex storage.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix<T> {
    rows: usize,
    cols: usize,
    entries: Vec<T>,
}

impl<T: Scalar> RealMatrix<T> {
    pub fn new(rows: usize, cols: usize, entries: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!(
                "matrix must have positive shape, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "expected {} entries for a {rows}x{cols} matrix, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let nrows = rows.len();
        let ncols = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != ncols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(nrows, ncols, rows.into_iter().flatten().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![T::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    /// Matrix with every entry one.
    pub fn ones(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![T::one(); rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut entries = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                entries.push(f(r, c));
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: T) {
        self.entries[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in add"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a + *b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in sub"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| *a - *b)
            .collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn scale(&self, factor: T) -> Self {
        let entries = self.entries.iter().map(|a| *a * factor).collect();
        Self {
            rows: self.rows,
            cols: self.cols,
            entries,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch in mul");
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == T::zero() {
                    continue;
                }
                let out_row = r * other.cols;
                let rhs_row = k * other.cols;
                for c in 0..other.cols {
                    out.entries[out_row + c] =
                        out.entries[out_row + c] + a * other.entries[rhs_row + c];
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len(), "vector length mismatch in mul_vec");
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, x)| acc + *a * *x)
            })
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self.get(c, r))
    }

    pub fn max_norm(&self) -> T {
        self.entries.iter().map(|a| a.abs()).fold(T::zero(), T::max)
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(
            (self.rows, self.cols),
            (other.rows, other.cols),
            "shape mismatch in max_abs_diff"
        );
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }

    pub fn symmetry_defect(&self) -> T {
        assert!(self.rows == self.cols, "symmetry of non-square matrix");
        let mut worst = T::zero();
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                worst = worst.max((self.get(r, c) - self.get(c, r)).abs());
            }
        }
        worst
    }

    pub fn to_complex(&self) -> ComplexMatrix<T> {
        ComplexMatrix::from_fn(self.rows, self.cols, |r, c| {
            Complex::new(self.get(r, c), T::zero())
        })
    }

    /// Moore–Penrose pseudoinverse via one-sided Jacobi SVD.
    ///
    /// Singular values below `rel_cutoff · σ_max` are treated as zero. The
    /// rotation sweep order is fixed (cyclic by column pairs), so the result
    /// is deterministic.
    pub fn pseudoinverse(&self, rel_cutoff: T) -> Self {
        let (u, sigma, v) = one_sided_jacobi_svd(self);
        let sigma_max = sigma.iter().fold(T::zero(), |acc, s| acc.max(*s));
        let cutoff = rel_cutoff * sigma_max;
        // pinv = Σ_{σ_k > cutoff} v_k u_kᵀ / σ_k
        let mut out = Self::zeros(self.cols, self.rows);
        for (k, s) in sigma.iter().enumerate() {
            if *s <= cutoff || *s == T::zero() {
                continue;
            }
            let inv = T::one() / *s;
            for r in 0..self.cols {
                let vrk = v.get(r, k) * inv;
                for c in 0..self.rows {
                    let cur = out.get(r, c);
                    out.set(r, c, cur + vrk * u.get(c, k));
                }
            }
        }
        out
    }
}

/// One-sided Jacobi SVD: returns `(U, σ, V)` with `A = U diag(σ) Vᵀ`.
///
/// Columns of `U` associated with zero singular values are left as zero
/// vectors; callers that only build the pseudoinverse never touch them.
fn one_sided_jacobi_svd<T: Scalar>(a: &RealMatrix<T>) -> (RealMatrix<T>, Vec<T>, RealMatrix<T>) {
    let m = a.rows();
    let n = a.cols();
    let mut work = a.clone();
    let mut v = RealMatrix::identity(n);
    let eps = T::epsilon();

    let col_dot = |w: &RealMatrix<T>, p: usize, q: usize| -> T {
        (0..m).fold(T::zero(), |acc, r| acc + w.get(r, p) * w.get(r, q))
    };

    for _sweep in 0..100 {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = col_dot(&work, p, p);
                let beta = col_dot(&work, q, q);
                let gamma = col_dot(&work, p, q);
                if gamma.abs() <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / ((T::one() + T::one()) * gamma);
                let t = if zeta == T::zero() {
                    T::one()
                } else {
                    zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for r in 0..m {
                    let wp = work.get(r, p);
                    let wq = work.get(r, q);
                    work.set(r, p, c * wp - s * wq);
                    work.set(r, q, s * wp + c * wq);
                }
                for r in 0..n {
                    let vp = v.get(r, p);
                    let vq = v.get(r, q);
                    v.set(r, p, c * vp - s * vq);
                    v.set(r, q, s * vp + c * vq);
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut u = RealMatrix::zeros(m, n);
    let mut sigma = vec![T::zero(); n];
    for (k, slot) in sigma.iter_mut().enumerate() {
        let norm = col_dot(&work, k, k).sqrt();
        *slot = norm;
        if norm > T::zero() {
            for r in 0..m {
                u.set(r, k, work.get(r, k) / norm);
            }
        }
    }
    (u, sigma, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pseudoinverse_of_invertible_is_inverse() {
        let a = RealMatrix::from_rows(vec![vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let pinv = a.pseudoinverse(1e-10);
        let prod = a.mul(&pinv);
        assert!(prod.max_abs_diff(&RealMatrix::identity(2)) < 1e-13);
    }

    #[test]
    fn pseudoinverse_penrose_conditions_rank_deficient() {
        // rank-2 matrix on R^4
        let a = RealMatrix::from_rows(vec![
            vec![1.0, 0.0, 1.0, 0.0],
            vec![0.0, 1.0, 0.0, 1.0],
            vec![1.0, 1.0, 1.0, 1.0],
            vec![2.0, 1.0, 2.0, 1.0],
        ])
        .unwrap();
        let pinv = a.pseudoinverse(1e-10);
        let apa = a.mul(&pinv).mul(&a);
        assert!(apa.max_abs_diff(&a) < 1e-12, "A Φ A = A");
        let pap = pinv.mul(&a).mul(&pinv);
        assert!(pap.max_abs_diff(&pinv) < 1e-12, "Φ A Φ = Φ");
        let ap = a.mul(&pinv);
        assert!(ap.max_abs_diff(&ap.transpose()) < 1e-12, "A Φ symmetric");
        let pa = pinv.mul(&a);
        assert!(pa.max_abs_diff(&pa.transpose()) < 1e-12, "Φ A symmetric");
    }

    #[test]
    fn svd_reconstructs() {
        let a = RealMatrix::from_rows(vec![
            vec![0.5, -0.25, 0.0],
            vec![1.5, 2.0, -1.0],
            vec![0.0, 0.75, 0.25],
        ])
        .unwrap();
        let (u, sigma, v) = one_sided_jacobi_svd(&a);
        let mut rebuilt = RealMatrix::zeros(3, 3);
        for (k, s_k) in sigma.iter().enumerate() {
            for r in 0..3 {
                for c in 0..3 {
                    let cur = rebuilt.get(r, c);
                    rebuilt.set(r, c, cur + s_k * u.get(r, k) * v.get(c, k));
                }
            }
        }
        assert!(rebuilt.max_abs_diff(&a) < 1e-13);
    }
}
