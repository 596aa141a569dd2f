//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Row-cyclic sweeps with deterministic pair order; each rotation zeroes one
//! off-diagonal entry through a complex Givens rotation. Accuracy is ample
//! for the dimensions this crate works at (d ≤ 64).

use num_complex::Complex;

use super::hermitian::HermitianOperator;
use super::matrix::ComplexMatrix;
use crate::scalar::Scalar;

/// Spectral decomposition `A = V Λ V†`.
#[derive(Debug, Clone)]
pub struct Eigendecomposition<T> {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<T>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub eigenvectors: ComplexMatrix<T>,
}

/// Diagonalizes a Hermitian operator.
pub fn hermitian_eig<T: Scalar>(op: &HermitianOperator<T>) -> Eigendecomposition<T> {
    let n = op.dim();
    let mut a = op.matrix().clone();
    let mut v = ComplexMatrix::<T>::identity(n);
    let two = T::one() + T::one();

    let off_norm = |m: &ComplexMatrix<T>| -> T {
        let mut acc = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                acc = acc + m.get(p, q).norm_sqr();
            }
        }
        acc.sqrt()
    };
    let stop = T::epsilon() * crate::scalar::count::<T>(n.max(1)) * op.matrix().frobenius_norm();

    for _sweep in 0..100 {
        if off_norm(&a) <= stop {
            break;
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let gamma = a.get(p, q);
                let m = gamma.norm();
                if m == T::zero() {
                    continue;
                }
                let alpha = a.get(p, p).re;
                let beta = a.get(q, q).re;
                // phase w = γ/|γ|, so the 2x2 block becomes real symmetric
                let w = gamma.scale(T::one() / m);
                let tau = (alpha - beta) / (two * m);
                let t = if tau == T::zero() {
                    T::one()
                } else {
                    tau.signum() / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                let ws = w.scale(s);
                let wcs = w.conj().scale(s);

                // A ← U† A U with U = I except U_pp = c, U_pq = −w s,
                // U_qp = conj(w) s, U_qq = c.
                for k in 0..n {
                    let akp = a.get(k, p);
                    let akq = a.get(k, q);
                    a.set(k, p, akp.scale(c) + akq * wcs);
                    a.set(k, q, akq.scale(c) - akp * ws);
                }
                for k in 0..n {
                    let apk = a.get(p, k);
                    let aqk = a.get(q, k);
                    a.set(p, k, apk.scale(c) + aqk * ws);
                    a.set(q, k, aqk.scale(c) - apk * wcs);
                }
                // Clean the rotated pair so roundoff cannot leave a residue
                // with a spurious imaginary diagonal part.
                let app = a.get(p, p);
                let aqq = a.get(q, q);
                a.set(p, p, Complex::new(app.re, T::zero()));
                a.set(q, q, Complex::new(aqq.re, T::zero()));
                a.set(p, q, Complex::new(T::zero(), T::zero()));
                a.set(q, p, Complex::new(T::zero(), T::zero()));

                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp.scale(c) + vkq * wcs);
                    v.set(k, q, vkq.scale(c) - vkp * ws);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a.get(j, j)
            .re
            .partial_cmp(&a.get(i, i).re)
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let eigenvalues = order.iter().map(|&i| a.get(i, i).re).collect();
    let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| v.get(r, order[c]));
    Eigendecomposition {
        eigenvalues,
        eigenvectors,
    }
}

/// Smallest eigenvalue of a Hermitian operator.
pub fn min_eigenvalue<T: Scalar>(op: &HermitianOperator<T>) -> T {
    let eig = hermitian_eig(op);
    *eig.eigenvalues.last().expect("nonempty spectrum")
}

/// `true` iff the smallest eigenvalue is at least `−tol`.
pub fn is_psd<T: Scalar>(op: &HermitianOperator<T>, tol: T) -> bool {
    min_eigenvalue(op) >= -tol
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::hermitian::PureState;
    use crate::operators::random::{random_hermitian, random_state};
    use num_complex::Complex64;

    fn reconstruct(eig: &Eigendecomposition<f64>, n: usize) -> ComplexMatrix<f64> {
        let v = &eig.eigenvectors;
        let mut lambda = ComplexMatrix::<f64>::zeros(n, n);
        for i in 0..n {
            lambda.set(i, i, Complex64::new(eig.eigenvalues[i], 0.0));
        }
        v.mul(&lambda).mul(&v.dagger())
    }

    #[test]
    fn diagonal_matrix_eigenvalues_sorted() {
        let mut m = ComplexMatrix::<f64>::zeros(2, 2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(3.0, 0.0));
        let op = HermitianOperator::new(m).unwrap();
        let eig = hermitian_eig(&op);
        assert_eq!(eig.eigenvalues, vec![3.0, 1.0]);
    }

    #[test]
    fn rank_one_projector_spectrum() {
        let r = 0.5_f64.sqrt();
        let plus = PureState::new(vec![Complex64::new(r, 0.0), Complex64::new(r, 0.0)]).unwrap();
        let eig = hermitian_eig(&plus.projector());
        assert!((eig.eigenvalues[0] - 1.0).abs() < 1e-14);
        assert!(eig.eigenvalues[1].abs() < 1e-14);
    }

    #[test]
    fn random_hermitian_reconstruction() {
        for trial in 0..20 {
            let op = random_hermitian::<f64>(6, 42 + trial);
            let eig = hermitian_eig(&op);
            let rebuilt = reconstruct(&eig, 6);
            assert!(rebuilt.max_abs_diff(op.matrix()) < 1e-10);
        }
    }

    #[test]
    fn eigenvectors_are_orthonormal() {
        let op = random_hermitian::<f64>(8, 7);
        let eig = hermitian_eig(&op);
        let gram = eig.eigenvectors.dagger().mul(&eig.eigenvectors);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(8)) < 1e-12);
    }

    #[test]
    fn psd_checks() {
        let id = HermitianOperator::<f64>::identity(2);
        assert!(is_psd(&id, 0.0));

        let mut m = ComplexMatrix::<f64>::zeros(2, 2);
        m.set(0, 0, Complex64::new(1.0, 0.0));
        m.set(1, 1, Complex64::new(-0.5, 0.0));
        let op = HermitianOperator::new(m).unwrap();
        assert!(!is_psd(&op, 1e-9));

        let rho = random_state::<f64>(4, 1, 99).unwrap();
        assert!(is_psd(&rho, 1e-10));
    }

    #[test]
    fn density_matrix_spectrum_is_a_distribution() {
        for trial in 0..10 {
            let rho = random_state::<f64>(4, 3, 500 + trial).unwrap();
            let eig = hermitian_eig(&rho);
            let sum: f64 = eig.eigenvalues.iter().sum();
            assert!((sum - 1.0).abs() < 1e-12);
            for lambda in &eig.eigenvalues {
                assert!(*lambda >= -1e-12 && *lambda <= 1.0 + 1e-12);
            }
        }
    }
}
