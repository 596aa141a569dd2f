//! Haar moments of pure-state space.

use itertools::Itertools;

use super::hermitian::HermitianOperator;
use super::matrix::ComplexMatrix;
use super::perm::PermutationOperator;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// Dimension of the permutation-symmetric subspace, `binom(d+t−1, t)`.
pub fn symmetric_subspace_dim(d: usize, t: usize) -> u128 {
    let mut acc: u128 = 1;
    for k in 0..t as u128 {
        acc = acc * (d as u128 + k) / (k + 1);
    }
    acc
}

/// The `t`-th moment of pure-state space: the Haar average of `ψ^{⊗t}`.
///
/// Evaluates `binom(d+t−1,t)⁻¹ (1/t!) Σ_π T_π`, which equals the normalized
/// projector onto the symmetric subspace. Unit trace and PSD by
/// construction.
pub fn haar_moment<T: Scalar>(d: usize, t: usize) -> Result<HermitianOperator<T>> {
    if d < 2 {
        return Err(Error::InvalidInput(format!(
            "local dimension must be at least 2, got {d}"
        )));
    }
    if t < 1 {
        return Err(Error::InvalidInput(
            "moment order must be at least 1".into(),
        ));
    }
    let dim = d.pow(t as u32);
    let mut sum = ComplexMatrix::<T>::zeros(dim, dim);
    let mut n_perms: u128 = 0;
    for perm in (0..t).permutations(t) {
        let op = PermutationOperator::new(perm, d)?;
        sum = sum.add(&op.matrix());
        n_perms += 1;
    }
    let denom = symmetric_subspace_dim(d, t) * n_perms;
    let scale = T::one()
        / T::from_u128(denom).ok_or_else(|| {
            Error::InvalidInput(format!(
                "moment normalization {denom} overflows the scalar type"
            ))
        })?;
    HermitianOperator::new(sum.scale_re(scale))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::eig::is_psd;
    use crate::operators::random::random_unitary;

    #[test]
    fn binomials() {
        assert_eq!(symmetric_subspace_dim(2, 1), 2);
        assert_eq!(symmetric_subspace_dim(2, 2), 3);
        assert_eq!(symmetric_subspace_dim(2, 3), 4);
        assert_eq!(symmetric_subspace_dim(4, 3), 20);
    }

    #[test]
    fn first_moment_is_maximally_mixed() {
        let m = haar_moment::<f64>(2, 1).unwrap();
        let expected = HermitianOperator::scaled_identity(2, 0.5);
        assert!(m.matrix().max_abs_diff(expected.matrix()) < 1e-15);
    }

    #[test]
    fn second_moment_matches_swap_identity() {
        // (I⊗I + S) / (d(d+1)) at d = 2
        let m = haar_moment::<f64>(2, 2).unwrap();
        let swap = PermutationOperator::swap(2).unwrap().matrix::<f64>();
        let expected = ComplexMatrix::<f64>::identity(4)
            .add(&swap)
            .scale_re(1.0 / 6.0);
        assert!(m.matrix().max_abs_diff(&expected) < 1e-15);
        assert!((m.trace_re() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn third_moment_structure() {
        let m = haar_moment::<f64>(2, 3).unwrap();
        assert!((m.trace_re() - 1.0).abs() < 1e-13);
        // direct construction: all six permutation operators, scaled by
        // 1/(binom(4,3)·3!) = 1/24
        use itertools::Itertools;
        let mut sum = ComplexMatrix::<f64>::zeros(8, 8);
        for perm in (0..3).permutations(3) {
            sum = sum.add(&PermutationOperator::new(perm, 2).unwrap().matrix());
        }
        assert!(m.matrix().max_abs_diff(&sum.scale_re(1.0 / 24.0)) < 1e-15);
        assert!(is_psd(&m, 1e-12));
    }

    #[test]
    fn moments_are_unit_trace_and_psd() {
        for (d, t) in [(2usize, 2usize), (3, 2), (4, 2)] {
            let m = haar_moment::<f64>(d, t).unwrap();
            assert!((m.trace_re() - 1.0).abs() < 1e-12);
            assert!(is_psd(&m, 1e-12), "d = {d}, t = {t}");
        }
    }

    #[test]
    fn commutes_with_local_unitaries() {
        for (d, t) in [(2usize, 2usize), (2, 3), (3, 2)] {
            let m = haar_moment::<f64>(d, t).unwrap();
            for trial in 0..20 {
                let u = random_unitary::<f64>(d, 9000 + trial);
                let mut u_power = u.clone();
                for _ in 1..t {
                    u_power = u_power.kron(&u);
                }
                let left = u_power.mul(m.matrix());
                let right = m.matrix().mul(&u_power);
                assert!(left.max_abs_diff(&right) < 1e-10);
            }
        }
    }
}
