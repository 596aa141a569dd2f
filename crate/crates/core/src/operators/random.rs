//! Seeded random fixtures: states, Hermitian operators, unitaries.
//!
//! Every generator draws from a ChaCha8 stream seeded through
//! `SeedableRng::seed_from_u64`, with Gaussian variates produced by the
//! Box–Muller transform from 53-bit uniforms. All of this is fixed by the
//! crate so that fixtures reproduce bit-for-bit across platforms and
//! releases.

use num_complex::Complex;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::hermitian::{HermitianOperator, PureState};
use super::matrix::ComplexMatrix;
use crate::scalar::{real, Scalar};
use crate::{Error, Result};

/// Derives a stream seed from a root seed, splitmix64-style.
///
/// Batch sweeps hand `derive_seed(root, trial)` to each trial so results do
/// not depend on iteration order.
pub fn derive_seed(root: u64, index: u64) -> u64 {
    let mut z = root.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic Gaussian source over a ChaCha8 stream.
pub struct GaussianSource {
    rng: ChaCha8Rng,
    spare: Option<f64>,
}

impl GaussianSource {
    pub fn new(seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            spare: None,
        }
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn uniform(&mut self) -> f64 {
        (self.rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Standard normal variate via Box–Muller.
    pub fn gaussian(&mut self) -> f64 {
        if let Some(second) = self.spare.take() {
            return second;
        }
        let u1 = 1.0 - self.uniform(); // (0, 1]
        let u2 = self.uniform();
        let radius = (-2.0 * u1.ln()).sqrt();
        let angle = 2.0 * std::f64::consts::PI * u2;
        self.spare = Some(radius * angle.sin());
        radius * angle.cos()
    }

    /// Standard complex Gaussian (unit total variance).
    pub fn complex_gaussian<T: Scalar>(&mut self) -> Complex<T> {
        let scale = 0.5_f64.sqrt();
        let re = self.gaussian() * scale;
        let im = self.gaussian() * scale;
        Complex::new(real(re), real(im))
    }
}

fn ginibre<T: Scalar>(rows: usize, cols: usize, source: &mut GaussianSource) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| source.complex_gaussian())
}

/// Haar-random pure state from normalized complex Gaussian amplitudes.
pub fn random_pure_state<T: Scalar>(d: usize, seed: u64) -> PureState<T> {
    let mut source = GaussianSource::new(seed);
    let amplitudes: Vec<Complex<T>> = (0..d).map(|_| source.complex_gaussian()).collect();
    PureState::normalized(amplitudes).expect("Gaussian amplitudes are nonzero")
}

/// Random density matrix of the requested rank: `ρ = GG† / tr(GG†)` with a
/// `d×rank` complex Gaussian `G`. `rank = 1` gives a Haar-random pure state.
pub fn random_state<T: Scalar>(d: usize, rank: usize, seed: u64) -> Result<HermitianOperator<T>> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidInput(format!(
            "rank must lie in 1..={d}, got {rank}"
        )));
    }
    let mut source = GaussianSource::new(seed);
    let g = ginibre::<T>(d, rank, &mut source);
    let gram = g.mul(&g.dagger());
    let trace = gram.trace().re;
    HermitianOperator::new(gram.scale_re(T::one() / trace))
}

/// Random density matrix with equal mixing weights `1/rank` on orthonormal
/// eigenvectors. `rank = d` returns the maximally mixed state exactly.
pub fn random_state_equal_mix<T: Scalar>(
    d: usize,
    rank: usize,
    seed: u64,
) -> Result<HermitianOperator<T>> {
    if rank == 0 || rank > d {
        return Err(Error::InvalidInput(format!(
            "rank must lie in 1..={d}, got {rank}"
        )));
    }
    let mut source = GaussianSource::new(seed);
    let q = orthonormalize(ginibre::<T>(d, rank, &mut source));
    let projector = q.mul(&q.dagger());
    HermitianOperator::new(projector.scale_re(T::one() / crate::scalar::count(rank)))
}

/// Random Hermitian operator `(G + G†)/2` with Ginibre `G`.
pub fn random_hermitian<T: Scalar>(d: usize, seed: u64) -> HermitianOperator<T> {
    let mut source = GaussianSource::new(seed);
    let g = ginibre::<T>(d, d, &mut source);
    let half = T::one() / (T::one() + T::one());
    HermitianOperator::new(g.add(&g.dagger()).scale_re(half))
        .expect("symmetrized matrix is Hermitian")
}

/// Haar-distributed unitary from QR of a Ginibre matrix.
pub fn random_unitary<T: Scalar>(d: usize, seed: u64) -> ComplexMatrix<T> {
    let mut source = GaussianSource::new(seed);
    orthonormalize(ginibre::<T>(d, d, &mut source))
}

/// Modified Gram–Schmidt on columns, applied twice for stability.
fn orthonormalize<T: Scalar>(m: ComplexMatrix<T>) -> ComplexMatrix<T> {
    let rows = m.rows();
    let cols = m.cols();
    let mut basis: Vec<Vec<Complex<T>>> = (0..cols).map(|c| m.column(c)).collect();
    for _pass in 0..2 {
        for j in 0..cols {
            for k in 0..j {
                let proj = basis[k]
                    .iter()
                    .zip(&basis[j])
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                        acc + a.conj() * b
                    });
                let col_k = basis[k].clone();
                for (b, a) in basis[j].iter_mut().zip(col_k) {
                    *b = *b - a * proj;
                }
            }
            let norm = basis[j]
                .iter()
                .fold(T::zero(), |acc, a| acc + a.norm_sqr())
                .sqrt();
            for b in basis[j].iter_mut() {
                *b = b.scale(T::one() / norm);
            }
        }
    }
    ComplexMatrix::from_fn(rows, cols, |r, c| basis[c][r])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_mix_full_rank_is_maximally_mixed() {
        let rho = random_state_equal_mix::<f64>(3, 3, 5).unwrap();
        let expected = HermitianOperator::scaled_identity(3, 1.0 / 3.0);
        assert!(rho.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn rank_one_state_is_pure() {
        let rho = random_state::<f64>(4, 1, 77).unwrap();
        let purity = rho.matrix().mul(rho.matrix()).trace().re;
        assert!((purity - 1.0).abs() < 1e-12);
        assert!((rho.trace_re() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn same_seed_is_bit_identical() {
        let a = random_state::<f64>(3, 2, 123).unwrap();
        let b = random_state::<f64>(3, 2, 123).unwrap();
        assert_eq!(a.matrix(), b.matrix());
        let u = random_unitary::<f64>(3, 9);
        let v = random_unitary::<f64>(3, 9);
        assert_eq!(u, v);
    }

    #[test]
    fn rank_out_of_range_rejected() {
        assert!(random_state::<f64>(2, 0, 1).is_err());
        assert!(random_state::<f64>(2, 3, 1).is_err());
    }

    #[test]
    fn unitary_is_unitary() {
        let u = random_unitary::<f64>(4, 31);
        let gram = u.dagger().mul(&u);
        assert!(gram.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-13);
    }

    #[test]
    fn derived_seeds_differ() {
        let s0 = derive_seed(42, 0);
        let s1 = derive_seed(42, 1);
        assert_ne!(s0, s1);
        assert_eq!(s0, derive_seed(42, 0));
    }
}
