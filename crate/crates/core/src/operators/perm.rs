//! Permutation operators on tensor-power spaces.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::scalar::Scalar;
use crate::{Error, Result};

/// The operator `T_π` permuting `t` tensor factors of local dimension `d`.
///
/// Factor `j` of the input is routed to factor `π(j)` of the output, so the
/// swap `π = [1, 0]` acts as `Σ_{a,b} |b,a⟩⟨a,b|` and a 3-cycle reproduces
/// `tr(T_π (X⊗Y⊗Z)) = tr` of the cycle-ordered product.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PermutationOperator {
    perm: Vec<usize>,
    local_dim: usize,
}

impl PermutationOperator {
    /// Builds `T_π` for a bijection `perm` on `{0, …, t−1}`.
    pub fn new(perm: Vec<usize>, local_dim: usize) -> Result<Self> {
        if local_dim < 2 {
            return Err(Error::InvalidInput(format!(
                "local dimension must be at least 2, got {local_dim}"
            )));
        }
        let t = perm.len();
        if t == 0 {
            return Err(Error::InvalidInput("permutation must be nonempty".into()));
        }
        let mut seen = vec![false; t];
        for &image in &perm {
            if image >= t || seen[image] {
                return Err(Error::InvalidInput(format!(
                    "{perm:?} is not a bijection on 0..{t}"
                )));
            }
            seen[image] = true;
        }
        Ok(Self { perm, local_dim })
    }

    /// Identity permutation on `t` factors.
    pub fn identity(t: usize, local_dim: usize) -> Result<Self> {
        Self::new((0..t).collect(), local_dim)
    }

    /// The two-factor swap.
    pub fn swap(local_dim: usize) -> Result<Self> {
        Self::new(vec![1, 0], local_dim)
    }

    pub fn factors(&self) -> usize {
        self.perm.len()
    }

    pub fn local_dim(&self) -> usize {
        self.local_dim
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    /// Total dimension `d^t`.
    pub fn dim(&self) -> usize {
        self.local_dim.pow(self.factors() as u32)
    }

    /// Cycle decomposition; within each cycle, successor = `π⁻¹`.
    ///
    /// Traversing via the inverse makes the cycle order match the matrix
    /// product appearing in `tr(T_π ⊗_j X_j)`.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let t = self.factors();
        let mut inverse = vec![0; t];
        for (j, &image) in self.perm.iter().enumerate() {
            inverse[image] = j;
        }
        let mut seen = vec![false; t];
        let mut cycles = Vec::new();
        for start in 0..t {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut cur = start;
            while !seen[cur] {
                seen[cur] = true;
                cycle.push(cur);
                cur = inverse[cur];
            }
            cycles.push(cycle);
        }
        cycles
    }

    /// Dense 0/1 matrix of `T_π` on the `d^t`-dimensional space.
    ///
    /// Multi-indices are big-endian: factor 0 is the most significant digit.
    pub fn matrix<T: Scalar>(&self) -> ComplexMatrix<T> {
        let d = self.local_dim;
        let t = self.factors();
        let dim = self.dim();
        let one = Complex::new(T::one(), T::zero());
        let mut m = ComplexMatrix::<T>::zeros(dim, dim);
        let mut digits = vec![0usize; t];
        for col in 0..dim {
            let mut rem = col;
            for j in (0..t).rev() {
                digits[j] = rem % d;
                rem /= d;
            }
            let mut row = 0usize;
            let mut out = vec![0usize; t];
            for j in 0..t {
                out[self.perm[j]] = digits[j];
            }
            for &digit in &out {
                row = row * d + digit;
            }
            m.set(row, col, one);
        }
        m
    }
}
