//! Catalogued pure-state ensembles and t-design verification.
//!
//! An ensemble `{p_i, |ψ_i⟩}` is a t-design when its t-th moment operator
//! `Σ_i p_i (ψ_i ψ_i†)^{⊗t}` equals the Haar moment of pure-state space.
//! Verification compares the two operators entrywise and cross-checks with
//! the frame potential `Σ_ij p_i p_j |⟨ψ_i|ψ_j⟩|^{2t}`, which is minimized
//! exactly by t-designs.

use num_complex::Complex;
use serde::Serialize;

use crate::operators::{
    haar_moment, symmetric_subspace_dim, ComplexMatrix, HermitianOperator, PureState,
};
use crate::scalar::{count, real, Scalar};
use crate::{Error, Result};

/// Default tolerance on weight normalization.
pub const TOL_WEIGHTS: f64 = 1e-12;

/// A weighted list of pure states on a common Hilbert space.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedEnsemble<T> {
    d: usize,
    states: Vec<PureState<T>>,
    weights: Vec<T>,
}

impl<T: Scalar> WeightedEnsemble<T> {
    /// Builds an ensemble, validating dimensions and weight normalization.
    pub fn new(d: usize, states: Vec<PureState<T>>, weights: Vec<T>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidInput(
                "ensemble must contain at least one state".into(),
            ));
        }
        if states.len() != weights.len() {
            return Err(Error::Dimension(format!(
                "{} states but {} weights",
                states.len(),
                weights.len()
            )));
        }
        if let Some(bad) = states.iter().find(|s| s.dim() != d) {
            return Err(Error::Dimension(format!(
                "state of dimension {} in ensemble of dimension {d}",
                bad.dim()
            )));
        }
        let tol = real::<T>(TOL_WEIGHTS);
        if weights.iter().any(|w| *w < -tol) {
            return Err(Error::Validation(
                "ensemble weights must be nonnegative".into(),
            ));
        }
        let total = weights.iter().fold(T::zero(), |acc, w| acc + *w);
        if (total - T::one()).abs() > tol {
            return Err(Error::Validation(format!(
                "ensemble weights sum to {total}, not 1"
            )));
        }
        Ok(Self { d, states, weights })
    }

    /// Builds an unbiased ensemble with weights `1/n`.
    pub fn unbiased(d: usize, states: Vec<PureState<T>>) -> Result<Self> {
        let n = states.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "ensemble must contain at least one state".into(),
            ));
        }
        let w = T::one() / count(n);
        Self::new(d, states, vec![w; n])
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn states(&self) -> &[PureState<T>] {
        &self.states
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// `true` iff every weight equals `1/n` within [`TOL_WEIGHTS`].
    pub fn is_unbiased(&self) -> bool {
        let w = T::one() / count(self.len());
        let tol = real::<T>(TOL_WEIGHTS);
        self.weights.iter().all(|x| (*x - w).abs() <= tol)
    }
}

/// Outcome of a t-design test.
#[derive(Debug, Clone, Serialize)]
pub struct DesignCertificate<T> {
    /// Order tested.
    pub t: usize,
    /// Max-norm of `moment_operator − haar_moment`.
    pub moment_residual: T,
    /// `Σ_ij p_i p_j |⟨ψ_i|ψ_j⟩|^{2t}`.
    pub frame_potential: T,
    /// `1 / binom(d+t−1, t)`, attained exactly by t-designs.
    pub frame_potential_target: T,
    /// Tolerance the verdict was issued at.
    pub tolerance: T,
    /// `moment_residual ≤ tolerance`.
    pub passed: bool,
}

/// `Σ_i p_i (ψ_i ψ_i†)^{⊗t}`.
pub fn moment_operator<T: Scalar>(ens: &WeightedEnsemble<T>, t: usize) -> HermitianOperator<T> {
    assert!(t >= 1, "moment order must be at least 1");
    let dim = ens.dim().pow(t as u32);
    let mut sum = ComplexMatrix::<T>::zeros(dim, dim);
    for (state, weight) in ens.states().iter().zip(ens.weights()) {
        let power = state.tensor_power(t);
        sum = sum.add(&ComplexMatrix::outer(&power, &power).scale_re(*weight));
    }
    HermitianOperator::new(sum).expect("moment operator is Hermitian by construction")
}

/// Frame potential `Σ_ij p_i p_j |⟨ψ_i|ψ_j⟩|^{2t}`.
///
/// Bounded below by `1/binom(d+t−1,t)` with equality exactly on t-designs.
pub fn frame_potential<T: Scalar>(ens: &WeightedEnsemble<T>, t: usize) -> T {
    assert!(t >= 1, "frame potential order must be at least 1");
    let n = ens.len();
    let mut acc = T::zero();
    for i in 0..n {
        for j in 0..n {
            let overlap_sqr = ens.states()[i].overlap(&ens.states()[j]).norm_sqr();
            acc = acc + ens.weights()[i] * ens.weights()[j] * overlap_sqr.powi(t as i32);
        }
    }
    acc
}

/// Frame-potential target `1/binom(d+t−1,t)`.
pub fn frame_potential_target<T: Scalar>(d: usize, t: usize) -> T {
    T::one()
        / T::from_u128(symmetric_subspace_dim(d, t)).expect("target representable in scalar type")
}

/// Tests the t-design property at tolerance `tol` (max-norm on the moment
/// residual) and records the frame potential as a cross-check.
pub fn is_t_design<T: Scalar>(ens: &WeightedEnsemble<T>, t: usize, tol: T) -> DesignCertificate<T> {
    assert!(tol > T::zero(), "tolerance must be positive");
    let moment = moment_operator(ens, t);
    let haar = haar_moment::<T>(ens.dim(), t).expect("valid dimension and order");
    let moment_residual = moment.matrix().max_abs_diff(haar.matrix());
    DesignCertificate {
        t,
        moment_residual,
        frame_potential: frame_potential(ens, t),
        frame_potential_target: frame_potential_target(ens.dim(), t),
        tolerance: tol,
        passed: moment_residual <= tol,
    }
}

/// The six eigenstates of the three Pauli operators, ordered
/// `(z+, z−, x+, x−, y+, y−)`: the complete set of qubit MUBs, a 3-design.
pub fn mub_qubit<T: Scalar>() -> WeightedEnsemble<T> {
    let zero = T::zero();
    let one = T::one();
    let r = (one / (one + one)).sqrt();
    let c = |re: T, im: T| Complex::new(re, im);
    let states = vec![
        PureState::normalized(vec![c(one, zero), c(zero, zero)]),
        PureState::normalized(vec![c(zero, zero), c(one, zero)]),
        PureState::normalized(vec![c(r, zero), c(r, zero)]),
        PureState::normalized(vec![c(r, zero), c(-r, zero)]),
        PureState::normalized(vec![c(r, zero), c(zero, r)]),
        PureState::normalized(vec![c(r, zero), c(zero, -r)]),
    ]
    .into_iter()
    .collect::<Result<_>>()
    .expect("MUB amplitudes are nonzero");
    WeightedEnsemble::unbiased(2, states).expect("six unbiased states")
}

/// Four states at the vertices of a regular Bloch-sphere tetrahedron with
/// the first vertex at `|0⟩`: a qubit SIC, a 2-design but not a 3-design.
pub fn sic_qubit<T: Scalar>() -> WeightedEnsemble<T> {
    let zero = T::zero();
    let one = T::one();
    let three = one + one + one;
    let a = (one / three).sqrt(); // cos(θ/2) with cos θ = −1/3
    let b = ((one + one) / three).sqrt(); // sin(θ/2)
    let phase = |sign: T| {
        let angle = sign * (one + one) * T::PI() / three;
        Complex::from_polar(b, angle)
    };
    let states = vec![
        PureState::normalized(vec![Complex::new(one, zero), Complex::new(zero, zero)]),
        PureState::normalized(vec![Complex::new(a, zero), Complex::new(b, zero)]),
        PureState::normalized(vec![Complex::new(a, zero), phase(one)]),
        PureState::normalized(vec![Complex::new(a, zero), phase(-one)]),
    ]
    .into_iter()
    .collect::<Result<_>>()
    .expect("SIC amplitudes are nonzero");
    WeightedEnsemble::unbiased(2, states).expect("four unbiased states")
}

/// All stabilizer states on `m` qubits (`m ∈ {1, 2}`) as an unbiased
/// ensemble in canonical order: 6 states for one qubit, 60 for two.
///
/// States are enumerated as joint `+1` eigenspaces of pairs of commuting,
/// independent, signed Pauli operators, deduplicated by projector distance,
/// and sorted lexicographically by amplitudes rounded to 12 decimal digits
/// so file outputs are deterministic.
pub fn stabilizer_states<T: Scalar>(m: usize) -> Result<WeightedEnsemble<T>> {
    match m {
        1 => {
            let mut states = Vec::new();
            for p in 1..4usize {
                for sign in [T::one(), -T::one()] {
                    let projector = single_pauli::<T>(p)
                        .scale_re(sign)
                        .add(&ComplexMatrix::identity(2))
                        .scale_re(T::one() / (T::one() + T::one()));
                    states.push(state_from_projector(&projector));
                }
            }
            dedup_and_sort(&mut states);
            debug_assert_eq!(states.len(), 6);
            WeightedEnsemble::unbiased(2, states)
        }
        2 => {
            let half = T::one() / (T::one() + T::one());
            let quarter = half * half;
            let identity = ComplexMatrix::<T>::identity(4);
            let mut states: Vec<PureState<T>> = Vec::new();
            let mut projectors: Vec<ComplexMatrix<T>> = Vec::new();
            let dedup_tol = real::<T>(1e-9);
            for first in 1..16usize {
                for second in 1..16usize {
                    if second == first || !paulis_commute(first, second) {
                        continue;
                    }
                    for s1 in [T::one(), -T::one()] {
                        for s2 in [T::one(), -T::one()] {
                            let g1 = two_qubit_pauli::<T>(first).scale_re(s1);
                            let g2 = two_qubit_pauli::<T>(second).scale_re(s2);
                            let projector =
                                identity.add(&g1).mul(&identity.add(&g2)).scale_re(quarter);
                            // the group ⟨g1, g2⟩ never contains −I here, so
                            // each projector has rank 1
                            debug_assert!((projector.trace().re - T::one()).abs() < real(1e-9));
                            if projectors
                                .iter()
                                .any(|p| p.max_abs_diff(&projector) < dedup_tol)
                            {
                                continue;
                            }
                            states.push(state_from_projector(&projector));
                            projectors.push(projector);
                        }
                    }
                }
            }
            dedup_and_sort(&mut states);
            debug_assert_eq!(states.len(), 60);
            WeightedEnsemble::unbiased(4, states)
        }
        _ => Err(Error::InvalidInput(format!(
            "stabilizer enumeration supports 1 or 2 qubits, got {m}"
        ))),
    }
}

/// Single-qubit Pauli matrix for label 0 = I, 1 = X, 2 = Y, 3 = Z.
fn single_pauli<T: Scalar>(label: usize) -> ComplexMatrix<T> {
    let zero = T::zero();
    let one = T::one();
    let c = |re: T, im: T| Complex::new(re, im);
    let entries = match label {
        0 => vec![c(one, zero), c(zero, zero), c(zero, zero), c(one, zero)],
        1 => vec![c(zero, zero), c(one, zero), c(one, zero), c(zero, zero)],
        2 => vec![c(zero, zero), c(zero, -one), c(zero, one), c(zero, zero)],
        3 => vec![c(one, zero), c(zero, zero), c(zero, zero), c(-one, zero)],
        _ => unreachable!("Pauli label out of range"),
    };
    ComplexMatrix::new(2, 2, entries).expect("2x2 Pauli")
}

/// Two-qubit Pauli from a base-4 label `(a, b) = (label / 4, label % 4)`.
fn two_qubit_pauli<T: Scalar>(label: usize) -> ComplexMatrix<T> {
    single_pauli::<T>(label / 4).kron(&single_pauli::<T>(label % 4))
}

/// Commutation of two-qubit Paulis: they commute iff the number of
/// positions with distinct nontrivial single-qubit factors is even.
fn paulis_commute(a: usize, b: usize) -> bool {
    let anti = |p: usize, q: usize| p != 0 && q != 0 && p != q;
    let first = anti(a / 4, b / 4);
    let second = anti(a % 4, b % 4);
    first == second
}

/// Extracts the state vector of a rank-1 projector, fixing the global phase
/// so the first significant amplitude is real positive.
fn state_from_projector<T: Scalar>(projector: &ComplexMatrix<T>) -> PureState<T> {
    let d = projector.rows();
    let mut best_col = 0;
    let mut best = T::zero();
    for j in 0..d {
        let diag = projector.get(j, j).re;
        if diag > best {
            best = diag;
            best_col = j;
        }
    }
    let column = projector.column(best_col);
    let threshold = real::<T>(1e-6);
    let pivot = column
        .iter()
        .find(|a| a.norm() > threshold)
        .expect("rank-1 projector has a nonzero column");
    let phase = pivot.conj().scale(T::one() / pivot.norm());
    let amplitudes = column.into_iter().map(|a| a * phase).collect();
    PureState::normalized(amplitudes).expect("projector column is nonzero")
}

/// Sorts (and defensively dedups) by amplitudes rounded to 12 decimals.
fn dedup_and_sort<T: Scalar>(states: &mut Vec<PureState<T>>) {
    let key = |s: &PureState<T>| -> Vec<(i64, i64)> {
        s.amplitudes()
            .iter()
            .map(|a| {
                let re = (a.re.to_f64().unwrap_or(0.0) * 1e12).round() as i64;
                let im = (a.im.to_f64().unwrap_or(0.0) * 1e12).round() as i64;
                (re, im)
            })
            .collect()
    };
    states.sort_by_key(key);
    states.dedup_by_key(|s| key(s));
}
