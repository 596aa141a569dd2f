//! Observables as numerical assignments to reference outcomes, their second
//! moments, and the variance-based validity bound.

use crate::operators::{hermitian_eig, HermitianOperator};
use crate::refdevice::{ProbabilityVector, ReferenceDevice};
use crate::scalar::{count, real, Scalar};
use crate::{Error, Result};

use super::{jordan_l, JordanMethod};

/// Max-norm tolerance for membership of an observable vector in `col(P)`.
pub const TOL_COL_MEMBERSHIP: f64 = 1e-8;

/// A real assignment `x` of numerical values to reference outcomes,
/// together with the operator `X = Σ_i x_i E_i` it induces and the
/// generator `X̃` satisfying `x_i = tr(E_i X̃)` when `x ∈ col(P)`.
#[derive(Debug, Clone)]
pub struct ObservableAssignment<T> {
    values: Vec<T>,
    lifted: HermitianOperator<T>,
    generator: HermitianOperator<T>,
}

impl<T: Scalar> ObservableAssignment<T> {
    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// `X = Σ_i x_i E_i`.
    pub fn lifted(&self) -> &HermitianOperator<T> {
        &self.lifted
    }

    /// `X̃ = (n/d)[(d+1)X − tr(X) I]`.
    pub fn generator(&self) -> &HermitianOperator<T> {
        &self.generator
    }
}

/// Builds the observable assignment for a value vector `x`.
///
/// Requires a 2-design device: the generator formula
/// `X̃ = (n/d)[(d+1)X − tr(X) I]` inverts `x_i = tr(E_i X̃)` only there.
/// For `x` outside `col(P)` the generator reproduces the projection:
/// `tr(E_i X̃) = (PΦx)_i`.
pub fn observable_lift<T: Scalar>(
    device: &ReferenceDevice<T>,
    values: &[T],
) -> Result<ObservableAssignment<T>> {
    if values.len() != device.outcomes() {
        return Err(Error::Dimension(format!(
            "expected {} values, got {}",
            device.outcomes(),
            values.len()
        )));
    }
    if !device.certifies_design(2) {
        return Err(Error::Unsupported(
            "observable lifting requires a 2-design device".into(),
        ));
    }
    let d = device.dim();
    let mut lifted = crate::operators::ComplexMatrix::<T>::zeros(d, d);
    for (x, effect) in values.iter().zip(device.effects()) {
        lifted = lifted.add(&effect.matrix().scale_re(*x));
    }
    let lifted = HermitianOperator::new(lifted)?;
    let dp1 = count::<T>(d) + T::one();
    let trace = lifted.trace_re();
    let generator = lifted
        .scale_re(dp1)
        .sub(&HermitianOperator::scaled_identity(d, trace))
        .scale_re(T::one() / device.effect_trace());
    Ok(ObservableAssignment {
        values: values.to_vec(),
        lifted,
        generator,
    })
}

/// Reads an observable assignment off a generator: `x_i = tr(E_i X̃)`.
///
/// The result always lies in `col(P)`.
pub fn observable_project<T: Scalar>(
    device: &ReferenceDevice<T>,
    generator: &HermitianOperator<T>,
) -> Result<Vec<T>> {
    if generator.dim() != device.dim() {
        return Err(Error::Dimension(format!(
            "generator dimension {} does not match device dimension {}",
            generator.dim(),
            device.dim()
        )));
    }
    Ok(device
        .effects()
        .iter()
        .map(|e| e.pairing(generator))
        .collect())
}

/// Which route computes `tr(X²ρ)` from probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SecondMomentForm {
    /// Full contraction `(d/n) Σ_ijkl x_i x_j R_ijk Φ_kl p_l`.
    General,
    /// 3-design simplification
    /// `½((d+2)/(d+1))[⟨X²⟩_ρ − (d/(d+2))(⟨X²⟩_μ − 2⟨X⟩_μ⟨X⟩_ρ)]`.
    Simplified,
}

/// Second moment `tr(X²ρ)` of an observable assignment against the state
/// encoded by `p`, computed entirely from reference probabilities.
pub fn second_moment_observable<T: Scalar>(
    device: &ReferenceDevice<T>,
    x: &ObservableAssignment<T>,
    probs: &ProbabilityVector<T>,
    form: SecondMomentForm,
) -> Result<T> {
    if x.n() != device.outcomes() || probs.len() != device.outcomes() {
        return Err(Error::Dimension(
            "observable/distribution length mismatch".into(),
        ));
    }
    match form {
        SecondMomentForm::General => {
            let l = jordan_l(device, probs, JordanMethod::General)?;
            let quad = quadratic_form(&l, x.values());
            Ok(device.effect_trace() * quad)
        }
        SecondMomentForm::Simplified => {
            if !device.certifies_design(3) {
                return Err(Error::Unsupported(
                    "the simplified second moment requires a 3-design device".into(),
                ));
            }
            let x_probs = ProbabilityVector::new(x.values().to_vec());
            let residual = device.col_p_residual(&x_probs);
            if residual > real(TOL_COL_MEMBERSHIP) {
                return Err(Error::Precondition(format!(
                    "observable values leave col(P) by {residual}"
                )));
            }
            Ok(simplified_second_moment(device, x.values(), probs))
        }
    }
}

fn simplified_second_moment<T: Scalar>(
    device: &ReferenceDevice<T>,
    x: &[T],
    probs: &ProbabilityVector<T>,
) -> T {
    let one = T::one();
    let two = one + one;
    let d = count::<T>(device.dim());
    let n = count::<T>(device.outcomes());
    let mean_rho = dot(x, probs.values());
    let mean_sq_rho = x
        .iter()
        .zip(probs.values())
        .fold(T::zero(), |acc, (xi, pi)| acc + *xi * *xi * *pi);
    let mean_mu = x.iter().fold(T::zero(), |acc, xi| acc + *xi) / n;
    let mean_sq_mu = x.iter().fold(T::zero(), |acc, xi| acc + *xi * *xi) / n;
    let inner = mean_sq_rho - d / (d + two) * (mean_sq_mu - two * mean_mu * mean_rho);
    (one / two) * ((d + two) / (d + one)) * inner
}

/// Evaluation of the variance lower bound for one observable assignment.
#[derive(Debug, Clone, Copy)]
pub struct VarianceBound<T> {
    /// `Var[X]_ρ = Σ_i x_i² p_i − (Σ_i x_i p_i)²`.
    pub variance: T,
    /// `(d/(d+2))(⟨X²⟩_μ − 2⟨X⟩_μ⟨X⟩_ρ) − ⟨X⟩_ρ²`.
    pub bound: T,
    /// `variance ≥ bound − 1e-9`.
    pub satisfied: bool,
}

/// Checks the variance uncertainty bound of `x` against `p`.
///
/// Valid distributions satisfy the bound for every `x ∈ col(P)`; an invalid
/// distribution admits a violating `x` (see [`invalidity_witness`]).
pub fn variance_bound<T: Scalar>(
    device: &ReferenceDevice<T>,
    x: &ObservableAssignment<T>,
    probs: &ProbabilityVector<T>,
) -> Result<VarianceBound<T>> {
    if x.n() != device.outcomes() || probs.len() != device.outcomes() {
        return Err(Error::Dimension(
            "observable/distribution length mismatch".into(),
        ));
    }
    let x_probs = ProbabilityVector::new(x.values().to_vec());
    let residual = device.col_p_residual(&x_probs);
    if residual > real(TOL_COL_MEMBERSHIP) {
        return Err(Error::Precondition(format!(
            "observable values leave col(P) by {residual}"
        )));
    }
    if !probs.is_normalized(real(1e-10)) {
        return Err(Error::Precondition(format!(
            "distribution sums to {}, not 1",
            probs.sum()
        )));
    }
    let two = T::one() + T::one();
    let d = count::<T>(device.dim());
    let n = count::<T>(device.outcomes());
    let xs = x.values();
    let mean_rho = dot(xs, probs.values());
    let mean_sq_rho = xs
        .iter()
        .zip(probs.values())
        .fold(T::zero(), |acc, (xi, pi)| acc + *xi * *xi * *pi);
    let mean_mu = xs.iter().fold(T::zero(), |acc, xi| acc + *xi) / n;
    let mean_sq_mu = xs.iter().fold(T::zero(), |acc, xi| acc + *xi * *xi) / n;

    let variance = mean_sq_rho - mean_rho * mean_rho;
    let bound = d / (d + two) * (mean_sq_mu - two * mean_mu * mean_rho) - mean_rho * mean_rho;
    Ok(VarianceBound {
        variance,
        bound,
        satisfied: variance >= bound - real(1e-9),
    })
}

/// Extracts a violating observable from an invalid distribution.
///
/// Returns the most-negative eigenvector of the Jordan matrix `L_p`,
/// projected into `col(P)` and lifted to an observable assignment; `None`
/// when `L_p` is positive-semidefinite at `tol`. For any certified-invalid
/// `p`, the returned `x` violates [`variance_bound`].
pub fn invalidity_witness<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
    tol: T,
) -> Result<Option<ObservableAssignment<T>>> {
    let l = jordan_l(device, probs, JordanMethod::General)?;
    let op = HermitianOperator::new(l.to_complex())?;
    let eig = hermitian_eig(&op);
    let n = device.outcomes();
    let min = eig.eigenvalues[n - 1];
    if min >= -tol {
        return Ok(None);
    }
    // the eigenvector is real because L is; its nonzero eigenvalue puts it
    // in range(L) ⊆ col(P), and the projection removes roundoff drift
    let v: Vec<T> = (0..n).map(|r| eig.eigenvectors.get(r, n - 1).re).collect();
    let projected = device.project_col_p(&ProbabilityVector::new(v));
    Ok(Some(observable_lift(device, projected.values())?))
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (x, y)| acc + *x * *y)
}

fn quadratic_form<T: Scalar>(m: &crate::operators::RealMatrix<T>, x: &[T]) -> T {
    let mut acc = T::zero();
    for (i, xi) in x.iter().enumerate() {
        acc = acc + *xi * dot(m.row(i), x);
    }
    acc
}
