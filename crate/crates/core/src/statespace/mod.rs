//! Certification of probability vectors against quantum state-space.
//!
//! Every operation here consumes reference-device probabilities only — the
//! conditional-probability matrix `P`, a Born matrix `Φ`, and outcome
//! distributions — yet decides Hilbert-space questions: whether a vector is
//! a valid state (positive-semidefiniteness of the Jordan multiplication
//! matrix `L_p`), whether it is pure (norm-sphere residuals and the
//! quadratic idempotence condition), and trace powers `tr(ρ²)`, `tr(ρ³)`.
//! Each certificate has an independent operator-level oracle exercised by
//! the test suites.

mod agreement;
mod observables;
mod triple;

pub use agreement::{agreement_bounds, agreement_probability, renyi_entropy};
pub use observables::{
    invalidity_witness, observable_lift, observable_project, second_moment_observable,
    variance_bound, ObservableAssignment, SecondMomentForm, VarianceBound, TOL_COL_MEMBERSHIP,
};
pub use triple::{
    moment_joint_probs, triple_tensor, triple_tensor_from_p_unchecked, JointDistribution,
    TensorProvenance, TripleTensor,
};

use serde::{Deserialize, Serialize};

use crate::operators::{min_eigenvalue, HermitianOperator, RealMatrix};
use crate::refdevice::{ProbabilityVector, ReferenceDevice};
use crate::scalar::{count, Scalar};
use crate::{Error, Result};

/// Default certification tolerance (minimum eigenvalue, residual norms).
pub const TOL_CERTIFY: f64 = 1e-9;

/// Which route evaluates the Jordan multiplication matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanMethod {
    /// Contract the triple tensor with `Φp`: `L_ij = Σ_k R_ijk (Φp)_k`.
    General,
    /// 3-design closed form using `P` and `p` alone.
    ThreeDesign,
}

/// The matrix of Jordan multiplication by the state encoded in `p`,
/// sandwiched between effects and repreparation states:
/// `L_ij = tr(E_i · ½(ρσ_j + σ_jρ))`.
///
/// `p` is a valid quantum probability assignment iff `L` is
/// positive-semidefinite (together with normalization and `col(P)`
/// membership).
pub fn jordan_l<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
    method: JordanMethod,
) -> Result<RealMatrix<T>> {
    let n = device.outcomes();
    if probs.len() != n {
        return Err(Error::Dimension(format!(
            "distribution length {} does not match {n} outcomes",
            probs.len()
        )));
    }
    match method {
        JordanMethod::General => {
            let weights = device.phi().mul_vec(probs.values());
            let triple = device.triple_product_entries();
            let mut l = RealMatrix::zeros(n, n);
            // R is fully symmetric on these devices, so evaluating the
            // upper triangle and mirroring keeps L exactly symmetric
            for i in 0..n {
                for j in i..n {
                    let slice = &triple[(i * n + j) * n..(i * n + j) * n + n];
                    let mut acc = T::zero();
                    for (r, w) in slice.iter().zip(&weights) {
                        acc = acc + *r * *w;
                    }
                    l.set(i, j, acc);
                    l.set(j, i, acc);
                }
            }
            Ok(l)
        }
        JordanMethod::ThreeDesign => {
            if !device.certifies_design(3) {
                return Err(Error::Unsupported(
                    "the closed-form Jordan matrix requires a 3-design device".into(),
                ));
            }
            let one = T::one();
            let two = one + one;
            let half = one / two;
            let d = count::<T>(device.dim());
            let ratio = device.effect_trace();
            let coeff = (d + one) * (d + two) / ratio;
            let p_matrix = device.p_matrix();
            let p = probs.values();
            let mut l = RealMatrix::zeros(n, n);
            for i in 0..n {
                // P is symmetric for unbiased σ ∝ E devices, so row i holds
                // the P(E_m|σ_i) column the formula asks for
                let row_i = p_matrix.row(i);
                for j in i..n {
                    let row_j = p_matrix.row(j);
                    let mut contraction = T::zero();
                    for m in 0..n {
                        contraction = contraction + row_i[m] * row_j[m] * p[m];
                    }
                    let value =
                        half * (coeff * contraction - p_matrix.get(i, j) - p[i] - p[j] - ratio);
                    l.set(i, j, value);
                    l.set(j, i, value);
                }
            }
            Ok(l)
        }
    }
}

/// Jordan product `A ∘ B = ½(AB + BA)`: the operator-level oracle for the
/// probability-side machinery.
pub fn jordan_product_oracle<T: Scalar>(
    a: &HermitianOperator<T>,
    b: &HermitianOperator<T>,
) -> Result<HermitianOperator<T>> {
    a.jordan(b)
}

/// Residuals of the pure-state sphere conditions, evaluated on the
/// projection `x` of `p` into `col(P)`:
///
/// * `r1 = Σ x_i − 1`
/// * `r2 = Σ x_i² − (d/n)·2/(d+1)`
/// * `r3 = Σ x_i³ − (d/n)²·6/((d+1)(d+2))`
///
/// `p` encodes a pure state iff all three vanish, `p ≥ 0`, and `p` lies in
/// `col(P)`.
pub fn pure_scalar_residuals<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
) -> Result<(T, T, T)> {
    require_three_design(device)?;
    require_length(device, probs)?;
    let x = device.project_col_p(probs);
    let one = T::one();
    let two = one + one;
    let six = two + two + two;
    let d = count::<T>(device.dim());
    let ratio = device.effect_trace();
    let mut sums = (T::zero(), T::zero(), T::zero());
    for v in x.values() {
        sums.0 = sums.0 + *v;
        sums.1 = sums.1 + *v * *v;
        sums.2 = sums.2 + *v * *v * *v;
    }
    Ok((
        sums.0 - one,
        sums.1 - ratio * two / (d + one),
        sums.2 - ratio * ratio * six / ((d + one) * (d + two)),
    ))
}

/// `tr(ρ²)` and `tr(ρ³)` of the encoded state, from probabilities alone.
///
/// The quadratic form is `(d+1)(n/d) Σ x_i² − 1` on the projection `x`; the
/// cubic one contracts the triple tensor three times with `Φx`, which
/// reproduces `tr(ρ³)` of the reconstructed operator.
pub fn trace_powers_from_probs<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
) -> Result<(T, T)> {
    require_three_design(device)?;
    require_length(device, probs)?;
    let x = device.project_col_p(probs);
    let one = T::one();
    let d = count::<T>(device.dim());
    let inv_ratio = one / device.effect_trace();

    let sum_sq = x.values().iter().fold(T::zero(), |acc, v| acc + *v * *v);
    let purity = (d + one) * inv_ratio * sum_sq - one;

    let weights = device.phi().mul_vec(x.values());
    let triple = device.triple_product_entries();
    let n = device.outcomes();
    let mut cube = T::zero();
    for (a, wa) in weights.iter().enumerate() {
        for (b, wb) in weights.iter().enumerate() {
            let wab = *wa * *wb;
            let slice = &triple[(a * n + b) * n..(a * n + b) * n + n];
            let mut inner = T::zero();
            for (r, wc) in slice.iter().zip(&weights) {
                inner = inner + *r * *wc;
            }
            cube = cube + wab * inner;
        }
    }
    Ok((purity, inv_ratio * cube))
}

/// Componentwise residual of the quadratic pure-state condition:
///
/// `res_i = ½[½(d+1)(d+2)(n/d) Σ_m P_im p_m² − d/n] − p_i`,
///
/// the zero vector exactly when `p` is a pure-state distribution.
pub fn pure_vector_residual<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
) -> Result<Vec<T>> {
    require_three_design(device)?;
    require_length(device, probs)?;
    let one = T::one();
    let two = one + one;
    let half = one / two;
    let d = count::<T>(device.dim());
    let ratio = device.effect_trace();
    let coeff = half * (d + one) * (d + two) / ratio;
    let p_matrix = device.p_matrix();
    let n = device.outcomes();
    let squares: Vec<T> = probs.values().iter().map(|v| *v * *v).collect();
    let mut residual = Vec::with_capacity(n);
    for i in 0..n {
        let row = p_matrix.row(i);
        let mut contraction = T::zero();
        for m in 0..n {
            contraction = contraction + row[m] * squares[m];
        }
        residual.push(half * (coeff * contraction - ratio) - probs.values()[i]);
    }
    Ok(residual)
}

/// Full certification record for one probability vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidityReport<T> {
    /// `|Σp − 1| ≤ tolerance`.
    pub normalized: bool,
    /// `|Σp − 1|`.
    pub norm_residual: T,
    /// `p` lies in `col(P)` at the tolerance.
    pub in_col_p: bool,
    /// Max-norm of `p − PΦp`.
    pub col_residual: T,
    /// Smallest eigenvalue of the Jordan matrix `L_p`.
    pub l_min_eigenvalue: T,
    /// `normalized ∧ in_col_p ∧ l_min_eigenvalue ≥ −tolerance`.
    pub valid: bool,
    /// `tr(ρ²)` from probabilities.
    pub purity: T,
    /// `tr(ρ³)` from probabilities.
    pub trace_cube: T,
    /// `valid` and all scalar residuals within the tolerance.
    pub pure: bool,
    /// 1-, 2-, and 3-norm sphere defects on the `col(P)` projection.
    pub scalar_residuals: (T, T, T),
    /// Max-norm of the quadratic pure-state condition's defect.
    pub vector_residual: T,
    /// Tolerance every verdict in this report was issued at.
    pub tolerance: T,
}

/// Certifies a probability vector against quantum state-space using only
/// reference-device probabilities.
///
/// Requires a 3-design device: validity itself needs only the Jordan matrix
/// `L_p`, but the purity and pure-state entries of the report do not exist
/// off 3-designs. Validity is `normalized ∧ in_col_p ∧ L_p ⪰ −tol`, which
/// agrees with positive-semidefiniteness of the reconstructed operator.
pub fn validity_check<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
    tol: T,
) -> Result<ValidityReport<T>> {
    assert!(tol > T::zero(), "tolerance must be positive");
    require_three_design(device)?;
    require_length(device, probs)?;

    let norm_residual = (probs.sum() - T::one()).abs();
    let normalized = norm_residual <= tol;
    let col_residual = device.col_p_residual(probs);
    let in_col_p = col_residual <= tol;

    let l = jordan_l(device, probs, JordanMethod::General)?;
    let l_min_eigenvalue = min_eigenvalue(&HermitianOperator::new(l.to_complex())?);
    let valid = normalized && in_col_p && l_min_eigenvalue >= -tol;

    let (purity, trace_cube) = trace_powers_from_probs(device, probs)?;
    let scalar_residuals = pure_scalar_residuals(device, probs)?;
    let vector_residual = pure_vector_residual(device, probs)?
        .into_iter()
        .fold(T::zero(), |acc, r| acc.max(r.abs()));
    let pure = valid
        && scalar_residuals.0.abs() <= tol
        && scalar_residuals.1.abs() <= tol
        && scalar_residuals.2.abs() <= tol;

    Ok(ValidityReport {
        normalized,
        norm_residual,
        in_col_p,
        col_residual,
        l_min_eigenvalue,
        valid,
        purity,
        trace_cube,
        pure,
        scalar_residuals,
        vector_residual,
        tolerance: tol,
    })
}

fn require_three_design<T: Scalar>(device: &ReferenceDevice<T>) -> Result<()> {
    if device.certifies_design(3) {
        Ok(())
    } else {
        Err(Error::Unsupported(
            "this operation requires a 3-design reference device".into(),
        ))
    }
}

fn require_length<T: Scalar>(
    device: &ReferenceDevice<T>,
    probs: &ProbabilityVector<T>,
) -> Result<()> {
    if probs.len() == device.outcomes() {
        Ok(())
    } else {
        Err(Error::Dimension(format!(
            "distribution length {} does not match {} outcomes",
            probs.len(),
            device.outcomes()
        )))
    }
}
