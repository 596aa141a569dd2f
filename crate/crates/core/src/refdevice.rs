//! The reference device: an informationally-complete measure-and-reprepare
//! apparatus and the probability-form Born rule it induces.
//!
//! A device built from an unbiased ensemble has effects `E_i = (d/n) ψ_iψ_i†`
//! and repreparation states `σ_i = ψ_iψ_i†`. Its conditional-probability
//! matrix `P_ij = tr(E_i σ_j)` fully characterizes the device, and any Born
//! matrix `Φ` with `PΦP = P` yields the dual representation
//! `ρ = Σ_ij Φ_ij p_j σ_i` of a state from its outcome probabilities
//! `p_j = tr(E_j ρ)`.

use std::sync::OnceLock;

use crate::designs::{is_t_design, WeightedEnsemble};
use crate::operators::{is_psd, vectorize, ComplexMatrix, HermitianOperator, RealMatrix};
use crate::scalar::{count, real, Scalar};
use crate::{Error, Result};

/// Tolerance for `Σ_i E_i = I`.
pub const TOL_EFFECT_SUM: f64 = 1e-10;
/// Tolerance for `σ_i = E_i / tr(E_i)` and `tr(E_i) = d/n`.
pub const TOL_PROPORTIONAL: f64 = 1e-12;
/// Tolerance for the Born-matrix identities `PΦP = P` and `SΦE = I`.
pub const TOL_BORN_IDENTITY: f64 = 1e-9;
/// Relative singular-value cutoff for the pseudoinverse Born matrix.
pub const SVD_RELATIVE_CUTOFF: f64 = 1e-10;
/// Tolerance for device-side t-design certification (frame-potential excess).
pub const TOL_DESIGN_CERT: f64 = 1e-10;
/// Tolerance on `tr(ρ) = 1` for states entering the probability map.
pub const TOL_UNIT_TRACE: f64 = 1e-10;
/// Probability entries may undershoot zero by at most this much.
pub const TOL_NEGATIVE_PROB: f64 = 1e-12;

/// How the Born matrix was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhiMethod {
    /// Moore–Penrose 1-inverse of `P` via SVD.
    Pseudoinverse,
    /// Closed form `(d+1)I − (d/n)J`, exact for unbiased 2-designs.
    TwoDesignClosedForm,
}

impl PhiMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            PhiMethod::Pseudoinverse => "pseudoinverse",
            PhiMethod::TwoDesignClosedForm => "two_design_closed_form",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "pseudoinverse" => Ok(PhiMethod::Pseudoinverse),
            "two_design_closed_form" => Ok(PhiMethod::TwoDesignClosedForm),
            other => Err(Error::InvalidInput(format!("unknown phi method {other:?}"))),
        }
    }
}

/// Born-matrix policy at device construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PhiSelection {
    /// Closed form when the ensemble certifies as a 2-design, else
    /// pseudoinverse.
    #[default]
    Auto,
    Pseudoinverse,
    ClosedForm,
}

/// A real vector of reference-outcome weights.
///
/// Entries are allowed to be negative: deciding whether a vector is a valid
/// quantum probability assignment is the whole point of the certification
/// machinery, so invalid vectors must be representable.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityVector<T> {
    values: Vec<T>,
}

impl<T: Scalar> ProbabilityVector<T> {
    /// Wraps arbitrary outcome weights.
    pub fn new(values: Vec<T>) -> Self {
        Self { values }
    }

    /// Wraps weights that must form a genuine distribution: entries at least
    /// `−TOL_NEGATIVE_PROB` and total 1 within `tol`.
    pub fn normalized(values: Vec<T>, tol: T) -> Result<Self> {
        let v = Self::new(values);
        if v.min_entry() < -real::<T>(TOL_NEGATIVE_PROB) {
            return Err(Error::Validation(format!(
                "probability entry {} is negative",
                v.min_entry()
            )));
        }
        if !v.is_normalized(tol) {
            return Err(Error::Validation(format!(
                "probabilities sum to {}, not 1",
                v.sum()
            )));
        }
        Ok(v)
    }

    /// The uniform distribution on `n` outcomes.
    pub fn uniform(n: usize) -> Self {
        Self {
            values: vec![T::one() / count(n); n],
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + *v)
    }

    pub fn min_entry(&self) -> T {
        self.values.iter().fold(T::infinity(), |acc, v| acc.min(*v))
    }

    pub fn is_normalized(&self, tol: T) -> bool {
        (self.sum() - T::one()).abs() <= tol
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.len(), other.len(), "length mismatch");
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

/// An informationally-complete measure-and-reprepare device.
#[derive(Debug)]
pub struct ReferenceDevice<T> {
    d: usize,
    n: usize,
    effects: Vec<HermitianOperator<T>>,
    reprep_states: Vec<HermitianOperator<T>>,
    p_matrix: RealMatrix<T>,
    phi: RealMatrix<T>,
    phi_method: PhiMethod,
    triple_cache: OnceLock<Vec<T>>,
}

impl<T: Scalar> Clone for ReferenceDevice<T> {
    fn clone(&self) -> Self {
        let triple_cache = OnceLock::new();
        if let Some(entries) = self.triple_cache.get() {
            let _ = triple_cache.set(entries.clone());
        }
        Self {
            d: self.d,
            n: self.n,
            effects: self.effects.clone(),
            reprep_states: self.reprep_states.clone(),
            p_matrix: self.p_matrix.clone(),
            phi: self.phi.clone(),
            phi_method: self.phi_method,
            triple_cache,
        }
    }
}

impl<T: Scalar> ReferenceDevice<T> {
    /// Builds a device from an unbiased pure-state ensemble.
    ///
    /// Effects are `(d/n) ψψ†`, repreparation states `ψψ†`. The Born matrix
    /// follows `selection`; [`PhiSelection::Auto`] takes the closed form
    /// exactly when the ensemble certifies as a 2-design at
    /// [`TOL_DESIGN_CERT`], since there it is exact and cheap.
    pub fn from_design(ens: &WeightedEnsemble<T>, selection: PhiSelection) -> Result<Self> {
        if !ens.is_unbiased() {
            return Err(Error::Unsupported(
                "reference devices require an unbiased ensemble (weights 1/n)".into(),
            ));
        }
        let d = ens.dim();
        let n = ens.len();
        let ratio = count::<T>(d) / count::<T>(n);
        let reprep_states: Vec<_> = ens.states().iter().map(|s| s.projector()).collect();
        let effects: Vec<_> = reprep_states.iter().map(|s| s.scale_re(ratio)).collect();
        // P_ij = tr(E_i σ_j) = (d/n)|⟨ψ_i|ψ_j⟩|², exactly symmetric
        let p_matrix = RealMatrix::from_fn(n, n, |i, j| {
            if j < i {
                T::nan() // replaced below by the mirror
            } else {
                ratio * ens.states()[i].overlap(&ens.states()[j]).norm_sqr()
            }
        });
        let p_matrix = mirror_upper(p_matrix);

        let two_design = is_t_design(ens, 2, real(TOL_DESIGN_CERT)).passed;
        let phi_method = match selection {
            PhiSelection::Auto => {
                if two_design {
                    PhiMethod::TwoDesignClosedForm
                } else {
                    PhiMethod::Pseudoinverse
                }
            }
            PhiSelection::Pseudoinverse => PhiMethod::Pseudoinverse,
            PhiSelection::ClosedForm => {
                if !two_design {
                    return Err(Error::Unsupported(
                        "closed-form Born matrix requires the ensemble to be a 2-design".into(),
                    ));
                }
                PhiMethod::TwoDesignClosedForm
            }
        };
        let phi = match phi_method {
            PhiMethod::Pseudoinverse => p_matrix.pseudoinverse(real(SVD_RELATIVE_CUTOFF)),
            PhiMethod::TwoDesignClosedForm => closed_form_phi(d, n),
        };
        let device = Self {
            d,
            n,
            effects,
            reprep_states,
            p_matrix,
            phi,
            phi_method,
            triple_cache: OnceLock::new(),
        };
        device.validate()?;
        Ok(device)
    }

    /// Reassembles a device from stored parts, re-validating every invariant.
    pub fn from_parts(
        d: usize,
        effects: Vec<HermitianOperator<T>>,
        reprep_states: Vec<HermitianOperator<T>>,
        p_matrix: RealMatrix<T>,
        phi: RealMatrix<T>,
        phi_method: PhiMethod,
    ) -> Result<Self> {
        let n = effects.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "device needs at least one effect".into(),
            ));
        }
        if reprep_states.len() != n {
            return Err(Error::Dimension(format!(
                "{n} effects but {} repreparation states",
                reprep_states.len()
            )));
        }
        if (p_matrix.rows(), p_matrix.cols()) != (n, n) || (phi.rows(), phi.cols()) != (n, n) {
            return Err(Error::Dimension("P and phi must be n x n".into()));
        }
        if effects.iter().chain(&reprep_states).any(|op| op.dim() != d) {
            return Err(Error::Dimension(format!(
                "all operators must act on dimension {d}"
            )));
        }
        let device = Self {
            d,
            n,
            effects,
            reprep_states,
            p_matrix,
            phi,
            phi_method,
            triple_cache: OnceLock::new(),
        };
        device.validate()?;
        Ok(device)
    }

    /// Checks every structural invariant, reporting all violations at once.
    fn validate(&self) -> Result<()> {
        let mut violations = Vec::new();
        let d = self.d;
        let n = self.n;
        let ratio = count::<T>(d) / count::<T>(n);

        let mut effect_sum = ComplexMatrix::<T>::zeros(d, d);
        for effect in &self.effects {
            effect_sum = effect_sum.add(effect.matrix());
        }
        let sum_defect = effect_sum.max_abs_diff(&ComplexMatrix::identity(d));
        if sum_defect > real(TOL_EFFECT_SUM) {
            violations.push(format!(
                "effects sum to identity within {sum_defect}, not 1e-10"
            ));
        }

        for (i, effect) in self.effects.iter().enumerate() {
            if !is_psd(effect, real(TOL_PROPORTIONAL)) {
                violations.push(format!("effect {i} is not positive-semidefinite"));
            }
            let trace = effect.trace_re();
            if (trace - ratio).abs() > real(TOL_PROPORTIONAL) {
                violations.push(format!("tr(E_{i}) = {trace}, expected d/n"));
            }
            let rescaled = effect.scale_re(T::one() / trace);
            let defect = rescaled
                .matrix()
                .max_abs_diff(self.reprep_states[i].matrix());
            if defect > real(TOL_PROPORTIONAL) {
                violations.push(format!("state {i} deviates from E/tr(E) by {defect}"));
            }
        }

        let p_check =
            RealMatrix::from_fn(n, n, |i, j| self.effects[i].pairing(&self.reprep_states[j]));
        let p_defect = p_check.max_abs_diff(&self.p_matrix);
        if p_defect > real(TOL_EFFECT_SUM) {
            violations.push(format!("stored P deviates from tr(E_i σ_j) by {p_defect}"));
        }

        let pphip = self.p_matrix.mul(&self.phi).mul(&self.p_matrix);
        let born_defect = pphip.max_abs_diff(&self.p_matrix);
        if born_defect > real(TOL_BORN_IDENTITY) {
            violations.push(format!("PΦP = P fails by {born_defect}"));
        }

        let resolution_defect = self.resolution_of_identity_defect();
        if resolution_defect > real(TOL_BORN_IDENTITY) {
            violations.push(format!("SΦE = I fails by {resolution_defect}"));
        }

        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::Validation(violations.join("; ")))
        }
    }

    /// Max-norm deviation of `SΦE` from the identity on operator space.
    pub fn resolution_of_identity_defect(&self) -> T {
        let d2 = self.d * self.d;
        let s = ComplexMatrix::from_fn(d2, self.n, |r, c| {
            let v = vectorize(self.reprep_states[c].matrix()).expect("square state");
            v[r]
        });
        let e = ComplexMatrix::from_fn(self.n, d2, |r, c| {
            let v = vectorize(self.effects[r].matrix()).expect("square effect");
            v[c].conj()
        });
        let sphie = s.mul(&self.phi.to_complex()).mul(&e);
        sphie.max_abs_diff(&ComplexMatrix::identity(d2))
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn outcomes(&self) -> usize {
        self.n
    }

    pub fn effects(&self) -> &[HermitianOperator<T>] {
        &self.effects
    }

    pub fn reprep_states(&self) -> &[HermitianOperator<T>] {
        &self.reprep_states
    }

    pub fn p_matrix(&self) -> &RealMatrix<T> {
        &self.p_matrix
    }

    pub fn phi(&self) -> &RealMatrix<T> {
        &self.phi
    }

    pub fn phi_method(&self) -> PhiMethod {
        self.phi_method
    }

    /// `d/n`, the trace of every effect.
    pub fn effect_trace(&self) -> T {
        count::<T>(self.d) / count::<T>(self.n)
    }

    /// Computes a Born matrix by the requested method.
    ///
    /// The closed form is only a 1-inverse of `P` when the repreparation
    /// states form a 2-design; that is checked on the device side through
    /// the identity `(d+1)P² = P + (d/n)J`, which holds iff the effect frame
    /// contracts the second-moment deviation to zero.
    pub fn born_matrix(&self, method: PhiMethod) -> Result<RealMatrix<T>> {
        match method {
            PhiMethod::Pseudoinverse => Ok(self.p_matrix.pseudoinverse(real(SVD_RELATIVE_CUTOFF))),
            PhiMethod::TwoDesignClosedForm => {
                let residual = self.two_design_shadow_residual();
                if residual > real(TOL_BORN_IDENTITY) {
                    return Err(Error::Unsupported(format!(
                        "closed-form Born matrix requires a 2-design; (d+1)P² − P − (d/n)J \
                         deviates by {residual}"
                    )));
                }
                Ok(closed_form_phi(self.d, self.n))
            }
        }
    }

    /// Max-norm of `(d+1)P² − P − (d/n)J`; zero exactly on unbiased
    /// 2-design devices.
    pub fn two_design_shadow_residual(&self) -> T {
        let dp1 = count::<T>(self.d) + T::one();
        let lhs = self.p_matrix.mul(&self.p_matrix).scale(dp1);
        let rhs = self
            .p_matrix
            .add(&RealMatrix::ones(self.n, self.n).scale(self.effect_trace()));
        lhs.max_abs_diff(&rhs)
    }

    /// Frame potential of the repreparation states minus its t-design
    /// target, computed from `P` alone: `(1/n²) Σ_ij ((n/d) P_ij)^t − 1/binom`.
    ///
    /// Equals the squared Frobenius distance between the ensemble's t-th
    /// moment operator and the Haar moment, so it is nonnegative and
    /// vanishes exactly on t-designs.
    pub fn frame_potential_excess(&self, t: usize) -> T {
        assert!(t >= 1, "order must be at least 1");
        let inv_ratio = T::one() / self.effect_trace();
        let n_sq = count::<T>(self.n) * count::<T>(self.n);
        let mut fp = T::zero();
        for i in 0..self.n {
            for j in 0..self.n {
                fp = fp + (inv_ratio * self.p_matrix.get(i, j)).powi(t as i32);
            }
        }
        fp = fp / n_sq;
        fp - crate::designs::frame_potential_target::<T>(self.d, t)
    }

    /// Device-side t-design certificate at tolerance [`TOL_DESIGN_CERT`].
    ///
    /// Requires every repreparation state to be rank-1 (diagnosed through
    /// `P_ii = d/n`) and the frame-potential excess to vanish.
    pub fn certifies_design(&self, t: usize) -> bool {
        let tol = real::<T>(TOL_DESIGN_CERT);
        let ratio = self.effect_trace();
        let pure = (0..self.n).all(|i| (self.p_matrix.get(i, i) - ratio).abs() <= tol);
        pure && self.frame_potential_excess(t) <= tol
    }

    /// Outcome distribution `p_i = tr(E_i ρ)` of a unit-trace operator.
    pub fn probs_of_state(&self, rho: &HermitianOperator<T>) -> Result<ProbabilityVector<T>> {
        if rho.dim() != self.d {
            return Err(Error::Dimension(format!(
                "state dimension {} does not match device dimension {}",
                rho.dim(),
                self.d
            )));
        }
        let trace = rho.trace_re();
        if (trace - T::one()).abs() > real(TOL_UNIT_TRACE) {
            return Err(Error::Validation(format!("state trace {trace} is not 1")));
        }
        let values = self.effects.iter().map(|e| e.pairing(rho)).collect();
        Ok(ProbabilityVector::new(values))
    }

    /// Dual representation `ρ = Σ_ij Φ_ij p_j σ_i`.
    ///
    /// Never rejects invalid probability vectors: a non-PSD output operator
    /// is exactly the signal the certification layer interprets.
    pub fn operator_of_probs(&self, probs: &ProbabilityVector<T>) -> Result<HermitianOperator<T>> {
        if probs.len() != self.n {
            return Err(Error::Dimension(format!(
                "probability vector length {} does not match {} outcomes",
                probs.len(),
                self.n
            )));
        }
        let weights = self.phi.mul_vec(probs.values());
        let mut matrix = ComplexMatrix::<T>::zeros(self.d, self.d);
        for (w, sigma) in weights.iter().zip(&self.reprep_states) {
            matrix = matrix.add(&sigma.matrix().scale_re(*w));
        }
        HermitianOperator::new(matrix)
    }

    /// Born-rule probabilities of an arbitrary measurement, computed from
    /// reference probabilities alone: `q_i = Σ_jk tr(A_i σ_j) Φ_jk p_k`.
    pub fn born_rule(
        &self,
        measurement: &[HermitianOperator<T>],
        probs: &ProbabilityVector<T>,
    ) -> Result<ProbabilityVector<T>> {
        if probs.len() != self.n {
            return Err(Error::Dimension(format!(
                "probability vector length {} does not match {} outcomes",
                probs.len(),
                self.n
            )));
        }
        if measurement.is_empty() {
            return Err(Error::Validation(
                "measurement must have at least one outcome".into(),
            ));
        }
        if measurement.iter().any(|a| a.dim() != self.d) {
            return Err(Error::Dimension(format!(
                "measurement operators must act on dimension {}",
                self.d
            )));
        }
        let mut sum = ComplexMatrix::<T>::zeros(self.d, self.d);
        for a in measurement {
            sum = sum.add(a.matrix());
        }
        let defect = sum.max_abs_diff(&ComplexMatrix::identity(self.d));
        if defect > real(TOL_EFFECT_SUM) {
            return Err(Error::Validation(format!(
                "measurement operators sum to identity within {defect}, not 1e-10"
            )));
        }
        if let Some((i, _)) = measurement
            .iter()
            .enumerate()
            .find(|(_, a)| !is_psd(a, real(1e-9)))
        {
            return Err(Error::Validation(format!(
                "measurement operator {i} is not positive-semidefinite"
            )));
        }
        let weights = self.phi.mul_vec(probs.values());
        let values = measurement
            .iter()
            .map(|a| {
                self.reprep_states
                    .iter()
                    .zip(&weights)
                    .fold(T::zero(), |acc, (sigma, w)| acc + a.pairing(sigma) * *w)
            })
            .collect();
        Ok(ProbabilityVector::new(values))
    }

    /// Projection `PΦ p` onto the column space of `P`.
    pub fn project_col_p(&self, probs: &ProbabilityVector<T>) -> ProbabilityVector<T> {
        assert_eq!(probs.len(), self.n, "length mismatch");
        let w = self.phi.mul_vec(probs.values());
        ProbabilityVector::new(self.p_matrix.mul_vec(&w))
    }

    /// Max-norm of `p − PΦp`.
    pub fn col_p_residual(&self, probs: &ProbabilityVector<T>) -> T {
        let projected = self.project_col_p(probs);
        probs.max_abs_diff(&projected)
    }

    /// `true` iff `p` lies in `col(P)` within `tol` (max-norm).
    pub fn in_col_p(&self, probs: &ProbabilityVector<T>, tol: T) -> bool {
        self.col_p_residual(probs) <= tol
    }

    /// The distribution of the maximally mixed state: uniform on an
    /// unbiased device.
    pub fn uniform_probs(&self) -> ProbabilityVector<T> {
        ProbabilityVector::uniform(self.n)
    }

    /// Triple products `R_ijk = Re tr(E_i σ_j σ_k)` flattened row-major,
    /// computed once and cached. The result is exactly symmetric in `(j, k)`.
    pub(crate) fn triple_product_entries(&self) -> &[T] {
        self.triple_cache.get_or_init(|| {
            let n = self.n;
            let ratio = self.effect_trace();
            // products σ_j σ_k for k ≥ j; the (j, k) ↔ (k, j) pair is a
            // conjugate transpose, so only the upper triangle is needed
            let mut entries = vec![T::zero(); n * n * n];
            for j in 0..n {
                for k in j..n {
                    let product = self.reprep_states[j]
                        .matrix()
                        .mul(self.reprep_states[k].matrix());
                    for i in 0..n {
                        let sigma_i = self.reprep_states[i].matrix();
                        let d = self.d;
                        let mut re = T::zero();
                        for a in 0..d {
                            for b in 0..d {
                                let x = sigma_i.get(a, b);
                                let y = product.get(b, a);
                                re = re + x.re * y.re - x.im * y.im;
                            }
                        }
                        let value = ratio * re;
                        entries[(i * n + j) * n + k] = value;
                        entries[(i * n + k) * n + j] = value;
                    }
                }
            }
            entries
        })
    }
}

/// `Φ = (d+1)I − (d/n)J`.
pub fn closed_form_phi<T: Scalar>(d: usize, n: usize) -> RealMatrix<T> {
    let dp1 = count::<T>(d) + T::one();
    let ratio = count::<T>(d) / count::<T>(n);
    RealMatrix::identity(n)
        .scale(dp1)
        .sub(&RealMatrix::ones(n, n).scale(ratio))
}

/// Copies the strict upper triangle onto the lower one.
fn mirror_upper<T: Scalar>(mut m: RealMatrix<T>) -> RealMatrix<T> {
    for i in 0..m.rows() {
        for j in 0..i {
            let v = m.get(j, i);
            m.set(i, j, v);
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::designs::{mub_qubit, sic_qubit, stabilizer_states};
    use crate::operators::random::{derive_seed, random_state};
    use crate::operators::{hermitian_eig, min_eigenvalue, PureState};

    fn mub_device() -> ReferenceDevice<f64> {
        ReferenceDevice::from_design(&mub_qubit(), PhiSelection::Auto).unwrap()
    }

    fn probs_of_basis_zero(device: &ReferenceDevice<f64>) -> ProbabilityVector<f64> {
        device
            .probs_of_state(&PureState::<f64>::basis(2, 0).projector())
            .unwrap()
    }

    #[test]
    fn mub_device_p_matrix_structure() {
        let device = mub_device();
        assert_eq!(device.phi_method(), PhiMethod::TwoDesignClosedForm);
        let p = device.p_matrix();
        for i in 0..6 {
            assert!((p.get(i, i) - 1.0 / 3.0).abs() < 1e-15);
        }
        // orthogonal partners within a basis
        for (i, j) in [(0, 1), (2, 3), (4, 5)] {
            assert!(p.get(i, j).abs() < 1e-15);
        }
        // cross-basis entries
        assert!((p.get(0, 2) - 1.0 / 6.0).abs() < 1e-15);
        assert!((p.get(3, 5) - 1.0 / 6.0).abs() < 1e-15);
    }

    #[test]
    fn effects_resolve_identity() {
        let device = mub_device();
        let mut sum = crate::Matrix::zeros(2, 2);
        for e in device.effects() {
            sum = sum.add(e.matrix());
        }
        assert!(sum.max_abs_diff(&crate::Matrix::identity(2)) < 1e-12);
    }

    #[test]
    fn stabilizer_device_effect_traces() {
        let stab = stabilizer_states::<f64>(2).unwrap();
        let device = ReferenceDevice::from_design(&stab, PhiSelection::Auto).unwrap();
        for e in device.effects() {
            assert!((e.trace_re() - 4.0 / 60.0).abs() < 1e-14);
        }
        assert!(device.certifies_design(3));
    }

    #[test]
    fn closed_form_phi_on_mub() {
        let device = mub_device();
        let expected = RealMatrix::from_fn(
            6,
            6,
            |i, j| {
                if i == j {
                    3.0 - 1.0 / 3.0
                } else {
                    -1.0 / 3.0
                }
            },
        );
        assert!(device.phi().max_abs_diff(&expected) < 1e-14);
    }

    #[test]
    fn both_born_matrices_are_one_inverses() {
        let device = mub_device();
        for method in [PhiMethod::TwoDesignClosedForm, PhiMethod::Pseudoinverse] {
            let phi = device.born_matrix(method).unwrap();
            let p = device.p_matrix();
            let residual = p.mul(&phi).mul(p).max_abs_diff(p);
            assert!(residual < 1e-10, "{method:?}: residual {residual}");
        }
    }

    #[test]
    fn sic_pseudoinverse_inverts_p() {
        let sic = sic_qubit::<f64>();
        let device = ReferenceDevice::from_design(&sic, PhiSelection::Pseudoinverse).unwrap();
        let prod = device.p_matrix().mul(device.phi());
        assert!(prod.max_abs_diff(&RealMatrix::identity(4)) < 1e-9);
    }

    #[test]
    fn biased_ensemble_rejected() {
        let mub = mub_qubit::<f64>();
        let mut weights = vec![1.0 / 6.0; 6];
        weights[0] = 1.0 / 3.0;
        weights[1] = 0.0;
        let biased = WeightedEnsemble::new(2, mub.states().to_vec(), weights).unwrap();
        assert!(matches!(
            ReferenceDevice::from_design(&biased, PhiSelection::Auto),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn non_ic_ensemble_fails_validation() {
        // the two basis states alone are a 1-design but not IC, so SΦE = I
        // cannot hold
        let states = vec![PureState::<f64>::basis(2, 0), PureState::<f64>::basis(2, 1)];
        let ens = WeightedEnsemble::unbiased(2, states).unwrap();
        assert!(ReferenceDevice::from_design(&ens, PhiSelection::Auto).is_err());
    }

    #[test]
    fn maximally_mixed_maps_to_uniform() {
        let device = mub_device();
        let rho = HermitianOperator::scaled_identity(2, 0.5);
        let p = device.probs_of_state(&rho).unwrap();
        for v in p.values() {
            assert!((v - 1.0 / 6.0).abs() < 1e-15);
        }
        let back = device.operator_of_probs(&device.uniform_probs()).unwrap();
        assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
    }

    #[test]
    fn basis_state_distribution() {
        let device = mub_device();
        let p = probs_of_basis_zero(&device);
        let expected = [1.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0];
        for (got, want) in p.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-15);
        }
        assert!((p.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn round_trip_recovers_states() {
        let device = mub_device();
        for trial in 0..50 {
            let rank = 1 + (trial % 2) as usize;
            let rho = random_state::<f64>(2, rank, derive_seed(400, trial)).unwrap();
            let p = device.probs_of_state(&rho).unwrap();
            let back = device.operator_of_probs(&p).unwrap();
            assert!(back.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        }
    }

    #[test]
    fn deterministic_vector_reconstructs_nonquantum_operator() {
        let device = mub_device();
        let mut values = vec![0.0; 6];
        values[0] = 1.0;
        let op = device
            .operator_of_probs(&ProbabilityVector::new(values))
            .unwrap();
        assert!(min_eigenvalue(&op) < -1e-3);
    }

    #[test]
    fn state_probs_lie_in_col_p() {
        let device = mub_device();
        for trial in 0..50 {
            let rho = random_state::<f64>(2, 2, derive_seed(500, trial)).unwrap();
            let p = device.probs_of_state(&rho).unwrap();
            assert!(device.in_col_p(&p, 1e-10));
        }
        let uniform = device.uniform_probs();
        assert!(device.col_p_residual(&uniform) < 1e-14);
    }

    #[test]
    fn deterministic_vector_is_outside_col_p() {
        let device = mub_device();
        let mut values = vec![0.0; 6];
        values[0] = 1.0;
        let p = ProbabilityVector::new(values);
        assert!(!device.in_col_p(&p, 1e-6));
        let projected = device.project_col_p(&p);
        let expected = [
            2.0 / 3.0,
            -1.0 / 3.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
            1.0 / 6.0,
        ];
        for (got, want) in projected.values().iter().zip(expected) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn born_rule_consistency_on_reference_effects() {
        let device = mub_device();
        let effects = device.effects().to_vec();
        for trial in 0..20 {
            let rho = random_state::<f64>(2, 2, derive_seed(600, trial)).unwrap();
            let p = device.probs_of_state(&rho).unwrap();
            let q = device.born_rule(&effects, &p).unwrap();
            assert!(q.max_abs_diff(&p) < 1e-10);
        }
    }

    #[test]
    fn born_rule_trivial_measurement() {
        let device = mub_device();
        let p = probs_of_basis_zero(&device);
        let q = device
            .born_rule(&[HermitianOperator::identity(2)], &p)
            .unwrap();
        assert_eq!(q.len(), 1);
        assert!((q.values()[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn born_rule_projective_measurement() {
        let device = mub_device();
        // p from |+⟩⟨+| against the computational-basis measurement
        let plus = &mub_qubit::<f64>().states()[2].clone();
        let p = device.probs_of_state(&plus.projector()).unwrap();
        let measurement = [
            PureState::<f64>::basis(2, 0).projector(),
            PureState::<f64>::basis(2, 1).projector(),
        ];
        let q = device.born_rule(&measurement, &p).unwrap();
        assert!((q.values()[0] - 0.5).abs() < 1e-12);
        assert!((q.values()[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn born_rule_rejects_incomplete_measurement() {
        let device = mub_device();
        let p = device.uniform_probs();
        let only_zero = [PureState::<f64>::basis(2, 0).projector()];
        assert!(matches!(
            device.born_rule(&only_zero, &p),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn phi_independence_on_col_p() {
        let device = mub_device();
        let phi_pinv = device.born_matrix(PhiMethod::Pseudoinverse).unwrap();
        let pinv_device = ReferenceDevice::from_parts(
            2,
            device.effects().to_vec(),
            device.reprep_states().to_vec(),
            device.p_matrix().clone(),
            phi_pinv,
            PhiMethod::Pseudoinverse,
        )
        .unwrap();
        for trial in 0..50 {
            let rho = random_state::<f64>(2, 2, derive_seed(700, trial)).unwrap();
            let p = device.probs_of_state(&rho).unwrap();
            let a = device.operator_of_probs(&p).unwrap();
            let b = pinv_device.operator_of_probs(&p).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-9);
        }
    }

    #[test]
    fn closed_form_rejected_for_non_two_design() {
        // an unbiased 1-design that is not a 2-design: both bases of z and x
        let r = 0.5_f64.sqrt();
        let states = vec![
            PureState::<f64>::basis(2, 0),
            PureState::<f64>::basis(2, 1),
            PureState::new(vec![
                num_complex::Complex::new(r, 0.0),
                num_complex::Complex::new(r, 0.0),
            ])
            .unwrap(),
            PureState::new(vec![
                num_complex::Complex::new(r, 0.0),
                num_complex::Complex::new(-r, 0.0),
            ])
            .unwrap(),
        ];
        let ens = WeightedEnsemble::unbiased(2, states).unwrap();
        assert!(matches!(
            ReferenceDevice::from_design(&ens, PhiSelection::ClosedForm),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn unit_trace_enforced() {
        let device = mub_device();
        let not_a_state = HermitianOperator::scaled_identity(2, 1.0);
        assert!(matches!(
            device.probs_of_state(&not_a_state),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn sic_device_certifies_two_but_not_three() {
        let device = ReferenceDevice::from_design(&sic_qubit::<f64>(), PhiSelection::Auto).unwrap();
        assert!(device.certifies_design(2));
        assert!(!device.certifies_design(3));
        assert_eq!(device.phi_method(), PhiMethod::TwoDesignClosedForm);
    }

    #[test]
    fn spectrum_of_reconstructed_deterministic_vector() {
        // decoding e_0 on the MUB device gives 3|0⟩⟨0| − I
        let device = mub_device();
        let mut values = vec![0.0; 6];
        values[0] = 1.0;
        let op = device
            .operator_of_probs(&ProbabilityVector::new(values))
            .unwrap();
        let eig = hermitian_eig(&op);
        assert!((eig.eigenvalues[0] - 2.0).abs() < 1e-12);
        assert!((eig.eigenvalues[1] + 1.0).abs() < 1e-12);
    }
}
