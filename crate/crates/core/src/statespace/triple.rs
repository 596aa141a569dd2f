//! The triple-product tensor and moment joint distributions.

use crate::refdevice::ReferenceDevice;
use crate::scalar::{count, Scalar};
use crate::{Error, Result};

/// How a [`TripleTensor`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorProvenance {
    /// Directly from operator products, `R_ijk = Re tr(E_i σ_j σ_k)`.
    Direct,
    /// From the conditional-probability matrix alone (3-design identity).
    FromP,
}

impl TensorProvenance {
    pub fn as_str(&self) -> &'static str {
        match self {
            TensorProvenance::Direct => "direct",
            TensorProvenance::FromP => "from_P",
        }
    }
}

/// The rank-3 tensor `R_ijk = Re tr(E_i σ_j σ_k)`: the structure
/// coefficients of Jordan multiplication expressed in the reference frame.
///
/// Exactly symmetric in `(j, k)`; for the unbiased `σ ∝ E` devices built
/// here, `(n/d)·R` is symmetric under all six index permutations.
#[derive(Debug, Clone, PartialEq)]
pub struct TripleTensor<T> {
    n: usize,
    provenance: TensorProvenance,
    entries: Vec<T>,
}

impl<T: Scalar> TripleTensor<T> {
    pub(crate) fn from_entries(n: usize, provenance: TensorProvenance, entries: Vec<T>) -> Self {
        debug_assert_eq!(entries.len(), n * n * n);
        Self {
            n,
            provenance,
            entries,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn provenance(&self) -> TensorProvenance {
        self.provenance
    }

    /// Row-major entries in index order `(i, j, k)`.
    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        self.entries[(i * self.n + j) * self.n + k]
    }

    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.n, other.n, "tensor size mismatch");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).abs())
            .fold(T::zero(), T::max)
    }
}

/// Computes the triple-product tensor by the requested route.
///
/// `FromP` evaluates the closed form
/// `R_ijk = ½[(d+1)(d+2)(n/d) Σ_m P_im P_jm P_km − P_jk − P_ij − P_ik − d/n]`,
/// which reproduces the direct tensor exactly when the repreparation states
/// form a 3-design, and is rejected otherwise.
pub fn triple_tensor<T: Scalar>(
    device: &ReferenceDevice<T>,
    method: TensorProvenance,
) -> Result<TripleTensor<T>> {
    match method {
        TensorProvenance::Direct => Ok(triple_tensor_direct(device)),
        TensorProvenance::FromP => {
            if !device.certifies_design(3) {
                return Err(Error::Unsupported(
                    "triple tensor from P requires a 3-design device".into(),
                ));
            }
            Ok(triple_tensor_from_p_unchecked(device))
        }
    }
}

/// The direct tensor, served from the device's cache.
pub(crate) fn triple_tensor_direct<T: Scalar>(device: &ReferenceDevice<T>) -> TripleTensor<T> {
    TripleTensor::from_entries(
        device.outcomes(),
        TensorProvenance::Direct,
        device.triple_product_entries().to_vec(),
    )
}

/// The closed-form tensor without the 3-design gate.
///
/// On non-3-design devices this deliberately disagrees with the direct
/// tensor; it exists so negative controls can measure that gap.
pub fn triple_tensor_from_p_unchecked<T: Scalar>(device: &ReferenceDevice<T>) -> TripleTensor<T> {
    let n = device.outcomes();
    let p = device.p_matrix();
    let d = count::<T>(device.dim());
    let ratio = device.effect_trace();
    let half = T::one() / (T::one() + T::one());
    let coeff = (d + T::one()) * (d + T::one() + T::one()) / ratio;

    let mut entries = vec![T::zero(); n * n * n];
    let mut pair = vec![T::zero(); n];
    for i in 0..n {
        let row_i = p.row(i);
        for j in 0..n {
            let row_j = p.row(j);
            for (m, slot) in pair.iter_mut().enumerate() {
                *slot = row_i[m] * row_j[m];
            }
            let p_ij = p.get(i, j);
            for k in 0..n {
                let row_k = p.row(k);
                let mut contraction = T::zero();
                for m in 0..n {
                    contraction = contraction + pair[m] * row_k[m];
                }
                let value = half * (coeff * contraction - p.get(j, k) - p_ij - p.get(i, k) - ratio);
                entries[(i * n + j) * n + k] = value;
            }
        }
    }
    TripleTensor::from_entries(n, TensorProvenance::FromP, entries)
}

/// Joint outcome distribution of `t` reference copies fed the `t`-th Haar
/// moment of pure-state space.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDistribution<T> {
    t: usize,
    n: usize,
    values: Vec<T>,
}

impl<T: Scalar> JointDistribution<T> {
    pub fn order(&self) -> usize {
        self.t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Entry at a multi-index of length `t`.
    pub fn get(&self, index: &[usize]) -> T {
        assert_eq!(index.len(), self.t, "index rank mismatch");
        let flat = index.iter().fold(0, |acc, &i| {
            assert!(i < self.n, "index out of range");
            acc * self.n + i
        });
        self.values[flat]
    }

    pub fn sum(&self) -> T {
        self.values.iter().fold(T::zero(), |acc, v| acc + *v)
    }
}

/// Closed-form joint probabilities `P(E_i, …|M_t)` for `t ∈ {1, 2, 3}`:
///
/// * `t = 1`: uniform `1/n`;
/// * `t = 2`: `(1/(d+1))(1/n)[d/n + P_ij]`;
/// * `t = 3`: `(1/((d+1)(d+2)))(d/n²)[d/n + P_jk + P_ij + P_ik + 2 R_ijk]`.
pub fn moment_joint_probs<T: Scalar>(
    device: &ReferenceDevice<T>,
    t: usize,
) -> Result<JointDistribution<T>> {
    let n = device.outcomes();
    let n_t = count::<T>(n);
    let d = count::<T>(device.dim());
    let ratio = device.effect_trace();
    let one = T::one();
    let two = one + one;
    match t {
        1 => Ok(JointDistribution {
            t,
            n,
            values: vec![one / n_t; n],
        }),
        2 => {
            let scale = one / ((d + one) * n_t);
            let p = device.p_matrix();
            let mut values = Vec::with_capacity(n * n);
            for i in 0..n {
                for j in 0..n {
                    values.push(scale * (ratio + p.get(i, j)));
                }
            }
            Ok(JointDistribution { t, n, values })
        }
        3 => {
            let scale = d / ((d + one) * (d + two) * n_t * n_t);
            let p = device.p_matrix();
            let triple = device.triple_product_entries();
            let mut values = Vec::with_capacity(n * n * n);
            for i in 0..n {
                for j in 0..n {
                    let p_ij = p.get(i, j);
                    for k in 0..n {
                        let r = triple[(i * n + j) * n + k];
                        values.push(scale * (ratio + p.get(j, k) + p_ij + p.get(i, k) + two * r));
                    }
                }
            }
            Ok(JointDistribution { t, n, values })
        }
        _ => Err(Error::Unsupported(format!(
            "moment joint probabilities are defined for t in 1..=3, got {t}"
        ))),
    }
}
