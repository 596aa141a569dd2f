//! JSON encodings for the artifacts the CLI reads and writes.
//!
//! Complex numbers are two-element arrays `[re, im]`; matrices are
//! row-major nested arrays of those. Floats round-trip through serde_json's
//! shortest-representation printing, so write-then-read reproduces every
//! value exactly. All readers reject non-finite values.

use serde::{Deserialize, Serialize};

use crate::designs::WeightedEnsemble;
use crate::operators::{ComplexMatrix, HermitianOperator, PureState, RealMatrix};
use crate::refdevice::{PhiMethod, ReferenceDevice};
use crate::statespace::{TensorProvenance, TripleTensor};
use crate::{Error, Result};

/// `[re, im]`.
pub type JsonComplex = [f64; 2];
/// Row-major complex matrix.
pub type JsonMatrix = Vec<Vec<JsonComplex>>;

/// On-disk form of a weighted pure-state ensemble.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnsembleFile {
    pub d: usize,
    pub weights: Vec<f64>,
    /// One amplitude vector per state.
    pub states: Vec<Vec<JsonComplex>>,
}

/// On-disk form of a reference device.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DeviceFile {
    pub d: usize,
    pub n: usize,
    pub effects: Vec<JsonMatrix>,
    pub states: Vec<JsonMatrix>,
    #[serde(rename = "P")]
    pub p: Vec<Vec<f64>>,
    pub phi: Vec<Vec<f64>>,
    pub phi_method: String,
}

/// On-disk form of a probability vector.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProbsFile {
    pub n: usize,
    pub p: Vec<f64>,
}

/// On-disk form of a Hermitian operator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub d: usize,
    pub matrix: JsonMatrix,
}

/// On-disk form of a triple-product tensor, index order `(i, j, k)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TensorFile {
    pub n: usize,
    pub method: String,
    pub entries: Vec<Vec<Vec<f64>>>,
}

fn ensure_finite<'a>(values: impl IntoIterator<Item = &'a f64>, what: &str) -> Result<()> {
    if values.into_iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Validation(format!(
            "{what} contains a non-finite value"
        )))
    }
}

fn complex_to_json(c: num_complex::Complex<f64>) -> JsonComplex {
    [c.re, c.im]
}

fn matrix_to_json(m: &ComplexMatrix<f64>) -> JsonMatrix {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|c| complex_to_json(*c)).collect())
        .collect()
}

fn matrix_from_json(rows: &JsonMatrix, what: &str) -> Result<ComplexMatrix<f64>> {
    for row in rows {
        ensure_finite(row.iter().flatten(), what)?;
    }
    ComplexMatrix::from_rows(
        rows.iter()
            .map(|row| {
                row.iter()
                    .map(|[re, im]| num_complex::Complex::new(*re, *im))
                    .collect()
            })
            .collect(),
    )
}

fn real_matrix_to_json(m: &RealMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.rows()).map(|r| m.row(r).to_vec()).collect()
}

fn real_matrix_from_json(rows: &[Vec<f64>], what: &str) -> Result<RealMatrix<f64>> {
    for row in rows {
        ensure_finite(row.iter(), what)?;
    }
    RealMatrix::from_rows(rows.to_vec())
}

impl EnsembleFile {
    pub fn from_ensemble(ens: &WeightedEnsemble<f64>) -> Self {
        Self {
            d: ens.dim(),
            weights: ens.weights().to_vec(),
            states: ens
                .states()
                .iter()
                .map(|s| s.amplitudes().iter().map(|c| complex_to_json(*c)).collect())
                .collect(),
        }
    }

    pub fn to_ensemble(&self) -> Result<WeightedEnsemble<f64>> {
        ensure_finite(&self.weights, "ensemble weights")?;
        let mut states = Vec::with_capacity(self.states.len());
        for amps in &self.states {
            ensure_finite(amps.iter().flatten(), "state amplitudes")?;
            let amplitudes = amps
                .iter()
                .map(|[re, im]| num_complex::Complex::new(*re, *im))
                .collect();
            states.push(PureState::new(amplitudes)?);
        }
        WeightedEnsemble::new(self.d, states, self.weights.clone())
    }
}

impl DeviceFile {
    pub fn from_device(device: &ReferenceDevice<f64>) -> Self {
        Self {
            d: device.dim(),
            n: device.outcomes(),
            effects: device
                .effects()
                .iter()
                .map(|e| matrix_to_json(e.matrix()))
                .collect(),
            states: device
                .reprep_states()
                .iter()
                .map(|s| matrix_to_json(s.matrix()))
                .collect(),
            p: real_matrix_to_json(device.p_matrix()),
            phi: real_matrix_to_json(device.phi()),
            phi_method: device.phi_method().as_str().to_string(),
        }
    }

    /// Rebuilds the device, re-validating every structural invariant.
    pub fn to_device(&self) -> Result<ReferenceDevice<f64>> {
        if self.effects.len() != self.n || self.states.len() != self.n {
            return Err(Error::Dimension(format!(
                "device file declares n = {} but carries {} effects and {} states",
                self.n,
                self.effects.len(),
                self.states.len()
            )));
        }
        let effects = self
            .effects
            .iter()
            .map(|m| HermitianOperator::new(matrix_from_json(m, "effect")?))
            .collect::<Result<Vec<_>>>()?;
        let states = self
            .states
            .iter()
            .map(|m| HermitianOperator::new(matrix_from_json(m, "state")?))
            .collect::<Result<Vec<_>>>()?;
        let p = real_matrix_from_json(&self.p, "P matrix")?;
        let phi = real_matrix_from_json(&self.phi, "phi matrix")?;
        ReferenceDevice::from_parts(
            self.d,
            effects,
            states,
            p,
            phi,
            PhiMethod::parse(&self.phi_method)?,
        )
    }
}

impl ProbsFile {
    pub fn from_values(values: &[f64]) -> Self {
        Self {
            n: values.len(),
            p: values.to_vec(),
        }
    }

    pub fn to_values(&self) -> Result<Vec<f64>> {
        ensure_finite(&self.p, "probability vector")?;
        if self.p.len() != self.n {
            return Err(Error::Dimension(format!(
                "probs file declares n = {} but carries {} entries",
                self.n,
                self.p.len()
            )));
        }
        Ok(self.p.clone())
    }
}

impl OperatorFile {
    pub fn from_operator(op: &HermitianOperator<f64>) -> Self {
        Self {
            d: op.dim(),
            matrix: matrix_to_json(op.matrix()),
        }
    }

    pub fn to_operator(&self) -> Result<HermitianOperator<f64>> {
        let matrix = matrix_from_json(&self.matrix, "operator")?;
        if matrix.rows() != self.d {
            return Err(Error::Dimension(format!(
                "operator file declares d = {} but carries a {}x{} matrix",
                self.d,
                matrix.rows(),
                matrix.cols()
            )));
        }
        HermitianOperator::new(matrix)
    }
}

impl TensorFile {
    pub fn from_tensor(tensor: &TripleTensor<f64>) -> Self {
        let n = tensor.n();
        let entries = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| (0..n).map(|k| tensor.get(i, j, k)).collect())
                    .collect()
            })
            .collect();
        Self {
            n,
            method: tensor.provenance().as_str().to_string(),
            entries,
        }
    }

    pub fn to_tensor(&self) -> Result<TripleTensor<f64>> {
        let n = self.n;
        if self.entries.len() != n
            || self
                .entries
                .iter()
                .any(|plane| plane.len() != n || plane.iter().any(|row| row.len() != n))
        {
            return Err(Error::Dimension("tensor entries are not n x n x n".into()));
        }
        let provenance = match self.method.as_str() {
            "direct" => TensorProvenance::Direct,
            "from_P" => TensorProvenance::FromP,
            other => {
                return Err(Error::InvalidInput(format!(
                    "unknown tensor method {other:?}"
                )))
            }
        };
        let mut flat = Vec::with_capacity(n * n * n);
        for plane in &self.entries {
            for row in plane {
                ensure_finite(row.iter(), "tensor entries")?;
                flat.extend_from_slice(row);
            }
        }
        Ok(TripleTensor::from_entries(n, provenance, flat))
    }
}
