//! Hermitian operators, pure states, and the trace inner product.

use num_complex::Complex;

use super::matrix::ComplexMatrix;
use crate::scalar::{real, Scalar};
use crate::{Error, Result};

/// Default entrywise tolerance for `A = A†`.
pub const TOL_HERMITIAN: f64 = 1e-12;

/// Default tolerance for pure-state normalization.
pub const TOL_STATE_NORM: f64 = 1e-12;

/// A square complex matrix certified Hermitian at construction.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator<T> {
    matrix: ComplexMatrix<T>,
}

impl<T: Scalar> HermitianOperator<T> {
    /// Wraps a matrix, requiring `A = A†` within [`TOL_HERMITIAN`].
    pub fn new(matrix: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(matrix, real(TOL_HERMITIAN))
    }

    pub fn with_tolerance(matrix: ComplexMatrix<T>, tol: T) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::Dimension(format!(
                "Hermitian operator must be square, got {}x{}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let defect = matrix.hermiticity_defect();
        if defect > tol {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: max |A_ij - conj(A_ji)| = {defect}"
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d),
        }
    }

    /// `s·I` on a `d`-dimensional space.
    pub fn scaled_identity(d: usize, s: T) -> Self {
        Self {
            matrix: ComplexMatrix::identity(d).scale_re(s),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.add(&other.matrix),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            matrix: self.matrix.sub(&other.matrix),
        }
    }

    pub fn scale_re(&self, s: T) -> Self {
        Self {
            matrix: self.matrix.scale_re(s),
        }
    }

    pub fn trace_re(&self) -> T {
        self.matrix.trace().re
    }

    /// Real part of `tr(self · other)`; exact for Hermitian pairs.
    pub fn pairing(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in pairing");
        let d = self.dim();
        let mut acc = T::zero();
        for r in 0..d {
            for c in 0..d {
                let a = self.matrix.get(r, c);
                let b = other.matrix.get(c, r);
                acc = acc + a.re * b.re - a.im * b.im;
            }
        }
        acc
    }

    /// Jordan product `½(AB + BA)`.
    pub fn jordan(&self, other: &Self) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "Jordan product needs equal dimensions, got {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        let ab = self.matrix.mul(&other.matrix);
        let ba = other.matrix.mul(&self.matrix);
        let half = T::one() / (T::one() + T::one());
        Self::new(ab.add(&ba).scale_re(half))
    }
}

/// `(A|B) = tr(A†B)` for same-shape square matrices.
pub fn trace_inner_product<T: Scalar>(
    a: &ComplexMatrix<T>,
    b: &ComplexMatrix<T>,
) -> Result<Complex<T>> {
    if (a.rows(), a.cols()) != (b.rows(), b.cols()) || !a.is_square() {
        return Err(Error::Dimension(format!(
            "trace inner product needs same-shape square operands, got {}x{} and {}x{}",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    let mut acc = Complex::new(T::zero(), T::zero());
    for r in 0..a.rows() {
        for c in 0..a.cols() {
            acc = acc + a.get(r, c).conj() * b.get(r, c);
        }
    }
    Ok(acc)
}

/// Column-stacking vectorization: entry `(j, i)` of a `d×d` matrix lands at
/// index `i·d + j`, matching `|A) = (I ⊗ A) Σ_i |i,i⟩`.
pub fn vectorize<T: Scalar>(a: &ComplexMatrix<T>) -> Result<Vec<Complex<T>>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "vectorization expects a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let d = a.rows();
    let mut v = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            v.push(a.get(j, i));
        }
    }
    Ok(v)
}

/// Inverse of [`vectorize`]; the input length must be a perfect square.
pub fn devectorize<T: Scalar>(v: &[Complex<T>]) -> Result<ComplexMatrix<T>> {
    let len = v.len();
    let d = (len as f64).sqrt().round() as usize;
    if d * d != len || d == 0 {
        return Err(Error::Dimension(format!(
            "vector of length {len} does not devectorize to a square matrix"
        )));
    }
    Ok(ComplexMatrix::from_fn(d, d, |j, i| v[i * d + j]))
}

/// A normalized state vector.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState<T> {
    amplitudes: Vec<Complex<T>>,
}

impl<T: Scalar> PureState<T> {
    /// Wraps amplitudes, requiring unit 2-norm within [`TOL_STATE_NORM`].
    pub fn new(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        Self::with_tolerance(amplitudes, real(TOL_STATE_NORM))
    }

    pub fn with_tolerance(amplitudes: Vec<Complex<T>>, tol: T) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::Dimension("state vector must be nonempty".into()));
        }
        let norm_sqr = amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr());
        if (norm_sqr.sqrt() - T::one()).abs() > tol {
            return Err(Error::Validation(format!(
                "state vector norm {} is not 1",
                norm_sqr.sqrt()
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn normalized(amplitudes: Vec<Complex<T>>) -> Result<Self> {
        let norm = amplitudes
            .iter()
            .fold(T::zero(), |acc, a| acc + a.norm_sqr())
            .sqrt();
        if norm == T::zero() {
            return Err(Error::InvalidInput(
                "cannot normalize the zero vector".into(),
            ));
        }
        let amplitudes = amplitudes
            .into_iter()
            .map(|a| a.scale(T::one() / norm))
            .collect();
        Ok(Self { amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(d: usize, index: usize) -> Self {
        assert!(index < d, "basis index out of range");
        let mut amplitudes = vec![Complex::new(T::zero(), T::zero()); d];
        amplitudes[index] = Complex::new(T::one(), T::zero());
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Complex<T> {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch in overlap");
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| {
                acc + a.conj() * b
            })
    }

    /// Rank-1 projector `|ψ⟩⟨ψ|`.
    pub fn projector(&self) -> HermitianOperator<T> {
        let matrix = ComplexMatrix::outer(&self.amplitudes, &self.amplitudes);
        HermitianOperator { matrix }
    }

    /// Amplitudes of `|ψ⟩^{⊗t}`.
    pub fn tensor_power(&self, t: usize) -> Vec<Complex<T>> {
        assert!(t >= 1, "tensor power needs t >= 1");
        let mut out = self.amplitudes.clone();
        for _ in 1..t {
            let mut next = Vec::with_capacity(out.len() * self.amplitudes.len());
            for a in &out {
                for b in &self.amplitudes {
                    next.push(a * b);
                }
            }
            out = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::random::random_hermitian;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn ket_plus() -> PureState<f64> {
        let r = 0.5_f64.sqrt();
        PureState::new(vec![c(r, 0.0), c(r, 0.0)]).unwrap()
    }

    #[test]
    fn trace_inner_product_examples() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        assert_eq!(trace_inner_product(&i2, &i2).unwrap(), c(2.0, 0.0));

        let p0 = PureState::<f64>::basis(2, 0).projector();
        let p1 = PureState::<f64>::basis(2, 1).projector();
        let ortho = trace_inner_product(p0.matrix(), p1.matrix()).unwrap();
        assert!(ortho.norm() < 1e-15);

        let pplus = ket_plus().projector();
        let mixed = trace_inner_product(p0.matrix(), pplus.matrix()).unwrap();
        assert!((mixed - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn trace_inner_product_shape_error() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        let i3 = ComplexMatrix::<f64>::identity(3);
        assert!(matches!(
            trace_inner_product(&i2, &i3),
            Err(Error::Dimension(_))
        ));
    }

    #[test]
    fn vectorize_convention() {
        let i2 = ComplexMatrix::<f64>::identity(2);
        let v = vectorize(&i2).unwrap();
        assert_eq!(v, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);

        // |0⟩⟨1| has its single entry at (j, i) = (0, 1) → index i·d + j = 2.
        let mut m = ComplexMatrix::<f64>::zeros(2, 2);
        m.set(0, 1, c(1.0, 0.0));
        let v = vectorize(&m).unwrap();
        assert_eq!(v[2], c(1.0, 0.0));
        assert_eq!(v[0], c(0.0, 0.0));
    }

    #[test]
    fn vectorize_round_trip_is_exact() {
        let a = random_hermitian::<f64>(3, 11);
        let v = vectorize(a.matrix()).unwrap();
        let back = devectorize(&v).unwrap();
        assert_eq!(back, *a.matrix());
    }

    #[test]
    fn vectorized_dot_equals_trace_inner_product() {
        for trial in 0..100 {
            let a = random_hermitian::<f64>(3, 1000 + trial);
            let b = random_hermitian::<f64>(3, 2000 + trial);
            let direct = trace_inner_product(a.matrix(), b.matrix()).unwrap();
            let va = vectorize(a.matrix()).unwrap();
            let vb = vectorize(b.matrix()).unwrap();
            let dot = va
                .iter()
                .zip(&vb)
                .fold(c(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y);
            assert!((direct - dot).norm() < 1e-12);
        }
    }

    #[test]
    fn devectorize_rejects_non_square_lengths() {
        let v = vec![c(1.0, 0.0); 3];
        assert!(matches!(devectorize(&v), Err(Error::Dimension(_))));
    }

    #[test]
    fn hermitian_rejects_asymmetric() {
        let mut m = ComplexMatrix::<f64>::identity(2);
        m.set(0, 1, c(0.5, 0.0));
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::Validation(_))
        ));
    }

    #[test]
    fn pure_state_rejects_unnormalized() {
        assert!(PureState::new(vec![c(0.5, 0.0), c(0.5, 0.0)]).is_err());
    }
}
