//! Quantum states as probability vectors over a single reference measurement.
//!
//! A measure-and-reprepare device built from an informationally-complete set
//! of effects `{E_i}` assigns every density matrix `ρ` the outcome
//! distribution `p_i = tr(E_i ρ)`, and those probabilities determine `ρ`
//! uniquely. This crate constructs such reference devices from catalogued
//! projective designs, converts between density matrices and probability
//! vectors in both directions, and — when the underlying ensemble is a
//! 3-design — decides which probability vectors correspond to quantum states
//! using nothing but the device's own conditional-probability matrix.
//!
//! The crate is organized around the pipeline:
//!
//! * [`operators`] — dense complex linear algebra: Hermitian operators,
//!   permutation operators on tensor powers, Haar moments, a Jacobi
//!   eigensolver, and seeded random-state generators. This layer is the
//!   independent Hilbert-space oracle used to validate every
//!   probability-side formula.
//! * [`designs`] — catalogued weighted ensembles (qubit MUB, qubit SIC,
//!   one- and two-qubit stabilizer states) and numerical verification of
//!   the t-design property.
//! * [`refdevice`] — the reference device itself: effects, repreparation
//!   states, the conditional-probability matrix `P`, and a Born matrix `Φ`
//!   satisfying `PΦP = P`.
//! * [`statespace`] — validity and purity certification of probability
//!   vectors: agreement bounds, norm-sphere constraints, the triple-product
//!   tensor, the Jordan multiplication operator, and the variance bound.
//! * [`schema`] — JSON encodings for every artifact the CLI reads or
//!   writes.
//!
//! All numerical kernels are generic over the scalar type through
//! [`scalar::Scalar`]; the concrete aliases below fix `f64`, which is what
//! the CLI and the test suites use.

pub mod designs;
pub mod operators;
pub mod refdevice;
pub mod scalar;
pub mod schema;
pub mod statespace;

mod error;

pub use error::{Error, Result};

/// Dense complex matrix over `f64` scalars.
pub type Matrix = operators::ComplexMatrix<f64>;
/// Real matrix over `f64` scalars.
pub type RealMatrix = operators::RealMatrix<f64>;
/// Hermitian operator over `f64` scalars.
pub type Operator = operators::HermitianOperator<f64>;
/// Pure state over `f64` scalars.
pub type State = operators::PureState<f64>;
/// Weighted pure-state ensemble over `f64` scalars.
pub type Ensemble = designs::WeightedEnsemble<f64>;
/// Design certificate over `f64` scalars.
pub type Certificate = designs::DesignCertificate<f64>;
/// Reference device over `f64` scalars.
pub type Device = refdevice::ReferenceDevice<f64>;
/// Probability vector over `f64` scalars.
pub type Probs = refdevice::ProbabilityVector<f64>;
/// Triple-product tensor over `f64` scalars.
pub type Triple = statespace::TripleTensor<f64>;
/// Validity report over `f64` scalars.
pub type Report = statespace::ValidityReport<f64>;
