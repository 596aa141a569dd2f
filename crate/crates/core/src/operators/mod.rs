//! Complex linear-algebra substrate and the Hilbert-space oracle.
//!
//! Everything downstream — design verification, reference devices, and
//! state-space certification — is checked against direct operator
//! arithmetic from this module. All values are immutable after
//! construction and safe to share across threads.

mod eig;
mod haar;
mod hermitian;
mod matrix;
mod perm;
pub mod random;
mod real;

pub use eig::{hermitian_eig, is_psd, min_eigenvalue, Eigendecomposition};
pub use haar::{haar_moment, symmetric_subspace_dim};
pub use hermitian::{
    devectorize, trace_inner_product, vectorize, HermitianOperator, PureState, TOL_HERMITIAN,
    TOL_STATE_NORM,
};
pub use matrix::ComplexMatrix;
pub use perm::PermutationOperator;
pub use real::RealMatrix;
