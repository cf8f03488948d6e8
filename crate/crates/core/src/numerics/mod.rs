//! Dense complex linear algebra and the Hermitian eigensolver.

mod eigen;
mod matrix;

pub use eigen::{
    from_eigenbasis, hermitian_eigen, to_eigenbasis, HermitianEigenDecomposition, HERMITIAN_TOLERANCE, MAX_SWEEPS,
};
pub use matrix::{frobenius_distance, ComplexMatrix, ONE, ZERO};
pub use num_complex::Complex64;
