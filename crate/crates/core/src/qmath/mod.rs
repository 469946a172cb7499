//! Dense complex linear algebra and the fidelity kernels built on it.
//!
//! Dimensions never exceed 2^6, so everything is dense and every matrix
//! function goes through the Hermitian eigensolver.

pub mod linalg;
pub mod matrix;
pub mod random;
pub mod types;

pub use linalg::{eigh, matrix_sqrt_psd, project_to_density, state_fidelity, Projection};
pub use matrix::{kron, kron_all, pauli_basis, ComplexMatrix, C64};
pub use types::{DensityMatrix, StateVector, UnitaryMatrix};

/// Fixed numerical tolerances.
pub mod tol {
    /// Unitarity, Hermiticity and normalization at construction time.
    pub const CONSTRUCTION: f64 = 1e-10;
    /// Checks on externally supplied or heavily processed matrices.
    pub const VALIDATION: f64 = 1e-6;
    /// Algebraic identities (homomorphism, symmetry of fidelity, ...).
    pub const ALGEBRAIC: f64 = 1e-8;
    /// Smallest eigenvalue tolerated for a density matrix.
    pub const EIGEN_FLOOR: f64 = 1e-9;
    pub const TRACE: f64 = 1e-9;
}
