//! Toffoli decompositions and their certification.

pub mod equivalence;
pub mod native;
pub mod toffoli;

pub use equivalence::{certify, equivalent_up_to_global_phase, EquivalenceReport, CERTIFY_TOL};
pub use native::{cnot_to_ecr, peephole, to_native};
pub use toffoli::{decompose_toffoli, decompose_toffoli_on, toffoli_matrix, toffoli_unitary, DecompositionStrategy};
