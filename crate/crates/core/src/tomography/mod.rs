//! State and process tomography and the fidelity metrics.

pub mod choi;
pub mod dataset;
pub mod labels;
pub mod qpt;
pub mod qst;

pub use choi::{
    average_gate_fidelity, choi_of_kraus, choi_of_unitary, process_fidelity, process_fidelity_superop,
    process_fidelity_to_unitary, ptm_of_choi, ptm_of_kraus, ptm_of_unitary, ChoiMatrix,
};
pub use dataset::{Dataset, DatasetKind};
pub use labels::{measurement_rotation, qst_settings, Pauli, PauliString, Probe, ProbeLabel};
pub use qpt::{qpt_jobs, qpt_reconstruct, qpt_reconstruct_probabilities, qpt_reconstruct_with, QptKey, TomographyJob};
pub use qst::{linear_inversion, qst_reconstruct, qst_reconstruct_probabilities, qst_reconstruct_with};
