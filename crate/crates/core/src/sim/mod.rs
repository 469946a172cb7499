//! State-vector and density-matrix simulation, calibration-driven noise,
//! and shot sampling.

pub mod channels;
pub mod noise;
pub mod prep;
pub mod run;
pub mod sampling;

pub use channels::{depolarizing_channel, thermal_relaxation_channel, KrausChannel};
pub use noise::{Calibration, GateCalibration, NoiseModel, QubitCalibration};
pub use prep::{prepare_state, InputState, StatePrep};
pub use run::{measured_probabilities, run_density, run_statevector};
pub use sampling::{derive_seed, sample_counts, CountsMap, QuantumState, ReadoutError};
