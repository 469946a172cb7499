//! Gate catalog, circuit IR, connectivity checks and the text format.

pub mod circuit;
pub mod coupling;
pub mod gate;
pub mod text;

pub use circuit::{circuit_unitary, Circuit, MAX_QUBITS};
pub use coupling::{validate_connectivity, CouplingGraph, Violation};
pub use gate::{gate_matrix, Gate, GateKind};
pub use text::{parse_circuit, serialize_circuit};
