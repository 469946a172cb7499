use std::fmt;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NotHermitian { deviation: f64 },
    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },
    #[error("matrix is not unitary (max deviation {deviation:.3e})")]
    NotUnitary { deviation: f64 },
    #[error("trace is {trace:.3e}, expected 1")]
    BadTrace { trace: f64 },
    #[error("projection collapsed to zero trace")]
    ZeroTrace,
    #[error("state vector norm is {norm:.3e}, expected 1")]
    NotNormalized { norm: f64 },
    #[error("channel is not trace preserving (max deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("unknown gate `{0}`")]
    UnknownGate(String),
    #[error("invalid gate {gate}: {reason}")]
    InvalidGate { gate: String, reason: String },
    #[error("qubit {qubit} out of range for {num_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("parse error on line {line}: {reason}")]
    Parse { line: usize, reason: String },
    #[error("{num_qubits} qubits exceeds the dense-simulation limit of {max}")]
    TooManyQubits { num_qubits: usize, max: usize },

    #[error("qubits {0:?} do not form a path in the coupling graph")]
    NonPathQubits([usize; 3]),
    #[error("gate {0} is not in the native gate set")]
    NonNativeGate(String),

    #[error("no calibration for qubit {0}")]
    MissingCalibration(usize),
    #[error("qubit {qubit}: T2 = {t2} us exceeds 2*T1 = {two_t1} us")]
    InvalidCoherence { qubit: usize, t2: f64, two_t1: f64 },
    #[error("error rate {err} is outside [0, {limit}) for dimension {dim}")]
    ErrTooLarge { err: f64, limit: f64, dim: usize },
    #[error("invalid Pauli string `{0}`")]
    InvalidPauliString(String),
    #[error("invalid probe label `{0}`")]
    InvalidLabel(String),
    #[error("k = {k} outside supported range {min}..={max}")]
    KOutOfRange { k: usize, min: usize, max: usize },
    #[error("missing measurement settings: {}", .0.join(", "))]
    MissingSetting(Vec<String>),
    #[error("missing tomography cells: {}", .0.join(", "))]
    MissingCell(Vec<String>),

    #[error("schema error at {path}: {reason}")]
    Schema { path: String, reason: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Coarse grouping used for CLI exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorCategory {
    Usage,
    Schema,
    Numerical,
    Io,
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCategory::Usage => "usage",
            ErrorCategory::Schema => "schema",
            ErrorCategory::Numerical => "numerical",
            ErrorCategory::Io => "io",
        })
    }
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        use Error::*;
        match self {
            DimensionMismatch { .. }
            | NotSquare { .. }
            | NonFinite
            | NotHermitian { .. }
            | NotPsd { .. }
            | NotUnitary { .. }
            | BadTrace { .. }
            | ZeroTrace
            | NotNormalized { .. }
            | NotTracePreserving { .. }
            | ErrTooLarge { .. } => ErrorCategory::Numerical,
            UnknownGate(_)
            | InvalidGate { .. }
            | QubitOutOfRange { .. }
            | Parse { .. }
            | MissingCalibration(_)
            | InvalidCoherence { .. }
            | InvalidPauliString(_)
            | InvalidLabel(_)
            | MissingSetting(_)
            | MissingCell(_)
            | Schema { .. } => ErrorCategory::Schema,
            TooManyQubits { .. }
            | NonPathQubits(_)
            | NonNativeGate(_)
            | KOutOfRange { .. }
            | Config(_) => ErrorCategory::Usage,
            Io(_) => ErrorCategory::Io,
        }
    }

    pub(crate) fn schema(path: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Schema {
            path: path.into(),
            reason: reason.into(),
        }
    }
}
