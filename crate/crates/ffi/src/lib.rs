//! C ABI over `toffoli-core`.
//!
//! Every fallible function returns a [`ToffoliStatus`] and writes its result
//! through an out-pointer. On failure the message is available from
//! [`toffoli_last_error`] on the same thread. Handles are opaque and must be
//! released with their matching `_free` function; strings returned by the
//! library are released with [`toffoli_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use serde_json::Value;
use toffoli_core::gates::{parse_circuit, serialize_circuit, Circuit};
use toffoli_core::harness::{run_qpt_experiment, run_qst_experiment, ExperimentConfig, Report};
use toffoli_core::sim::{measured_probabilities, InputState, NoiseModel};
use toffoli_core::synthesis::{
    certify, decompose_toffoli, peephole, to_native, toffoli_matrix, DecompositionStrategy, CERTIFY_TOL,
};
use toffoli_core::{Error, ErrorCategory};

/// Status codes. The nonzero error categories share their values with the
/// command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ToffoliStatus {
    Ok = 0,
    Usage = 2,
    Schema = 3,
    Numerical = 4,
    Io = 5,
    NullPointer = 6,
    Panic = 7,
}

impl From<&Error> for ToffoliStatus {
    fn from(e: &Error) -> Self {
        match e.category() {
            ErrorCategory::Usage => ToffoliStatus::Usage,
            ErrorCategory::Schema => ToffoliStatus::Schema,
            ErrorCategory::Numerical => ToffoliStatus::Numerical,
            ErrorCategory::Io => ToffoliStatus::Io,
        }
    }
}

/// Opaque circuit handle.
pub struct ToffoliCircuit(Circuit);

/// Opaque noise-model handle.
pub struct ToffoliNoiseModel(NoiseModel);

/// Opaque experiment-report handle.
pub struct ToffoliReport(Report);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(ToffoliStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure((&e).into(), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(ToffoliStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> ToffoliStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => ToffoliStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic".into());
            set_error(format!("panic: {msg}"));
            ToffoliStatus::Panic
        }
    }
}

unsafe fn str_arg<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p).to_str().map_err(|_| Failure(ToffoliStatus::Usage, format!("{what} is not valid UTF-8")))
}

unsafe fn handle<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("nul bytes removed").into_raw()
}

/// Message of the last failed call on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn toffoli_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Frees a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn toffoli_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the three-qubit Toffoli (controls 1 and 2, target 0) with the
/// named strategy, e.g. `"ecr-native"` or `"FULL_6CNOT"`.
///
/// # Safety
/// `strategy` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_synthesize(strategy: *const c_char, out: *mut *mut ToffoliCircuit) -> ToffoliStatus {
    guard(|| {
        let s: DecompositionStrategy = str_arg(strategy, "strategy")?.parse()?;
        let c = decompose_toffoli(s, (1, 2), 0)?;
        write_out(out, Box::into_raw(Box::new(ToffoliCircuit(c))), "out")
    })
}

/// Parses a circuit from its text form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_parse(text: *const c_char, out: *mut *mut ToffoliCircuit) -> ToffoliStatus {
    guard(|| {
        let c = parse_circuit(str_arg(text, "text")?)?;
        write_out(out, Box::into_raw(Box::new(ToffoliCircuit(c))), "out")
    })
}

/// # Safety
/// `c` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_free(c: *mut ToffoliCircuit) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Gate counts of a circuit.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ToffoliCircuitInfo {
    pub num_qubits: usize,
    pub gates: usize,
    pub two_qubit_gates: usize,
    pub depth: usize,
    pub is_native: bool,
}

/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_info(c: *const ToffoliCircuit, out: *mut ToffoliCircuitInfo) -> ToffoliStatus {
    guard(|| {
        let c = &handle(c, "circuit")?.0;
        let info = ToffoliCircuitInfo {
            num_qubits: c.num_qubits(),
            gates: c.len(),
            two_qubit_gates: c.two_qubit_count(),
            depth: c.depth(),
            is_native: c.is_native(),
        };
        write_out(out, info, "out")
    })
}

/// Serializes a circuit to text. Free the result with `toffoli_string_free`.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_to_text(c: *const ToffoliCircuit, out: *mut *mut c_char) -> ToffoliStatus {
    guard(|| {
        let text = serialize_circuit(&handle(c, "circuit")?.0);
        write_out(out, into_c_string(text), "out")
    })
}

/// Rewrites a circuit into the native gate set and simplifies it.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_to_native(c: *const ToffoliCircuit, out: *mut *mut ToffoliCircuit) -> ToffoliStatus {
    guard(|| {
        let native = peephole(&to_native(&handle(c, "circuit")?.0)?);
        write_out(out, Box::into_raw(Box::new(ToffoliCircuit(native))), "out")
    })
}

/// Sets `*out` to whether the circuit equals the Toffoli matrix up to global
/// phase, within the certification tolerance.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_circuit_is_toffoli(c: *const ToffoliCircuit, out: *mut bool) -> ToffoliStatus {
    guard(|| {
        let c = &handle(c, "circuit")?.0;
        let ok = c.num_qubits() == 3 && certify(c, &toffoli_matrix(), CERTIFY_TOL)?.equivalent;
        write_out(out, ok, "out")
    })
}

/// The noiseless model.
///
/// # Safety
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_noise_model_ideal(out: *mut *mut ToffoliNoiseModel) -> ToffoliStatus {
    guard(|| write_out(out, Box::into_raw(Box::new(ToffoliNoiseModel(NoiseModel::ideal()))), "out"))
}

/// Loads a calibration JSON file into a noise model.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_noise_model_load(path: *const c_char, out: *mut *mut ToffoliNoiseModel) -> ToffoliStatus {
    guard(|| {
        let nm = NoiseModel::load(str_arg(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(ToffoliNoiseModel(nm))), "out")
    })
}

/// # Safety
/// `nm` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn toffoli_noise_model_free(nm: *mut ToffoliNoiseModel) {
    if !nm.is_null() {
        drop(Box::from_raw(nm));
    }
}

/// Runs the circuit from |0...0⟩ and writes the measured outcome
/// distribution, qubit 0 as the least significant bit. Non-native circuits
/// are translated first. `len` must equal 2^num_qubits.
///
/// # Safety
/// Handles must be live and `probs` must point to `len` writable doubles.
#[no_mangle]
pub unsafe extern "C" fn toffoli_simulate_probabilities(
    c: *const ToffoliCircuit,
    nm: *const ToffoliNoiseModel,
    probs: *mut f64,
    len: usize,
) -> ToffoliStatus {
    guard(|| {
        let c = &handle(c, "circuit")?.0;
        let nm = &handle(nm, "noise model")?.0;
        if probs.is_null() {
            return Err(null("probs"));
        }
        let dim = 1usize << c.num_qubits();
        if len != dim {
            return Err(Failure(ToffoliStatus::Usage, format!("buffer holds {len} values, need {dim}")));
        }
        let native = if c.is_native() { c.clone() } else { peephole(&to_native(c)?) };
        let p = measured_probabilities(&native, nm)?;
        std::slice::from_raw_parts_mut(probs, len).copy_from_slice(&p);
        Ok(())
    })
}

fn config_from_json(text: &str) -> Result<ExperimentConfig, Failure> {
    let usage = |m: String| Failure(ToffoliStatus::Usage, m);
    let overrides: Value = serde_json::from_str(text).map_err(|e| usage(format!("config JSON: {e}")))?;
    let Value::Object(mut overrides) = overrides else {
        return Err(usage("config must be a JSON object".into()));
    };
    let state = match overrides.get("input_state").and_then(Value::as_str) {
        Some(s) => s.parse::<InputState>()?,
        None => InputState::Ghz,
    };
    if overrides.contains_key("input_state") {
        overrides.insert("input_state".into(), serde_json::to_value(state).expect("state serializes"));
    }
    let mut base = serde_json::to_value(ExperimentConfig::noise_free(state, 19_000)).expect("config serializes");
    let fields = base.as_object_mut().expect("config is an object");
    for (k, v) in overrides {
        if !fields.contains_key(&k) {
            return Err(usage(format!("unknown config field `{k}`")));
        }
        fields.insert(k, v);
    }
    serde_json::from_value(base).map_err(|e| usage(format!("config: {e}")))
}

fn run_experiment(
    config_json: *const c_char,
    out: *mut *mut ToffoliReport,
    run: fn(&ExperimentConfig) -> toffoli_core::Result<Report>,
) -> ToffoliStatus {
    guard(|| {
        let cfg = config_from_json(unsafe { str_arg(config_json, "config")? })?;
        let report = run(&cfg)?;
        unsafe { write_out(out, Box::into_raw(Box::new(ToffoliReport(report))), "out") }
    })
}

/// Runs a state-tomography experiment. `config_json` is a JSON object whose
/// fields override the noise-free defaults, e.g.
/// `{"input_state": "W", "shots_per_setting": 1000, "repeats": 5}`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_run_qst(config_json: *const c_char, out: *mut *mut ToffoliReport) -> ToffoliStatus {
    run_experiment(config_json, out, run_qst_experiment)
}

/// Runs a process-tomography experiment. The config must set
/// `"accept_qpt_budget": true`.
///
/// # Safety
/// `config_json` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_run_qpt(config_json: *const c_char, out: *mut *mut ToffoliReport) -> ToffoliStatus {
    run_experiment(config_json, out, run_qpt_experiment)
}

/// Loads a report from a JSON file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_report_load(path: *const c_char, out: *mut *mut ToffoliReport) -> ToffoliStatus {
    guard(|| {
        let r = Report::load(str_arg(path, "path")?)?;
        write_out(out, Box::into_raw(Box::new(ToffoliReport(r))), "out")
    })
}

/// # Safety
/// `r` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn toffoli_report_free(r: *mut ToffoliReport) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Summary statistics of a report. The average-gate fields are NaN for
/// state tomography.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ToffoliReportSummary {
    pub repeats: usize,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    pub mean_average_gate_fidelity: f64,
    pub std_average_gate_fidelity: f64,
}

/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_report_summary(r: *const ToffoliReport, out: *mut ToffoliReportSummary) -> ToffoliStatus {
    guard(|| {
        let r = &handle(r, "report")?.0;
        let summary = ToffoliReportSummary {
            repeats: r.repeats(),
            mean_fidelity: r.mean_fidelity,
            std_fidelity: r.std_fidelity,
            mean_average_gate_fidelity: r.mean_average_gate_fidelity.unwrap_or(f64::NAN),
            std_average_gate_fidelity: r.std_average_gate_fidelity.unwrap_or(f64::NAN),
        };
        write_out(out, summary, "out")
    })
}

/// Copies per-repeat fidelities into `buf`. `len` must be at least the
/// number of repeats; `*written` receives the count copied.
///
/// # Safety
/// `r` must be a live handle, `buf` must hold `len` doubles and `written`
/// must be writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_report_fidelities(
    r: *const ToffoliReport,
    buf: *mut f64,
    len: usize,
    written: *mut usize,
) -> ToffoliStatus {
    guard(|| {
        let f = &handle(r, "report")?.0.fidelities;
        if buf.is_null() {
            return Err(null("buf"));
        }
        if len < f.len() {
            return Err(Failure(ToffoliStatus::Usage, format!("buffer holds {len} values, need {}", f.len())));
        }
        std::slice::from_raw_parts_mut(buf, f.len()).copy_from_slice(f);
        write_out(written, f.len(), "written")
    })
}

/// Serializes a report to JSON. Free the result with `toffoli_string_free`.
///
/// # Safety
/// `r` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn toffoli_report_to_json(r: *const ToffoliReport, out: *mut *mut c_char) -> ToffoliStatus {
    guard(|| {
        let json = handle(r, "report")?.0.to_json();
        write_out(out, into_c_string(json), "out")
    })
}
