#ifndef TOFFOLI_H
#define TOFFOLI_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes. The nonzero error categories share their values with the
 * command-line exit codes.
 */
typedef enum {
  TOFFOLI_STATUS_OK = 0,
  TOFFOLI_STATUS_USAGE = 2,
  TOFFOLI_STATUS_SCHEMA = 3,
  TOFFOLI_STATUS_NUMERICAL = 4,
  TOFFOLI_STATUS_IO = 5,
  TOFFOLI_STATUS_NULL_POINTER = 6,
  TOFFOLI_STATUS_PANIC = 7,
} ToffoliStatus;

/**
 * Opaque circuit handle.
 */
typedef struct ToffoliCircuit ToffoliCircuit;

/**
 * Opaque noise-model handle.
 */
typedef struct ToffoliNoiseModel ToffoliNoiseModel;

/**
 * Opaque experiment-report handle.
 */
typedef struct ToffoliReport ToffoliReport;

/**
 * Gate counts of a circuit.
 */
typedef struct {
  size_t num_qubits;
  size_t gates;
  size_t two_qubit_gates;
  size_t depth;
  bool is_native;
} ToffoliCircuitInfo;

/**
 * Summary statistics of a report. The average-gate fields are NaN for
 * state tomography.
 */
typedef struct {
  size_t repeats;
  double mean_fidelity;
  double std_fidelity;
  double mean_average_gate_fidelity;
  double std_average_gate_fidelity;
} ToffoliReportSummary;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer stays
 * valid until the next library call on the same thread.
 */
const char *toffoli_last_error(void);

/**
 * Frees a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed.
 */
void toffoli_string_free(char *s);

/**
 * Builds the three-qubit Toffoli (controls 1 and 2, target 0) with the
 * named strategy, e.g. `"ecr-native"` or `"FULL_6CNOT"`.
 *
 * # Safety
 * `strategy` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_circuit_synthesize(const char *strategy, ToffoliCircuit **out);

/**
 * Parses a circuit from its text form.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_circuit_parse(const char *text, ToffoliCircuit **out);

/**
 * # Safety
 * `c` must be null or a handle from this library not yet freed.
 */
void toffoli_circuit_free(ToffoliCircuit *c);

/**
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_circuit_info(const ToffoliCircuit *c, ToffoliCircuitInfo *out);

/**
 * Serializes a circuit to text. Free the result with `toffoli_string_free`.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_circuit_to_text(const ToffoliCircuit *c, char **out);

/**
 * Rewrites a circuit into the native gate set and simplifies it.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_circuit_to_native(const ToffoliCircuit *c, ToffoliCircuit **out);

/**
 * Sets `*out` to whether the circuit equals the Toffoli matrix up to global
 * phase, within the certification tolerance.
 *
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_circuit_is_toffoli(const ToffoliCircuit *c, bool *out);

/**
 * The noiseless model.
 *
 * # Safety
 * `out` must be writable.
 */
ToffoliStatus toffoli_noise_model_ideal(ToffoliNoiseModel **out);

/**
 * Loads a calibration JSON file into a noise model.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_noise_model_load(const char *path, ToffoliNoiseModel **out);

/**
 * # Safety
 * `nm` must be null or a handle from this library not yet freed.
 */
void toffoli_noise_model_free(ToffoliNoiseModel *nm);

/**
 * Runs the circuit from |0...0⟩ and writes the measured outcome
 * distribution, qubit 0 as the least significant bit. Non-native circuits
 * are translated first. `len` must equal 2^num_qubits.
 *
 * # Safety
 * Handles must be live and `probs` must point to `len` writable doubles.
 */
ToffoliStatus toffoli_simulate_probabilities(const ToffoliCircuit *c,
                                             const ToffoliNoiseModel *nm,
                                             double *probs,
                                             size_t len);

/**
 * Runs a state-tomography experiment. `config_json` is a JSON object whose
 * fields override the noise-free defaults, e.g.
 * `{"input_state": "W", "shots_per_setting": 1000, "repeats": 5}`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_run_qst(const char *config_json, ToffoliReport **out);

/**
 * Runs a process-tomography experiment. The config must set
 * `"accept_qpt_budget": true`.
 *
 * # Safety
 * `config_json` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_run_qpt(const char *config_json, ToffoliReport **out);

/**
 * Loads a report from a JSON file.
 *
 * # Safety
 * `path` must be a NUL-terminated string and `out` writable.
 */
ToffoliStatus toffoli_report_load(const char *path, ToffoliReport **out);

/**
 * # Safety
 * `r` must be null or a handle from this library not yet freed.
 */
void toffoli_report_free(ToffoliReport *r);

/**
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_report_summary(const ToffoliReport *r, ToffoliReportSummary *out);

/**
 * Copies per-repeat fidelities into `buf`. `len` must be at least the
 * number of repeats; `*written` receives the count copied.
 *
 * # Safety
 * `r` must be a live handle, `buf` must hold `len` doubles and `written`
 * must be writable.
 */
ToffoliStatus toffoli_report_fidelities(const ToffoliReport *r,
                                        double *buf,
                                        size_t len,
                                        size_t *written);

/**
 * Serializes a report to JSON. Free the result with `toffoli_string_free`.
 *
 * # Safety
 * `r` must be a live handle and `out` writable.
 */
ToffoliStatus toffoli_report_to_json(const ToffoliReport *r, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* TOFFOLI_H */
