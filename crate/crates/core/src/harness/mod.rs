//! Experiment orchestration and reporting.

pub mod calib;
pub mod config;
pub mod experiment;
pub mod report;

pub use calib::{calibration_summary, summary_to_csv, ColumnSummary};
pub use config::{ExperimentConfig, Mode, DEFAULT_REPEATS, DEFAULT_SEED};
pub use experiment::{hardware_reference, ideal_input, reference_state, repeat_seed, run_qpt_experiment, run_qst_experiment};
pub use report::{emit_report, mean_std, CircuitStats, ExperimentKind, Report, ReportFormat, Timing, SCHEMA_VERSION};
