use std::fs;
use std::path::Path;
use std::str::FromStr;
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, GateKind};
use crate::harness::config::ExperimentConfig;
use crate::synthesis::DecompositionStrategy;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = "toffoli";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ExperimentKind {
    Qst,
    Qpt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
}

impl FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            _ => Err(Error::Config(format!("unknown report format `{s}` (expected json or csv)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitStats {
    pub strategy: String,
    pub gates: usize,
    pub two_qubit_gates: usize,
    pub ecr_gates: usize,
    pub cnot_gates: usize,
    pub depth: usize,
    pub native_gates: usize,
    pub native_two_qubit_gates: usize,
    pub native_depth: usize,
}

impl CircuitStats {
    /// Counts of the synthesized circuit and of its native translation.
    pub fn of(logical: &Circuit, native: &Circuit, strategy: DecompositionStrategy) -> Self {
        Self {
            strategy: strategy.name().to_string(),
            gates: logical.len(),
            two_qubit_gates: logical.two_qubit_count(),
            ecr_gates: logical.count(GateKind::ECR),
            cnot_gates: logical.count(GateKind::CNOT),
            depth: logical.depth(),
            native_gates: native.len(),
            native_two_qubit_gates: native.two_qubit_count(),
            native_depth: native.depth(),
        }
    }
}

/// Fields that change between otherwise identical runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub timestamp_unix: u64,
    pub wall_clock_seconds: f64,
}

impl Timing {
    pub fn since(start: Instant) -> Self {
        let timestamp_unix = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
        Self { timestamp_unix, wall_clock_seconds: start.elapsed().as_secs_f64() }
    }
}

/// Sample mean and standard deviation (n − 1 denominator; 0 for one value).
pub fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub experiment: ExperimentKind,
    pub config: ExperimentConfig,
    pub circuit: CircuitStats,
    pub jobs_per_repeat: usize,
    pub measurements_per_repeat: u64,
    pub seeds: Vec<u64>,
    /// State fidelity (QST) or process fidelity (QPT), one per repeat.
    pub fidelities: Vec<f64>,
    pub mean_fidelity: f64,
    pub std_fidelity: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub average_gate_fidelities: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mean_average_gate_fidelity: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub std_average_gate_fidelity: Option<f64>,
    /// max |Tr_out σ − I/Γ| of each reconstructed Choi matrix.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tp_deviations: Option<Vec<f64>>,
    /// Measured hardware fidelity for the same input, for display only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hardware_reference: Option<f64>,
    pub timing: Timing,
}

impl Report {
    pub fn new(
        experiment: ExperimentKind,
        config: ExperimentConfig,
        circuit: CircuitStats,
        seeds: Vec<u64>,
        fidelities: Vec<f64>,
    ) -> Self {
        let (mean_fidelity, std_fidelity) = mean_std(&fidelities);
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL_NAME.into(),
            tool_version: TOOL_VERSION.into(),
            experiment,
            config,
            circuit,
            jobs_per_repeat: 0,
            measurements_per_repeat: 0,
            seeds,
            fidelities,
            mean_fidelity,
            std_fidelity,
            average_gate_fidelities: None,
            mean_average_gate_fidelity: None,
            std_average_gate_fidelity: None,
            tp_deviations: None,
            hardware_reference: None,
            timing: Timing::default(),
        }
    }

    pub fn set_average_gate_fidelities(&mut self, values: Vec<f64>) {
        let (m, s) = mean_std(&values);
        self.mean_average_gate_fidelity = Some(m);
        self.std_average_gate_fidelity = Some(s);
        self.average_gate_fidelities = Some(values);
    }

    pub fn repeats(&self) -> usize {
        self.fidelities.len()
    }

    /// Standard error of the mean fidelity.
    pub fn standard_error(&self) -> f64 {
        self.std_fidelity / (self.repeats() as f64).sqrt()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// JSON with the `timing` object removed; identical across reruns with
    /// the same configuration.
    pub fn to_json_without_timing(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        v.as_object_mut().expect("object").remove("timing");
        serde_json::to_string_pretty(&v).expect("value serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let r: Report = serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
        if r.schema_version != SCHEMA_VERSION {
            return Err(Error::schema(
                "$.schema_version",
                format!("unsupported version {} (expected {SCHEMA_VERSION})", r.schema_version),
            ));
        }
        if r.seeds.len() != r.fidelities.len() {
            return Err(Error::schema("$.seeds", "length differs from $.fidelities"));
        }
        if let Some(i) = r.fidelities.iter().position(|f| !(0.0..=1.0).contains(f)) {
            return Err(Error::schema(format!("$.fidelities[{i}]"), "outside [0, 1]"));
        }
        Ok(r)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }

    /// One row per repeat.
    pub fn to_csv(&self) -> String {
        #[derive(Serialize)]
        struct Row<'a> {
            experiment: ExperimentKind,
            mode: &'a str,
            input_state: Option<&'a str>,
            strategy: &'a str,
            shots_per_setting: u64,
            repeat: usize,
            seed: u64,
            fidelity: f64,
            average_gate_fidelity: Option<f64>,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        for (i, (&seed, &fidelity)) in self.seeds.iter().zip(&self.fidelities).enumerate() {
            let row = Row {
                experiment: self.experiment,
                mode: self.config.mode.name(),
                input_state: (self.experiment == ExperimentKind::Qst).then(|| self.config.input_state.name()),
                strategy: &self.circuit.strategy,
                shots_per_setting: self.config.shots_per_setting,
                repeat: i,
                seed,
                fidelity,
                average_gate_fidelity: self.average_gate_fidelities.as_ref().map(|a| a[i]),
            };
            w.serialize(row).expect("in-memory csv write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is utf-8")
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Json => self.to_json(),
            ReportFormat::Csv => self.to_csv(),
        }
    }
}

pub fn emit_report(report: &Report, format: ReportFormat, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, report.render(format))?;
    Ok(())
}
