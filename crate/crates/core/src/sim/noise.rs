//! Calibration data and the device noise model built from it.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::gates::GateKind;
use crate::sim::sampling::ReadoutError;

pub const DEFAULT_ECR_NS: f64 = 533.0;
pub const DEFAULT_SX_NS: f64 = 57.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QubitCalibration {
    pub id: usize,
    pub t1_us: f64,
    pub t2_us: f64,
    pub frequency_ghz: f64,
    pub anharmonicity_ghz: f64,
    /// P(measure 0 | prepared 1)
    pub prob_meas0_prep1: f64,
    /// P(measure 1 | prepared 0)
    pub prob_meas1_prep0: f64,
    pub readout_error: f64,
    pub readout_length_ns: f64,
}

impl QubitCalibration {
    pub fn readout(&self) -> ReadoutError {
        ReadoutError { p1_given_0: self.prob_meas1_prep0, p0_given_1: self.prob_meas0_prep1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateCalibration {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub qubits: Option<Vec<usize>>,
    pub error: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub duration_ns: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<String>,
    pub qubits: Vec<QubitCalibration>,
    #[serde(default)]
    pub gates: Vec<GateCalibration>,
}

fn number(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let v = obj.get(key).ok_or_else(|| Error::schema(format!("{path}.{key}"), "missing field"))?;
    let x = v.as_f64().ok_or_else(|| Error::schema(format!("{path}.{key}"), "expected a number"))?;
    if !x.is_finite() {
        return Err(Error::schema(format!("{path}.{key}"), "must be finite"));
    }
    Ok(x)
}

fn probability(obj: &Map<String, Value>, key: &str, path: &str) -> Result<f64> {
    let x = number(obj, key, path)?;
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::schema(format!("{path}.{key}"), format!("{x} is not a probability")));
    }
    Ok(x)
}

impl Calibration {
    pub fn from_json_str(text: &str) -> Result<Self> {
        let root: Value = serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
        Self::from_value(&root)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json_str(&std::fs::read_to_string(path)?)
    }

    /// Validates field by field so errors name the offending JSON path.
    pub fn from_value(root: &Value) -> Result<Self> {
        let obj = root.as_object().ok_or_else(|| Error::schema("$", "expected an object"))?;
        let device = match obj.get("device") {
            None | Some(Value::Null) => None,
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => return Err(Error::schema("$.device", "expected a string")),
        };
        let qs = obj
            .get("qubits")
            .ok_or_else(|| Error::schema("$.qubits", "missing field"))?
            .as_array()
            .ok_or_else(|| Error::schema("$.qubits", "expected an array"))?;
        if qs.is_empty() {
            return Err(Error::schema("$.qubits", "at least one qubit entry is required"));
        }
        let mut qubits = Vec::with_capacity(qs.len());
        for (i, q) in qs.iter().enumerate() {
            let path = format!("$.qubits[{i}]");
            let o = q.as_object().ok_or_else(|| Error::schema(&path, "expected an object"))?;
            let id = match o.get("id") {
                None => i,
                Some(v) => v
                    .as_u64()
                    .ok_or_else(|| Error::schema(format!("{path}.id"), "expected a non-negative integer"))?
                    as usize,
            };
            let cal = QubitCalibration {
                id,
                t1_us: number(o, "t1_us", &path)?,
                t2_us: number(o, "t2_us", &path)?,
                frequency_ghz: number(o, "frequency_ghz", &path)?,
                anharmonicity_ghz: number(o, "anharmonicity_ghz", &path)?,
                prob_meas0_prep1: probability(o, "prob_meas0_prep1", &path)?,
                prob_meas1_prep0: probability(o, "prob_meas1_prep0", &path)?,
                readout_error: probability(o, "readout_error", &path)?,
                readout_length_ns: number(o, "readout_length_ns", &path)?,
            };
            if cal.t1_us <= 0.0 || cal.t2_us <= 0.0 {
                return Err(Error::schema(format!("{path}.t1_us"), "coherence times must be positive"));
            }
            if cal.readout_length_ns < 0.0 {
                return Err(Error::schema(format!("{path}.readout_length_ns"), "must be non-negative"));
            }
            if cal.t2_us > 2.0 * cal.t1_us {
                return Err(Error::InvalidCoherence { qubit: id, t2: cal.t2_us, two_t1: 2.0 * cal.t1_us });
            }
            qubits.push(cal);
        }
        let mut gates = Vec::new();
        if let Some(gs) = obj.get("gates") {
            let gs = gs.as_array().ok_or_else(|| Error::schema("$.gates", "expected an array"))?;
            for (i, g) in gs.iter().enumerate() {
                let path = format!("$.gates[{i}]");
                let o = g.as_object().ok_or_else(|| Error::schema(&path, "expected an object"))?;
                let name = o
                    .get("name")
                    .and_then(Value::as_str)
                    .ok_or_else(|| Error::schema(format!("{path}.name"), "missing or not a string"))?;
                let kind: GateKind = name.parse().map_err(|_| Error::schema(format!("{path}.name"), format!("unknown gate `{name}`")))?;
                if !kind.is_native() {
                    return Err(Error::schema(format!("{path}.name"), format!("{kind} is not a native gate")));
                }
                let error = number(o, "error", &path)?;
                if !(0.0..1.0).contains(&error) {
                    return Err(Error::schema(format!("{path}.error"), format!("{error} is outside [0, 1)")));
                }
                let duration_ns = match o.get("duration_ns") {
                    None | Some(Value::Null) => None,
                    Some(_) => {
                        let d = number(o, "duration_ns", &path)?;
                        if d < 0.0 {
                            return Err(Error::schema(format!("{path}.duration_ns"), "must be non-negative"));
                        }
                        Some(d)
                    }
                };
                let qubits = match o.get("qubits") {
                    None | Some(Value::Null) => None,
                    Some(v) => Some(
                        serde_json::from_value::<Vec<usize>>(v.clone())
                            .map_err(|_| Error::schema(format!("{path}.qubits"), "expected an array of qubit indices"))?,
                    ),
                };
                if let Some(qs) = &qubits {
                    if qs.len() != kind.num_qubits() {
                        return Err(Error::schema(format!("{path}.qubits"), format!("{kind} acts on {} qubits", kind.num_qubits())));
                    }
                }
                gates.push(GateCalibration { name: kind.name().to_string(), qubits, error, duration_ns });
            }
        }
        Ok(Self { device, qubits, gates })
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("calibration serializes")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateNoise {
    pub error: f64,
    pub duration_ns: f64,
}

/// Per-gate depolarizing error and duration, per-qubit relaxation and readout.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    qubits: Vec<QubitCalibration>,
    generic: BTreeMap<String, GateNoise>,
    specific: BTreeMap<String, GateNoise>,
    /// Relax each measured qubit for its readout length before readout.
    pub readout_relaxation: bool,
    /// Apply the per-qubit confusion matrix to outcome distributions.
    pub readout_error: bool,
}

fn specific_key(kind: GateKind, qubits: &[usize]) -> String {
    let qs: Vec<String> = qubits.iter().map(usize::to_string).collect();
    format!("{}:{}", kind.name(), qs.join(","))
}

fn default_duration(kind: GateKind) -> f64 {
    match kind {
        GateKind::ECR => DEFAULT_ECR_NS,
        GateKind::RZ => 0.0,
        _ => DEFAULT_SX_NS,
    }
}

impl NoiseModel {
    /// No noise at all: infinite coherence, zero error, perfect readout.
    pub fn ideal() -> Self {
        Self {
            qubits: vec![QubitCalibration {
                id: 0,
                t1_us: f64::INFINITY,
                t2_us: f64::INFINITY,
                frequency_ghz: 0.0,
                anharmonicity_ghz: 0.0,
                prob_meas0_prep1: 0.0,
                prob_meas1_prep0: 0.0,
                readout_error: 0.0,
                readout_length_ns: 0.0,
            }],
            generic: BTreeMap::new(),
            specific: BTreeMap::new(),
            readout_relaxation: true,
            readout_error: true,
        }
    }

    /// Missing gate durations fall back to ECR 533 ns and SX/X/ID 57 ns;
    /// X and ID inherit the SX error when absent.
    pub fn from_calibration(cal: &Calibration) -> Result<Self> {
        let mut generic = BTreeMap::new();
        let mut specific = BTreeMap::new();
        for g in &cal.gates {
            let kind: GateKind = g.name.parse()?;
            let noise = GateNoise { error: g.error, duration_ns: g.duration_ns.unwrap_or_else(|| default_duration(kind)) };
            match &g.qubits {
                Some(qs) => specific.insert(specific_key(kind, qs), noise),
                None => generic.insert(kind.name().to_string(), noise),
            };
        }
        if let Some(sx) = generic.get("SX").copied() {
            for inherit in ["X", "ID"] {
                generic.entry(inherit.to_string()).or_insert(sx);
            }
        }
        Ok(Self { qubits: cal.qubits.clone(), generic, specific, readout_relaxation: true, readout_error: true })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_calibration(&Calibration::load(path)?)
    }

    /// Calibration for qubit `q`. A single-entry model is broadcast.
    pub fn qubit(&self, q: usize) -> Result<&QubitCalibration> {
        if self.qubits.len() == 1 {
            return Ok(&self.qubits[0]);
        }
        self.qubits.get(q).ok_or(Error::MissingCalibration(q))
    }

    pub fn qubits(&self) -> &[QubitCalibration] {
        &self.qubits
    }

    /// Error and duration of a gate. RZ is virtual: always zero.
    pub fn gate(&self, kind: GateKind, qubits: &[usize]) -> GateNoise {
        if kind == GateKind::RZ {
            return GateNoise { error: 0.0, duration_ns: 0.0 };
        }
        self.specific
            .get(&specific_key(kind, qubits))
            .or_else(|| self.generic.get(kind.name()))
            .copied()
            .unwrap_or(GateNoise { error: 0.0, duration_ns: default_duration(kind) })
    }

    pub fn readout(&self, q: usize) -> Result<ReadoutError> {
        Ok(if self.readout_error { self.qubit(q)?.readout() } else { ReadoutError::default() })
    }

    /// Scales every error probability and every decay rate (1/T1, 1/T2)
    /// by `lambda`. `lambda = 0` is noiseless.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !lambda.is_finite() || lambda < 0.0 {
            return Err(Error::Config(format!("noise scale {lambda} must be a finite non-negative number")));
        }
        let prob = |p: f64| (p * lambda).min(1.0);
        let mut out = self.clone();
        for q in &mut out.qubits {
            q.t1_us /= lambda;
            q.t2_us /= lambda;
            q.prob_meas0_prep1 = prob(q.prob_meas0_prep1);
            q.prob_meas1_prep0 = prob(q.prob_meas1_prep0);
            q.readout_error = prob(q.readout_error);
        }
        for g in out.generic.values_mut().chain(out.specific.values_mut()) {
            g.error *= lambda;
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qubit_json(t1: f64, t2: f64) -> String {
        format!(
            r#"{{"t1_us": {t1}, "t2_us": {t2}, "frequency_ghz": 4.7, "anharmonicity_ghz": -0.31,
                "prob_meas0_prep1": 0.02, "prob_meas1_prep0": 0.014, "readout_error": 0.017,
                "readout_length_ns": 1244.4}}"#
        )
    }

    #[test]
    fn loads_median_file_and_broadcasts() {
        let text = format!(
            r#"{{"qubits": [{}], "gates": [{{"name": "ecr", "error": 0.00756, "duration_ns": 533}},
                {{"name": "sx", "error": 0.000236}}]}}"#,
            qubit_json(272.21, 188.10)
        );
        let nm = NoiseModel::from_calibration(&Calibration::from_json_str(&text).unwrap()).unwrap();
        assert_eq!(nm.qubit(2).unwrap().t1_us, 272.21);
        assert_eq!(nm.gate(GateKind::ECR, &[0, 1]).error, 0.00756);
        assert_eq!(nm.gate(GateKind::SX, &[1]).duration_ns, DEFAULT_SX_NS);
        assert_eq!(nm.gate(GateKind::X, &[1]).error, 0.000236);
        assert_eq!(nm.gate(GateKind::RZ, &[1]).error, 0.0);
    }

    #[test]
    fn coherence_violation_names_qubit() {
        let text = format!(r#"{{"qubits": [{}, {}]}}"#, qubit_json(100.0, 150.0), qubit_json(100.0, 300.0));
        match Calibration::from_json_str(&text) {
            Err(Error::InvalidCoherence { qubit, .. }) => assert_eq!(qubit, 1),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn missing_field_names_path() {
        let text = qubit_json(100.0, 150.0).replace(r#""readout_length_ns": 1244.4"#, r#""x": 1"#);
        match Calibration::from_json_str(&format!(r#"{{"qubits": [{text}]}}"#)) {
            Err(Error::Schema { path, .. }) => assert_eq!(path, "$.qubits[0].readout_length_ns"),
            other => panic!("{other:?}"),
        }
        for bad in [r#"[]"#, r#"{"qubits": 3}"#, r#"{"qubits": []}"#, "not json"] {
            assert!(matches!(Calibration::from_json_str(bad), Err(Error::Schema { .. })), "{bad}");
        }
        let bad_gate = format!(r#"{{"qubits": [{}], "gates": [{{"name": "h", "error": 0.1}}]}}"#, qubit_json(1.0, 1.0));
        assert!(matches!(Calibration::from_json_str(&bad_gate), Err(Error::Schema { .. })));
    }

    #[test]
    fn missing_calibration_for_multi_qubit_file() {
        let text = format!(r#"{{"qubits": [{}, {}]}}"#, qubit_json(100.0, 150.0), qubit_json(90.0, 80.0));
        let nm = NoiseModel::from_calibration(&Calibration::from_json_str(&text).unwrap()).unwrap();
        assert_eq!(nm.qubit(1).unwrap().t1_us, 90.0);
        assert!(matches!(nm.qubit(2), Err(Error::MissingCalibration(2))));
    }

    #[test]
    fn per_qubit_gate_overrides() {
        let text = format!(
            r#"{{"qubits": [{}], "gates": [{{"name": "ECR", "error": 0.01}},
                {{"name": "ECR", "qubits": [1, 2], "error": 0.02, "duration_ns": 600}}]}}"#,
            qubit_json(100.0, 150.0)
        );
        let nm = NoiseModel::from_calibration(&Calibration::from_json_str(&text).unwrap()).unwrap();
        assert_eq!(nm.gate(GateKind::ECR, &[0, 1]).error, 0.01);
        assert_eq!(nm.gate(GateKind::ECR, &[1, 2]), GateNoise { error: 0.02, duration_ns: 600.0 });
    }

    #[test]
    fn scaling() {
        let text = format!(r#"{{"qubits": [{}], "gates": [{{"name": "ECR", "error": 0.01}}]}}"#, qubit_json(100.0, 150.0));
        let nm = NoiseModel::from_calibration(&Calibration::from_json_str(&text).unwrap()).unwrap();
        let zero = nm.scaled(0.0).unwrap();
        assert!(zero.qubit(0).unwrap().t1_us.is_infinite());
        assert_eq!(zero.gate(GateKind::ECR, &[0, 1]).error, 0.0);
        let double = nm.scaled(2.0).unwrap();
        assert_eq!(double.qubit(0).unwrap().t1_us, 50.0);
        assert_eq!(double.gate(GateKind::ECR, &[0, 1]).error, 0.02);
        assert!(nm.scaled(-1.0).is_err());
    }
}
