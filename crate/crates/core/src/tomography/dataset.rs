//! Tomography datasets on disk, so reconstruction can be rerun without
//! resimulating.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{parse_circuit, serialize_circuit, Circuit};
use crate::sim::sampling::CountsMap;
use crate::tomography::labels::PauliString;
use crate::tomography::qpt::QptKey;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DatasetKind {
    Qst,
    Qpt,
}

/// Counts per cell. QST cells are keyed by setting (`XYZ`), QPT cells by
/// `probe|setting` (`+i,0,1|XYZ`).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    pub kind: DatasetKind,
    pub k: usize,
    pub shots: u64,
    pub master_seed: u64,
    /// Text form of the circuit under test.
    pub circuit: String,
    pub cells: BTreeMap<String, CountsMap>,
}

impl Dataset {
    pub fn qst(circuit: &Circuit, shots: u64, master_seed: u64, data: &BTreeMap<PauliString, CountsMap>) -> Self {
        Self {
            kind: DatasetKind::Qst,
            k: circuit.num_qubits(),
            shots,
            master_seed,
            circuit: serialize_circuit(circuit),
            cells: data.iter().map(|(s, c)| (s.to_string(), c.clone())).collect(),
        }
    }

    pub fn qpt(circuit: &Circuit, shots: u64, master_seed: u64, data: &BTreeMap<QptKey, CountsMap>) -> Self {
        Self {
            kind: DatasetKind::Qpt,
            k: circuit.num_qubits(),
            shots,
            master_seed,
            circuit: serialize_circuit(circuit),
            cells: data.iter().map(|((p, s), c)| (format!("{p}|{s}"), c.clone())).collect(),
        }
    }

    pub fn circuit(&self) -> Result<Circuit> {
        parse_circuit(&self.circuit)
    }

    pub fn qst_data(&self) -> Result<BTreeMap<PauliString, CountsMap>> {
        if self.kind != DatasetKind::Qst {
            return Err(Error::schema("$.kind", "expected a qst dataset"));
        }
        self.cells
            .iter()
            .map(|(key, c)| Ok((key.parse().map_err(|e: Error| Error::schema(format!("$.cells.{key}"), e.to_string()))?, c.clone())))
            .collect()
    }

    pub fn qpt_data(&self) -> Result<BTreeMap<QptKey, CountsMap>> {
        if self.kind != DatasetKind::Qpt {
            return Err(Error::schema("$.kind", "expected a qpt dataset"));
        }
        self.cells
            .iter()
            .map(|(key, c)| {
                let bad = |reason: String| Error::schema(format!("$.cells.{key}"), reason);
                let (p, s) = key.split_once('|').ok_or_else(|| bad("expected `probe|setting`".into()))?;
                Ok(((p.parse().map_err(|e: Error| bad(e.to_string()))?, s.parse().map_err(|e: Error| bad(e.to_string()))?), c.clone()))
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("dataset serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let d: Self = serde_json::from_str(text).map_err(|e| Error::schema("$", e.to_string()))?;
        for (key, c) in &d.cells {
            if c.num_qubits != d.k || c.counts.values().sum::<u64>() != c.shots {
                return Err(Error::schema(format!("$.cells.{key}"), "inconsistent counts"));
            }
        }
        Ok(d)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Gate;
    use crate::qmath::StateVector;
    use crate::sim::sampling::{sample_counts, QuantumState};
    use crate::tomography::labels::qst_settings;

    #[test]
    fn qst_round_trip() {
        let c = Circuit::from_gates(2, vec![Gate::sx(0)]).unwrap();
        let s = QuantumState::Pure(StateVector::basis(2, 0));
        let data: BTreeMap<_, _> = qst_settings(2)
            .unwrap()
            .into_iter()
            .map(|set| {
                let counts = sample_counts(&s, &set, 10, 1, None).unwrap();
                (set, counts)
            })
            .collect();
        let d = Dataset::qst(&c, 10, 1, &data);
        let back = Dataset::from_json(&d.to_json()).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.qst_data().unwrap(), data);
        assert_eq!(back.circuit().unwrap(), c);
        assert!(back.qpt_data().is_err());
    }

    #[test]
    fn rejects_bad_cells() {
        let text = r#"{"kind":"qpt","k":1,"shots":5,"master_seed":0,"circuit":"qubits 1\n",
            "cells":{"0Z":{"num_qubits":1,"shots":5,"counts":{"0":5}}}}"#;
        let d = Dataset::from_json(text).unwrap();
        assert!(matches!(d.qpt_data(), Err(Error::Schema { .. })));
        let inconsistent = text.replace(r#""shots":5,"counts""#, r#""shots":6,"counts""#);
        assert!(Dataset::from_json(&inconsistent).is_err());
    }
}
