use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::circuit::Circuit;
use crate::gates::gate::{Gate, GateKind};

/// Undirected qubit connectivity.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CouplingGraph {
    num_qubits: usize,
    edges: BTreeSet<(usize, usize)>,
}

impl CouplingGraph {
    pub fn new(num_qubits: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Config(format!("self-loop on qubit {a}")));
            }
            for q in [a, b] {
                if q >= num_qubits {
                    return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
                }
            }
            set.insert((a.min(b), a.max(b)));
        }
        Ok(Self {
            num_qubits,
            edges: set,
        })
    }

    /// Linear chain 0 – 1 – … – (n-1).
    pub fn path(num_qubits: usize) -> Self {
        Self::new(num_qubits, (1..num_qubits).map(|q| (q - 1, q))).expect("path edges are valid")
    }

    pub fn full(num_qubits: usize) -> Self {
        let edges = (0..num_qubits).flat_map(|a| (a + 1..num_qubits).map(move |b| (a, b)));
        Self::new(num_qubits, edges).expect("complete graph edges are valid")
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.edges.iter().copied()
    }

    pub fn connected(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn degree(&self, q: usize) -> usize {
        self.edges.iter().filter(|(a, b)| *a == q || *b == q).count()
    }

    /// For three distinct qubits forming a path, returns (end, middle, end).
    pub fn path_order(&self, triple: [usize; 3]) -> Option<[usize; 3]> {
        let [a, b, c] = triple;
        if a == b || b == c || a == c {
            return None;
        }
        [(a, b, c), (b, a, c), (c, a, b)]
            .into_iter()
            .find(|&(mid, x, y)| self.connected(mid, x) && self.connected(mid, y))
            .map(|(mid, x, y)| [x.min(y), mid, x.max(y)])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub gate_index: usize,
    pub gate: Gate,
    pub reason: String,
}

/// Every gate that cannot run on `graph`: two-qubit gates off an edge, and
/// CCX unconditionally.
pub fn validate_connectivity(c: &Circuit, graph: &CouplingGraph) -> Result<Vec<Violation>> {
    if c.num_qubits() > graph.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: graph.num_qubits(),
            found: c.num_qubits(),
        });
    }
    let mut out = Vec::new();
    for (i, g) in c.gates().iter().enumerate() {
        let reason = match (g.kind(), g.qubits()) {
            (GateKind::CCX, _) => Some("three-qubit gate is not native".to_string()),
            (_, &[a, b]) if !graph.connected(a, b) => Some(format!("no edge between {a} and {b}")),
            _ => None,
        };
        if let Some(reason) = reason {
            out.push(Violation {
                gate_index: i,
                gate: g.clone(),
                reason,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn path_order_detection() {
        let g = CouplingGraph::path(3);
        assert_eq!(g.path_order([2, 0, 1]), Some([0, 1, 2]));
        assert_eq!(g.path_order([0, 1, 1]), None);
        let g5 = CouplingGraph::path(5);
        assert_eq!(g5.path_order([0, 1, 3]), None);
        assert_eq!(g5.path_order([3, 4, 2]), Some([2, 3, 4]));
    }

    #[test]
    fn single_qubit_circuits_never_violate() {
        let c = Circuit::from_gates(3, vec![Gate::h(0), Gate::rz(0.1, 2), Gate::sx(1)]).unwrap();
        assert!(validate_connectivity(&c, &CouplingGraph::path(3)).unwrap().is_empty());
    }

    #[test]
    fn flags_non_adjacent_and_ccx() {
        let c = Circuit::from_gates(3, vec![Gate::cnot(0, 2), Gate::ecr(1, 2), Gate::ccx(0, 1, 2)]).unwrap();
        let v = validate_connectivity(&c, &CouplingGraph::path(3)).unwrap();
        let idx: Vec<usize> = v.iter().map(|v| v.gate_index).collect();
        assert_eq!(idx, vec![0, 2]);
        // CCX is flagged even when fully connected.
        let v = validate_connectivity(&c, &CouplingGraph::full(3)).unwrap();
        assert_eq!(v.len(), 1);
    }

    #[test]
    fn graph_validation() {
        assert!(CouplingGraph::new(2, [(0, 0)]).is_err());
        assert!(CouplingGraph::new(2, [(0, 2)]).is_err());
        let too_small = CouplingGraph::path(2);
        assert!(validate_connectivity(&Circuit::new(3), &too_small).is_err());
    }
}
