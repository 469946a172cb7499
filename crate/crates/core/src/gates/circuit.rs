use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::gate::{Gate, GateKind};
use crate::qmath::matrix::{ComplexMatrix, C64, ZERO};
use crate::qmath::UnitaryMatrix;

/// Largest register the dense simulators accept.
pub const MAX_QUBITS: usize = 6;

/// Ordered gate list on `num_qubits` qubits. Basis index bit `q` is qubit `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Self {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn from_gates(num_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(num_qubits);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        if let Some(&q) = gate.qubits().iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`'s gates (applied after ours).
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        for g in &other.gates {
            self.push(g.clone())?;
        }
        Ok(())
    }

    /// `self` followed by `other`, on the larger of the two registers.
    pub fn then(&self, other: &Circuit) -> Circuit {
        let mut out = Circuit::new(self.num_qubits.max(other.num_qubits));
        out.gates.extend(self.gates.iter().cloned());
        out.gates.extend(other.gates.iter().cloned());
        out
    }

    pub fn with_num_qubits(mut self, num_qubits: usize) -> Result<Self> {
        if let Some(g) = self.gates.iter().find(|g| g.qubits().iter().any(|&q| q >= num_qubits)) {
            return Err(Error::QubitOutOfRange {
                qubit: *g.qubits().iter().max().unwrap(),
                num_qubits,
            });
        }
        self.num_qubits = num_qubits;
        Ok(self)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn count(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind() == kind).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.num_qubits() == 2).count()
    }

    /// Number of layers when every gate waits for all of its qubits.
    pub fn depth(&self) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        for g in &self.gates {
            let next = g.qubits().iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in g.qubits() {
                level[q] = next;
            }
        }
        level.into_iter().max().unwrap_or(0)
    }

    pub fn is_native(&self) -> bool {
        self.gates.iter().all(|g| g.kind().is_native())
    }
}

/// Applies the operand matrix `m` of a gate on `qubits` to a full state vector.
pub(crate) fn apply_operand(m: &ComplexMatrix, qubits: &[usize], state: &mut [C64]) {
    let k = qubits.len();
    let local_dim = 1 << k;
    let mask: usize = qubits.iter().map(|&q| 1 << q).sum();
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            qubits
                .iter()
                .enumerate()
                .filter(|(j, _)| l >> j & 1 == 1)
                .map(|(_, &q)| 1 << q)
                .sum()
        })
        .collect();
    let mut buf = vec![ZERO; local_dim];
    for base in 0..state.len() {
        if base & mask != 0 {
            continue;
        }
        for (l, &off) in offsets.iter().enumerate() {
            buf[l] = state[base | off];
        }
        for (r, &off) in offsets.iter().enumerate() {
            let mut acc = ZERO;
            for (c, &v) in buf.iter().enumerate() {
                acc += m.get(r, c) * v;
            }
            state[base | off] = acc;
        }
    }
}

/// Full-register unitary of the circuit; later gates multiply on the left.
pub fn circuit_unitary(c: &Circuit) -> Result<UnitaryMatrix> {
    if c.num_qubits() > MAX_QUBITS {
        return Err(Error::TooManyQubits {
            num_qubits: c.num_qubits(),
            max: MAX_QUBITS,
        });
    }
    let dim = 1 << c.num_qubits();
    let mut columns: Vec<Vec<C64>> = (0..dim)
        .map(|j| {
            let mut e = vec![ZERO; dim];
            e[j] = C64::new(1.0, 0.0);
            e
        })
        .collect();
    for g in c.gates() {
        let m = g.operand_matrix();
        for col in columns.iter_mut() {
            apply_operand(&m, g.qubits(), col);
        }
    }
    let mut u = ComplexMatrix::zeros(dim, dim);
    for (j, col) in columns.iter().enumerate() {
        for (i, &v) in col.iter().enumerate() {
            u.set(i, j, v);
        }
    }
    UnitaryMatrix::new(u)
}

/// Embeds a gate's operand matrix into an `num_qubits` register.
pub fn embed(g: &Gate, num_qubits: usize) -> Result<UnitaryMatrix> {
    let c = Circuit::from_gates(num_qubits, vec![g.clone()])?;
    circuit_unitary(&c)
}
