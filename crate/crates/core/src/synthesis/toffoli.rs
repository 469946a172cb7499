use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, CouplingGraph, Gate};
use crate::qmath::{ComplexMatrix, UnitaryMatrix};
use crate::synthesis::native::{hadamard_native, peephole, to_native};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DecompositionStrategy {
    #[serde(rename = "FULL_6CNOT")]
    Full6Cnot,
    #[serde(rename = "LNN_8CNOT")]
    Lnn8Cnot,
    #[serde(rename = "LNN_9CNOT_RZSX")]
    Lnn9CnotRzSx,
    EcrNative,
}

impl DecompositionStrategy {
    pub const ALL: [DecompositionStrategy; 4] = [
        DecompositionStrategy::Full6Cnot,
        DecompositionStrategy::Lnn8Cnot,
        DecompositionStrategy::Lnn9CnotRzSx,
        DecompositionStrategy::EcrNative,
    ];

    pub fn name(self) -> &'static str {
        match self {
            DecompositionStrategy::Full6Cnot => "FULL_6CNOT",
            DecompositionStrategy::Lnn8Cnot => "LNN_8CNOT",
            DecompositionStrategy::Lnn9CnotRzSx => "LNN_9CNOT_RZSX",
            DecompositionStrategy::EcrNative => "ECR_NATIVE",
        }
    }

    /// Kebab-case name used on the command line.
    pub fn cli_name(self) -> &'static str {
        match self {
            DecompositionStrategy::Full6Cnot => "full-6cnot",
            DecompositionStrategy::Lnn8Cnot => "lnn-8cnot",
            DecompositionStrategy::Lnn9CnotRzSx => "lnn-9cnot",
            DecompositionStrategy::EcrNative => "ecr-native",
        }
    }

    pub fn requires_path(self) -> bool {
        self != DecompositionStrategy::Full6Cnot
    }
}

impl fmt::Display for DecompositionStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DecompositionStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.trim().to_ascii_lowercase().replace('_', "-");
        let found = Self::ALL.into_iter().find(|k| {
            norm == k.cli_name() || norm == k.name().to_ascii_lowercase().replace('_', "-")
        });
        found.ok_or_else(|| Error::Config(format!("unknown strategy `{s}`")))
    }
}

/// The Toffoli matrix as printed: identity except rows 6 and 7 swapped.
/// In little-endian order this is controls on qubits 1, 2 and target 0.
pub fn toffoli_matrix() -> UnitaryMatrix {
    toffoli_unitary((1, 2), 0, 3).expect("valid roles")
}

/// Toffoli on `n` qubits with the given roles.
pub fn toffoli_unitary(controls: (usize, usize), target: usize, n: usize) -> Result<UnitaryMatrix> {
    check_roles(controls, target, n)?;
    let dim = 1usize << n;
    let mask = (1 << controls.0) | (1 << controls.1);
    let mut m = ComplexMatrix::zeros(dim, dim);
    for col in 0..dim {
        let row = if col & mask == mask { col ^ (1 << target) } else { col };
        m.set(row, col, crate::qmath::matrix::ONE);
    }
    UnitaryMatrix::new(m)
}

fn check_roles(controls: (usize, usize), target: usize, n: usize) -> Result<()> {
    let (a, b) = controls;
    for q in [a, b, target] {
        if q >= n {
            return Err(Error::QubitOutOfRange { qubit: q, num_qubits: n });
        }
    }
    if a == b || a == target || b == target {
        return Err(Error::InvalidGate {
            gate: "CCX".into(),
            reason: format!("roles ({a},{b};{target}) are not distinct"),
        });
    }
    Ok(())
}

/// Decomposes a Toffoli assuming a linear chain `0 – 1 – … – n-1`.
pub fn decompose_toffoli(strategy: DecompositionStrategy, controls: (usize, usize), target: usize) -> Result<Circuit> {
    let n = controls.0.max(controls.1).max(target) + 1;
    decompose_toffoli_on(strategy, controls, target, &CouplingGraph::path(n.max(3)))
}

pub fn decompose_toffoli_on(
    strategy: DecompositionStrategy,
    controls: (usize, usize),
    target: usize,
    graph: &CouplingGraph,
) -> Result<Circuit> {
    let n = graph.num_qubits();
    check_roles(controls, target, n)?;
    let triple = [controls.0, controls.1, target];
    if strategy == DecompositionStrategy::Full6Cnot {
        return full_6cnot(controls, target, n);
    }
    let line = graph.path_order(triple).ok_or(Error::NonPathQubits(triple))?;
    match strategy {
        DecompositionStrategy::Full6Cnot => unreachable!(),
        DecompositionStrategy::Lnn8Cnot => phase_network(skeleton_8(), line, target, n, SingleQubitSet::Clifford),
        DecompositionStrategy::Lnn9CnotRzSx => {
            let c = phase_network(skeleton_9(), line, target, n, SingleQubitSet::RzSx)?;
            Ok(peephole(&c))
        }
        DecompositionStrategy::EcrNative => {
            let c = phase_network(skeleton_8(), line, target, n, SingleQubitSet::Clifford)?;
            Ok(peephole(&to_native(&c)?))
        }
    }
}

fn full_6cnot(controls: (usize, usize), target: usize, n: usize) -> Result<Circuit> {
    let (a, b, c) = (controls.0, controls.1, target);
    Circuit::from_gates(
        n,
        vec![
            Gate::h(c),
            Gate::cnot(b, c),
            Gate::tdg(c),
            Gate::cnot(a, c),
            Gate::t(c),
            Gate::cnot(b, c),
            Gate::tdg(c),
            Gate::cnot(a, c),
            Gate::t(b),
            Gate::t(c),
            Gate::h(c),
            Gate::cnot(a, b),
            Gate::t(a),
            Gate::tdg(b),
            Gate::cnot(a, b),
        ],
    )
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum SingleQubitSet {
    /// H, T, T†
    Clifford,
    /// RZ, SX
    RzSx,
}

/// Directed CNOT on the line, as (control, target) wire positions
/// where position 1 is the middle.
type Move = (usize, usize);

const LINE_MOVES: [Move; 4] = [(1, 0), (0, 1), (1, 2), (2, 1)];

/// CCZ as a phase polynomial: T on every odd-weight parity of the three
/// wire variables, T† on every even-weight one. A CNOT skeleton works when
/// its wires visit all seven parities and return to the identity map.
fn search_skeleton(len: usize) -> Vec<Move> {
    fn dfs(len: usize, wires: [u8; 3], seen: u8, path: &mut Vec<Move>) -> bool {
        if path.len() == len {
            return wires == [0b001, 0b010, 0b100] && seen == 0x7f;
        }
        for m in LINE_MOVES {
            if path.last() == Some(&m) {
                continue;
            }
            let mut w = wires;
            w[m.1] ^= w[m.0];
            path.push(m);
            if dfs(len, w, seen | 1 << (w[m.1] - 1), path) {
                return true;
            }
            path.pop();
        }
        false
    }
    let mut path = Vec::with_capacity(len);
    let found = dfs(len, [0b001, 0b010, 0b100], 0b0001011, &mut path);
    assert!(found, "no {len}-CNOT skeleton on a line");
    path
}

fn skeleton_8() -> &'static [Move] {
    static S: OnceLock<Vec<Move>> = OnceLock::new();
    S.get_or_init(|| search_skeleton(8))
}

fn skeleton_9() -> &'static [Move] {
    static S: OnceLock<Vec<Move>> = OnceLock::new();
    S.get_or_init(|| search_skeleton(9))
}

/// H_t · CCZ · H_t over the given skeleton, with each parity's phase placed
/// at its first appearance.
fn phase_network(skeleton: &[Move], line: [usize; 3], target: usize, n: usize, set: SingleQubitSet) -> Result<Circuit> {
    let mut c = Circuit::new(n);
    let hadamard = |c: &mut Circuit| -> Result<()> {
        match set {
            SingleQubitSet::Clifford => c.push(Gate::h(target)),
            SingleQubitSet::RzSx => hadamard_native(target).into_iter().try_for_each(|g| c.push(g)),
        }
    };
    let phase = |c: &mut Circuit, parity: u8, wire: usize| -> Result<()> {
        let positive = parity.count_ones() % 2 == 1;
        let q = line[wire];
        c.push(match (set, positive) {
            (SingleQubitSet::Clifford, true) => Gate::t(q),
            (SingleQubitSet::Clifford, false) => Gate::tdg(q),
            (SingleQubitSet::RzSx, true) => Gate::rz(std::f64::consts::FRAC_PI_4, q),
            (SingleQubitSet::RzSx, false) => Gate::rz(-std::f64::consts::FRAC_PI_4, q),
        })
    };

    hadamard(&mut c)?;
    let mut wires: [u8; 3] = [0b001, 0b010, 0b100];
    let mut seen = 0u8;
    for (w, &p) in wires.iter().enumerate() {
        phase(&mut c, p, w)?;
        seen |= 1 << (p - 1);
    }
    for &(ctl, tgt) in skeleton {
        c.push(Gate::cnot(line[ctl], line[tgt]))?;
        wires[tgt] ^= wires[ctl];
        let p = wires[tgt];
        if seen & (1 << (p - 1)) == 0 {
            seen |= 1 << (p - 1);
            phase(&mut c, p, tgt)?;
        }
    }
    debug_assert_eq!(wires, [0b001, 0b010, 0b100]);
    hadamard(&mut c)?;
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{circuit_unitary, validate_connectivity, GateKind};
    use crate::qmath::StateVector;
    use crate::synthesis::equivalence::{certify, CERTIFY_TOL};

    fn literal_eq1() -> UnitaryMatrix {
        let mut rows = vec![vec![0.0; 8]; 8];
        for (i, row) in rows.iter_mut().enumerate().take(6) {
            row[i] = 1.0;
        }
        rows[6][7] = 1.0;
        rows[7][6] = 1.0;
        let refs: Vec<&[f64]> = rows.iter().map(Vec::as_slice).collect();
        UnitaryMatrix::new(ComplexMatrix::from_real_rows(&refs)).unwrap()
    }

    fn all_roles() -> Vec<((usize, usize), usize)> {
        vec![((0, 1), 2), ((1, 0), 2), ((0, 2), 1), ((2, 0), 1), ((1, 2), 0), ((2, 1), 0)]
    }

    #[test]
    fn printed_matrix_matches_role_convention() {
        assert!(toffoli_matrix().matrix().max_abs_diff(literal_eq1().matrix()) == 0.0);
    }

    #[test]
    fn every_strategy_every_role() {
        for s in DecompositionStrategy::ALL {
            for (ctl, t) in all_roles() {
                let c = decompose_toffoli(s, ctl, t).unwrap();
                let target = toffoli_unitary(ctl, t, 3).unwrap();
                let r = certify(&c, &target, CERTIFY_TOL).unwrap();
                assert!(r.equivalent, "{s} {ctl:?};{t}: {}", r.max_abs_error);
            }
        }
    }

    #[test]
    fn gate_budgets() {
        let path = CouplingGraph::path(3);
        for (ctl, t) in all_roles() {
            let full = decompose_toffoli(DecompositionStrategy::Full6Cnot, ctl, t).unwrap();
            assert_eq!(full.count(GateKind::CNOT), 6);
            assert_eq!(full.two_qubit_count(), 6);
            assert!(full.gates().iter().all(|g| matches!(
                g.kind(),
                GateKind::CNOT | GateKind::H | GateKind::T | GateKind::TDG | GateKind::S
            )));

            let lnn8 = decompose_toffoli(DecompositionStrategy::Lnn8Cnot, ctl, t).unwrap();
            assert_eq!(lnn8.count(GateKind::CNOT), 8);
            assert_eq!(lnn8.two_qubit_count(), 8);
            assert!(validate_connectivity(&lnn8, &path).unwrap().is_empty());

            let lnn9 = decompose_toffoli(DecompositionStrategy::Lnn9CnotRzSx, ctl, t).unwrap();
            assert_eq!(lnn9.count(GateKind::CNOT), 9);
            assert_eq!(lnn9.two_qubit_count(), 9);
            assert!(lnn9
                .gates()
                .iter()
                .all(|g| matches!(g.kind(), GateKind::CNOT | GateKind::RZ | GateKind::SX)));
            assert!(validate_connectivity(&lnn9, &path).unwrap().is_empty());

            let ecr = decompose_toffoli(DecompositionStrategy::EcrNative, ctl, t).unwrap();
            assert!(ecr.is_native());
            assert_eq!(ecr.count(GateKind::ECR), 8);
            assert!(validate_connectivity(&ecr, &path).unwrap().is_empty());
        }
    }

    #[test]
    fn full_decomposition_needs_long_range_cnot() {
        let full = decompose_toffoli(DecompositionStrategy::Full6Cnot, (0, 1), 2).unwrap();
        assert!(!validate_connectivity(&full, &CouplingGraph::path(3)).unwrap().is_empty());
    }

    #[test]
    fn ecr_native_truth_table() {
        let c = decompose_toffoli(DecompositionStrategy::EcrNative, (1, 2), 0).unwrap();
        let u = circuit_unitary(&c).unwrap();
        // |110⟩: qubits 1 and 2 set
        let out = u.apply(&StateVector::basis(3, 0b110)).unwrap();
        assert!((out.overlap(&StateVector::basis(3, 0b111)) - 1.0).abs() < 1e-10);
        let out = u.apply(&StateVector::basis(3, 0b010)).unwrap();
        assert!((out.overlap(&StateVector::basis(3, 0b010)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn self_inverse() {
        for s in DecompositionStrategy::ALL {
            let c = decompose_toffoli(s, (0, 2), 1).unwrap();
            let twice = c.clone().then(&c);
            let r = certify(&twice, &UnitaryMatrix::identity(8), 1e-9).unwrap();
            assert!(r.equivalent, "{s}");
        }
    }

    #[test]
    fn deterministic() {
        for s in DecompositionStrategy::ALL {
            assert_eq!(decompose_toffoli(s, (0, 1), 2).unwrap(), decompose_toffoli(s, (0, 1), 2).unwrap());
        }
    }

    #[test]
    fn non_path_triple_rejected() {
        let g = CouplingGraph::path(5);
        for s in [DecompositionStrategy::Lnn8Cnot, DecompositionStrategy::EcrNative, DecompositionStrategy::Lnn9CnotRzSx] {
            assert!(matches!(decompose_toffoli_on(s, (0, 1), 3, &g), Err(Error::NonPathQubits(_))));
        }
        assert!(decompose_toffoli_on(DecompositionStrategy::Full6Cnot, (0, 1), 3, &g).is_ok());
        // A star is a path through its centre.
        let star = CouplingGraph::new(4, [(0, 3), (1, 3), (2, 3)]).unwrap();
        let c = decompose_toffoli_on(DecompositionStrategy::Lnn8Cnot, (0, 3), 1, &star).unwrap();
        assert!(validate_connectivity(&c, &star).unwrap().is_empty());
    }

    #[test]
    fn skeleton_lengths_are_minimal_on_a_line() {
        assert_eq!(skeleton_8().len(), 8);
        assert_eq!(skeleton_9().len(), 9);
        let exists = |len| {
            std::panic::catch_unwind(|| search_skeleton(len)).is_ok()
        };
        assert!(!exists(7));
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in DecompositionStrategy::ALL {
            assert_eq!(s.name().parse::<DecompositionStrategy>().unwrap(), s);
            assert_eq!(s.cli_name().parse::<DecompositionStrategy>().unwrap(), s);
        }
        assert!("lnn-7cnot".parse::<DecompositionStrategy>().is_err());
    }
}
