//! Translation into the hardware basis {ECR, ID, RZ, SX, X}.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate, GateKind};

/// Single-qubit corrections around one ECR, in circuit order.
struct EcrTemplate {
    /// ECR control is the CNOT control (`true`) or the CNOT target.
    same_direction: bool,
    pre_control: &'static [Step],
    pre_target: &'static [Step],
    post_control: &'static [Step],
    post_target: &'static [Step],
}

#[derive(Clone, Copy)]
enum Step {
    Sx,
    X,
    Rz(f64),
}

impl EcrTemplate {
    fn corrections(&self) -> usize {
        self.pre_control.len() + self.pre_target.len() + self.post_control.len() + self.post_target.len()
    }
}

// Found by exhaustive search over short {SX, X, RZ(kπ/2)} words on each
// side of the ECR and checked against the dense CNOT matrix in the tests.
const SAME_DIRECTION: EcrTemplate = EcrTemplate {
    same_direction: true,
    pre_control: &[Step::X],
    pre_target: &[],
    post_control: &[Step::Rz(FRAC_PI_2)],
    post_target: &[Step::Sx],
};

const REVERSED: EcrTemplate = EcrTemplate {
    same_direction: false,
    pre_control: &[Step::Sx, Step::Rz(FRAC_PI_2)],
    pre_target: &[Step::Rz(FRAC_PI_2), Step::Sx],
    post_control: &[Step::Sx, Step::Rz(FRAC_PI_2), Step::Sx],
    post_target: &[Step::Rz(FRAC_PI_2), Step::Sx, Step::Rz(-FRAC_PI_2)],
};

fn step_gate(s: Step, q: usize) -> Gate {
    match s {
        Step::Sx => Gate::sx(q),
        Step::X => Gate::x(q),
        Step::Rz(a) => Gate::rz(a, q),
    }
}

/// CNOT(control → target) as one ECR plus single-qubit corrections. Picks
/// the orientation needing fewer corrections, ties going to the ascending ECR.
pub fn cnot_to_ecr(control: usize, target: usize) -> Result<Circuit> {
    if control == target {
        return Err(Error::InvalidGate {
            gate: "CNOT".into(),
            reason: format!("repeated qubit {control}"),
        });
    }
    let ascending_is_same = control < target;
    let template = [&SAME_DIRECTION, &REVERSED]
        .into_iter()
        .min_by_key(|t| (t.corrections(), t.same_direction != ascending_is_same))
        .expect("two templates");
    let mut c = Circuit::new(control.max(target) + 1);
    let mut emit = |g: Gate| c.push(g);
    for &s in template.pre_control {
        emit(step_gate(s, control))?;
    }
    for &s in template.pre_target {
        emit(step_gate(s, target))?;
    }
    if template.same_direction {
        emit(Gate::ecr(control, target))?;
    } else {
        emit(Gate::ecr(target, control))?;
    }
    for &s in template.post_control {
        emit(step_gate(s, control))?;
    }
    for &s in template.post_target {
        emit(step_gate(s, target))?;
    }
    Ok(c)
}

/// H up to global phase: RZ(π/2) · SX · RZ(π/2).
pub fn hadamard_native(q: usize) -> [Gate; 3] {
    [Gate::rz(FRAC_PI_2, q), Gate::sx(q), Gate::rz(FRAC_PI_2, q)]
}

/// RY(θ) up to global phase.
pub fn ry_native(theta: f64, q: usize) -> [Gate; 4] {
    [Gate::sx(q), Gate::rz(theta + PI, q), Gate::sx(q), Gate::rz(PI, q)]
}

/// Rewrites every gate into the native basis. CCX must be synthesized first.
pub fn to_native(c: &Circuit) -> Result<Circuit> {
    let mut out = Circuit::new(c.num_qubits());
    for g in c.gates() {
        let q = g.qubits()[0];
        match g.kind() {
            GateKind::X | GateKind::SX | GateKind::RZ | GateKind::ID | GateKind::ECR => {
                out.push(g.clone())?
            }
            GateKind::H => {
                for h in hadamard_native(q) {
                    out.push(h)?;
                }
            }
            GateKind::T => out.push(Gate::rz(FRAC_PI_4, q))?,
            GateKind::TDG => out.push(Gate::rz(-FRAC_PI_4, q))?,
            GateKind::S => out.push(Gate::rz(FRAC_PI_2, q))?,
            GateKind::SDG => out.push(Gate::rz(-FRAC_PI_2, q))?,
            GateKind::CNOT => out.append(&cnot_to_ecr(g.qubits()[0], g.qubits()[1])?)?,
            GateKind::CCX => return Err(Error::NonNativeGate(g.to_string())),
        }
    }
    Ok(out)
}

fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(TAU);
    if w > PI {
        w -= TAU;
    }
    w
}

fn is_zero_angle(a: f64) -> bool {
    wrap_angle(a).abs() < 1e-12
}

/// Merges adjacent single-qubit gates on the same wire: RZ·RZ adds angles,
/// SX·SX becomes X, X·X and ID vanish, and RZ(0) is dropped. Preserves the
/// circuit unitary up to global phase. Runs to a fixed point.
pub fn peephole(c: &Circuit) -> Circuit {
    let mut gates: Vec<Gate> = c.gates().to_vec();
    loop {
        let (next, changed) = peephole_pass(&gates, c.num_qubits());
        gates = next;
        if !changed {
            break;
        }
    }
    Circuit::from_gates(c.num_qubits(), gates).expect("peephole keeps qubit indices")
}

fn peephole_pass(input: &[Gate], num_qubits: usize) -> (Vec<Gate>, bool) {
    let mut out: Vec<Option<Gate>> = Vec::with_capacity(input.len());
    // Indices into `out` of the live gates touching each wire, in order.
    let mut wire: Vec<Vec<usize>> = vec![Vec::new(); num_qubits];
    let mut changed = false;
    for g in input {
        if g.num_qubits() == 1 {
            let q = g.qubits()[0];
            let kind = g.kind();
            if kind == GateKind::ID || (kind == GateKind::RZ && is_zero_angle(g.params()[0])) {
                changed = true;
                continue;
            }
            let prev = wire[q]
                .last()
                .copied()
                .filter(|&i| out[i].as_ref().is_some_and(|p| p.num_qubits() == 1));
            if let Some(i) = prev {
                let p = out[i].as_ref().expect("live gate");
                let merged: Option<Option<Gate>> = match (p.kind(), kind) {
                    (GateKind::RZ, GateKind::RZ) => {
                        let a = wrap_angle(p.params()[0] + g.params()[0]);
                        Some(if is_zero_angle(a) { None } else { Some(Gate::rz(a, q)) })
                    }
                    (GateKind::SX, GateKind::SX) => Some(Some(Gate::x(q))),
                    (GateKind::X, GateKind::X) => Some(None),
                    _ => None,
                };
                if let Some(replacement) = merged {
                    changed = true;
                    match replacement {
                        Some(r) => out[i] = Some(r),
                        None => {
                            out[i] = None;
                            wire[q].pop();
                        }
                    }
                    continue;
                }
            }
        }
        let idx = out.len();
        out.push(Some(g.clone()));
        for &q in g.qubits() {
            wire[q].push(idx);
        }
    }
    (out.into_iter().flatten().collect(), changed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{circuit_unitary, gate_matrix, Circuit};
    use crate::qmath::matrix::{C64, ZERO};
    use crate::qmath::{ComplexMatrix, StateVector};
    use crate::synthesis::equivalence::{certify, equivalent_up_to_global_phase};

    fn cnot_full(control: usize, target: usize, n: usize) -> crate::qmath::UnitaryMatrix {
        circuit_unitary(&Circuit::from_gates(n, vec![Gate::cnot(control, target)]).unwrap()).unwrap()
    }

    #[test]
    fn cnot_to_ecr_matches_dense_cnot() {
        for (c, t) in [(0, 1), (1, 0), (0, 2), (2, 1)] {
            let circ = cnot_to_ecr(c, t).unwrap();
            let n = circ.num_qubits();
            let r = certify(&circ, &cnot_full(c, t, n), 1e-10).unwrap();
            assert!(r.equivalent, "({c},{t}) err {}", r.max_abs_error);
            assert_eq!(circ.count(GateKind::ECR), 1);
            assert!(circ.is_native());
        }
    }

    #[test]
    fn both_templates_are_correct() {
        for template in [&SAME_DIRECTION, &REVERSED] {
            let (c, t) = (0, 1);
            let mut circ = Circuit::new(2);
            for &s in template.pre_control {
                circ.push(step_gate(s, c)).unwrap();
            }
            for &s in template.pre_target {
                circ.push(step_gate(s, t)).unwrap();
            }
            let ecr = if template.same_direction { Gate::ecr(c, t) } else { Gate::ecr(t, c) };
            circ.push(ecr).unwrap();
            for &s in template.post_control {
                circ.push(step_gate(s, c)).unwrap();
            }
            for &s in template.post_target {
                circ.push(step_gate(s, t)).unwrap();
            }
            assert!(certify(&circ, &cnot_full(c, t, 2), 1e-10).unwrap().equivalent);
        }
    }

    #[test]
    fn cnot_to_ecr_truth_table() {
        // |10⟩ with control = qubit 1 set → |11⟩
        let circ = cnot_to_ecr(1, 0).unwrap();
        let u = circuit_unitary(&circ).unwrap();
        let out = u.apply(&StateVector::basis(2, 0b10)).unwrap();
        assert!((out.overlap(&StateVector::basis(2, 0b11)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn orientation_tie_break() {
        // Same-direction needs 3 corrections, reversed 10, so the ECR always
        // follows the CNOT direction.
        let asc = cnot_to_ecr(0, 1).unwrap();
        assert!(asc.gates().contains(&Gate::ecr(0, 1)));
        let desc = cnot_to_ecr(1, 0).unwrap();
        assert!(desc.gates().contains(&Gate::ecr(1, 0)));
        assert_eq!(asc.len(), 4);
    }

    #[test]
    fn native_single_qubit_identities() {
        let h = circuit_unitary(&Circuit::from_gates(1, hadamard_native(0).to_vec()).unwrap()).unwrap();
        assert!(equivalent_up_to_global_phase(&h, &gate_matrix(&Gate::h(0)), 1e-12).unwrap().equivalent);
        for theta in [0.0, 0.3, 1.2, 2.0, -2.9] {
            let ry = circuit_unitary(&Circuit::from_gates(1, ry_native(theta, 0).to_vec()).unwrap()).unwrap();
            let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
            let expected = crate::qmath::UnitaryMatrix::new(ComplexMatrix::from_real_rows(&[&[c, -s], &[s, c]])).unwrap();
            assert!(equivalent_up_to_global_phase(&ry, &expected, 1e-12).unwrap().equivalent);
        }
    }

    #[test]
    fn to_native_preserves_unitary() {
        let c = Circuit::from_gates(
            3,
            vec![Gate::h(0), Gate::t(1), Gate::cnot(0, 2), Gate::sdg(2), Gate::s(0), Gate::tdg(1), Gate::cnot(2, 1)],
        )
        .unwrap();
        let n = to_native(&c).unwrap();
        assert!(n.is_native());
        let r = certify(&n, &circuit_unitary(&c).unwrap(), 1e-10).unwrap();
        assert!(r.equivalent);
        let ccx = Circuit::from_gates(3, vec![Gate::ccx(0, 1, 2)]).unwrap();
        assert!(matches!(to_native(&ccx), Err(Error::NonNativeGate(_))));
    }

    #[test]
    fn peephole_rules() {
        let c = Circuit::from_gates(
            2,
            vec![
                Gate::rz(0.5, 0),
                Gate::rz(0.25, 0),
                Gate::id(1),
                Gate::sx(1),
                Gate::sx(1),
                Gate::x(1),
                Gate::rz(0.1, 0),
                Gate::ecr(0, 1),
                Gate::rz(-0.1, 0),
                Gate::rz(0.1, 0),
            ],
        )
        .unwrap();
        let p = peephole(&c);
        assert_eq!(p.gates(), &[Gate::rz(0.85, 0), Gate::ecr(0, 1)]);
        let r = certify(&p, &circuit_unitary(&c).unwrap(), 1e-12).unwrap();
        assert!(r.equivalent);
    }

    #[test]
    fn peephole_cascades() {
        let c = Circuit::from_gates(1, vec![Gate::sx(0), Gate::sx(0), Gate::sx(0), Gate::sx(0)]).unwrap();
        assert!(peephole(&c).is_empty());
        let u = circuit_unitary(&c).unwrap();
        // SX⁴ = I exactly
        assert!(u.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-12);
        assert_eq!(u.matrix().get(0, 1), C64::new(0.0, 0.0) + ZERO);
    }
}
