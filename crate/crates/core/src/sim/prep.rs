use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::synthesis::native::{hadamard_native, peephole, ry_native, to_native};
use crate::tomography::labels::ProbeLabel;

/// The three benchmark inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum InputState {
    Ghz,
    W,
    Uniform,
}

impl InputState {
    pub const ALL: [InputState; 3] = [InputState::Ghz, InputState::W, InputState::Uniform];

    pub fn name(self) -> &'static str {
        match self {
            InputState::Ghz => "GHZ",
            InputState::W => "W",
            InputState::Uniform => "UNIFORM",
        }
    }
}

impl fmt::Display for InputState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for InputState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| Error::InvalidLabel(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StatePrep {
    Input(InputState),
    /// Computational basis state `index` on `num_qubits` qubits.
    Basis { index: usize, num_qubits: usize },
    Probe(ProbeLabel),
}

/// CRY(θ) from `c` to `t` as RY(θ/2)·CNOT·RY(−θ/2)·CNOT.
fn controlled_ry(theta: f64, c: usize, t: usize) -> Vec<Gate> {
    let mut g = ry_native(theta / 2.0, t).to_vec();
    g.push(Gate::cnot(c, t));
    g.extend(ry_native(-theta / 2.0, t));
    g.push(Gate::cnot(c, t));
    g
}

/// Native circuit preparing the requested state from |0…0⟩. All two-qubit
/// gates act on neighbours of the chain 0 – 1 – 2.
pub fn prepare_state(kind: &StatePrep) -> Result<Circuit> {
    let logical = match kind {
        StatePrep::Input(InputState::Ghz) => {
            let mut g = hadamard_native(0).to_vec();
            g.extend([Gate::cnot(0, 1), Gate::cnot(1, 2)]);
            Circuit::from_gates(3, g)?
        }
        StatePrep::Input(InputState::W) => {
            // |100⟩ → √⅓|100⟩ + √⅔|110⟩ → … → (|001⟩+|010⟩+|100⟩)/√3
            let theta = 2.0 * (1.0f64 / 3.0).sqrt().acos();
            let mut g = vec![Gate::x(2)];
            g.extend(controlled_ry(theta, 2, 1));
            g.push(Gate::cnot(1, 2));
            g.extend(controlled_ry(FRAC_PI_2, 1, 0));
            g.push(Gate::cnot(0, 1));
            Circuit::from_gates(3, g)?
        }
        StatePrep::Input(InputState::Uniform) => Circuit::from_gates(3, (0..3).flat_map(hadamard_native).collect())?,
        StatePrep::Basis { index, num_qubits } => {
            if *num_qubits == 0 || *index >= 1 << num_qubits {
                return Err(Error::InvalidLabel(format!("basis index {index} on {num_qubits} qubits")));
            }
            Circuit::from_gates(*num_qubits, (0..*num_qubits).filter(|q| index >> q & 1 == 1).map(Gate::x).collect())?
        }
        StatePrep::Probe(label) => label.preparation(),
    };
    Ok(peephole(&to_native(&logical)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::matrix::C64;
    use crate::qmath::{kron_all, StateVector};
    use crate::sim::run::run_statevector;
    use crate::tomography::labels::Probe;

    fn check(kind: StatePrep, want: &[f64]) {
        let c = prepare_state(&kind).unwrap();
        assert!(c.is_native());
        let got = run_statevector(&c).unwrap();
        let want = StateVector::new(want.iter().map(|&x| C64::new(x, 0.0)).collect()).unwrap();
        assert!((got.overlap(&want) - 1.0).abs() < 1e-10, "{kind:?}");
    }

    #[test]
    fn benchmark_states() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        check(StatePrep::Input(InputState::Ghz), &[h, 0., 0., 0., 0., 0., 0., h]);
        let w = (1.0f64 / 3.0).sqrt();
        check(StatePrep::Input(InputState::W), &[0., w, w, 0., w, 0., 0., 0.]);
        check(StatePrep::Input(InputState::Uniform), &[8f64.sqrt().recip(); 8]);
        check(StatePrep::Basis { index: 0b101, num_qubits: 3 }, &[0., 0., 0., 0., 0., 1., 0., 0.]);
    }

    #[test]
    fn probe_product_states() {
        let label = ProbeLabel::new(vec![Probe::PlusI, Probe::One, Probe::Plus]);
        let c = prepare_state(&StatePrep::Probe(label.clone())).unwrap();
        let got = run_statevector(&c).unwrap();
        let factors: Vec<_> = label
            .probes()
            .iter()
            .rev()
            .map(|p| crate::qmath::ComplexMatrix::from_rows(&[&[p.amplitudes()[0]], &[p.amplitudes()[1]]]))
            .collect();
        let v = kron_all(&factors);
        let want = StateVector::new((0..8).map(|i| v.get(i, 0)).collect()).unwrap();
        assert!((got.overlap(&want) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn labels() {
        assert_eq!("ghz".parse::<InputState>().unwrap(), InputState::Ghz);
        assert!(matches!("bell".parse::<InputState>(), Err(Error::InvalidLabel(_))));
        assert!(matches!(
            prepare_state(&StatePrep::Basis { index: 8, num_qubits: 3 }),
            Err(Error::InvalidLabel(_))
        ));
    }
}
