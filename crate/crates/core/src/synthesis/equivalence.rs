use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::{circuit_unitary, Circuit};
use crate::qmath::matrix::{C64, ONE};
use crate::qmath::UnitaryMatrix;

/// Tolerance used when certifying synthesized circuits.
pub const CERTIFY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EquivalenceReport {
    pub equivalent: bool,
    /// `u ≈ phase · v`
    #[serde(with = "complex_pair")]
    pub phase: C64,
    pub max_abs_error: f64,
    pub gate_count_2q: usize,
    pub depth: usize,
}

/// Compares `u` and `v` modulo a global phase, anchoring the phase on the
/// largest-magnitude entry of `v`.
pub fn equivalent_up_to_global_phase(
    u: &UnitaryMatrix,
    v: &UnitaryMatrix,
    tol: f64,
) -> Result<EquivalenceReport> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    let (um, vm) = (u.matrix(), v.matrix());
    let dim = v.dim();
    let (mut ar, mut ac, mut best) = (0, 0, -1.0);
    for r in 0..dim {
        for c in 0..dim {
            let m = vm.get(r, c).norm();
            if m > best {
                best = m;
                ar = r;
                ac = c;
            }
        }
    }
    let ratio = um.get(ar, ac) / vm.get(ar, ac);
    let phase = if ratio.norm() > 0.0 { ratio / ratio.norm() } else { ONE };
    let max_abs_error = um.max_abs_diff(&vm.scale(phase));
    Ok(EquivalenceReport {
        equivalent: max_abs_error <= tol,
        phase,
        max_abs_error,
        gate_count_2q: 0,
        depth: 0,
    })
}

/// Equivalence of a circuit's unitary against `target`, with the circuit's
/// two-qubit count and depth filled in.
pub fn certify(c: &Circuit, target: &UnitaryMatrix, tol: f64) -> Result<EquivalenceReport> {
    let u = circuit_unitary(c)?;
    let mut report = equivalent_up_to_global_phase(&u, target, tol)?;
    report.gate_count_2q = c.two_qubit_count();
    report.depth = c.depth();
    Ok(report)
}

mod complex_pair {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::qmath::matrix::C64;

    pub fn serialize<S: Serializer>(z: &C64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<C64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(C64::new(re, im))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::Gate;
    use crate::qmath::kron;
    use crate::synthesis::toffoli::toffoli_matrix;
    use std::f64::consts::PI;

    #[test]
    fn identical_operators() {
        let u = toffoli_matrix();
        let r = equivalent_up_to_global_phase(&u, &u, 1e-12).unwrap();
        assert!(r.equivalent);
        assert!((r.phase - ONE).norm() < 1e-15);
    }

    #[test]
    fn pure_phase_is_recovered() {
        let u = toffoli_matrix();
        let shift = C64::from_polar(1.0, PI / 7.0);
        let v = UnitaryMatrix::new(u.matrix().scale(shift)).unwrap();
        let r = equivalent_up_to_global_phase(&u, &v, 1e-12).unwrap();
        assert!(r.equivalent);
        assert!((r.phase - C64::from_polar(1.0, -PI / 7.0)).norm() < 1e-12);
        assert!((r.phase.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn distinct_operators() {
        let cnot = crate::gates::gate_matrix(&Gate::cnot(0, 1));
        let cnot_i = UnitaryMatrix::new(kron(&crate::qmath::ComplexMatrix::identity(2), cnot.matrix())).unwrap();
        let r = equivalent_up_to_global_phase(&toffoli_matrix(), &cnot_i, 1e-10).unwrap();
        assert!(!r.equivalent);
        let small = UnitaryMatrix::identity(4);
        assert!(equivalent_up_to_global_phase(&toffoli_matrix(), &small, 1e-10).is_err());
    }
}
