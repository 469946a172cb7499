use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::matrix::{ComplexMatrix, C64, I, ONE, ZERO};
use crate::qmath::UnitaryMatrix;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    X,
    SX,
    RZ,
    H,
    T,
    TDG,
    S,
    SDG,
    ID,
    CNOT,
    ECR,
    CCX,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::X,
        GateKind::SX,
        GateKind::RZ,
        GateKind::H,
        GateKind::T,
        GateKind::TDG,
        GateKind::S,
        GateKind::SDG,
        GateKind::ID,
        GateKind::CNOT,
        GateKind::ECR,
        GateKind::CCX,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::SX => "SX",
            GateKind::RZ => "RZ",
            GateKind::H => "H",
            GateKind::T => "T",
            GateKind::TDG => "TDG",
            GateKind::S => "S",
            GateKind::SDG => "SDG",
            GateKind::ID => "ID",
            GateKind::CNOT => "CNOT",
            GateKind::ECR => "ECR",
            GateKind::CCX => "CCX",
        }
    }

    pub fn num_qubits(self) -> usize {
        match self {
            GateKind::CNOT | GateKind::ECR => 2,
            GateKind::CCX => 3,
            _ => 1,
        }
    }

    pub fn num_params(self) -> usize {
        usize::from(self == GateKind::RZ)
    }

    /// Member of the hardware basis {ECR, ID, RZ, SX, X}.
    pub fn is_native(self) -> bool {
        matches!(
            self,
            GateKind::ECR | GateKind::ID | GateKind::RZ | GateKind::SX | GateKind::X
        )
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GateKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownGate(s.to_string()))
    }
}

/// A gate application. For controlled gates `qubits[0]` is the control
/// (both controls for CCX) and the last entry the target.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    params: Vec<f64>,
    qubits: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, params: Vec<f64>, qubits: Vec<usize>) -> Result<Self> {
        let invalid = |reason: String| Error::InvalidGate {
            gate: kind.name().to_string(),
            reason,
        };
        if params.len() != kind.num_params() {
            return Err(invalid(format!(
                "expected {} parameter(s), got {}",
                kind.num_params(),
                params.len()
            )));
        }
        if let Some(p) = params.iter().find(|p| !p.is_finite()) {
            return Err(invalid(format!("non-finite parameter {p}")));
        }
        if qubits.len() != kind.num_qubits() {
            return Err(invalid(format!(
                "expected {} qubit(s), got {}",
                kind.num_qubits(),
                qubits.len()
            )));
        }
        for (i, q) in qubits.iter().enumerate() {
            if qubits[..i].contains(q) {
                return Err(invalid(format!("repeated qubit {q}")));
            }
        }
        Ok(Self {
            kind,
            params,
            qubits,
        })
    }

    fn fixed(kind: GateKind, params: Vec<f64>, qubits: Vec<usize>) -> Self {
        Self::new(kind, params, qubits).expect("well-formed gate")
    }

    pub fn x(q: usize) -> Self {
        Self::fixed(GateKind::X, vec![], vec![q])
    }
    pub fn sx(q: usize) -> Self {
        Self::fixed(GateKind::SX, vec![], vec![q])
    }
    pub fn rz(angle: f64, q: usize) -> Self {
        Self::fixed(GateKind::RZ, vec![angle], vec![q])
    }
    pub fn h(q: usize) -> Self {
        Self::fixed(GateKind::H, vec![], vec![q])
    }
    pub fn t(q: usize) -> Self {
        Self::fixed(GateKind::T, vec![], vec![q])
    }
    pub fn tdg(q: usize) -> Self {
        Self::fixed(GateKind::TDG, vec![], vec![q])
    }
    pub fn s(q: usize) -> Self {
        Self::fixed(GateKind::S, vec![], vec![q])
    }
    pub fn sdg(q: usize) -> Self {
        Self::fixed(GateKind::SDG, vec![], vec![q])
    }
    pub fn id(q: usize) -> Self {
        Self::fixed(GateKind::ID, vec![], vec![q])
    }
    /// Panics if `control == target`.
    pub fn cnot(control: usize, target: usize) -> Self {
        Self::fixed(GateKind::CNOT, vec![], vec![control, target])
    }
    /// Panics if `control == target`.
    pub fn ecr(control: usize, target: usize) -> Self {
        Self::fixed(GateKind::ECR, vec![], vec![control, target])
    }
    pub fn ccx(c1: usize, c2: usize, target: usize) -> Self {
        Self::fixed(GateKind::CCX, vec![], vec![c1, c2, target])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits
    }

    pub fn num_qubits(&self) -> usize {
        self.qubits.len()
    }

    /// Matrix in the gate's own operand order: local basis bit `j` is
    /// `qubits[j]` (little-endian).
    pub fn operand_matrix(&self) -> ComplexMatrix {
        let h = FRAC_1_SQRT_2;
        match self.kind {
            GateKind::X => ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]),
            GateKind::SX => {
                let a = C64::new(0.5, 0.5);
                let b = C64::new(0.5, -0.5);
                ComplexMatrix::from_rows(&[&[a, b], &[b, a]])
            }
            GateKind::RZ => {
                let half = self.params[0] / 2.0;
                ComplexMatrix::diagonal(&[C64::from_polar(1.0, -half), C64::from_polar(1.0, half)])
            }
            GateKind::H => ComplexMatrix::from_real_rows(&[&[h, h], &[h, -h]]),
            GateKind::T => ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, FRAC_PI_4)]),
            GateKind::TDG => ComplexMatrix::diagonal(&[ONE, C64::from_polar(1.0, -FRAC_PI_4)]),
            GateKind::S => ComplexMatrix::diagonal(&[ONE, I]),
            GateKind::SDG => ComplexMatrix::diagonal(&[ONE, -I]),
            GateKind::ID => ComplexMatrix::identity(2),
            GateKind::CNOT => permutation_matrix(&[0, 3, 2, 1]),
            GateKind::ECR => ecr_control_low(),
            GateKind::CCX => permutation_matrix(&[0, 1, 2, 7, 4, 5, 6, 3]),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::gates::text::format_gate(self))
    }
}

/// Unitary of `g` on its own qubits, expressed with the gate's qubits sorted
/// ascending and the lowest index as the least-significant bit. An ECR whose
/// control is the lower qubit yields the first (ascending) ECR form, and a
/// descending one the swapped form.
pub fn gate_matrix(g: &Gate) -> UnitaryMatrix {
    let operand = g.operand_matrix();
    let mut order: Vec<usize> = (0..g.num_qubits()).collect();
    order.sort_by_key(|&j| g.qubits()[j]);
    let m = if order.iter().enumerate().all(|(i, &j)| i == j) {
        operand
    } else {
        permute_operands(&operand, &order)
    };
    UnitaryMatrix::new(m).expect("catalog gates are unitary")
}

/// Re-express `m` (operand bit `j` ↔ slot `j`) so that new bit `i` refers to
/// old operand `order[i]`.
pub(crate) fn permute_operands(m: &ComplexMatrix, order: &[usize]) -> ComplexMatrix {
    let n = order.len();
    let dim = 1 << n;
    let remap = |new_index: usize| {
        let mut old = 0;
        for (i, &j) in order.iter().enumerate() {
            if new_index >> i & 1 == 1 {
                old |= 1 << j;
            }
        }
        old
    };
    let mut out = ComplexMatrix::zeros(dim, dim);
    for r in 0..dim {
        for c in 0..dim {
            out.set(r, c, m.get(remap(r), remap(c)));
        }
    }
    out
}

fn permutation_matrix(images: &[usize]) -> ComplexMatrix {
    let n = images.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (src, &dst) in images.iter().enumerate() {
        m.set(dst, src, ONE);
    }
    m
}

/// ECR with the control on local bit 0.
fn ecr_control_low() -> ComplexMatrix {
    let h = C64::new(FRAC_1_SQRT_2, 0.0);
    let ih = I * FRAC_1_SQRT_2;
    ComplexMatrix::from_rows(&[
        &[ZERO, h, ZERO, ih],
        &[h, ZERO, -ih, ZERO],
        &[ZERO, ih, ZERO, h],
        &[-ih, ZERO, h, ZERO],
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn r2() -> f64 {
        FRAC_1_SQRT_2
    }

    #[test]
    fn x_matrix_literal() {
        let m = gate_matrix(&Gate::x(0));
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(m.matrix(), &expected);
    }

    #[test]
    fn sx_squares_to_x() {
        let sx = gate_matrix(&Gate::sx(0));
        let x = gate_matrix(&Gate::x(0));
        assert!(sx.compose(&sx).matrix().max_abs_diff(x.matrix()) < 1e-12);
    }

    #[test]
    fn rz_zero_is_identity() {
        let m = gate_matrix(&Gate::rz(0.0, 0));
        assert!(m.matrix().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn ecr_ascending_matches_literal() {
        let m = gate_matrix(&Gate::ecr(0, 1));
        let z = 0.0;
        let expected = ComplexMatrix::from_rows(&[
            &[C64::new(z, 0.0), C64::new(r2(), 0.0), C64::new(z, 0.0), C64::new(0.0, r2())],
            &[C64::new(r2(), 0.0), C64::new(z, 0.0), C64::new(0.0, -r2()), C64::new(z, 0.0)],
            &[C64::new(z, 0.0), C64::new(0.0, r2()), C64::new(z, 0.0), C64::new(r2(), 0.0)],
            &[C64::new(0.0, -r2()), C64::new(z, 0.0), C64::new(r2(), 0.0), C64::new(z, 0.0)],
        ]);
        assert!(m.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ecr_descending_matches_literal() {
        let m = gate_matrix(&Gate::ecr(1, 0));
        let o = C64::new(r2(), 0.0);
        let i = C64::new(0.0, r2());
        let expected = ComplexMatrix::from_rows(&[
            &[ZERO, ZERO, o, i],
            &[ZERO, ZERO, i, o],
            &[o, -i, ZERO, ZERO],
            &[-i, o, ZERO, ZERO],
        ]);
        assert!(m.matrix().max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn ecr_orientations_related_by_swap() {
        let swap = permutation_matrix(&[0, 2, 1, 3]);
        let asc = gate_matrix(&Gate::ecr(0, 1));
        let desc = gate_matrix(&Gate::ecr(1, 0));
        let conj = &(&swap * asc.matrix()) * &swap;
        assert!(conj.max_abs_diff(desc.matrix()) < 1e-12);
    }

    #[test]
    fn every_catalog_gate_is_unitary() {
        for kind in GateKind::ALL {
            let qubits: Vec<usize> = (0..kind.num_qubits()).collect();
            let params = vec![0.3; kind.num_params()];
            let g = Gate::new(kind, params, qubits).unwrap();
            assert!(gate_matrix(&g).matrix().unitarity_error() < 1e-12, "{kind}");
        }
        for k in 0..100 {
            let angle = -2.0 * PI + 4.0 * PI * (k as f64) / 99.0;
            assert!(gate_matrix(&Gate::rz(angle, 0)).matrix().unitarity_error() < 1e-12);
        }
    }

    #[test]
    fn arity_and_param_validation() {
        assert!(Gate::new(GateKind::CNOT, vec![], vec![0]).is_err());
        assert!(Gate::new(GateKind::RZ, vec![], vec![0]).is_err());
        assert!(Gate::new(GateKind::X, vec![1.0], vec![0]).is_err());
        assert!(Gate::new(GateKind::CNOT, vec![], vec![1, 1]).is_err());
        assert!(Gate::new(GateKind::RZ, vec![f64::NAN], vec![0]).is_err());
        assert!(matches!("FOO".parse::<GateKind>(), Err(Error::UnknownGate(_))));
        assert_eq!("cnot".parse::<GateKind>().unwrap(), GateKind::CNOT);
    }

    #[test]
    fn ccx_in_sorted_basis() {
        // Controls on qubits 1 and 2, target 0: basis indices 6 and 7 swap.
        let m = gate_matrix(&Gate::ccx(2, 1, 0));
        assert_eq!(m.matrix().get(7, 6), ONE);
        assert_eq!(m.matrix().get(6, 7), ONE);
        assert_eq!(m.matrix().get(3, 3), ONE);
    }
}
