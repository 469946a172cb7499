//! Choi matrices, process fidelity and the Pauli transfer matrix.
//!
//! The channel input occupies the first (high-order) tensor factor:
//! σ = (1/Γ) Σ_ij |i⟩⟨j| ⊗ E(|i⟩⟨j|).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::linalg::eigh;
use crate::qmath::matrix::{C64, ZERO};
use crate::qmath::{kron, pauli_basis, state_fidelity, ComplexMatrix, DensityMatrix, StateVector, UnitaryMatrix};
use crate::sim::channels::KrausChannel;

/// Normalized Choi matrix of a channel on `k` qubits (dimension Γ², trace 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChoiMatrix {
    num_qubits: usize,
    #[serde(with = "matrix_rows")]
    matrix: ComplexMatrix,
}

impl ChoiMatrix {
    /// Checks Hermiticity, unit trace within 1e-8 and PSD within −1e-6.
    pub fn new(num_qubits: usize, matrix: ComplexMatrix) -> Result<Self> {
        let dim = 1usize << (2 * num_qubits);
        if matrix.rows() != dim || matrix.cols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: matrix.rows() });
        }
        let deviation = matrix.hermiticity_error();
        if deviation > 1e-8 {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > 1e-8 || tr.im.abs() > 1e-8 {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let min_eigenvalue = eigh(&matrix).values[0];
        if min_eigenvalue < -1e-6 {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(Self { num_qubits, matrix: matrix.hermitian_part() })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    /// Γ = 2^k
    pub fn gamma(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        self.matrix.hs_inner(&self.matrix).re
    }

    pub fn as_density(&self) -> DensityMatrix {
        DensityMatrix::from_trusted(self.matrix.clone())
    }

    /// Output of the channel on `rho`: E(ρ) = Γ·Σ_ij ρ_ij σ_(i,j), where
    /// σ_(i,j) is the (i, j) block.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        let g = self.gamma();
        if rho.rows() != g {
            return Err(Error::DimensionMismatch { expected: g, found: rho.rows() });
        }
        let mut out = ComplexMatrix::zeros(g, g);
        for r in 0..g {
            for c in 0..g {
                let mut acc = ZERO;
                for i in 0..g {
                    for j in 0..g {
                        // block (i, j) of Γσ is E(|i⟩⟨j|)
                        acc += rho.get(i, j) * self.matrix.get(i * g + r, j * g + c);
                    }
                }
                out.set(r, c, acc * g as f64);
            }
        }
        Ok(out)
    }

    /// max |Tr_out(Γσ) − I|: zero for trace-preserving channels.
    pub fn tp_deviation(&self) -> f64 {
        let g = self.gamma();
        let mut worst: f64 = 0.0;
        for i in 0..g {
            for j in 0..g {
                let mut acc = ZERO;
                for r in 0..g {
                    acc += self.matrix.get(i * g + r, j * g + r);
                }
                let want = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((acc * g as f64 - C64::new(want, 0.0)).norm());
            }
        }
        worst
    }
}

fn num_qubits_of(dim: usize) -> Result<usize> {
    if !dim.is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: dim.next_power_of_two(), found: dim });
    }
    Ok(dim.trailing_zeros() as usize)
}

/// (1/Γ)·(I⊗U)|Ω⟩⟨Ω|(I⊗U)† with |Ω⟩ = Σ|ii⟩.
pub fn choi_of_unitary(u: &UnitaryMatrix) -> ChoiMatrix {
    let v = choi_vector(u);
    ChoiMatrix {
        num_qubits: u.num_qubits(),
        matrix: ComplexMatrix::outer(v.amplitudes(), v.amplitudes()),
    }
}

/// Normalized (I⊗U)|Ω⟩/√Γ.
pub fn choi_vector(u: &UnitaryMatrix) -> StateVector {
    let g = u.dim();
    let s = (g as f64).sqrt().recip();
    let mut v = vec![ZERO; g * g];
    for i in 0..g {
        for j in 0..g {
            v[i * g + j] = u.matrix().get(j, i) * s;
        }
    }
    StateVector::normalized(v).expect("unitary columns are normalized")
}

pub fn choi_of_kraus(ch: &KrausChannel) -> Result<ChoiMatrix> {
    let g = ch.dim();
    let k = num_qubits_of(g)?;
    let mut m = ComplexMatrix::zeros(g * g, g * g);
    for op in ch.operators() {
        let mut v = vec![ZERO; g * g];
        for i in 0..g {
            for j in 0..g {
                v[i * g + j] = op.get(j, i);
            }
        }
        m = &m + &ComplexMatrix::outer(&v, &v);
    }
    Ok(ChoiMatrix { num_qubits: k, matrix: m.scale_real(1.0 / g as f64) })
}

/// Kraus operators from the eigendecomposition of Γσ, dropping
/// eigenvalues below `floor`.
pub fn kraus_of_choi(choi: &ChoiMatrix, floor: f64) -> Vec<ComplexMatrix> {
    let g = choi.gamma();
    let e = eigh(&choi.matrix.scale_real(g as f64));
    let mut ops = Vec::new();
    for (idx, &lambda) in e.values.iter().enumerate().rev() {
        if lambda <= floor {
            continue;
        }
        let s = lambda.sqrt();
        let mut k = ComplexMatrix::zeros(g, g);
        for i in 0..g {
            for j in 0..g {
                k.set(j, i, e.vectors.get(i * g + j, idx) * s);
            }
        }
        ops.push(k);
    }
    ops
}

/// State fidelity of the two normalized Choi matrices. A rank-one target
/// reduces to ⟨ψ_b|a|ψ_b⟩.
pub fn process_fidelity(a: &ChoiMatrix, b: &ChoiMatrix) -> Result<f64> {
    if a.matrix.rows() != b.matrix.rows() {
        return Err(Error::DimensionMismatch { expected: b.matrix.rows(), found: a.matrix.rows() });
    }
    state_fidelity(&a.as_density(), &b.as_density())
}

/// Fidelity against a unitary target: ⟨ψ_U|σ|ψ_U⟩.
pub fn process_fidelity_to_unitary(a: &ChoiMatrix, u: &UnitaryMatrix) -> Result<f64> {
    if a.gamma() != u.dim() {
        return Err(Error::DimensionMismatch { expected: u.dim(), found: a.gamma() });
    }
    Ok(a.as_density().expectation_pure(&choi_vector(u)).clamp(0.0, 1.0))
}

/// (Γ·F_pro + 1)/(Γ + 1)
pub fn average_gate_fidelity(f_pro: f64, k: usize) -> f64 {
    let g = (1u64 << k) as f64;
    (g * f_pro + 1.0) / (g + 1.0)
}

/// Pauli transfer matrix R_ij = Tr(P_i E(P_j))/Γ in the normalized Pauli
/// basis P/√Γ, computed from the Choi matrix as Tr[(P_jᵀ ⊗ P_i) σ].
pub fn ptm_of_choi(choi: &ChoiMatrix) -> ComplexMatrix {
    let paulis = pauli_basis(choi.num_qubits);
    let n = paulis.len();
    let mut r = ComplexMatrix::zeros(n, n);
    for (j, pj) in paulis.iter().enumerate() {
        let pjt = pj.transpose();
        for (i, pi) in paulis.iter().enumerate() {
            r.set(i, j, (&kron(&pjt, pi) * &choi.matrix).trace());
        }
    }
    r
}

/// PTM straight from the operator-sum form, independent of the Choi route.
pub fn ptm_of_kraus(ch: &KrausChannel) -> Result<ComplexMatrix> {
    let k = num_qubits_of(ch.dim())?;
    let g = ch.dim() as f64;
    let paulis = pauli_basis(k);
    let n = paulis.len();
    let mut r = ComplexMatrix::zeros(n, n);
    for (j, pj) in paulis.iter().enumerate() {
        let out = ch.apply(pj)?;
        for (i, pi) in paulis.iter().enumerate() {
            r.set(i, j, pi.hs_inner(&out) / g);
        }
    }
    Ok(r)
}

pub fn ptm_of_unitary(u: &UnitaryMatrix) -> ComplexMatrix {
    let ch = KrausChannel::new(vec![u.matrix().clone()]).expect("unitary is trace preserving");
    ptm_of_kraus(&ch).expect("power-of-two dimension")
}

/// Tr(S_U† S)/Γ² with both superoperators in the normalized Pauli basis.
pub fn process_fidelity_superop(channel_superop: &ComplexMatrix, target: &UnitaryMatrix) -> Result<f64> {
    let g2 = target.dim() * target.dim();
    if channel_superop.rows() != g2 || channel_superop.cols() != g2 {
        return Err(Error::DimensionMismatch { expected: g2, found: channel_superop.rows() });
    }
    let s_u = ptm_of_unitary(target);
    Ok(s_u.hs_inner(channel_superop).re / g2 as f64)
}

mod matrix_rows {
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::qmath::matrix::C64;
    use crate::qmath::ComplexMatrix;

    pub fn serialize<S: Serializer>(m: &ComplexMatrix, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<[f64; 2]>> = (0..m.rows())
            .map(|r| (0..m.cols()).map(|c| [m.get(r, c).re, m.get(r, c).im]).collect())
            .collect();
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<ComplexMatrix, D::Error> {
        let rows: Vec<Vec<[f64; 2]>> = Vec::deserialize(d)?;
        let n = rows.len();
        let entries: Vec<C64> = rows.iter().flatten().map(|[re, im]| C64::new(*re, *im)).collect();
        ComplexMatrix::from_row_major(n, entries.len().checked_div(n).unwrap_or(0), entries)
            .map_err(serde::de::Error::custom)
    }
}
