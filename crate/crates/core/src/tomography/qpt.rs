use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::qmath::{kron, kron_all, project_to_density, ComplexMatrix, Projection};
use crate::sim::prep::{prepare_state, StatePrep};
use crate::sim::sampling::{derive_seed, CountsMap};
use crate::tomography::choi::ChoiMatrix;
use crate::tomography::labels::{measurement_rotation, qst_settings, PauliString, Probe, ProbeLabel, MAX_QPT_K};
use crate::tomography::qst::qst_reconstruct_probabilities;

/// One circuit of a tomography sweep.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TomographyJob {
    pub index: usize,
    pub probe: ProbeLabel,
    pub setting: PauliString,
    pub shots: u64,
    pub seed: u64,
}

impl TomographyJob {
    /// Probe preparation, then `gate`, then the basis rotation.
    pub fn circuit(&self, gate: &Circuit) -> Result<Circuit> {
        let mut c = prepare_state(&StatePrep::Probe(self.probe.clone()))?.with_num_qubits(gate.num_qubits())?;
        c.append(gate)?;
        c.append(&measurement_rotation(&self.setting))?;
        Ok(c)
    }
}

/// The 4^k × 3^k jobs, probe-major and lexicographic, with per-job seeds
/// derived from `master_seed` and the job index.
pub fn qpt_jobs(gate_circuit: &Circuit, k: usize, shots: u64, master_seed: u64) -> Result<Vec<TomographyJob>> {
    if !(1..=MAX_QPT_K).contains(&k) {
        return Err(Error::KOutOfRange { k, min: 1, max: MAX_QPT_K });
    }
    if gate_circuit.num_qubits() != k {
        return Err(Error::DimensionMismatch { expected: k, found: gate_circuit.num_qubits() });
    }
    if shots == 0 {
        return Err(Error::Config("shots must be positive".into()));
    }
    let settings = qst_settings(k)?;
    let mut jobs = Vec::with_capacity(12usize.pow(k as u32));
    for probe in ProbeLabel::all(k)? {
        for setting in &settings {
            let index = jobs.len();
            jobs.push(TomographyJob {
                index,
                probe: probe.clone(),
                setting: setting.clone(),
                shots,
                seed: derive_seed(master_seed, index as u64),
            });
        }
    }
    Ok(jobs)
}

/// Operators M_a dual to the single-qubit probe states:
/// |i⟩⟨j| = Σ_a c_{ij,a} ρ_a and M_a = Σ_ij c_{ij,a} |i⟩⟨j|.
fn single_qubit_duals() -> [ComplexMatrix; 4] {
    let mut a = ComplexMatrix::zeros(4, 4);
    for (col, p) in Probe::ALL.iter().enumerate() {
        let v = p.amplitudes();
        for i in 0..2 {
            for j in 0..2 {
                a.set(i * 2 + j, col, v[i] * v[j].conj());
            }
        }
    }
    let inv = a.inverse().expect("probe states are linearly independent");
    std::array::from_fn(|col| {
        let mut m = ComplexMatrix::zeros(2, 2);
        for i in 0..2 {
            for j in 0..2 {
                m.set(i, j, inv.get(col, i * 2 + j));
            }
        }
        m
    })
}

fn dual_of(label: &ProbeLabel, duals: &[ComplexMatrix; 4]) -> ComplexMatrix {
    let factors: Vec<&ComplexMatrix> = label
        .probes()
        .iter()
        .rev()
        .map(|p| &duals[Probe::ALL.iter().position(|x| x == p).expect("known probe")])
        .collect();
    kron_all(factors)
}

pub type QptKey = (ProbeLabel, PauliString);

/// Process tomography from outcome distributions: each probe's output state
/// is reconstructed by state tomography, the states are combined through the
/// dual probe basis, and the result is projected onto the Choi cone.
pub fn qpt_reconstruct_probabilities(
    data: &BTreeMap<QptKey, Vec<f64>>,
    k: usize,
    projection: Projection,
) -> Result<ChoiMatrix> {
    if !(1..=MAX_QPT_K).contains(&k) {
        return Err(Error::KOutOfRange { k, min: 1, max: MAX_QPT_K });
    }
    let probes = ProbeLabel::all(k)?;
    let settings = qst_settings(k)?;
    let mut missing = Vec::new();
    for p in &probes {
        for s in &settings {
            if !data.contains_key(&(p.clone(), s.clone())) {
                missing.push(format!("{p}|{s}"));
            }
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingCell(missing));
    }
    let g = 1usize << k;
    let duals = single_qubit_duals();
    let mut xi = ComplexMatrix::zeros(g * g, g * g);
    for p in &probes {
        let per_setting: BTreeMap<PauliString, Vec<f64>> =
            settings.iter().map(|s| (s.clone(), data[&(p.clone(), s.clone())].clone())).collect();
        let out = qst_reconstruct_probabilities(&per_setting, k, projection)?;
        xi = &xi + &kron(&dual_of(p, &duals), out.matrix());
    }
    let sigma = xi.scale_real(1.0 / g as f64).hermitian_part();
    let projected = project_to_density(&sigma, projection)?;
    ChoiMatrix::new(k, projected.into_matrix())
}

pub fn qpt_reconstruct(data: &BTreeMap<QptKey, CountsMap>, k: usize) -> Result<ChoiMatrix> {
    qpt_reconstruct_with(data, k, Projection::default())
}

pub fn qpt_reconstruct_with(data: &BTreeMap<QptKey, CountsMap>, k: usize, projection: Projection) -> Result<ChoiMatrix> {
    let probs = data
        .iter()
        .map(|(key, c)| {
            if c.num_qubits != k {
                return Err(Error::DimensionMismatch { expected: k, found: c.num_qubits });
            }
            Ok((key.clone(), c.frequencies()))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    qpt_reconstruct_probabilities(&probs, k, projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{circuit_unitary, Gate};
    use crate::qmath::random::haar_unitary;
    use crate::qmath::{DensityMatrix, StateVector, UnitaryMatrix};
    use crate::sim::sampling::QuantumState;
    use crate::tomography::choi::{choi_of_unitary, process_fidelity};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Exact outcome distributions of the ideal channel `u`.
    fn exact_data(u: &UnitaryMatrix, k: usize) -> BTreeMap<QptKey, Vec<f64>> {
        let mut out = BTreeMap::new();
        for p in ProbeLabel::all(k).unwrap() {
            let factors: Vec<ComplexMatrix> = p
                .probes()
                .iter()
                .rev()
                .map(|x| ComplexMatrix::from_rows(&[&[x.amplitudes()[0]], &[x.amplitudes()[1]]]))
                .collect();
            let v = kron_all(&factors);
            let psi = StateVector::new((0..1 << k).map(|i| v.get(i, 0)).collect()).unwrap();
            let state = QuantumState::Pure(u.apply(&psi).unwrap());
            for s in qst_settings(k).unwrap() {
                out.insert((p.clone(), s.clone()), state.probabilities_in(&s).unwrap());
            }
        }
        out
    }

    #[test]
    fn job_counts_and_order() {
        let c1 = Circuit::new(1);
        let jobs = qpt_jobs(&c1, 1, 100, 7).unwrap();
        assert_eq!(jobs.len(), 12);
        assert_eq!(jobs[0].probe.to_string(), "0");
        assert_eq!(jobs[0].setting.to_string(), "X");
        assert_eq!(jobs[3].probe.to_string(), "1");
        let c3 = Circuit::new(3);
        let jobs = qpt_jobs(&c3, 3, 11_000, 7).unwrap();
        assert_eq!(jobs.len(), 1728);
        assert_eq!(jobs.iter().map(|j| j.shots).sum::<u64>(), 19_008_000);
        assert!(qpt_jobs(&c3, 4, 1, 0).is_err());
        assert!(qpt_jobs(&c3, 2, 1, 0).is_err());
        assert_eq!(qpt_jobs(&c3, 3, 5, 7).unwrap(), qpt_jobs(&c3, 3, 5, 7).unwrap());
    }

    #[test]
    fn job_circuit_layout() {
        let gate = Circuit::from_gates(1, vec![Gate::x(0)]).unwrap();
        let jobs = qpt_jobs(&gate, 1, 10, 0).unwrap();
        let j = jobs.iter().find(|j| j.probe.to_string() == "+" && j.setting.to_string() == "X").unwrap();
        // |+⟩ → X → |+⟩ → X-basis rotation → |0⟩
        let out = circuit_unitary(&j.circuit(&gate).unwrap()).unwrap().apply(&StateVector::basis(1, 0)).unwrap();
        assert!((out.overlap(&StateVector::basis(1, 0)) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn identity_channel_k1() {
        let id = UnitaryMatrix::identity(2);
        let c = qpt_reconstruct_probabilities(&exact_data(&id, 1), 1, Projection::Simplex).unwrap();
        let want = choi_of_unitary(&id);
        assert!(c.matrix().max_abs_diff(want.matrix()) < 1e-10);
        assert!((c.purity() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_unitaries_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for k in [1, 2] {
            for _ in 0..5 {
                let u = haar_unitary(&mut rng, 1 << k);
                let c = qpt_reconstruct_probabilities(&exact_data(&u, k), k, Projection::Simplex).unwrap();
                let f = process_fidelity(&c, &choi_of_unitary(&u)).unwrap();
                assert!(f >= 1.0 - 1e-8, "{k}: {f}");
                assert!(c.tp_deviation() < 1e-8);
            }
        }
    }

    #[test]
    fn missing_cells_listed() {
        let id = UnitaryMatrix::identity(2);
        let mut data = exact_data(&id, 1);
        data.remove(&("+i".parse().unwrap(), "Y".parse().unwrap()));
        match qpt_reconstruct_probabilities(&data, 1, Projection::Simplex) {
            Err(Error::MissingCell(m)) => assert_eq!(m, ["+i|Y"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duals_reproduce_matrix_units() {
        let d = single_qubit_duals();
        // Σ_a M_a ⊗ ρ_a is the unnormalized identity Choi Σ|ii⟩⟨jj|.
        let mut xi = ComplexMatrix::zeros(4, 4);
        for (m, p) in d.iter().zip(Probe::ALL) {
            let rho = DensityMatrix::pure(&StateVector::new(p.amplitudes().to_vec()).unwrap());
            xi = &xi + &kron(m, rho.matrix());
        }
        let want = choi_of_unitary(&UnitaryMatrix::identity(2)).matrix().scale_real(2.0);
        assert!(xi.max_abs_diff(&want) < 1e-12);
    }
}
