use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::qmath::matrix::C64;
use crate::qmath::{pauli_basis, project_to_density, ComplexMatrix, DensityMatrix, Projection};
use crate::sim::sampling::CountsMap;
use crate::tomography::labels::{qst_settings, Pauli, PauliString, MAX_QST_K};

fn digit(p: Pauli) -> usize {
    match p {
        Pauli::X => 1,
        Pauli::Y => 2,
        Pauli::Z => 3,
    }
}

/// Every ⟨P⟩ for P ∈ {I,X,Y,Z}^k, indexed like [`pauli_basis`]. Each
/// expectation is averaged over all settings that agree with P on its
/// support.
pub fn pauli_expectations(data: &BTreeMap<PauliString, Vec<f64>>, k: usize) -> Result<Vec<f64>> {
    let settings = qst_settings(k)?;
    let missing: Vec<String> = settings.iter().filter(|s| !data.contains_key(s)).map(|s| s.to_string()).collect();
    if !missing.is_empty() {
        return Err(Error::MissingSetting(missing));
    }
    let n_ops = 4usize.pow(k as u32);
    let mut sum = vec![0.0; n_ops];
    let mut hits = vec![0u32; n_ops];
    for s in &settings {
        let probs = &data[s];
        if probs.len() != 1 << k {
            return Err(Error::DimensionMismatch { expected: 1 << k, found: probs.len() });
        }
        // Each subset of the setting's qubits names one Pauli operator.
        for subset in 0..(1usize << k) {
            let mut idx = 0;
            for q in 0..k {
                if subset >> q & 1 == 1 {
                    idx += digit(s.get(q)) * 4usize.pow(q as u32);
                }
            }
            let e: f64 = probs
                .iter()
                .enumerate()
                .map(|(x, p)| if (x & subset).count_ones() % 2 == 0 { *p } else { -*p })
                .sum();
            sum[idx] += e;
            hits[idx] += 1;
        }
    }
    Ok(sum.iter().zip(&hits).map(|(s, &h)| s / h as f64).collect())
}

/// Unprojected estimate (1/2^k) Σ ⟨P⟩ P. Hermitian with unit trace, but
/// possibly with negative eigenvalues under sampling noise.
pub fn linear_inversion(data: &BTreeMap<PauliString, Vec<f64>>, k: usize) -> Result<ComplexMatrix> {
    let ev = pauli_expectations(data, k)?;
    let dim = 1 << k;
    let mut rho = ComplexMatrix::zeros(dim, dim);
    for (e, p) in ev.iter().zip(pauli_basis(k)) {
        rho = &rho + &p.scale(C64::new(e / dim as f64, 0.0));
    }
    Ok(rho.hermitian_part())
}

/// Linear inversion followed by projection onto density matrices.
pub fn qst_reconstruct_probabilities(
    data: &BTreeMap<PauliString, Vec<f64>>,
    k: usize,
    projection: Projection,
) -> Result<DensityMatrix> {
    project_to_density(&linear_inversion(data, k)?, projection)
}

/// State tomography from counts with the default projection.
pub fn qst_reconstruct(data: &BTreeMap<PauliString, CountsMap>, k: usize) -> Result<DensityMatrix> {
    qst_reconstruct_with(data, k, Projection::default())
}

pub fn qst_reconstruct_with(
    data: &BTreeMap<PauliString, CountsMap>,
    k: usize,
    projection: Projection,
) -> Result<DensityMatrix> {
    if !(1..=MAX_QST_K).contains(&k) {
        return Err(Error::KOutOfRange { k, min: 1, max: MAX_QST_K });
    }
    let probs = data
        .iter()
        .map(|(s, c)| {
            if c.num_qubits != k {
                return Err(Error::DimensionMismatch { expected: k, found: c.num_qubits });
            }
            Ok((s.clone(), c.frequencies()))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;
    qst_reconstruct_probabilities(&probs, k, projection)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::random::{haar_state, random_density};
    use crate::qmath::{state_fidelity, StateVector};
    use crate::sim::sampling::{sample_counts, QuantumState};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn exact(state: &QuantumState, k: usize) -> BTreeMap<PauliString, Vec<f64>> {
        qst_settings(k).unwrap().into_iter().map(|s| {
            let p = state.probabilities_in(&s).unwrap();
            (s, p)
        }).collect()
    }

    #[test]
    fn ground_state_round_trip() {
        let s = QuantumState::Pure(StateVector::basis(1, 0));
        let rho = qst_reconstruct_probabilities(&exact(&s, 1), 1, Projection::Simplex).unwrap();
        assert!((state_fidelity(&rho, &DensityMatrix::pure(&StateVector::basis(1, 0))).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn random_states_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for k in 1..=3 {
            for _ in 0..10 {
                let psi = haar_state(&mut rng, 1 << k);
                let raw = linear_inversion(&exact(&QuantumState::Pure(psi.clone()), k), k).unwrap();
                assert!(raw.max_abs_diff(DensityMatrix::pure(&psi).matrix()) < 1e-12);
                let mixed = random_density(&mut rng, 1 << k, 2);
                let raw = linear_inversion(&exact(&QuantumState::Mixed(mixed.clone()), k), k).unwrap();
                assert!(raw.max_abs_diff(mixed.matrix()) < 1e-12);
            }
        }
    }

    #[test]
    fn missing_settings_listed() {
        let s = QuantumState::Pure(StateVector::basis(2, 0));
        let mut data = exact(&s, 2);
        data.remove(&"XY".parse().unwrap());
        data.remove(&"ZZ".parse().unwrap());
        match linear_inversion(&data, 2) {
            Err(Error::MissingSetting(m)) => assert_eq!(m, ["XY", "ZZ"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sampled_reconstruction_is_valid_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let psi = haar_state(&mut rng, 8);
        let s = QuantumState::Pure(psi.clone());
        let data: BTreeMap<_, _> = qst_settings(3)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, set)| {
                let c = sample_counts(&s, &set, 500, i as u64, None).unwrap();
                (set, c)
            })
            .collect();
        let rho = qst_reconstruct(&data, 3).unwrap();
        assert!(DensityMatrix::new_lenient(rho.matrix().clone()).is_ok());
        let f = state_fidelity(&rho, &DensityMatrix::pure(&psi)).unwrap();
        assert!(f > 0.8 && f < 1.0);
    }
}
