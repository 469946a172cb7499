use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gates::circuit_unitary;
use crate::qmath::{DensityMatrix, StateVector};
use crate::tomography::labels::{measurement_rotation, PauliString};

/// Asymmetric per-qubit readout flip probabilities.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ReadoutError {
    pub p1_given_0: f64,
    pub p0_given_1: f64,
}

/// Seed for job `index` of a sweep, independent of execution order.
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    // splitmix64 finalizer over a golden-ratio stride
    let mut z = master_seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Outcome counts keyed by bitstring, qubit n−1 leftmost.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountsMap {
    pub num_qubits: usize,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

pub fn bitstring(index: usize, num_qubits: usize) -> String {
    format!("{index:0num_qubits$b}")
}

impl CountsMap {
    pub fn new(num_qubits: usize, counts: BTreeMap<String, u64>) -> Result<Self> {
        for key in counts.keys() {
            if key.len() != num_qubits || !key.chars().all(|c| c == '0' || c == '1') {
                return Err(Error::schema("counts", format!("invalid bitstring `{key}` for {num_qubits} qubits")));
            }
        }
        let shots = counts.values().sum();
        if shots == 0 {
            return Err(Error::schema("counts", "no shots recorded"));
        }
        Ok(Self { num_qubits, shots, counts })
    }

    pub fn get(&self, bits: &str) -> u64 {
        self.counts.get(bits).copied().unwrap_or(0)
    }

    /// Relative frequencies indexed little-endian.
    pub fn frequencies(&self) -> Vec<f64> {
        let mut f = vec![0.0; 1 << self.num_qubits];
        for (k, &c) in &self.counts {
            let idx = usize::from_str_radix(k, 2).expect("validated bitstring");
            f[idx] = c as f64 / self.shots as f64;
        }
        f
    }
}

/// Mixes each qubit's outcome with the confusion matrix
/// [[1−P(1|0), P(0|1)], [P(1|0), 1−P(0|1)]].
pub fn apply_readout(probs: &[f64], readout: &[ReadoutError]) -> Result<Vec<f64>> {
    let n = probs.len().trailing_zeros() as usize;
    if !probs.len().is_power_of_two() || readout.len() != n {
        return Err(Error::DimensionMismatch { expected: 1 << readout.len(), found: probs.len() });
    }
    let mut p = probs.to_vec();
    for (q, r) in readout.iter().enumerate() {
        let bit = 1 << q;
        for i in 0..p.len() {
            if i & bit != 0 {
                continue;
            }
            let (p0, p1) = (p[i], p[i | bit]);
            p[i] = (1.0 - r.p1_given_0) * p0 + r.p0_given_1 * p1;
            p[i | bit] = r.p1_given_0 * p0 + (1.0 - r.p0_given_1) * p1;
        }
    }
    Ok(p)
}

/// Draws `shots` i.i.d. outcomes as a sequence of conditional binomials.
pub fn sample_distribution(probs: &[f64], shots: u64, rng: &mut ChaCha8Rng) -> Result<CountsMap> {
    if shots == 0 {
        return Err(Error::Config("shots must be positive".into()));
    }
    if !probs.len().is_power_of_two() {
        return Err(Error::DimensionMismatch { expected: probs.len().next_power_of_two(), found: probs.len() });
    }
    let n = probs.len().trailing_zeros() as usize;
    let clean: Vec<f64> = probs.iter().map(|&p| if p.is_finite() { p.max(0.0) } else { 0.0 }).collect();
    let total: f64 = clean.iter().sum();
    if total <= 0.0 {
        return Err(Error::ZeroTrace);
    }
    let mut counts = BTreeMap::new();
    let mut remaining = shots;
    let mut mass = 1.0;
    for (i, &p) in clean.iter().enumerate() {
        if remaining == 0 {
            break;
        }
        let p = p / total;
        let draw = if i + 1 == clean.len() || p >= mass {
            remaining
        } else if p <= 0.0 {
            0
        } else {
            Binomial::new(remaining, (p / mass).min(1.0)).expect("probability in range").sample(rng)
        };
        if draw > 0 {
            counts.insert(bitstring(i, n), draw);
        }
        remaining -= draw;
        mass -= p;
    }
    Ok(CountsMap { num_qubits: n, shots, counts })
}

#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    pub fn num_qubits(&self) -> usize {
        match self {
            QuantumState::Pure(s) => s.num_qubits(),
            QuantumState::Mixed(r) => r.dim().trailing_zeros() as usize,
        }
    }

    /// Outcome distribution after rotating into `setting`'s basis.
    pub fn probabilities_in(&self, setting: &PauliString) -> Result<Vec<f64>> {
        if setting.num_qubits() != self.num_qubits() {
            return Err(Error::InvalidPauliString(format!(
                "{setting} (expected {} letters)",
                self.num_qubits()
            )));
        }
        let u = circuit_unitary(&measurement_rotation(setting))?;
        Ok(match self {
            QuantumState::Pure(s) => u.apply(s)?.probabilities(),
            QuantumState::Mixed(r) => u.conjugate(r)?.probabilities(),
        })
    }
}

/// Measures `state` in `setting`'s basis `shots` times. Deterministic for a
/// fixed seed.
pub fn sample_counts(
    state: &QuantumState,
    setting: &PauliString,
    shots: u64,
    seed: u64,
    readout: Option<&[ReadoutError]>,
) -> Result<CountsMap> {
    let mut probs = state.probabilities_in(setting)?;
    if let Some(r) = readout {
        probs = apply_readout(&probs, r)?;
    }
    sample_distribution(&probs, shots, &mut rng_from_seed(seed))
}
