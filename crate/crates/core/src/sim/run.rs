use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::gates::circuit::apply_operand;
use crate::gates::{Circuit, Gate, GateKind, MAX_QUBITS};
use crate::qmath::matrix::{C64, ZERO};
use crate::qmath::{ComplexMatrix, DensityMatrix, StateVector};
use crate::sim::channels::{depolarizing_channel, thermal_relaxation_channel, KrausChannel};
use crate::sim::noise::NoiseModel;
use crate::sim::sampling::apply_readout;

fn check_runnable(c: &Circuit) -> Result<()> {
    if c.num_qubits() > MAX_QUBITS {
        return Err(Error::TooManyQubits { num_qubits: c.num_qubits(), max: MAX_QUBITS });
    }
    if let Some(g) = c.gates().iter().find(|g| !g.kind().is_native()) {
        return Err(Error::NonNativeGate(g.to_string()));
    }
    Ok(())
}

/// Exact noise-free evolution of |0…0⟩.
pub fn run_statevector(c: &Circuit) -> Result<StateVector> {
    check_runnable(c)?;
    let mut amps = vec![ZERO; 1 << c.num_qubits()];
    amps[0] = C64::new(1.0, 0.0);
    for g in c.gates() {
        apply_operand(&g.operand_matrix(), g.qubits(), &mut amps);
    }
    Ok(StateVector::from_trusted(amps))
}

/// Density matrix stored as a 2n-qubit vector: entry (i, j) at index
/// `i + j·dim`, so row bits are qubits 0..n and column bits n..2n.
struct Rho {
    n: usize,
    data: Vec<C64>,
}

impl Rho {
    fn ground(n: usize) -> Self {
        let mut data = vec![ZERO; 1 << (2 * n)];
        data[0] = C64::new(1.0, 0.0);
        Self { n, data }
    }

    fn shifted(&self, qubits: &[usize]) -> Vec<usize> {
        qubits.iter().map(|q| q + self.n).collect()
    }

    /// ρ ↦ K ρ K† for each K, summed.
    fn apply_kraus(&mut self, ops: &[ComplexMatrix], qubits: &[usize]) {
        let cols = self.shifted(qubits);
        if let [k] = ops {
            apply_operand(k, qubits, &mut self.data);
            apply_operand(&k.conj(), &cols, &mut self.data);
            return;
        }
        let mut acc = vec![ZERO; self.data.len()];
        for k in ops {
            let mut term = self.data.clone();
            apply_operand(k, qubits, &mut term);
            apply_operand(&k.conj(), &cols, &mut term);
            for (a, t) in acc.iter_mut().zip(term) {
                *a += t;
            }
        }
        self.data = acc;
    }

    fn diagonal(&self) -> Vec<f64> {
        let dim = 1 << self.n;
        (0..dim).map(|i| self.data[i + i * dim].re.max(0.0)).collect()
    }

    fn into_density(self) -> DensityMatrix {
        let dim = 1 << self.n;
        let mut m = ComplexMatrix::zeros(dim, dim);
        for j in 0..dim {
            for i in 0..dim {
                m.set(i, j, self.data[i + j * dim]);
            }
        }
        DensityMatrix::from_trusted(m.hermitian_part())
    }
}

/// Kraus channels built once per (gate, qubits) within a run.
struct ChannelCache<'a> {
    nm: &'a NoiseModel,
    depolarizing: HashMap<(u64, usize), KrausChannel>,
    relaxation: HashMap<(u64, usize), KrausChannel>,
}

impl<'a> ChannelCache<'a> {
    fn new(nm: &'a NoiseModel) -> Self {
        Self { nm, depolarizing: HashMap::new(), relaxation: HashMap::new() }
    }

    fn depolarizing(&mut self, err: f64, dim: usize) -> Result<&KrausChannel> {
        let key = (err.to_bits(), dim);
        match self.depolarizing.entry(key) {
            Entry::Occupied(e) => Ok(e.into_mut()),
            Entry::Vacant(e) => Ok(e.insert(depolarizing_channel(err, dim)?)),
        }
    }

    fn relaxation(&mut self, duration_ns: f64, q: usize) -> Result<&KrausChannel> {
        let key = (duration_ns.to_bits(), q);
        if !self.relaxation.contains_key(&key) {
            let cal = self.nm.qubit(q)?;
            let ch = thermal_relaxation_channel(duration_ns, cal.t1_us, cal.t2_us).map_err(|e| match e {
                Error::InvalidCoherence { t2, two_t1, .. } => Error::InvalidCoherence { qubit: q, t2, two_t1 },
                other => other,
            })?;
            self.relaxation.insert(key, ch);
        }
        Ok(&self.relaxation[&key])
    }
}

fn apply_noisy_gate(rho: &mut Rho, g: &Gate, cache: &mut ChannelCache) -> Result<()> {
    rho.apply_kraus(std::slice::from_ref(&g.operand_matrix()), g.qubits());
    if g.kind() == GateKind::RZ {
        return Ok(());
    }
    let noise = cache.nm.gate(g.kind(), g.qubits());
    if noise.error > 0.0 {
        let ch = cache.depolarizing(noise.error, 1 << g.num_qubits())?;
        rho.apply_kraus(ch.operators(), g.qubits());
    }
    if noise.duration_ns > 0.0 {
        for &q in g.qubits() {
            let ch = cache.relaxation(noise.duration_ns, q)?;
            rho.apply_kraus(ch.operators(), &[q]);
        }
    }
    Ok(())
}

/// Noisy evolution of |0…0⟩⟨0…0|: every gate is followed by depolarizing
/// noise at its calibrated error and by thermal relaxation of its qubits for
/// its duration. RZ is virtual and noiseless.
pub fn run_density(c: &Circuit, nm: &NoiseModel) -> Result<DensityMatrix> {
    Ok(evolve(c, nm)?.into_density())
}

fn evolve(c: &Circuit, nm: &NoiseModel) -> Result<Rho> {
    check_runnable(c)?;
    for q in 0..c.num_qubits() {
        nm.qubit(q)?;
    }
    let mut cache = ChannelCache::new(nm);
    let mut rho = Rho::ground(c.num_qubits());
    for g in c.gates() {
        apply_noisy_gate(&mut rho, g, &mut cache)?;
    }
    Ok(rho)
}

/// Outcome distribution of measuring every qubit of `c`'s output in the Z
/// basis, including relaxation during readout and the readout confusion
/// matrices when the model enables them.
pub fn measured_probabilities(c: &Circuit, nm: &NoiseModel) -> Result<Vec<f64>> {
    let mut rho = evolve(c, nm)?;
    let n = c.num_qubits();
    let mut cache = ChannelCache::new(nm);
    if nm.readout_relaxation {
        for q in 0..n {
            let t = nm.qubit(q)?.readout_length_ns;
            if t > 0.0 {
                let ch = cache.relaxation(t, q)?;
                rho.apply_kraus(ch.operators(), &[q]);
            }
        }
    }
    let probs = rho.diagonal();
    let readout = (0..n).map(|q| nm.readout(q)).collect::<Result<Vec<_>>>()?;
    apply_readout(&probs, &readout)
}
