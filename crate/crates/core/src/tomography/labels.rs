//! Measurement settings and probe-state labels.
//!
//! Both are stored with index `j` = qubit `j` and displayed with the highest
//! qubit first, matching the bitstring convention.

use std::cmp::Ordering;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gates::{Circuit, Gate};
use crate::qmath::matrix::{C64, ONE, ZERO};
use crate::qmath::StateVector;

pub const MIN_K: usize = 1;
pub const MAX_QST_K: usize = 4;
pub const MAX_QPT_K: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    pub fn letter(self) -> char {
        match self {
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// Native gates taking this Pauli's +1 eigenstate to |0⟩.
    pub fn rotation(self, q: usize) -> Vec<Gate> {
        match self {
            Pauli::X => vec![Gate::rz(FRAC_PI_2, q), Gate::sx(q), Gate::rz(FRAC_PI_2, q)],
            Pauli::Y => vec![Gate::sx(q)],
            Pauli::Z => vec![],
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString(Vec<Pauli>);

impl PauliString {
    /// `letters[j]` acts on qubit `j`.
    pub fn new(letters: Vec<Pauli>) -> Self {
        Self(letters)
    }

    pub fn uniform(p: Pauli, k: usize) -> Self {
        Self(vec![p; k])
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.0
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        self.0[qubit]
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0.iter().rev() {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.is_empty() {
            return Err(Error::InvalidPauliString(s.into()));
        }
        let mut letters = Vec::with_capacity(s.len());
        for ch in s.chars().rev() {
            letters.push(match ch.to_ascii_uppercase() {
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::InvalidPauliString(s.into())),
            });
        }
        Ok(Self(letters))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

fn check_k(k: usize, max: usize) -> Result<()> {
    if (MIN_K..=max).contains(&k) {
        Ok(())
    } else {
        Err(Error::KOutOfRange { k, min: MIN_K, max })
    }
}

/// All 3^k measurement settings in lexicographic order (XX…X first).
pub fn qst_settings(k: usize) -> Result<Vec<PauliString>> {
    check_k(k, MAX_QST_K)?;
    Ok(odometer(k, 3).map(|d| PauliString(d.into_iter().map(|i| Pauli::ALL[i]).collect())).collect())
}

/// Digit vectors (least significant = qubit 0) counting up in base `radix`.
fn odometer(k: usize, radix: usize) -> impl Iterator<Item = Vec<usize>> {
    (0..radix.pow(k as u32)).map(move |mut i| {
        let mut d = vec![0; k];
        for slot in d.iter_mut() {
            *slot = i % radix;
            i /= radix;
        }
        d
    })
}

/// Native circuit mapping each qubit's measurement basis onto Z.
pub fn measurement_rotation(p: &PauliString) -> Circuit {
    let gates = p.0.iter().enumerate().flat_map(|(q, l)| l.rotation(q)).collect();
    Circuit::from_gates(p.num_qubits(), gates).expect("rotation acts within the register")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Probe {
    Zero,
    One,
    Plus,
    PlusI,
}

impl Probe {
    pub const ALL: [Probe; 4] = [Probe::Zero, Probe::One, Probe::Plus, Probe::PlusI];

    pub fn symbol(self) -> &'static str {
        match self {
            Probe::Zero => "0",
            Probe::One => "1",
            Probe::Plus => "+",
            Probe::PlusI => "+i",
        }
    }

    pub fn amplitudes(self) -> [C64; 2] {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Probe::Zero => [ONE, ZERO],
            Probe::One => [ZERO, ONE],
            Probe::Plus => [h, h],
            Probe::PlusI => [h, C64::new(0.0, FRAC_1_SQRT_2)],
        }
    }

    /// Native gates preparing this probe from |0⟩, up to global phase.
    pub fn preparation(self, q: usize) -> Vec<Gate> {
        match self {
            Probe::Zero => vec![],
            Probe::One => vec![Gate::x(q)],
            Probe::Plus => vec![Gate::rz(FRAC_PI_2, q), Gate::sx(q), Gate::rz(FRAC_PI_2, q)],
            Probe::PlusI => vec![Gate::sx(q), Gate::rz(PI, q)],
        }
    }
}

impl FromStr for Probe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Probe::ALL
            .into_iter()
            .find(|p| p.symbol() == s)
            .ok_or_else(|| Error::InvalidLabel(s.into()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProbeLabel(Vec<Probe>);

impl ProbeLabel {
    /// `probes[j]` is the input on qubit `j`.
    pub fn new(probes: Vec<Probe>) -> Self {
        Self(probes)
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len()
    }

    pub fn probes(&self) -> &[Probe] {
        &self.0
    }

    /// All 4^k labels in lexicographic order.
    pub fn all(k: usize) -> Result<Vec<ProbeLabel>> {
        check_k(k, MAX_QPT_K)?;
        Ok(odometer(k, 4).map(|d| ProbeLabel(d.into_iter().map(|i| Probe::ALL[i]).collect())).collect())
    }

    /// The product state itself, built from the single-qubit amplitudes.
    pub fn state(&self) -> StateVector {
        let mut amps = vec![C64::new(1.0, 0.0)];
        for p in &self.0 {
            let a = p.amplitudes();
            // New qubit is the most significant bit.
            amps = a.iter().flat_map(|x| amps.iter().map(move |y| x * y)).collect();
        }
        StateVector::new(amps).expect("product of normalized states")
    }

    pub fn preparation(&self) -> Circuit {
        let gates = self.0.iter().enumerate().flat_map(|(q, p)| p.preparation(q)).collect();
        Circuit::from_gates(self.num_qubits(), gates).expect("preparation acts within the register")
    }
}

impl Ord for ProbeLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.iter().rev().cmp(other.0.iter().rev()))
    }
}

impl PartialOrd for ProbeLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated, highest qubit first: `+i,0,1`.
impl fmt::Display for ProbeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<&str> = self.0.iter().rev().map(|p| p.symbol()).collect();
        f.write_str(&parts.join(","))
    }
}

impl FromStr for ProbeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.trim().is_empty() {
            return Err(Error::InvalidLabel(s.into()));
        }
        let mut probes = s
            .split(',')
            .map(|p| p.trim().parse::<Probe>().map_err(|_| Error::InvalidLabel(s.into())))
            .collect::<Result<Vec<_>>>()?;
        probes.reverse();
        Ok(Self(probes))
    }
}

impl Serialize for ProbeLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ProbeLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
