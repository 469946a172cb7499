//! Random matrices for property tests and benchmarks.

use nalgebra::DMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::qmath::matrix::{ComplexMatrix, C64};
use crate::qmath::types::{DensityMatrix, StateVector, UnitaryMatrix};

fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> DMatrix<C64> {
    DMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary (QR of a Ginibre matrix with phase-fixed R).
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> UnitaryMatrix {
    let qr = ginibre(rng, dim, dim).qr();
    let (mut q, r) = qr.unpack();
    for c in 0..dim {
        let d = r[(c, c)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for row in 0..dim {
            q[(row, c)] *= phase;
        }
    }
    UnitaryMatrix::new(ComplexMatrix::from_inner(q)).expect("QR factor is unitary")
}

pub fn haar_state<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> StateVector {
    let amps: Vec<C64> = ginibre(rng, dim, 1).iter().copied().collect();
    StateVector::normalized(amps).expect("gaussian vector is non-zero")
}

/// Random mixed state G G† / Tr(G G†) with G of shape dim × rank.
pub fn random_density<R: Rng + ?Sized>(rng: &mut R, dim: usize, rank: usize) -> DensityMatrix {
    let g = ginibre(rng, dim, rank);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    let m = ComplexMatrix::from_inner(m).scale_real(1.0 / tr);
    DensityMatrix::new(m.hermitian_part()).expect("G G† is a valid state")
}
