use crate::error::{Error, Result};
use crate::qmath::matrix::{ComplexMatrix, C64, ONE, ZERO};
use crate::qmath::{linalg, tol};

/// Square unitary, dimension a power of two.
#[derive(Clone, Debug, PartialEq)]
pub struct UnitaryMatrix(ComplexMatrix);

impl UnitaryMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        check_square_pow2(&m)?;
        let deviation = m.unitarity_error();
        if deviation > tol::CONSTRUCTION {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    /// Validates with the looser tolerance used for externally supplied data.
    pub fn new_lenient(m: ComplexMatrix) -> Result<Self> {
        check_square_pow2(&m)?;
        let deviation = m.unitarity_error();
        if deviation > tol::VALIDATION {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Self(m))
    }

    pub fn identity(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn num_qubits(&self) -> usize {
        self.dim().trailing_zeros() as usize
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// `self · other`, i.e. `other` is applied first.
    pub fn compose(&self, other: &Self) -> Self {
        Self(&self.0 * &other.0)
    }

    pub fn apply(&self, psi: &StateVector) -> Result<StateVector> {
        if psi.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: psi.dim(),
            });
        }
        Ok(StateVector(self.0.mat_vec(psi.amplitudes())))
    }

    /// U ρ U†
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        if rho.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: rho.dim(),
            });
        }
        Ok(DensityMatrix(&(&self.0 * rho.matrix()) * &self.0.adjoint()))
    }
}

fn check_square_pow2(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    if !m.rows().is_power_of_two() {
        return Err(Error::DimensionMismatch {
            expected: m.rows().next_power_of_two(),
            found: m.rows(),
        });
    }
    Ok(())
}

/// Hermitian, positive semidefinite, unit trace.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        Self::validate(&m, tol::CONSTRUCTION, tol::EIGEN_FLOOR, tol::TRACE)?;
        Ok(Self(m))
    }

    /// Looser checks for matrices read back from files or produced by long
    /// chains of floating-point products.
    pub fn new_lenient(m: ComplexMatrix) -> Result<Self> {
        Self::validate(&m, tol::VALIDATION, tol::VALIDATION, tol::VALIDATION)?;
        Ok(Self(m))
    }

    fn validate(m: &ComplexMatrix, herm_tol: f64, eig_floor: f64, trace_tol: f64) -> Result<()> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let deviation = m.hermiticity_error();
        if deviation > herm_tol {
            return Err(Error::NotHermitian { deviation });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > trace_tol || tr.im.abs() > trace_tol {
            return Err(Error::BadTrace { trace: tr.re });
        }
        let min_eigenvalue = linalg::eigh(&m.hermitian_part())
            .values
            .first()
            .copied()
            .unwrap_or(0.0);
        if min_eigenvalue < -eig_floor {
            return Err(Error::NotPsd { min_eigenvalue });
        }
        Ok(())
    }

    /// Skips validation. Callers guarantee the invariants by construction
    /// (CPTP maps applied to valid states).
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn pure(psi: &StateVector) -> Self {
        Self(ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()))
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// Tr(ρ²)
    pub fn purity(&self) -> f64 {
        self.0.hs_inner(&self.0).re
    }

    /// Diagonal in the computational basis, clamped at zero.
    pub fn probabilities(&self) -> Vec<f64> {
        (0..self.dim()).map(|i| self.0.get(i, i).re.max(0.0)).collect()
    }

    /// <ψ|ρ|ψ>
    pub fn expectation_pure(&self, psi: &StateVector) -> f64 {
        let v = self.0.mat_vec(psi.amplitudes());
        psi.amplitudes()
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<C64>()
            .re
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector(Vec<C64>);

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        if !amplitudes.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                expected: amplitudes.len().next_power_of_two(),
                found: amplitudes.len(),
            });
        }
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > tol::CONSTRUCTION {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self(amplitudes))
    }

    /// Rescales to unit norm; rejects the zero vector.
    pub fn normalized(amplitudes: Vec<C64>) -> Result<Self> {
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized { norm });
        }
        Self::new(amplitudes.into_iter().map(|z| z / norm).collect())
    }

    pub(crate) fn from_trusted(amplitudes: Vec<C64>) -> Self {
        Self(amplitudes)
    }

    /// |index⟩ in a register of `num_qubits` qubits.
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << num_qubits];
        amps[index] = ONE;
        Self(amps)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn num_qubits(&self) -> usize {
        self.0.len().trailing_zeros() as usize
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.0.iter().map(|z| z.norm_sqr()).collect()
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.0.iter().zip(&other.0).map(|(a, b)| a.conj() * b).sum()
    }

    /// Overlap |⟨a|b⟩|² — equality up to global phase when 1.
    pub fn overlap(&self, other: &Self) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::pure(self)
    }
}
