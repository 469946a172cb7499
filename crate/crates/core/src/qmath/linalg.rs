use nalgebra::SymmetricEigen;

use crate::error::{Error, Result};
use crate::qmath::matrix::{ComplexMatrix, C64};
use crate::qmath::tol;
use crate::qmath::types::DensityMatrix;

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct Eigh {
    pub values: Vec<f64>,
    /// Column `i` is the eigenvector for `values[i]`.
    pub vectors: ComplexMatrix,
}

impl Eigh {
    /// V · diag(f(λ)) · V†
    pub fn reassemble(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (c, &lambda) in self.values.iter().enumerate() {
            let s = C64::new(f(lambda), 0.0);
            for r in 0..n {
                scaled.set(r, c, scaled.get(r, c) * s);
            }
        }
        &scaled * &self.vectors.adjoint()
    }
}

/// Hermitian eigensolver. Only the Hermitian part of `h` is used.
pub fn eigh(h: &ComplexMatrix) -> Eigh {
    let herm = h.hermitian_part();
    let eig = SymmetricEigen::new(herm.inner().clone());
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let n = order.len();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..n {
            vectors.set(r, new_c, eig.eigenvectors[(r, old_c)]);
        }
    }
    Eigh {
        values: order.iter().map(|&i| eig.eigenvalues[i]).collect(),
        vectors,
    }
}

/// Principal square root of a Hermitian PSD matrix by spectral decomposition.
/// Eigenvalues within the validation tolerance below zero are clipped.
pub fn matrix_sqrt_psd(h: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let deviation = h.hermiticity_error();
    if deviation > tol::VALIDATION {
        return Err(Error::NotHermitian { deviation });
    }
    let eig = eigh(h);
    if let Some(&min) = eig.values.first() {
        if min < -tol::VALIDATION {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
    }
    Ok(eig.reassemble(|l| l.max(0.0).sqrt()))
}

/// Uhlmann fidelity (Tr √(√ρ σ √ρ))², clamped to [0, 1].
pub fn state_fidelity(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: sigma.dim(),
        });
    }
    // A pure argument reduces the fidelity to ⟨ψ|ρ|ψ⟩, which avoids square
    // roots of the near-zero part of a rank-deficient spectrum.
    for (pure, other) in [(sigma, rho), (rho, sigma)] {
        if (pure.purity() - 1.0).abs() < 1e-9 {
            let e = eigh(pure.matrix());
            let top = e.values.len() - 1;
            let psi: Vec<_> = (0..e.values.len()).map(|r| e.vectors.get(r, top)).collect();
            let v = other.matrix().mat_vec(&psi);
            let f: crate::qmath::matrix::C64 = psi.iter().zip(&v).map(|(p, x)| p.conj() * x).sum();
            return Ok(f.re.clamp(0.0, 1.0));
        }
    }
    let sqrt_rho = eigh(rho.matrix()).reassemble(|l| l.max(0.0).sqrt());
    let inner = &(&sqrt_rho * sigma.matrix()) * &sqrt_rho;
    let root_trace: f64 = eigh(&inner).values.iter().map(|l| l.max(0.0).sqrt()).sum();
    Ok((root_trace * root_trace).clamp(0.0, 1.0))
}

/// How `project_to_density` maps a Hermitian estimate onto the state space.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Projection {
    /// Euclidean projection of the spectrum onto the probability simplex:
    /// the closest unit-trace PSD matrix in Frobenius norm.
    #[default]
    Simplex,
    /// Clip negative eigenvalues to zero, then divide by the remaining trace.
    ClipRenormalize,
}

impl std::str::FromStr for Projection {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "simplex" => Ok(Projection::Simplex),
            "clip" | "clip-renormalize" => Ok(Projection::ClipRenormalize),
            other => Err(Error::Config(format!("unknown projection `{other}`"))),
        }
    }
}

/// Hermitize, then map the spectrum to a valid density matrix.
pub fn project_to_density(h: &ComplexMatrix, method: Projection) -> Result<DensityMatrix> {
    if !h.is_square() {
        return Err(Error::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let eig = eigh(h);
    let new_values = match method {
        Projection::Simplex => project_simplex(&eig.values),
        Projection::ClipRenormalize => {
            let clipped: Vec<f64> = eig.values.iter().map(|l| l.max(0.0)).collect();
            let total: f64 = clipped.iter().sum();
            if total <= f64::EPSILON {
                return Err(Error::ZeroTrace);
            }
            clipped.into_iter().map(|l| l / total).collect()
        }
    };
    let projected = Eigh {
        values: new_values,
        vectors: eig.vectors,
    };
    let m = projected.reassemble(|l| l);
    // Exact Hermitian symmetry; eigen round-off leaves ~1e-16 asymmetry.
    Ok(DensityMatrix::from_trusted(m.hermitian_part()))
}

/// Euclidean projection of `v` onto {x : x ≥ 0, Σx = 1}, preserving order.
pub fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut shift = 0.0;
    for (j, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            shift = candidate;
        }
    }
    v.iter().map(|x| (x - shift).max(0.0)).collect()
}
