use crate::error::{Error, Result};
use crate::qmath::matrix::{pauli_basis, pauli_i, pauli_z, C64};
use crate::qmath::ComplexMatrix;

/// Tolerance on Σ K†K = I.
pub const TP_TOL: f64 = 1e-8;

/// Operator-sum representation of a channel.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    operators: Vec<ComplexMatrix>,
}

impl KrausChannel {
    pub fn new(operators: Vec<ComplexMatrix>) -> Result<Self> {
        let first = operators.first().ok_or(Error::DimensionMismatch { expected: 1, found: 0 })?;
        let dim = first.rows();
        for k in &operators {
            if !k.is_square() {
                return Err(Error::NotSquare { rows: k.rows(), cols: k.cols() });
            }
            if k.rows() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: k.rows() });
            }
        }
        let ch = Self { operators };
        let deviation = ch.tp_deviation();
        if deviation > TP_TOL {
            return Err(Error::NotTracePreserving { deviation });
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self { operators: vec![ComplexMatrix::identity(dim)] }
    }

    pub fn operators(&self) -> &[ComplexMatrix] {
        &self.operators
    }

    pub fn dim(&self) -> usize {
        self.operators[0].rows()
    }

    /// max |Σ K†K − I|
    pub fn tp_deviation(&self) -> f64 {
        let dim = self.dim();
        let mut sum = ComplexMatrix::zeros(dim, dim);
        for k in &self.operators {
            sum = &sum + &(&k.adjoint() * k);
        }
        sum.max_abs_diff(&ComplexMatrix::identity(dim))
    }

    /// `other ∘ self`: apply `self` first.
    pub fn then(&self, other: &KrausChannel) -> Result<KrausChannel> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        let ops = other
            .operators
            .iter()
            .flat_map(|b| self.operators.iter().map(move |a| b * a))
            .collect();
        Ok(Self { operators: ops })
    }

    /// Σ K ρ K† on a full-dimension operator.
    pub fn apply(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        if rho.rows() != self.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: rho.rows() });
        }
        let mut out = ComplexMatrix::zeros(rho.rows(), rho.cols());
        for k in &self.operators {
            out = &out + &(&(k * rho) * &k.adjoint());
        }
        Ok(out)
    }
}

/// Depolarizing strength λ giving average gate infidelity `err` on a
/// `dim`-dimensional system.
pub fn depolarizing_lambda(err: f64, dim: usize) -> f64 {
    let d = dim as f64;
    err * d / (d - 1.0)
}

/// ρ ↦ (1−λ)ρ + λ·I/d, with λ calibrated so the average gate fidelity is
/// exactly 1 − `err`.
pub fn depolarizing_channel(err: f64, dim: usize) -> Result<KrausChannel> {
    let limit = 1.0 - 1.0 / dim as f64;
    if !dim.is_power_of_two() || dim < 2 {
        return Err(Error::DimensionMismatch { expected: 2, found: dim });
    }
    if !(0.0..limit).contains(&err) || !err.is_finite() {
        return Err(Error::ErrTooLarge { err, limit, dim });
    }
    if err == 0.0 {
        return Ok(KrausChannel::identity(dim));
    }
    let k = dim.trailing_zeros() as usize;
    let lambda = depolarizing_lambda(err, dim);
    let d2 = (dim * dim) as f64;
    let paulis = pauli_basis(k);
    let ops = paulis
        .into_iter()
        .enumerate()
        .map(|(i, p)| {
            let w = if i == 0 { 1.0 - lambda + lambda / d2 } else { lambda / d2 };
            p.scale_real(w.sqrt())
        })
        .collect();
    KrausChannel::new(ops)
}

/// Amplitude damping for `duration_ns`, followed by pure dephasing with
/// 1/Tφ = 1/T2 − 1/(2·T1). Infinite times mean no decay.
pub fn thermal_relaxation_channel(duration_ns: f64, t1_us: f64, t2_us: f64) -> Result<KrausChannel> {
    if !duration_ns.is_finite() || duration_ns < 0.0 {
        return Err(Error::Config(format!("invalid duration {duration_ns} ns")));
    }
    if t1_us.is_nan() || t2_us.is_nan() || t1_us <= 0.0 || t2_us <= 0.0 {
        return Err(Error::Config(format!("coherence times must be positive (T1 {t1_us}, T2 {t2_us})")));
    }
    if t2_us > 2.0 * t1_us * (1.0 + 1e-12) {
        return Err(Error::InvalidCoherence { qubit: 0, t2: t2_us, two_t1: 2.0 * t1_us });
    }
    let t = duration_ns * 1e-3;
    let gamma = -(-t / t1_us).exp_m1();
    let dephasing_rate = (1.0 / t2_us - 0.5 / t1_us).max(0.0);
    let e = (-t * dephasing_rate).exp();

    let z = C64::new(0.0, 0.0);
    let r = |x: f64| C64::new(x, 0.0);
    let a0 = ComplexMatrix::from_rows(&[&[r(1.0), z], &[z, r((1.0 - gamma).sqrt())]]);
    let a1 = ComplexMatrix::from_rows(&[&[z, r(gamma.sqrt())], &[z, z]]);
    let damping = KrausChannel::new(vec![a0, a1])?;
    let d0 = pauli_i().scale_real(((1.0 + e) / 2.0).sqrt());
    let d1 = pauli_z().scale_real(((1.0 - e) / 2.0).sqrt());
    let dephasing = KrausChannel::new(vec![d0, d1])?;
    let mut ch = damping.then(&dephasing)?;
    ch.operators.retain(|k| k.max_abs() > 0.0);
    Ok(ch)
}
