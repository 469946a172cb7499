use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::Projection;
use crate::sim::{InputState, NoiseModel};
use crate::synthesis::DecompositionStrategy;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Mode {
    NoiseFree,
    NoiseAware,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::NoiseFree => "NOISE_FREE",
            Mode::NoiseAware => "NOISE_AWARE",
        }
    }
}

pub const DEFAULT_REPEATS: usize = 20;
pub const DEFAULT_SEED: u64 = 42;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub mode: Mode,
    pub input_state: InputState,
    #[serde(with = "strategy_name")]
    pub strategy: DecompositionStrategy,
    pub shots_per_setting: u64,
    pub master_seed: u64,
    pub calibration_path: Option<PathBuf>,
    pub repeats: usize,
    pub projection: Projection,
    /// Use exact outcome distributions instead of sampling.
    pub exact_probabilities: bool,
    /// Apply readout confusion in NOISE_AWARE mode.
    pub readout_error: bool,
    /// Multiplier on every error rate and decay rate of the calibration.
    pub noise_scale: f64,
    /// Simulate jobs on the rayon pool. Results do not depend on it.
    pub parallel: bool,
    /// QPT on 3 qubits runs 1,728 circuits per repeat and must be opted into.
    pub accept_qpt_budget: bool,
    /// Run QPT on the empty circuit against the identity target.
    pub identity_gate: bool,
}

impl ExperimentConfig {
    pub fn noise_free(input_state: InputState, shots: u64) -> Self {
        Self {
            mode: Mode::NoiseFree,
            input_state,
            strategy: DecompositionStrategy::EcrNative,
            shots_per_setting: shots,
            master_seed: DEFAULT_SEED,
            calibration_path: None,
            repeats: DEFAULT_REPEATS,
            projection: Projection::default(),
            exact_probabilities: false,
            readout_error: true,
            noise_scale: 1.0,
            parallel: true,
            accept_qpt_budget: false,
            identity_gate: false,
        }
    }

    pub fn noise_aware(input_state: InputState, shots: u64, calibration: impl Into<PathBuf>) -> Self {
        Self { mode: Mode::NoiseAware, calibration_path: Some(calibration.into()), ..Self::noise_free(input_state, shots) }
    }

    pub fn validate(&self) -> Result<()> {
        if self.shots_per_setting == 0 {
            return Err(Error::Config("shots must be positive".into()));
        }
        if self.repeats == 0 {
            return Err(Error::Config("repeats must be at least 1".into()));
        }
        if self.mode == Mode::NoiseAware && self.calibration_path.is_none() {
            return Err(Error::Config("NOISE_AWARE mode requires a calibration file".into()));
        }
        if !self.noise_scale.is_finite() || self.noise_scale < 0.0 {
            return Err(Error::Config(format!("noise scale {} must be finite and non-negative", self.noise_scale)));
        }
        Ok(())
    }

    /// The noise model the simulator runs with: ideal for NOISE_FREE,
    /// otherwise the scaled calibration.
    pub fn noise_model(&self) -> Result<NoiseModel> {
        match (self.mode, &self.calibration_path) {
            (Mode::NoiseFree, _) => Ok(NoiseModel::ideal()),
            (Mode::NoiseAware, Some(path)) => {
                let mut nm = NoiseModel::load(path)?.scaled(self.noise_scale)?;
                nm.readout_error = self.readout_error;
                Ok(nm)
            }
            (Mode::NoiseAware, None) => Err(Error::Config("NOISE_AWARE mode requires a calibration file".into())),
        }
    }
}

mod strategy_name {
    use super::DecompositionStrategy;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(s: &DecompositionStrategy, ser: S) -> Result<S::Ok, S::Error> {
        ser.serialize_str(s.name())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<DecompositionStrategy, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
