use std::time::Instant;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gates::Circuit;
use crate::harness::config::{ExperimentConfig, Mode};
use crate::harness::report::{CircuitStats, ExperimentKind, Report, Timing};
use crate::qmath::{state_fidelity, DensityMatrix, StateVector, UnitaryMatrix, C64};
use crate::sim::sampling::{rng_from_seed, sample_distribution};
use crate::sim::{derive_seed, measured_probabilities, prepare_state, run_statevector, InputState, NoiseModel, StatePrep};
use crate::synthesis::{decompose_toffoli, peephole, to_native, toffoli_matrix};
use crate::tomography::{
    average_gate_fidelity, measurement_rotation, process_fidelity_to_unitary, qpt_jobs, qpt_reconstruct_probabilities, qst_reconstruct_probabilities,
    qst_settings, QptKey,
};

/// Default Toffoli roles: controls on qubits 1 and 2, target on qubit 0.
pub const CONTROLS: (usize, usize) = (1, 2);
pub const TARGET: usize = 0;

/// Table 1 hardware fidelities, kept for display next to simulated results.
pub fn hardware_reference(state: InputState) -> f64 {
    match state {
        InputState::Ghz => 0.56368,
        InputState::W => 0.63689,
        InputState::Uniform => 0.61161,
    }
}

/// The benchmark input written down directly, independent of the circuit
/// that prepares it.
pub fn ideal_input(state: InputState) -> StateVector {
    let r = |x: f64| C64::new(x, 0.0);
    let amps: Vec<C64> = match state {
        InputState::Ghz => (0..8).map(|i| r(if i == 0 || i == 7 { 0.5f64.sqrt() } else { 0.0 })).collect(),
        InputState::W => (0..8usize).map(|i| r(if i.count_ones() == 1 { (1.0f64 / 3.0).sqrt() } else { 0.0 })).collect(),
        InputState::Uniform => vec![r(0.125f64.sqrt()); 8],
    };
    StateVector::new(amps).expect("normalized by construction")
}

/// The Toffoli applied to the ideal input.
pub fn reference_state(state: InputState) -> DensityMatrix {
    let out = toffoli_matrix().apply(&ideal_input(state)).expect("3-qubit state");
    DensityMatrix::pure(&out)
}

fn map_indexed<T, F>(n: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    if parallel {
        (0..n).into_par_iter().map(f).collect()
    } else {
        (0..n).map(f).collect()
    }
}

/// Z-basis outcome distribution of a fully measured circuit.
fn outcome_distribution(c: &Circuit, mode: Mode, nm: &NoiseModel) -> Result<Vec<f64>> {
    match mode {
        Mode::NoiseFree => Ok(run_statevector(c)?.probabilities()),
        Mode::NoiseAware => measured_probabilities(c, nm),
    }
}

fn draw(probs: &[f64], cfg: &ExperimentConfig, seed: u64) -> Result<Vec<f64>> {
    if cfg.exact_probabilities {
        return Ok(probs.to_vec());
    }
    Ok(sample_distribution(probs, cfg.shots_per_setting, &mut rng_from_seed(seed))?.frequencies())
}

/// The decomposition as synthesized, and the native circuit that is run.
fn toffoli_circuit(cfg: &ExperimentConfig) -> Result<(Circuit, Circuit)> {
    let logical = decompose_toffoli(cfg.strategy, CONTROLS, TARGET)?;
    let native = peephole(&to_native(&logical)?);
    Ok((logical, native))
}

/// Seed of repeat `r`. Cell seeds are derived from it by cell index.
pub fn repeat_seed(master_seed: u64, r: usize) -> u64 {
    derive_seed(master_seed, r as u64)
}

/// State tomography of the Toffoli output for one input state, repeated
/// with independent seeds.
pub fn run_qst_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    cfg.validate()?;
    let nm = cfg.noise_model()?;
    let (logical, gate) = toffoli_circuit(cfg)?;
    let base = prepare_state(&StatePrep::Input(cfg.input_state))?.then(&gate);
    let settings = qst_settings(3)?;
    let probs = map_indexed(settings.len(), cfg.parallel, |i| {
        let mut c = base.clone();
        c.append(&measurement_rotation(&settings[i]))?;
        outcome_distribution(&c, cfg.mode, &nm)
    })?;

    let reference = reference_state(cfg.input_state);
    let seeds: Vec<u64> = (0..cfg.repeats).map(|r| repeat_seed(cfg.master_seed, r)).collect();
    let fidelities = map_indexed(cfg.repeats, cfg.parallel, |r| {
        let data = settings
            .iter()
            .zip(&probs)
            .enumerate()
            .map(|(i, (s, p))| Ok((s.clone(), draw(p, cfg, derive_seed(seeds[r], i as u64))?)))
            .collect::<Result<_>>()?;
        let rho = qst_reconstruct_probabilities(&data, 3, cfg.projection)?;
        Ok(state_fidelity(&rho, &reference)?.clamp(0.0, 1.0))
    })?;

    let mut report = Report::new(ExperimentKind::Qst, cfg.clone(), CircuitStats::of(&logical, &gate, cfg.strategy), seeds, fidelities);
    report.jobs_per_repeat = settings.len();
    report.measurements_per_repeat = settings.len() as u64 * cfg.shots_per_setting;
    report.hardware_reference = Some(hardware_reference(cfg.input_state));
    report.timing = Timing::since(start);
    Ok(report)
}

/// Process tomography of the Toffoli decomposition on 3 qubits (or of the
/// empty circuit when `identity_gate` is set).
pub fn run_qpt_experiment(cfg: &ExperimentConfig) -> Result<Report> {
    let start = Instant::now();
    cfg.validate()?;
    if !cfg.accept_qpt_budget {
        return Err(Error::Config(
            "3-qubit process tomography runs 1728 circuits per repeat; pass --accept-budget to run it".into(),
        ));
    }
    let nm = cfg.noise_model()?;
    let ((logical, gate), target) = if cfg.identity_gate {
        ((Circuit::new(3), Circuit::new(3)), UnitaryMatrix::identity(8))
    } else {
        (toffoli_circuit(cfg)?, toffoli_matrix())
    };
    let layout = qpt_jobs(&gate, 3, cfg.shots_per_setting, cfg.master_seed)?;
    let probs = map_indexed(layout.len(), cfg.parallel, |i| outcome_distribution(&layout[i].circuit(&gate)?, cfg.mode, &nm))?;
    let keys: Vec<QptKey> = layout.iter().map(|j| (j.probe.clone(), j.setting.clone())).collect();

    let seeds: Vec<u64> = (0..cfg.repeats).map(|r| repeat_seed(cfg.master_seed, r)).collect();
    let per_repeat = map_indexed(cfg.repeats, cfg.parallel, |r| {
        let jobs = qpt_jobs(&gate, 3, cfg.shots_per_setting, seeds[r])?;
        let data = jobs
            .iter()
            .zip(&keys)
            .zip(&probs)
            .map(|((job, key), p)| Ok((key.clone(), draw(p, cfg, job.seed)?)))
            .collect::<Result<_>>()?;
        let choi = qpt_reconstruct_probabilities(&data, 3, cfg.projection)?;
        let f = process_fidelity_to_unitary(&choi, &target)?.clamp(0.0, 1.0);
        Ok((f, choi.tp_deviation()))
    })?;

    let fidelities: Vec<f64> = per_repeat.iter().map(|x| x.0).collect();
    let mut report = Report::new(ExperimentKind::Qpt, cfg.clone(), CircuitStats::of(&logical, &gate, cfg.strategy), seeds, fidelities);
    report.set_average_gate_fidelities(report.fidelities.iter().map(|&f| average_gate_fidelity(f, 3)).collect());
    report.tp_deviations = Some(per_repeat.iter().map(|x| x.1).collect());
    report.jobs_per_repeat = layout.len();
    report.measurements_per_repeat = layout.iter().map(|j| j.shots).sum();
    report.timing = Timing::since(start);
    Ok(report)
}
