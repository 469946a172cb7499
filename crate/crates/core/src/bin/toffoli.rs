use std::collections::BTreeMap;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use toffoli_core::gates::serialize_circuit;
use toffoli_core::harness::{
    calibration_summary, reference_state, run_qpt_experiment, run_qst_experiment, summary_to_csv, ExperimentConfig, ExperimentKind, Mode,
    Report, ReportFormat, DEFAULT_REPEATS, DEFAULT_SEED,
};
use toffoli_core::qmath::{state_fidelity, DensityMatrix, Projection};
use toffoli_core::sim::sampling::{bitstring, rng_from_seed, sample_distribution};
use toffoli_core::sim::{prepare_state, run_density, run_statevector, Calibration, InputState, NoiseModel, StatePrep};
use toffoli_core::synthesis::{certify, decompose_toffoli, toffoli_matrix, DecompositionStrategy, CERTIFY_TOL};
use toffoli_core::{Error, ErrorCategory};

#[derive(Parser)]
#[command(name = "toffoli", version, about = "Toffoli synthesis, noisy simulation and tomography")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decompose the Toffoli gate and certify the result.
    Synth(SynthArgs),
    /// Run one input state through the decomposition and report the output.
    Simulate(SimArgs),
    /// State tomography of the Toffoli output.
    Qst(QstArgs),
    /// Process tomography of the Toffoli decomposition (1,728 circuits).
    Qpt(QptArgs),
    /// Column statistics of a calibration file.
    CalibSummary(CalibArgs),
    /// Re-render a saved report.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Args)]
struct Common {
    /// full-6cnot, lnn-8cnot, lnn-9cnot or ecr-native
    #[arg(long, default_value = "ecr-native", value_parser = parse_strategy)]
    strategy: DecompositionStrategy,
    /// Calibration JSON; enables noise-aware simulation.
    #[arg(long, value_name = "CALIBRATION")]
    noise: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Use exact outcome distributions instead of sampled counts.
    #[arg(long)]
    exact_probabilities: bool,
    /// Ignore readout confusion in the calibration.
    #[arg(long)]
    no_readout_error: bool,
    /// Multiply every calibrated error and decay rate by this factor.
    #[arg(long, default_value_t = 1.0)]
    noise_scale: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    #[arg(long, default_value = "ecr-native", value_parser = parse_strategy)]
    strategy: DecompositionStrategy,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimArgs {
    #[command(flatten)]
    common: Common,
    /// ghz, w or uniform
    #[arg(long, default_value = "ghz", value_parser = parse_state)]
    state: InputState,
    /// Also draw this many Z-basis shots.
    #[arg(long)]
    shots: Option<u64>,
}

#[derive(Args)]
struct TomographyArgs {
    #[command(flatten)]
    common: Common,
    #[arg(long, default_value_t = DEFAULT_REPEATS)]
    repeats: usize,
    /// simplex or clip
    #[arg(long, default_value = "simplex", value_parser = parse_projection)]
    projection: Projection,
    /// Run jobs on one thread (results are identical either way).
    #[arg(long)]
    serial: bool,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct QstArgs {
    #[command(flatten)]
    tomo: TomographyArgs,
    #[arg(long, default_value = "ghz", value_parser = parse_state)]
    state: InputState,
    /// Shots per setting [default: 19000, or 11000 for the uniform state]
    #[arg(long)]
    shots: Option<u64>,
}

#[derive(Args)]
struct QptArgs {
    #[command(flatten)]
    tomo: TomographyArgs,
    #[arg(long, default_value_t = 11_000)]
    shots: u64,
    /// Acknowledge the 1,728-circuit job budget.
    #[arg(long)]
    accept_budget: bool,
    /// Characterize the empty circuit against the identity instead.
    #[arg(long)]
    identity: bool,
}

#[derive(Args)]
struct CalibArgs {
    calibration: PathBuf,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    report: PathBuf,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_strategy(s: &str) -> Result<DecompositionStrategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_state(s: &str) -> Result<InputState, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_projection(s: &str) -> Result<Projection, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn exit_code(cat: ErrorCategory) -> u8 {
    match cat {
        ErrorCategory::Usage => 2,
        ErrorCategory::Schema | ErrorCategory::Io => 3,
        ErrorCategory::Numerical => 4,
    }
}

fn write_output(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, text).map_err(Error::from),
        None => {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
            Ok(())
        }
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

fn experiment_config(common: &Common, tomo_repeats: usize, projection: Projection, serial: bool) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::noise_free(InputState::Ghz, 1);
    cfg.strategy = common.strategy;
    cfg.master_seed = common.seed;
    cfg.exact_probabilities = common.exact_probabilities;
    cfg.readout_error = !common.no_readout_error;
    cfg.noise_scale = common.noise_scale;
    cfg.repeats = tomo_repeats;
    cfg.projection = projection;
    cfg.parallel = !serial;
    if let Some(path) = &common.noise {
        cfg.mode = Mode::NoiseAware;
        cfg.calibration_path = Some(path.clone());
    }
    cfg
}

fn report_text(r: &Report) -> String {
    let target = match r.experiment {
        ExperimentKind::Qst => format!("QST {}", r.config.input_state),
        ExperimentKind::Qpt if r.config.identity_gate => "QPT identity".to_string(),
        ExperimentKind::Qpt => "QPT".to_string(),
    };
    let c = &r.circuit;
    let mut s = format!(
        "{target} {} strategy={} shots={} repeats={}\n",
        r.config.mode.name(),
        c.strategy,
        r.config.shots_per_setting,
        r.repeats()
    );
    s += &format!(
        "circuit: {} gates, {} two-qubit ({} ECR, {} CNOT), depth {}; native: {} gates, {} two-qubit, depth {}\n",
        c.gates, c.two_qubit_gates, c.ecr_gates, c.cnot_gates, c.depth, c.native_gates, c.native_two_qubit_gates, c.native_depth
    );
    s += &format!("jobs per repeat: {}, measurements per repeat: {}\n", r.jobs_per_repeat, r.measurements_per_repeat);
    s += &format!("fidelity: {:.5} +/- {:.5}\n", r.mean_fidelity, r.std_fidelity);
    if let (Some(m), Some(sd)) = (r.mean_average_gate_fidelity, r.std_average_gate_fidelity) {
        s += &format!("average gate fidelity: {m:.5} +/- {sd:.5}\n");
    }
    if let Some(h) = r.hardware_reference {
        s += &format!("hardware reference: {h:.5}\n");
    }
    s
}

fn emit(r: &Report, format: Format, out: Option<&PathBuf>) -> Result<(), Error> {
    let text = match format {
        Format::Json => r.render(ReportFormat::Json),
        Format::Csv => r.render(ReportFormat::Csv),
        Format::Text => report_text(r),
    };
    write_output(&text, out)?;
    if out.is_some() {
        eprint!("{}", report_text(r));
    }
    Ok(())
}

fn synth(a: &SynthArgs) -> Result<(), Error> {
    let c = decompose_toffoli(a.strategy, (1, 2), 0)?;
    let cert = certify(&c, &toffoli_matrix(), CERTIFY_TOL)?;
    if !cert.equivalent {
        return Err(Error::NotUnitary { deviation: cert.max_abs_error });
    }
    let text = match a.format {
        Format::Text => format!(
            "# {} | {} two-qubit gates | depth {} | max error {:.2e}\n{}",
            a.strategy, cert.gate_count_2q, cert.depth, cert.max_abs_error, serialize_circuit(&c)
        ),
        Format::Json => to_json(&json!({
            "strategy": a.strategy.name(),
            "circuit": serialize_circuit(&c),
            "certificate": cert,
        })),
        Format::Csv => return Err(Error::Config("synth supports text and json output".into())),
    };
    write_output(&text, a.out.as_ref())
}

fn simulate(a: &SimArgs) -> Result<(), Error> {
    let c = &a.common;
    let circuit = prepare_state(&StatePrep::Input(a.state))?.then(&decompose_toffoli(c.strategy, (1, 2), 0)?);
    let (rho, probs, mode) = match &c.noise {
        Some(path) => {
            let mut nm = NoiseModel::load(path)?.scaled(c.noise_scale)?;
            nm.readout_error = !c.no_readout_error;
            let probs = toffoli_core::sim::measured_probabilities(&circuit, &nm)?;
            (run_density(&circuit, &nm)?, probs, Mode::NoiseAware)
        }
        None => {
            let psi = run_statevector(&circuit)?;
            (DensityMatrix::pure(&psi), psi.probabilities(), Mode::NoiseFree)
        }
    };
    let fidelity = state_fidelity(&rho, &reference_state(a.state))?;
    let probabilities: BTreeMap<String, f64> =
        probs.iter().enumerate().filter(|(_, p)| **p > 1e-12).map(|(i, p)| (bitstring(i, 3), *p)).collect();
    let counts = match a.shots {
        Some(shots) if !c.exact_probabilities => Some(sample_distribution(&probs, shots, &mut rng_from_seed(c.seed))?.counts),
        _ => None,
    };
    let out = json!({
        "state": a.state,
        "strategy": c.strategy.name(),
        "mode": mode,
        "state_fidelity": fidelity,
        "purity": rho.purity(),
        "probabilities": probabilities,
        "counts": counts,
    });
    write_output(&to_json(&out), c.out.as_ref())
}

fn qst(a: &QstArgs) -> Result<(), Error> {
    let t = &a.tomo;
    let mut cfg = experiment_config(&t.common, t.repeats, t.projection, t.serial);
    cfg.input_state = a.state;
    cfg.shots_per_setting = a.shots.unwrap_or(if a.state == InputState::Uniform { 11_000 } else { 19_000 });
    let r = run_qst_experiment(&cfg)?;
    emit(&r, t.format, t.common.out.as_ref())
}

fn qpt(a: &QptArgs) -> Result<(), Error> {
    let t = &a.tomo;
    let mut cfg = experiment_config(&t.common, t.repeats, t.projection, t.serial);
    cfg.shots_per_setting = a.shots;
    cfg.accept_qpt_budget = a.accept_budget;
    cfg.identity_gate = a.identity;
    let r = run_qpt_experiment(&cfg)?;
    emit(&r, t.format, t.common.out.as_ref())
}

fn calib_summary(a: &CalibArgs) -> Result<(), Error> {
    let cal = Calibration::load(&a.calibration)?;
    let rows = calibration_summary(&cal);
    let text = match a.format {
        Format::Json => to_json(&json!({ "device": cal.device, "qubits": cal.qubits.len(), "columns": rows })),
        Format::Csv => summary_to_csv(&rows),
        Format::Text => {
            let mut s = format!("{:<18} {:>5} {:>12} {:>12} {:>12} {:>12} {:>12}\n", "column", "n", "mean", "std", "min", "median", "max");
            for r in &rows {
                s += &format!(
                    "{:<18} {:>5} {:>12.6} {:>12.6} {:>12.6} {:>12.6} {:>12.6}\n",
                    r.column, r.count, r.mean, r.std, r.min, r.median, r.max
                );
            }
            s
        }
    };
    write_output(&text, a.out.as_ref())
}

fn report(a: &ReportArgs) -> Result<(), Error> {
    let r = Report::load(&a.report)?;
    let text = match a.format {
        Format::Json => r.render(ReportFormat::Json),
        Format::Csv => r.render(ReportFormat::Csv),
        Format::Text => report_text(&r),
    };
    write_output(&text, a.out.as_ref())
}

fn run(cli: Cli) -> Result<(), Error> {
    match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Simulate(a) => simulate(a),
        Command::Qst(a) => qst(a),
        Command::Qpt(a) => qpt(a),
        Command::CalibSummary(a) => calib_summary(a),
        Command::Report(a) => report(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let msg = e.to_string();
            let msg = msg.trim_start_matches("error: ").lines().next().unwrap_or_default().to_string();
            eprintln!("error[{}]: {msg}", ErrorCategory::Usage);
            return ExitCode::from(exit_code(ErrorCategory::Usage));
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let cat = e.category();
            eprintln!("error[{cat}]: {e}");
            ExitCode::from(exit_code(cat))
        }
    }
}

