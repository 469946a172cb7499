use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toffoli_core::gates::{circuit_unitary, parse_circuit, serialize_circuit, Circuit, Gate, GateKind};
use toffoli_core::qmath::random::{haar_state, haar_unitary};
use toffoli_core::qmath::{kron, state_fidelity, ComplexMatrix, DensityMatrix, Projection};
use toffoli_core::sim::sampling::rng_from_seed;
use toffoli_core::sim::{
    depolarizing_channel, run_density, run_statevector, sample_counts, thermal_relaxation_channel, Calibration, KrausChannel,
    NoiseModel, QuantumState,
};
use toffoli_core::synthesis::{equivalent_up_to_global_phase, peephole, to_native};
use toffoli_core::tomography::{
    average_gate_fidelity, choi_of_kraus, choi_of_unitary, process_fidelity, process_fidelity_superop, ptm_of_kraus,
    qst_reconstruct_with, qst_settings, PauliString,
};

const ONE_QUBIT: [GateKind; 9] = [
    GateKind::X,
    GateKind::SX,
    GateKind::RZ,
    GateKind::H,
    GateKind::T,
    GateKind::TDG,
    GateKind::S,
    GateKind::SDG,
    GateKind::ID,
];

fn gate_strategy(n: usize, native_only: bool) -> impl Strategy<Value = Gate> {
    let one: Vec<GateKind> = ONE_QUBIT.iter().copied().filter(|k| !native_only || k.is_native()).collect();
    let two = if native_only { vec![GateKind::ECR] } else { vec![GateKind::ECR, GateKind::CNOT] };
    prop_oneof![
        (prop::sample::select(one), 0..n, -4.0f64..4.0).prop_map(|(k, q, a)| {
            let params = if k == GateKind::RZ { vec![a] } else { vec![] };
            Gate::new(k, params, vec![q]).unwrap()
        }),
        (prop::sample::select(two), 0..n, 1..n).prop_map(move |(k, a, off)| Gate::new(k, vec![], vec![a, (a + off) % n]).unwrap()),
    ]
}

fn circuit_strategy(native_only: bool) -> impl Strategy<Value = Circuit> {
    (2usize..=4).prop_flat_map(move |n| {
        prop::collection::vec(gate_strategy(n, native_only), 0..30).prop_map(move |g| Circuit::from_gates(n, g).unwrap())
    })
}

fn same_up_to_phase(a: &Circuit, b: &Circuit) -> bool {
    let (u, v) = (circuit_unitary(a).unwrap(), circuit_unitary(b).unwrap());
    equivalent_up_to_global_phase(&u, &v, 1e-9).unwrap().equivalent
}

fn random_channel(seed: u64, dim: usize, rank: usize) -> KrausChannel {
    let v = haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed), dim * rank);
    let ops = (0..rank)
        .map(|r| {
            let mut k = ComplexMatrix::zeros(dim, dim);
            for i in 0..dim {
                for j in 0..dim {
                    k.set(i, j, v.matrix().get(r * dim + i, j));
                }
            }
            k
        })
        .collect();
    KrausChannel::new(ops).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn circuit_text_round_trips(c in circuit_strategy(false)) {
        let text = serialize_circuit(&c);
        prop_assert_eq!(parse_circuit(&text).unwrap(), c);
    }

    #[test]
    fn native_translation_preserves_unitary(c in circuit_strategy(false)) {
        let native = to_native(&c).unwrap();
        prop_assert!(native.is_native());
        prop_assert!(same_up_to_phase(&c, &native));
        let optimized = peephole(&native);
        prop_assert!(optimized.len() <= native.len());
        prop_assert!(same_up_to_phase(&native, &optimized));
    }

    #[test]
    fn zero_noise_density_matches_statevector(c in circuit_strategy(true)) {
        let psi = run_statevector(&c).unwrap();
        let rho = run_density(&c, &NoiseModel::ideal()).unwrap();
        prop_assert!((state_fidelity(&rho, &DensityMatrix::pure(&psi)).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn noisy_purity_at_most_one(c in circuit_strategy(true), scale in 0.0f64..3.0) {
        let cal = Calibration::load(concat!(env!("CARGO_MANIFEST_DIR"), "/data/sherbrooke_median.json")).unwrap();
        let nm = NoiseModel::from_calibration(&cal).unwrap().scaled(scale).unwrap();
        let rho = run_density(&c, &nm).unwrap();
        prop_assert!(rho.purity() <= 1.0 + 1e-12);
    }

    #[test]
    fn relaxation_is_trace_preserving(t in 0.0f64..1e6, t1 in 1.0f64..1e3, ratio in 0.01f64..=2.0) {
        let ch = thermal_relaxation_channel(t, t1, ratio * t1).unwrap();
        prop_assert!(ch.tp_deviation() < 1e-8);
    }

    #[test]
    fn depolarizing_is_trace_preserving(frac in 0.0f64..0.999, two in any::<bool>()) {
        let dim = if two { 4 } else { 2 };
        let err = frac * (1.0 - 1.0 / dim as f64);
        let ch = depolarizing_channel(err, dim).unwrap();
        prop_assert!(ch.tp_deviation() < 1e-8);
    }

    #[test]
    fn sampling_is_deterministic(seed in any::<u64>(), shots in 1u64..5000, letters in "[XYZ]{3}") {
        let psi = haar_state(&mut rng_from_seed(seed ^ 0x5eed), 8);
        let state = QuantumState::Pure(psi);
        let setting: PauliString = letters.parse().unwrap();
        let a = sample_counts(&state, &setting, shots, seed, None).unwrap();
        let b = sample_counts(&state, &setting, shots, seed, None).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(a.counts.values().sum::<u64>(), shots);
    }

    #[test]
    fn average_gate_fidelity_affine_and_monotone(a in 0.0f64..=1.0, b in 0.0f64..=1.0, k in 1usize..=3) {
        let g = (1usize << k) as f64;
        let fa = average_gate_fidelity(a, k);
        prop_assert!((fa - (g * a + 1.0) / (g + 1.0)).abs() < 1e-15);
        if a <= b {
            prop_assert!(fa <= average_gate_fidelity(b, k));
        }
        prop_assert_eq!(average_gate_fidelity(1.0, k), 1.0);
    }

    #[test]
    fn choi_and_superoperator_paths_agree(seed in any::<u64>(), k in 1usize..=2, log_rank in 0u32..3) {
        let dim = 1 << k;
        let ch = random_channel(seed, dim, 1 << log_rank);
        let u = haar_unitary(&mut ChaCha8Rng::seed_from_u64(seed.wrapping_add(1)), dim);
        let a = process_fidelity(&choi_of_kraus(&ch).unwrap(), &choi_of_unitary(&u)).unwrap();
        let b = process_fidelity_superop(&ptm_of_kraus(&ch).unwrap(), &u).unwrap();
        prop_assert!((a - b).abs() < 1e-8, "{} vs {}", a, b);
    }

    #[test]
    fn product_channel_choi_is_reordered_tensor_product(s1 in any::<u64>(), s2 in any::<u64>(), r1 in 0u32..2, r2 in 0u32..2) {
        let a = random_channel(s1, 2, 1 << r1);
        let b = random_channel(s2, 2, 1 << r2);
        // Qubit 1 carries `a`, qubit 0 carries `b`.
        let ops = a.operators().iter().flat_map(|x| b.operators().iter().map(move |y| kron(x, y))).collect();
        let joint = choi_of_kraus(&KrausChannel::new(ops).unwrap()).unwrap();
        let prod = kron(choi_of_kraus(&a).unwrap().matrix(), choi_of_kraus(&b).unwrap().matrix());
        // Joint index bits (in1 in0 out1 out0); product index bits (in1 out1 in0 out0).
        let perm = |x: usize| {
            let (in1, in0, out1, out0) = (x >> 3 & 1, x >> 2 & 1, x >> 1 & 1, x & 1);
            in1 << 3 | out1 << 2 | in0 << 1 | out0
        };
        let mut worst = 0.0f64;
        for i in 0..16 {
            for j in 0..16 {
                worst = worst.max((joint.matrix().get(i, j) - prod.get(perm(i), perm(j))).norm());
            }
        }
        prop_assert!(worst < 1e-8, "{}", worst);
    }

    #[test]
    fn sampled_qst_is_always_a_state(seed in any::<u64>(), shots in 10u64..2000, clip in any::<bool>()) {
        let psi = haar_state(&mut rng_from_seed(seed), 4);
        let state = QuantumState::Pure(psi);
        let data = qst_settings(2)
            .unwrap()
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                let c = sample_counts(&state, &s, shots, seed.wrapping_add(i as u64), None).unwrap();
                (s, c)
            })
            .collect();
        let projection = if clip { Projection::ClipRenormalize } else { Projection::Simplex };
        let rho = qst_reconstruct_with(&data, 2, projection).unwrap();
        prop_assert!(DensityMatrix::new(rho.matrix().clone()).is_ok());
    }
}

/// Total-variation distance between sampled frequencies and the exact
/// distribution stays within 5·√(2^k/shots) on at least 99% of seeds.
#[test]
fn empirical_frequencies_converge() {
    for k in 1..=3 {
        for shots in [100u64, 1_000, 19_000] {
            let bound = 5.0 * ((1usize << k) as f64 / shots as f64).sqrt();
            let setting = PauliString::uniform(toffoli_core::tomography::Pauli::Z, k);
            let mut within = 0;
            let runs = 200;
            for seed in 0..runs {
                let psi = haar_state(&mut rng_from_seed(seed + 1000), 1 << k);
                let state = QuantumState::Pure(psi.clone());
                let counts = sample_counts(&state, &setting, shots, seed, None).unwrap();
                let tv: f64 =
                    counts.frequencies().iter().zip(psi.probabilities()).map(|(f, p)| (f - p).abs()).sum::<f64>() / 2.0;
                if tv <= bound {
                    within += 1;
                }
            }
            assert!(within as f64 >= 0.99 * runs as f64, "k={k} shots={shots}: {within}/{runs}");
        }
    }
}
