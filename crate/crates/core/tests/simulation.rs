use num_complex::Complex64;
use proptest::prelude::*;
use qsearch::families::{build_grover, build_wielomianer_p43};
use qsearch::sim::{run_exact, run_noisy, unitary_of, DenseMatrix, Distribution, NoiseModel, SimError, StateVector};
use qsearch::synth::{oracle, OracleSpec, OracleStyle};
use qsearch::{Circuit, Control, Direction, GateKind, Instruction, Pattern};

fn grover3(mask: &str) -> Circuit {
    let p: Pattern = mask.parse().unwrap();
    build_grover(OracleSpec::new(3, p, OracleStyle::AncillaRelphase).unwrap(), 1).unwrap()
}

fn binomial_sigma(p: f64, shots: u64) -> f64 {
    (p * (1.0 - p) / shots as f64).sqrt()
}

fn noise(p2: f64) -> NoiseModel {
    NoiseModel { p1: 0.0, p2, p_meas: 0.0 }
}

#[test]
fn hadamard_example() {
    let c = Circuit::from_instructions(1, 1, [
        Instruction::new(GateKind::Hadamard(0)),
        Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 }),
    ])
    .unwrap();
    let d = run_exact(&c).unwrap();
    assert!(d.total_variation(&Distribution::exact(1, vec![0.5, 0.5])) < 1e-12);
}

#[test]
fn grover_four_qubit_example() {
    let p: Pattern = "0110".parse().unwrap();
    let c = build_grover(OracleSpec::new(4, p, OracleStyle::PlainMcz).unwrap(), 1).unwrap();
    let d = run_exact(&c).unwrap();
    assert!((d.prob(0b0110) - 121.0 / 256.0).abs() < 1e-12);
    assert!((d.total_mass() - 1.0).abs() < 1e-12);
}

#[test]
fn unitary_examples() {
    assert_eq!(unitary_of(&Circuit::new(3, 0)).unwrap(), DenseMatrix::identity(8));

    let p: Pattern = "101".parse().unwrap();
    let frag = oracle(&OracleSpec::new(3, p, OracleStyle::PlainMcz).unwrap()).unwrap();
    let u = unitary_of(&frag).unwrap();
    for row in 0..8 {
        for col in 0..8 {
            let want = match (row == col, row) {
                (true, 0b101) => -1.0,
                (true, _) => 1.0,
                _ => 0.0,
            };
            assert!((u.get(row, col) - Complex64::new(want, 0.0)).norm() < 1e-12);
        }
    }

    let pair = Circuit::from_instructions(3, 0, [
        Instruction::new(GateKind::RelPhaseCCX { qubits: [0, 1, 2], direction: Direction::Forward }),
        Instruction::new(GateKind::RelPhaseCCX { qubits: [0, 1, 2], direction: Direction::Inverse }),
    ])
    .unwrap();
    assert!(unitary_of(&pair).unwrap().frobenius_distance(&DenseMatrix::identity(8)) < 1e-10);
}

#[test]
fn width_and_measurement_errors() {
    assert!(matches!(run_exact(&Circuit::new(25, 0)), Err(SimError::TooWide { .. })));
    assert!(matches!(unitary_of(&Circuit::new(13, 0)), Err(SimError::TooWide { .. })));
    let measured = Circuit::from_instructions(1, 1, [Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 })]).unwrap();
    assert!(matches!(unitary_of(&measured), Err(SimError::HasMeasurement)));
}

#[test]
fn branch_weights_sum_to_one() {
    for mask in Pattern::all(4) {
        let c = build_wielomianer_p43(OracleSpec::new(4, mask, OracleStyle::PlainMcz).unwrap()).unwrap();
        let d = run_exact(&c).unwrap();
        assert!((d.total_mass() - 1.0).abs() < 1e-12, "{mask}");
    }
}

#[test]
fn zero_noise_matches_exact() {
    let c = grover3("101");
    let shots = 100_000;
    let exact = run_exact(&c).unwrap();
    let sampled = run_noisy(&c, &NoiseModel::noiseless(), shots, 7).unwrap();
    assert_eq!(sampled.shots(), Some(shots));
    for x in 0..8 {
        let p = exact.prob(x);
        let dev = (sampled.prob(x) - p).abs();
        assert!(dev <= 4.0 * binomial_sigma(p, shots) + 1e-12, "outcome {x}: {} vs {p}", sampled.prob(x));
    }
}

#[test]
fn noisy_runs_are_deterministic() {
    let c = grover3("011");
    let model = NoiseModel { p1: 0.002, p2: 0.02, p_meas: 0.01 };
    let a = run_noisy(&c, &model, 5_000, 42).unwrap();
    let b = run_noisy(&c, &model, 5_000, 42).unwrap();
    assert_eq!(a, b);
    let other = run_noisy(&c, &model, 5_000, 43).unwrap();
    assert_ne!(a, other);
}

#[test]
fn success_is_monotone_in_p2() {
    let c = grover3("110");
    let shots = 50_000;
    let grid = [0.0, 0.005, 0.01, 0.02, 0.05];
    let ps: Vec<f64> = grid.iter().map(|&p2| run_noisy(&c, &noise(p2), shots, 11).unwrap().prob(0b110)).collect();
    for w in ps.windows(2) {
        let slack = 3.0 * (binomial_sigma(w[0], shots).powi(2) + binomial_sigma(w[1], shots).powi(2)).sqrt();
        assert!(w[1] <= w[0] + slack, "{ps:?}");
    }
    assert!(ps[4] < ps[0]);
}

#[test]
fn full_depolarization_is_uniform() {
    let c = grover3("010");
    let shots = 100_000;
    let d = run_noisy(&c, &noise(1.0), shots, 3).unwrap();
    let p = 1.0 / 8.0;
    assert!((d.prob(0b010) - p).abs() <= 3.0 * binomial_sigma(p, shots), "{}", d.prob(0b010));
}

#[test]
fn noisy_handles_mid_circuit_measurement() {
    let p: Pattern = "1001".parse().unwrap();
    let c = build_wielomianer_p43(OracleSpec::new(4, p, OracleStyle::PlainMcz).unwrap()).unwrap();
    let shots = 40_000;
    let exact = run_exact(&c).unwrap().marginal_leading(4);
    let sampled = run_noisy(&c, &NoiseModel::noiseless(), shots, 5).unwrap().marginal_leading(4);
    for x in 0..16 {
        let q = exact.prob(x);
        assert!((sampled.prob(x) - q).abs() <= 4.0 * binomial_sigma(q, shots) + 1e-12, "outcome {x}");
    }
}

#[test]
fn bad_noise_rejected() {
    let c = grover3("000");
    assert!(matches!(run_noisy(&c, &noise(1.5), 10, 0), Err(SimError::BadNoise { name: "p2", .. })));
}

fn random_gate(n: usize) -> impl Strategy<Value = GateKind> {
    let q = 0..n;
    prop_oneof![
        q.clone().prop_map(GateKind::Hadamard),
        q.clone().prop_map(GateKind::PauliX),
        q.clone().prop_map(GateKind::PauliZ),
        (q.clone(), -3.0..3.0f64).prop_map(|(q, a)| GateKind::phase(q, a)),
        (Just((0..n).collect::<Vec<_>>()).prop_shuffle(), any::<bool>()).prop_map(|(p, pol)| GateKind::ControlledX {
            controls: vec![Control::new(p[0], pol)],
            target: p[1],
        }),
        Just((0..n).collect::<Vec<_>>())
            .prop_shuffle()
            .prop_map(|p| GateKind::ControlledZ { qubits: p.iter().take(3).map(|&q| Control::on(q)).collect() }),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn norm_preserved_by_every_gate(gates in proptest::collection::vec(random_gate(4), 1..30)) {
        let mut s = StateVector::zero(4);
        for g in &gates {
            s.apply(g).unwrap();
            prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn mid_measurement_branches_are_normalised(
        gates in proptest::collection::vec(random_gate(3), 0..12),
        tail in proptest::collection::vec(random_gate(3), 0..12),
        value in any::<bool>(),
    ) {
        let mut c = Circuit::new(3, 2);
        for g in gates {
            c.push(Instruction::new(g)).unwrap();
        }
        c.push(Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 })).unwrap();
        for g in tail {
            c.push(Instruction::when(g, 0, value)).unwrap();
        }
        c.push(Instruction::new(GateKind::Measure { qubit: 1, clbit: 1 })).unwrap();
        let d = run_exact(&c).unwrap();
        prop_assert!((d.total_mass() - 1.0).abs() < 1e-12);
    }
}
