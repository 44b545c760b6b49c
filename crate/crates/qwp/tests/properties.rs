//! Cross-cutting invariants checked over the whole builder zoo plus
//! randomized properties.

mod common;

use common::*;
use num_complex::Complex64;
use proptest::prelude::*;
use qwp::builders::{build_transform, build_walsh_hadamard, TransformKind, TransformPlan};
use qwp::circuit::{compose, count_gates, Circuit, ControlSpec, Gate, GateKind, QubitRef};
use qwp::classical::{
    classical_transform, d4_word, extract_qmf, haar_word, splitting_matrix_from_pair,
    splitting_matrix_from_word, SplitDirection,
};
use qwp::decompose::{decompose_to_elementary, is_elementary};
use qwp::format::{parse_circuit, serialize_circuit};
use qwp::math::Mat2;
use qwp::simulator::{
    apply_circuit, embed_signal, extract_data_amplitudes, extract_matrix, extract_matrix_block,
    DenseMatrix, StateVector,
};
use qwp::CoefficientOrder;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn round_trip_circuit_then_inverse_is_identity() {
    for entry in builder_zoo() {
        let circuit = &entry.circuit;
        if circuit.n_data() > 6 {
            continue;
        }
        let round = compose(circuit, &circuit.inverted().unwrap()).unwrap();
        for m in 0..(1usize << circuit.n_data()) {
            let input = StateVector::basis(round.n_qubits(), m);
            let output = apply_circuit(&input, &round).unwrap();
            for (i, amp) in output.amplitudes().iter().enumerate() {
                let want = if i == m { 1.0 } else { 0.0 };
                assert!(
                    (amp - Complex64::new(want, 0.0)).norm() <= 1e-12,
                    "{}: basis {m} not restored (amplitude {i} = {amp})",
                    entry.name
                );
            }
        }
    }
}

#[test]
fn decomposition_is_sound_on_the_contract_subspace() {
    for entry in builder_zoo() {
        let circuit = &entry.circuit;
        if circuit.n_data() > 5 {
            continue;
        }
        let elementary = decompose_to_elementary(circuit).unwrap();
        assert!(
            elementary.gates().iter().all(is_elementary),
            "{}: non-elementary gate survived",
            entry.name
        );
        let got = extract_matrix_block(&elementary, entry.contract_dim).unwrap();
        let want = extract_matrix_block(circuit, entry.contract_dim).unwrap();
        let residual = got.max_abs_diff(&want);
        assert!(
            residual <= 1e-10,
            "{}: decomposition drifted by {residual:.3e}",
            entry.name
        );
    }
}

#[test]
fn elementary_total_equals_decomposed_length() {
    for entry in builder_zoo() {
        let elementary = decompose_to_elementary(&entry.circuit).unwrap();
        let report = count_gates(&entry.circuit);
        assert_eq!(
            report.elementary_total,
            elementary.len(),
            "{}",
            entry.name
        );
        assert!(report.elementary_total >= report.logical_total(), "{}", entry.name);
        // A decomposed circuit reports itself exactly.
        assert_eq!(count_gates(&elementary).elementary_total, elementary.len());
    }
}

#[test]
fn serialization_round_trips_the_zoo_exactly() {
    for entry in builder_zoo() {
        let text = serialize_circuit(&entry.circuit);
        let parsed = parse_circuit(&text).unwrap();
        assert_eq!(parsed, entry.circuit, "{}", entry.name);
    }
}

#[test]
fn norm_is_preserved_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0a11);
    for entry in builder_zoo() {
        let circuit = &entry.circuit;
        if circuit.n_data() > 8 {
            continue;
        }
        let state =
            StateVector::from_amplitudes(random_signal(&mut rng, 1 << circuit.n_qubits()))
                .unwrap();
        let output = apply_circuit(&state, circuit).unwrap();
        let (before, after) = (state.norm(), output.norm());
        assert!(
            (before - after).abs() <= 1e-12 * before.max(1.0),
            "{}: norm drifted {before} -> {after}",
            entry.name
        );
    }
}

#[test]
fn application_is_linear() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x11ea);
    for entry in builder_zoo().into_iter().take(8) {
        let circuit = &entry.circuit;
        let dim = 1usize << circuit.n_qubits();
        let s = random_signal(&mut rng, dim);
        let t = random_signal(&mut rng, dim);
        let a = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let b = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        let mixed: Vec<Complex64> = s
            .iter()
            .zip(t.iter())
            .map(|(x, y)| a * x + b * y)
            .collect();

        let apply = |v: Vec<Complex64>| {
            apply_circuit(&StateVector::from_amplitudes(v).unwrap(), circuit)
                .unwrap()
                .into_amplitudes()
        };
        let lhs = apply(mixed);
        let rhs: Vec<Complex64> = apply(s)
            .into_iter()
            .zip(apply(t))
            .map(|(x, y)| a * x + b * y)
            .collect();
        for (l, r) in lhs.iter().zip(rhs.iter()) {
            assert!((l - r).norm() <= 1e-12, "{}", entry.name);
        }
    }
}

#[test]
fn matrix_and_vector_application_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x3a7e);
    for entry in builder_zoo() {
        let circuit = &entry.circuit;
        if circuit.n_data() > 6 {
            continue;
        }
        let dim = entry.contract_dim;
        let matrix = extract_matrix_block(circuit, dim).unwrap();
        let mut signal = random_signal(&mut rng, 1 << circuit.n_data());
        for slot in signal.iter_mut().skip(dim) {
            *slot = Complex64::ZERO;
        }
        let state = embed_signal(&signal, circuit).unwrap();
        let output = apply_circuit(&state, circuit).unwrap();
        let direct = extract_data_amplitudes(&output, circuit).unwrap();
        let via_matrix = matrix.mul_vec(&signal[..dim]);
        for (d, m) in direct[..dim].iter().zip(via_matrix.iter()) {
            assert!((d - m).norm() <= 1e-11, "{}", entry.name);
        }
    }
}

#[test]
fn walsh_hadamard_equals_tensor_power_up_to_six() {
    for n in 1..=6 {
        let got = extract_matrix(&build_walsh_hadamard(n).unwrap()).unwrap();
        let residual = got.max_abs_diff(&kron_power_h(n));
        assert!(residual <= 1e-12, "n={n}: {residual:.3e}");
    }
}

#[test]
fn rotation_shift_rotation_words_stay_orthonormal_for_any_angle() {
    use qwp::builders::{ShiftDirection, SplitStep, SplitWord};
    let mut rng = ChaCha8Rng::seed_from_u64(0x20a3);
    for _ in 0..20 {
        let theta = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
        let word = SplitWord::new(vec![
            SplitStep::Rot(Mat2::HADAMARD),
            SplitStep::Shift(ShiftDirection::Forward),
            SplitStep::Rot(Mat2::PAULI_X),
            SplitStep::Rot(Mat2::rotation(theta)),
        ])
        .unwrap();
        let pair = extract_qmf(&word, 8).unwrap();
        let report = qwp::classical::qmf_check(&pair).unwrap();
        assert!(
            report.pass,
            "theta = {theta}: residual {}",
            report.max_residual
        );
    }
}

#[test]
fn words_commute_with_even_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xc033);
    for period in [8usize, 12, 16] {
        for _ in 0..12 {
            let word = random_word(&mut rng);
            let o = splitting_matrix_from_word(&word, period, SplitDirection::Synthesis).unwrap();
            let mut t2 = DenseMatrix::zeros(period);
            for col in 0..period {
                t2.set((col + 2) % period, col, Complex64::ONE);
            }
            let residual = o.mul(&t2).max_abs_diff(&t2.mul(&o));
            assert!(residual <= 1e-12, "period {period}: {residual:.3e}");
        }
    }
}

#[test]
fn word_and_pair_splitting_matrices_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xa9ee);
    for period in [8usize, 12, 16] {
        for _ in 0..12 {
            let word = random_word(&mut rng);
            let via_word =
                splitting_matrix_from_word(&word, period, SplitDirection::Synthesis).unwrap();
            let pair = extract_qmf(&word, period).unwrap();
            let via_pair =
                splitting_matrix_from_pair(&pair, period, SplitDirection::Synthesis).unwrap();
            let residual = via_word.max_abs_diff(&via_pair);
            assert!(residual <= 1e-12, "period {period}: {residual:.3e}");
        }
    }
}

#[test]
fn circuits_match_the_classical_oracle_on_all_small_plans() {
    for (word, label) in [(haar_word(), "haar"), (d4_word(), "d4")] {
        for kind in [TransformKind::Packet, TransformKind::Pyramid] {
            for n in 2..=6usize {
                for depth in 1..=n {
                    let plan =
                        TransformPlan::new(kind, depth, 1 << n, CoefficientOrder::Interleaved)
                            .unwrap();
                    let circuit = build_transform(&plan, &word).unwrap();
                    let got = extract_matrix(&circuit).unwrap();
                    let pair = extract_qmf(&word, 1 << n).unwrap();
                    let mut oracle = DenseMatrix::zeros(1 << n);
                    for col in 0..1usize << n {
                        let mut basis = vec![Complex64::ZERO; 1 << n];
                        basis[col] = Complex64::ONE;
                        let transformed = classical_transform(&plan, &pair, &basis).unwrap();
                        for (row, value) in transformed.into_iter().enumerate() {
                            oracle.set(row, col, value);
                        }
                    }
                    let residual = got.max_abs_diff(&oracle);
                    assert!(
                        residual <= 1e-10,
                        "{label} {kind:?} n={n} depth={depth}: {residual:.3e}"
                    );
                }
            }
        }
    }
}

#[test]
fn general_length_circuits_match_the_oracle_on_the_embedded_block() {
    for (word, label) in [(haar_word(), "haar"), (d4_word(), "d4")] {
        for kind in [TransformKind::Packet, TransformKind::Pyramid] {
            for (length, depth) in [(6usize, 1usize), (12, 2), (20, 2), (24, 3)] {
                let plan = TransformPlan::new(kind, depth, length, CoefficientOrder::Interleaved)
                    .unwrap();
                let circuit = build_transform(&plan, &word).unwrap();
                let got = extract_matrix_block(&circuit, length).unwrap();
                let pair = extract_qmf(&word, length).unwrap();
                let mut oracle = DenseMatrix::zeros(length);
                for col in 0..length {
                    let mut basis = vec![Complex64::ZERO; length];
                    basis[col] = Complex64::ONE;
                    let transformed = classical_transform(&plan, &pair, &basis).unwrap();
                    for (row, value) in transformed.into_iter().enumerate() {
                        oracle.set(row, col, value);
                    }
                }
                let residual = got.max_abs_diff(&oracle);
                assert!(
                    residual <= 1e-10,
                    "{label} {kind:?} length={length} depth={depth}: {residual:.3e}"
                );
            }
        }
    }
}

#[test]
fn subband_ordering_matches_permuted_interleaved() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0653);
    for kind in [TransformKind::Packet, TransformKind::Pyramid] {
        for (length, depth) in [(8usize, 3usize), (12, 2), (16, 2)] {
            let interleaved =
                TransformPlan::new(kind, depth, length, CoefficientOrder::Interleaved).unwrap();
            let subband =
                TransformPlan::new(kind, depth, length, CoefficientOrder::Subband).unwrap();
            let pair = extract_qmf(&d4_word(), length).unwrap();
            let signal = random_signal(&mut rng, length);
            let a = classical_transform(&interleaved, &pair, &signal).unwrap();
            let b = classical_transform(&subband, &pair, &signal).unwrap();
            let perm = qwp::classical::subband_permutation(&interleaved).unwrap();
            for (i, &p) in perm.iter().enumerate() {
                assert!((b[p] - a[i]).norm() <= 1e-14);
            }
        }
    }
}

fn arbitrary_gate() -> impl Strategy<Value = Gate> {
    let qubit = prop_oneof![
        (0usize..4).prop_map(QubitRef::data),
        (0usize..2).prop_map(QubitRef::ancilla),
    ];
    let control = (qubit.clone(), any::<bool>()).prop_map(|(q, positive)| {
        if positive {
            ControlSpec::positive(q)
        } else {
            ControlSpec::negative(q)
        }
    });
    let kind = prop_oneof![
        Just(GateKind::X),
        Just(GateKind::H),
        any::<f64>().prop_filter("finite", |t| t.is_finite()).prop_map(GateKind::Rot),
        (any::<f64>(), any::<f64>(), any::<f64>(), any::<f64>())
            .prop_filter("finite", |(a, b, c, d)| {
                a.is_finite() && b.is_finite() && c.is_finite() && d.is_finite()
            })
            .prop_map(|(a, b, g, d)| {
                let phase = Mat2::phase(a % std::f64::consts::TAU);
                GateKind::U2(
                    phase
                        .mul(&Mat2::rz(b % std::f64::consts::TAU))
                        .mul(&Mat2::ry(g % std::f64::consts::TAU))
                        .mul(&Mat2::rz(d % std::f64::consts::TAU)),
                )
            }),
    ];
    (kind, qubit, proptest::collection::vec(control, 0..3)).prop_map(|(kind, target, controls)| {
        // drop controls that collide with the target or repeat a qubit
        let mut seen = vec![target];
        let controls = controls
            .into_iter()
            .filter(|c| {
                if seen.contains(&c.qubit) {
                    false
                } else {
                    seen.push(c.qubit);
                    true
                }
            })
            .collect();
        Gate::new(kind, target, controls)
    })
}

proptest! {
    #[test]
    fn serialization_round_trips_random_circuits(
        gates in proptest::collection::vec(arbitrary_gate(), 0..12)
    ) {
        let circuit = Circuit::with_gates(4, 2, gates);
        let text = serialize_circuit(&circuit);
        let parsed = parse_circuit(&text).unwrap();
        prop_assert_eq!(parsed, circuit);
    }

    #[test]
    fn random_words_stay_orthonormal(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let word = random_word(&mut rng);
        let pair = extract_qmf(&word, 12).unwrap();
        let report = qwp::classical::qmf_check(&pair).unwrap();
        prop_assert!(report.pass, "residual {}", report.max_residual);
    }

    #[test]
    fn inversion_is_involutive_on_random_circuits(
        gates in proptest::collection::vec(arbitrary_gate(), 0..12)
    ) {
        let circuit = Circuit::with_gates(4, 2, gates);
        if circuit.is_valid() {
            let back = circuit.inverted().unwrap().inverted().unwrap();
            prop_assert_eq!(back, circuit);
        }
    }
}
