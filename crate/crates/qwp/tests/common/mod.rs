//! Helpers shared by the integration test suites.
#![allow(dead_code)] // each suite uses its own subset

use num_complex::Complex64;
use qwp::builders::{
    build_increment_mod, build_increment_pow2, build_local_rotation, build_split_analysis,
    build_split_synthesis, build_transform, build_walsh_hadamard, ShiftDirection, SplitStep,
    SplitWord, TransformKind, TransformPlan,
};
use qwp::circuit::{Circuit, ControlSpec, QubitRef};
use qwp::classical::{d4_word, haar_word};
use qwp::math::Mat2;
use qwp::simulator::DenseMatrix;
use qwp::CoefficientOrder;
use rand::Rng;

/// Independent tensor-power construction of the 2^n-point Walsh-Hadamard
/// matrix, using nothing but the 2x2 seed and a Kronecker product.
pub fn kron_power_h(n: usize) -> DenseMatrix {
    let h = 1.0 / 2.0f64.sqrt();
    let mut matrix = DenseMatrix::from_fn(2, |r, c| {
        let sign = if r == 1 && c == 1 { -h } else { h };
        Complex64::new(sign, 0.0)
    });
    for _ in 1..n {
        let h2 = DenseMatrix::from_fn(2, |r, c| {
            let sign = if r == 1 && c == 1 { -h } else { h };
            Complex64::new(sign, 0.0)
        });
        matrix = h2.kron(&matrix);
    }
    matrix
}

/// Builds a dense matrix from an integer pattern times a scale factor.
pub fn dense_from_pattern<const N: usize>(pattern: [[i32; N]; N], scale: f64) -> DenseMatrix {
    DenseMatrix::from_fn(N, |r, c| Complex64::new(pattern[r][c] as f64 * scale, 0.0))
}

pub fn random_signal(rng: &mut impl Rng, len: usize) -> Vec<Complex64> {
    (0..len)
        .map(|_| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect()
}

/// A random 2x2 unitary from random ZYZ angles and a global phase.
pub fn random_unitary(rng: &mut impl Rng) -> Mat2 {
    use std::f64::consts::PI;
    let alpha = rng.random_range(-PI..PI);
    let beta = rng.random_range(-PI..PI);
    let gamma = rng.random_range(-PI..PI);
    let delta = rng.random_range(-PI..PI);
    let phase = Mat2::new(
        Complex64::from_polar(1.0, alpha),
        Complex64::ZERO,
        Complex64::ZERO,
        Complex64::from_polar(1.0, alpha),
    );
    phase
        .mul(&Mat2::rz(beta))
        .mul(&Mat2::ry(gamma))
        .mul(&Mat2::rz(delta))
}

/// A random splitting word mixing rotations and translations.
pub fn random_word(rng: &mut impl Rng) -> SplitWord {
    use std::f64::consts::PI;
    let len = rng.random_range(1..=6usize);
    let steps: Vec<SplitStep> = (0..len)
        .map(|_| match rng.random_range(0..6u8) {
            0 => SplitStep::Rot(Mat2::HADAMARD),
            1 => SplitStep::Rot(Mat2::PAULI_X),
            2 => SplitStep::Rot(Mat2::rotation(rng.random_range(-PI..PI))),
            3 => SplitStep::Rot(random_unitary(rng)),
            4 => SplitStep::Shift(ShiftDirection::Forward),
            _ => SplitStep::Shift(ShiftDirection::Backward),
        })
        .collect();
    SplitWord::new(steps).expect("nonempty word")
}

/// A named circuit plus the dimension of the subspace its contract covers
/// (smaller than 2^n_data for general-modulus circuits).
pub struct ZooEntry {
    pub name: String,
    pub circuit: Circuit,
    pub contract_dim: usize,
}

/// A representative set of every builder output, used by the invariant
/// suites.
pub fn builder_zoo() -> Vec<ZooEntry> {
    let mut zoo = Vec::new();
    let mut add = |name: &str, circuit: Circuit, contract_dim: usize| {
        zoo.push(ZooEntry {
            name: name.to_string(),
            circuit,
            contract_dim,
        });
    };

    for n in 1..=4 {
        add(
            &format!("walsh-{n}"),
            build_walsh_hadamard(n).unwrap(),
            1 << n,
        );
    }
    for w in 1..=5 {
        add(
            &format!("increment-pow2-{w}"),
            build_increment_pow2(w, 0..w, &[]).unwrap(),
            1 << w,
        );
    }
    add(
        "increment-pow2-3-neg-control",
        build_increment_pow2(4, 0..3, &[ControlSpec::negative(QubitRef::data(3))]).unwrap(),
        16,
    );
    add(
        "increment-pow2-3-pos-control",
        build_increment_pow2(4, 0..3, &[ControlSpec::positive(QubitRef::data(3))]).unwrap(),
        16,
    );
    add(
        "decrement-pow2-3",
        build_increment_pow2(3, 0..3, &[])
            .unwrap()
            .inverted()
            .unwrap(),
        8,
    );
    add(
        "increment-mod-6",
        build_increment_mod(3, 6, 0..3, &[]).unwrap(),
        6,
    );
    add(
        "increment-mod-12",
        build_increment_mod(4, 12, 0..4, &[]).unwrap(),
        12,
    );
    add(
        "local-rotation-h",
        build_local_rotation(3, Mat2::HADAMARD, 0..3, &[]).unwrap(),
        8,
    );
    add(
        "split-synthesis-haar-8",
        build_split_synthesis(3, &haar_word(), 8, 0..3, &[]).unwrap(),
        8,
    );
    add(
        "split-analysis-haar-8",
        build_split_analysis(3, &haar_word(), 8, 0..3, &[]).unwrap(),
        8,
    );
    add(
        "split-synthesis-d4-8",
        build_split_synthesis(3, &d4_word(), 8, 0..3, &[]).unwrap(),
        8,
    );
    add(
        "split-synthesis-d4-12",
        build_split_synthesis(4, &d4_word(), 12, 0..4, &[]).unwrap(),
        12,
    );
    let fixed_word = SplitWord::new(vec![
        SplitStep::Rot(Mat2::rotation(0.4)),
        SplitStep::Shift(ShiftDirection::Forward),
        SplitStep::Rot(Mat2::PAULI_X),
    ])
    .unwrap();
    add(
        "split-synthesis-fixed-word-8",
        build_split_synthesis(3, &fixed_word, 8, 0..3, &[]).unwrap(),
        8,
    );

    for (kind, label) in [
        (TransformKind::Packet, "packet"),
        (TransformKind::Pyramid, "pyramid"),
    ] {
        for n in 2..=4usize {
            let plan =
                TransformPlan::new(kind, n, 1 << n, CoefficientOrder::Interleaved).unwrap();
            add(
                &format!("{label}-haar-{n}"),
                build_transform(&plan, &haar_word()).unwrap(),
                1 << n,
            );
            add(
                &format!("{label}-d4-{n}"),
                build_transform(&plan, &d4_word()).unwrap(),
                1 << n,
            );
        }
        let plan = TransformPlan::new(kind, 2, 12, CoefficientOrder::Interleaved).unwrap();
        add(
            &format!("{label}-d4-len12"),
            build_transform(&plan, &d4_word()).unwrap(),
            12,
        );
    }

    zoo
}
