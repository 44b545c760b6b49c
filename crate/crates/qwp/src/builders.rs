//! Circuit constructors: Walsh-Hadamard stages, modular increment and
//! decrement circuits, local rotations, splitting steps built from words of
//! rotations and translations, and whole packet/pyramid transforms.
//!
//! Conventions shared by everything here:
//! - a splitting word is read in the synthesis direction, first step applied
//!   first, so the word's operator is the right-to-left product of its step
//!   matrices and its first two columns are the filter pair;
//! - analysis circuits are the inverses of synthesis circuits;
//! - level j of a transform acts on the qubit window [j-1, n-1] with modulus
//!   length/2^(j-1), which is exactly the tensor-product picture of a split
//!   acting on every stride-2^(j-1) subsequence;
//! - pyramid levels j >= 2 carry negative controls on qubits 0..j-2, selecting
//!   the approximation branch (all low bits zero, i.e. even indices at every
//!   preceding level).

use crate::circuit::{compose, Circuit, ControlSpec, Gate, GateKind, QubitRef};
use crate::math::Mat2;
use std::ops::Range;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("qubit count must be at least 1")]
    ZeroQubits,
    #[error("window {0:?} is empty or out of range for {1} data qubits")]
    BadWindow(Range<usize>, usize),
    #[error("controls overlap the target window")]
    ControlsOverlapWindow,
    #[error("modulus {0} is odd; splitting needs an even period")]
    OddModulus(usize),
    #[error("modulus {0} is too small")]
    ModulusTooSmall(usize),
    #[error("modulus {0} is a power of two; use the power-of-two increment instead")]
    PowerOfTwoModulus(usize),
    #[error("window width {width} does not fit modulus {modulus}")]
    WindowModulusMismatch { width: usize, modulus: usize },
    #[error("splitting word must contain at least one step")]
    EmptyWord,
    #[error("rotation step {index} is not unitary (residual {residual:.3e})")]
    NonUnitaryStep { index: usize, residual: f64 },
    #[error("local rotation matrix is not unitary (residual {0:.3e})")]
    NonUnitaryRotation(f64),
    #[error("lattice angle list is empty")]
    EmptyAngles,
    #[error(
        "depth {depth} too deep for length {length}: level {level} would need an odd modulus"
    )]
    DepthTooLarge {
        depth: usize,
        length: usize,
        level: usize,
    },
    #[error("transform depth must be at least 1")]
    ZeroDepth,
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
}

/// One step of a splitting word: a local rotation by a 2x2 unitary, or a
/// cyclic translation by +1 or -1. Both commute with the even translation,
/// so any word of them is a valid splitting operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SplitStep {
    Rot(Mat2),
    Shift(ShiftDirection),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftDirection {
    /// Translation by +1: basis index m goes to m+1 mod 2N.
    Forward,
    /// Translation by -1.
    Backward,
}

/// A nonempty sequence of split steps, interpreted in the synthesis
/// direction with the first step applied first.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitWord {
    steps: Vec<SplitStep>,
}

impl SplitWord {
    pub fn new(steps: Vec<SplitStep>) -> Result<Self, BuildError> {
        if steps.is_empty() {
            return Err(BuildError::EmptyWord);
        }
        for (index, step) in steps.iter().enumerate() {
            if let SplitStep::Rot(m) = step {
                let residual = m.unitarity_residual();
                if residual > crate::circuit::UNITARITY_TOL {
                    return Err(BuildError::NonUnitaryStep { index, residual });
                }
            }
        }
        Ok(SplitWord { steps })
    }

    pub fn steps(&self) -> &[SplitStep] {
        &self.steps
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }
}

/// Tree shape of a transform: a full packet tree splits every subspace at
/// every level, a pyramid keeps splitting only the approximation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TransformKind {
    Packet,
    Pyramid,
}

/// Output coefficient layout. Circuits always produce the interleaved
/// layout (approximation on even indices); subband ordering is a classical
/// permutation applied to results, never a circuit change.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoefficientOrder {
    Interleaved,
    Subband,
}

/// Shape, depth, period and output ordering of one transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TransformPlan {
    pub kind: TransformKind,
    pub depth: usize,
    pub length: usize,
    pub ordering: CoefficientOrder,
}

impl TransformPlan {
    pub fn new(
        kind: TransformKind,
        depth: usize,
        length: usize,
        ordering: CoefficientOrder,
    ) -> Result<Self, BuildError> {
        let plan = TransformPlan {
            kind,
            depth,
            length,
            ordering,
        };
        plan.validate()?;
        Ok(plan)
    }

    pub fn validate(&self) -> Result<(), BuildError> {
        if self.depth == 0 {
            return Err(BuildError::ZeroDepth);
        }
        if self.length < 2 {
            return Err(BuildError::ModulusTooSmall(self.length));
        }
        if !self.length.is_multiple_of(2) {
            return Err(BuildError::OddModulus(self.length));
        }
        // Level j works on sequences of length 2N / 2^(j-1), which must stay
        // even through level `depth`.
        for level in 1..=self.depth {
            let modulus = self.length >> (level - 1);
            if !modulus.is_multiple_of(2) || modulus == 0 {
                return Err(BuildError::DepthTooLarge {
                    depth: self.depth,
                    length: self.length,
                    level,
                });
            }
        }
        Ok(())
    }

    /// Number of data qubits needed to hold one period.
    pub fn n_qubits(&self) -> usize {
        ceil_log2(self.length)
    }

    /// Sequence length handled at level `j` (1-based).
    pub fn level_modulus(&self, j: usize) -> usize {
        self.length >> (j - 1)
    }
}

pub(crate) fn ceil_log2(n: usize) -> usize {
    assert!(n >= 1);
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// How external conditions are attached to an increment circuit.
///
/// `Targeted` conditions only the gates with targets c1, a1 and a0: blocking
/// the first carry stops the ripple, and the two low-bit updates are the only
/// other gates that could fire. `AllGates` appends the condition to every
/// gate; both variants implement the same unitary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConditionMode {
    Targeted,
    AllGates,
}

fn check_window(
    n_data: usize,
    window: &Range<usize>,
    controls: &[ControlSpec],
) -> Result<(), BuildError> {
    if window.is_empty() || window.end > n_data {
        return Err(BuildError::BadWindow(window.clone(), n_data));
    }
    for ctrl in controls {
        if ctrl.qubit.role == crate::circuit::QubitRole::Data
            && window.contains(&ctrl.qubit.index)
        {
            return Err(BuildError::ControlsOverlapWindow);
        }
    }
    Ok(())
}

/// The Walsh-Hadamard transform on 2^n points: one H per qubit, starting
/// with the least significant. Its matrix is the n-fold tensor power of H.
pub fn build_walsh_hadamard(n: usize) -> Result<Circuit, BuildError> {
    if n == 0 {
        return Err(BuildError::ZeroQubits);
    }
    let mut circuit = Circuit::new(n, 0);
    for q in 0..n {
        circuit.push(Gate::h(QubitRef::data(q)));
    }
    Ok(circuit)
}

/// |m> -> |m+1 mod 2^w> on a contiguous window of w data qubits, identity
/// elsewhere. Uses w-2 carry ancillas for w >= 3: the carries are computed
/// low to high with one Toffoli each, consumed most-significant-first, and
/// uncomputed in between, so the carry stage and the cleanup each hold
/// exactly w-2 Toffolis. Controls condition the increment as a whole using
/// the targeted scheme (see [`ConditionMode`]).
pub fn build_increment_pow2(
    n_data: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    build_increment_pow2_with_mode(n_data, window, controls, ConditionMode::Targeted)
}

pub fn build_increment_pow2_with_mode(
    n_data: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
    mode: ConditionMode,
) -> Result<Circuit, BuildError> {
    check_window(n_data, &window, controls)?;
    let w = window.len();
    let mut circuit = Circuit::new(n_data, w.saturating_sub(2));
    push_increment_gates(&mut circuit, &window, controls, mode);
    Ok(circuit)
}

/// Appends the increment gate sequence to an existing circuit. Carry
/// ancillas occupy indices 0..w-2 of the ancilla register.
fn push_increment_gates(
    circuit: &mut Circuit,
    window: &Range<usize>,
    controls: &[ControlSpec],
    mode: ConditionMode,
) {
    let w = window.len();
    let a = |k: usize| QubitRef::data(window.start + k);
    // carry c_i lives at ancilla index i-1, for i = 1..=w-2
    let carry = |i: usize| QubitRef::ancilla(i - 1);
    let conditioned = |mut gate: Gate, targeted: bool| -> Gate {
        if !controls.is_empty() && (mode == ConditionMode::AllGates || targeted) {
            gate.add_controls(controls);
        }
        gate
    };

    // Carry stage: c_1 = a_1 a_0, then c_i = a_i c_{i-1}.
    for i in 1..=w.saturating_sub(2) {
        let (lhs, rhs) = if i == 1 {
            (a(0), a(1))
        } else {
            (a(i), carry(i - 1))
        };
        let gate = Gate::x(carry(i)).with_controls(vec![
            ControlSpec::positive(lhs),
            ControlSpec::positive(rhs),
        ]);
        circuit.push(conditioned(gate, i == 1));
    }

    // Bit updates, most significant first, uncomputing each carry right
    // after its only use so the later carries still see original inputs.
    for k in (2..w).rev() {
        circuit.push(Gate::x(a(k)).with_controls(vec![ControlSpec::positive(carry(k - 1))]));
        let i = k - 1;
        let (lhs, rhs) = if i == 1 {
            (a(0), a(1))
        } else {
            (a(i), carry(i - 1))
        };
        let cleanup = Gate::x(carry(i)).with_controls(vec![
            ControlSpec::positive(lhs),
            ControlSpec::positive(rhs),
        ]);
        circuit.push(conditioned(cleanup, i == 1));
    }
    if w >= 2 {
        let gate = Gate::x(a(1)).with_controls(vec![ControlSpec::positive(a(0))]);
        circuit.push(conditioned(gate, true));
    }
    circuit.push(conditioned(Gate::x(a(0)), true));
}

/// |m> -> |m-1 mod 2^w>: the increment run backwards.
pub fn build_decrement_pow2(
    n_data: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    Ok(build_increment_pow2(n_data, window, controls)?.inverted()?)
}

/// |m> -> |m+1 mod 2N> for an even modulus 2N that is not a power of two,
/// on window values 0..2N-1 (behaviour above 2N-1 is unspecified).
///
/// Construction: increment mod 2^w, then detect the exceptional value 2N
/// into an extra ancilla, clear every set bit of 2N under that ancilla, and
/// uncompute the ancilla by detecting zero. External controls condition the
/// inner increment (targeted) and both detectors; the clearing gates need no
/// condition because the ancilla stays |0> when the condition fails.
pub fn build_increment_mod(
    n_data: usize,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    build_increment_mod_with_mode(n_data, modulus, window, controls, ConditionMode::Targeted)
}

pub fn build_increment_mod_with_mode(
    n_data: usize,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
    mode: ConditionMode,
) -> Result<Circuit, BuildError> {
    if !modulus.is_multiple_of(2) {
        return Err(BuildError::OddModulus(modulus));
    }
    if modulus < 4 {
        return Err(BuildError::ModulusTooSmall(modulus));
    }
    if modulus.is_power_of_two() {
        return Err(BuildError::PowerOfTwoModulus(modulus));
    }
    check_window(n_data, &window, controls)?;
    let w = window.len();
    if w != ceil_log2(modulus) {
        return Err(BuildError::WindowModulusMismatch { width: w, modulus });
    }

    // w >= 3 here (smallest admissible modulus is 6), so carries exist.
    let exception = QubitRef::ancilla(w - 2);
    let mut circuit = Circuit::new(n_data, w - 1);
    push_increment_gates(&mut circuit, &window, controls, mode);

    let window_bit = |k: usize| QubitRef::data(window.start + k);
    let pattern_controls = |value: usize| -> Vec<ControlSpec> {
        (0..w)
            .map(|k| {
                if value & (1 << k) != 0 {
                    ControlSpec::positive(window_bit(k))
                } else {
                    ControlSpec::negative(window_bit(k))
                }
            })
            .collect()
    };

    let mut detect_overflow = pattern_controls(modulus);
    detect_overflow.extend_from_slice(controls);
    circuit.push(Gate::x(exception).with_controls(detect_overflow));

    for k in 0..w {
        if modulus & (1 << k) != 0 {
            let mut gate =
                Gate::x(window_bit(k)).with_controls(vec![ControlSpec::positive(exception)]);
            if mode == ConditionMode::AllGates && !controls.is_empty() {
                gate.add_controls(controls);
            }
            circuit.push(gate);
        }
    }

    let mut detect_zero = pattern_controls(0);
    detect_zero.extend_from_slice(controls);
    circuit.push(Gate::x(exception).with_controls(detect_zero));

    Ok(circuit)
}

/// |m> -> |m-1 mod 2N> for general even modulus.
pub fn build_decrement_mod(
    n_data: usize,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    Ok(build_increment_mod(n_data, modulus, window, controls)?.inverted()?)
}

/// The local rotation operator: a single-qubit gate on the window's least
/// significant qubit, so the window-restricted matrix is I tensor M. The
/// gate kind is recognised as X, H or a real rotation where possible.
pub fn build_local_rotation(
    n_data: usize,
    matrix: Mat2,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    let residual = matrix.unitarity_residual();
    if residual > crate::circuit::UNITARITY_TOL {
        return Err(BuildError::NonUnitaryRotation(residual));
    }
    check_window(n_data, &window, controls)?;
    let mut circuit = Circuit::new(n_data, 0);
    let kind = classify_single_qubit(&matrix);
    circuit.push(Gate::new(
        kind,
        QubitRef::data(window.start),
        controls.to_vec(),
    ));
    Ok(circuit)
}

/// Picks the most specific gate kind that reproduces `m` to within the
/// unitarity tolerance.
pub fn classify_single_qubit(m: &Mat2) -> GateKind {
    const TOL: f64 = 1e-12;
    if m.max_abs_diff(&Mat2::PAULI_X) <= TOL {
        return GateKind::X;
    }
    if m.max_abs_diff(&Mat2::HADAMARD) <= TOL {
        return GateKind::H;
    }
    if m.is_real(TOL) {
        let theta = m.get(0, 1).re.atan2(m.get(0, 0).re);
        if m.max_abs_diff(&Mat2::rotation(theta)) <= TOL {
            return GateKind::Rot(theta);
        }
    }
    GateKind::U2(*m)
}

/// The synthesis splitting circuit of a word at the given modulus: one
/// sub-circuit per step, first step first. Shifts become increment or
/// decrement circuits (power-of-two or general form as the modulus demands),
/// rotations become conditioned single-qubit gates.
pub fn build_split_synthesis(
    n_data: usize,
    word: &SplitWord,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    build_split_synthesis_with_mode(n_data, word, modulus, window, controls, ConditionMode::Targeted)
}

pub fn build_split_synthesis_with_mode(
    n_data: usize,
    word: &SplitWord,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
    mode: ConditionMode,
) -> Result<Circuit, BuildError> {
    if !modulus.is_multiple_of(2) {
        return Err(BuildError::OddModulus(modulus));
    }
    if modulus < 2 {
        return Err(BuildError::ModulusTooSmall(modulus));
    }
    check_window(n_data, &window, controls)?;
    if window.len() != ceil_log2(modulus) {
        return Err(BuildError::WindowModulusMismatch {
            width: window.len(),
            modulus,
        });
    }

    let mut circuit = Circuit::new(n_data, 0);
    for step in word.steps() {
        let part = match step {
            SplitStep::Rot(m) => build_local_rotation(n_data, *m, window.clone(), controls)?,
            SplitStep::Shift(direction) => {
                let forward = if modulus.is_power_of_two() {
                    build_increment_pow2_with_mode(n_data, window.clone(), controls, mode)?
                } else {
                    build_increment_mod_with_mode(n_data, modulus, window.clone(), controls, mode)?
                };
                match direction {
                    ShiftDirection::Forward => forward,
                    ShiftDirection::Backward => forward.inverted()?,
                }
            }
        };
        circuit = compose(&circuit, &part)?;
    }
    Ok(circuit)
}

/// The analysis splitting circuit: the synthesis circuit run backwards, so
/// its matrix is the adjoint of the synthesis matrix.
pub fn build_split_analysis(
    n_data: usize,
    word: &SplitWord,
    modulus: usize,
    window: Range<usize>,
    controls: &[ControlSpec],
) -> Result<Circuit, BuildError> {
    Ok(build_split_synthesis(n_data, word, modulus, window, controls)?.inverted()?)
}

/// The full transform circuit for a plan: analysis splits at levels 1..=J,
/// level j on qubit window [j-1, n-1] with modulus length/2^(j-1). Packet
/// levels are unconditioned; pyramid levels j >= 2 are conditioned on the
/// low j-1 qubits being zero. The circuit always emits interleaved
/// coefficients; the plan's ordering only affects classical post-processing.
pub fn build_transform(plan: &TransformPlan, word: &SplitWord) -> Result<Circuit, BuildError> {
    plan.validate()?;
    let n = plan.n_qubits();
    let mut circuit = Circuit::new(n, 0);
    for level in 1..=plan.depth {
        let window = (level - 1)..n;
        let modulus = plan.level_modulus(level);
        let controls: Vec<ControlSpec> = match plan.kind {
            TransformKind::Packet => Vec::new(),
            TransformKind::Pyramid => (0..level - 1)
                .map(|q| ControlSpec::negative(QubitRef::data(q)))
                .collect(),
        };
        let split = build_split_analysis(n, word, modulus, window, &controls)?;
        circuit = compose(&circuit, &split)?;
    }
    Ok(circuit)
}

/// Builds the splitting word of a rotation-lattice filter: rotations
/// interleaved with one-step polyphase delays. The delay is encoded as
/// Shift(+1) followed by Rot(X), which fixes even basis vectors and moves
/// e_{2k+1} to e_{2k+3}. An optional parity-fix rotation is inserted as the
/// very first synthesis step; it is used to restore filter pairs whose
/// polyphase determinant is negative (the lattice itself only reaches
/// determinant +1).
pub fn lattice_to_word(
    angles: &[f64],
    parity_fix: Option<Mat2>,
) -> Result<SplitWord, BuildError> {
    if angles.is_empty() {
        return Err(BuildError::EmptyAngles);
    }
    let mut steps = Vec::new();
    if let Some(fix) = parity_fix {
        steps.push(SplitStep::Rot(fix));
    }
    steps.push(SplitStep::Rot(Mat2::rotation(angles[0])));
    for &theta in &angles[1..] {
        steps.push(SplitStep::Shift(ShiftDirection::Forward));
        steps.push(SplitStep::Rot(Mat2::PAULI_X));
        steps.push(SplitStep::Rot(Mat2::rotation(theta)));
    }
    SplitWord::new(steps)
}
