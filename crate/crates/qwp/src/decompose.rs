//! Reduction of arbitrary circuits to the elementary gate set: uncontrolled
//! single-qubit gates plus the singly-controlled NOT.
//!
//! The reduction rules are
//! - negative controls are turned positive by conjugating the control qubit
//!   with X;
//! - a singly-controlled unitary becomes the phase/ABC pattern: three
//!   single-qubit gates on the target, two CNOTs, and one phase gate on the
//!   control (the real-rotation case uses the cheaper two-CNOT half-angle
//!   form instead);
//! - a doubly-controlled NOT becomes the standard 15-gate T/H circuit, so a
//!   Toffoli carries a fixed elementary cost of 15;
//! - a gate with c >= 2 controls folds its controls into fresh scratch
//!   ancillas with a chain of c-1 Toffolis, applies the singly-controlled
//!   gate from the last ancilla, and uncomputes the chain.
//!
//! Scratch ancillas are appended after the circuit's own ancillas and are
//! returned to |0> after every gate, so one scratch block serves the whole
//! circuit.

use crate::circuit::{
    Circuit, CircuitError, ControlSpec, Gate, GateKind, Polarity, QubitRef,
};
use crate::math::Mat2;
use num_complex::Complex64;
use std::f64::consts::{FRAC_PI_4, PI};

/// Number of elementary gates in the Toffoli expansion used here.
pub const TOFFOLI_ELEMENTARY_COST: usize = 15;

/// Rewrites the circuit into elementary gates only. The result acts
/// identically on the data qubits (ancillas in and out |0>); extra scratch
/// ancillas show up in the output's ancilla count.
pub fn decompose_to_elementary(circuit: &Circuit) -> Result<Circuit, CircuitError> {
    let violations = circuit.validate();
    if !violations.is_empty() {
        return Err(CircuitError::Invalid(crate::circuit::ViolationList(
            violations,
        )));
    }
    Ok(decompose_unchecked(circuit))
}

/// The decomposition body, without the validity gate. Used by gate counting,
/// which promises not to fail.
pub(crate) fn decompose_unchecked(circuit: &Circuit) -> Circuit {
    let scratch = circuit
        .gates()
        .iter()
        .map(scratch_needed)
        .max()
        .unwrap_or(0);
    let scratch_base = circuit.n_ancilla();
    let mut out = Circuit::new(circuit.n_data(), circuit.n_ancilla() + scratch);
    for gate in circuit.gates() {
        emit_gate(gate, scratch_base, &mut out);
    }
    out
}

fn scratch_needed(gate: &Gate) -> usize {
    let c = gate.controls.len();
    if c < 2 || (c == 2 && matches!(gate.kind, GateKind::X)) {
        0
    } else {
        c - 1
    }
}

fn emit_gate(gate: &Gate, scratch_base: usize, out: &mut Circuit) {
    if gate.controls.is_empty() {
        out.push(gate.clone());
        return;
    }

    // Flip negative controls to positive by X-conjugation.
    let negatives: Vec<QubitRef> = gate
        .controls
        .iter()
        .filter(|c| c.polarity == Polarity::Negative)
        .map(|c| c.qubit)
        .collect();
    for &q in &negatives {
        out.push(Gate::x(q));
    }
    let positives: Vec<QubitRef> = gate.controls.iter().map(|c| c.qubit).collect();

    match (positives.len(), &gate.kind) {
        (1, GateKind::X) => {
            out.push(Gate::x(gate.target).with_controls(vec![ControlSpec::positive(positives[0])]));
        }
        (1, kind) => emit_controlled_single(kind, positives[0], gate.target, out),
        (2, GateKind::X) => emit_toffoli(positives[0], positives[1], gate.target, out),
        (c, kind) => {
            // Fold the controls into a scratch chain, fire once, uncompute.
            let scratch: Vec<QubitRef> = (0..c - 1)
                .map(|i| QubitRef::ancilla(scratch_base + i))
                .collect();
            let mut chain: Vec<(QubitRef, QubitRef, QubitRef)> = Vec::with_capacity(c - 1);
            chain.push((positives[0], positives[1], scratch[0]));
            for i in 2..c {
                chain.push((positives[i], scratch[i - 2], scratch[i - 1]));
            }
            for &(a, b, t) in &chain {
                emit_toffoli(a, b, t, out);
            }
            let head = scratch[c - 2];
            match kind {
                GateKind::X => out
                    .push(Gate::x(gate.target).with_controls(vec![ControlSpec::positive(head)])),
                other => emit_controlled_single(other, head, gate.target, out),
            }
            for &(a, b, t) in chain.iter().rev() {
                emit_toffoli(a, b, t, out);
            }
        }
    }

    for &q in &negatives {
        out.push(Gate::x(q));
    }
}

/// Singly-controlled single-qubit gate.
///
/// Real rotations use C-R(t) = [CX, R(-t/2), CX, R(t/2)]; everything else
/// uses the phase/ABC pattern from the ZYZ angles of the target unitary.
fn emit_controlled_single(kind: &GateKind, control: QubitRef, target: QubitRef, out: &mut Circuit) {
    if let GateKind::Rot(theta) = kind {
        let cx = Gate::x(target).with_controls(vec![ControlSpec::positive(control)]);
        out.push(cx.clone());
        out.push(Gate::rot(-theta / 2.0, target));
        out.push(cx);
        out.push(Gate::rot(theta / 2.0, target));
        return;
    }

    let u = kind.matrix();
    let (alpha, beta, gamma, delta) = zyz_angles(&u);
    let a = Mat2::rz(beta).mul(&Mat2::ry(gamma / 2.0));
    let b = Mat2::ry(-gamma / 2.0).mul(&Mat2::rz(-(delta + beta) / 2.0));
    let c = Mat2::rz((delta - beta) / 2.0);
    let cx = Gate::x(target).with_controls(vec![ControlSpec::positive(control)]);

    out.push(Gate::u2(c, target));
    out.push(cx.clone());
    out.push(Gate::u2(b, target));
    out.push(cx);
    out.push(Gate::u2(a, target));
    let wrapped = alpha.rem_euclid(2.0 * PI);
    if wrapped.min(2.0 * PI - wrapped) > 1e-15 {
        out.push(Gate::u2(Mat2::phase(alpha), control));
    }
}

/// ZYZ factorisation: U = e^{i alpha} Rz(beta) Ry(gamma) Rz(delta).
fn zyz_angles(u: &Mat2) -> (f64, f64, f64, f64) {
    let det = u.get(0, 0) * u.get(1, 1) - u.get(0, 1) * u.get(1, 0);
    let alpha = det.arg() / 2.0;
    let scale = Complex64::from_polar(1.0, -alpha);
    let v00 = u.get(0, 0) * scale;
    let v10 = u.get(1, 0) * scale;
    let gamma = 2.0 * v10.norm().atan2(v00.norm());
    let (beta, delta);
    if v00.norm() > 1e-12 && v10.norm() > 1e-12 {
        let sum = -2.0 * v00.arg();
        let diff = 2.0 * v10.arg();
        beta = (sum + diff) / 2.0;
        delta = (sum - diff) / 2.0;
    } else if v10.norm() <= 1e-12 {
        beta = -2.0 * v00.arg();
        delta = 0.0;
    } else {
        beta = 2.0 * v10.arg();
        delta = 0.0;
    }
    (alpha, beta, gamma, delta)
}

/// The standard 15-gate Toffoli circuit over T, T†, H and CNOT.
fn emit_toffoli(c1: QubitRef, c2: QubitRef, target: QubitRef, out: &mut Circuit) {
    let t_gate = Mat2::phase(FRAC_PI_4);
    let t_dag = Mat2::phase(-FRAC_PI_4);
    let cx = |ctl: QubitRef, tgt: QubitRef| {
        Gate::x(tgt).with_controls(vec![ControlSpec::positive(ctl)])
    };

    out.push(Gate::h(target));
    out.push(cx(c2, target));
    out.push(Gate::u2(t_dag, target));
    out.push(cx(c1, target));
    out.push(Gate::u2(t_gate, target));
    out.push(cx(c2, target));
    out.push(Gate::u2(t_dag, target));
    out.push(cx(c1, target));
    out.push(Gate::u2(t_gate, c2));
    out.push(Gate::u2(t_gate, target));
    out.push(Gate::h(target));
    out.push(cx(c1, c2));
    out.push(Gate::u2(t_gate, c1));
    out.push(Gate::u2(t_dag, c2));
    out.push(cx(c1, c2));
}

/// Convenience used by tests: true if the gate is in the elementary set.
pub fn is_elementary(gate: &Gate) -> bool {
    match gate.controls.len() {
        0 => true,
        1 => matches!(gate.kind, GateKind::X) && gate.controls[0].polarity == Polarity::Positive,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_gates;
    use crate::simulator::extract_matrix;

    fn toffoli_permutation(dim: usize, c1: usize, c2: usize, t: usize) -> Vec<usize> {
        (0..dim)
            .map(|m| {
                if m & (1 << c1) != 0 && m & (1 << c2) != 0 {
                    m ^ (1 << t)
                } else {
                    m
                }
            })
            .collect()
    }

    #[test]
    #[allow(clippy::needless_range_loop)]
    fn toffoli_matches_permutation_matrix() {
        // Brute-force oracle: the Toffoli permutation on all 8 basis states.
        let mut c = Circuit::new(3, 0);
        c.push(Gate::x(QubitRef::data(0)).with_controls(vec![
            ControlSpec::positive(QubitRef::data(1)),
            ControlSpec::positive(QubitRef::data(2)),
        ]));
        let elem = decompose_to_elementary(&c).unwrap();
        assert!(elem.gates().iter().all(is_elementary));
        assert_eq!(elem.len(), TOFFOLI_ELEMENTARY_COST);

        let m = extract_matrix(&elem).unwrap();
        let perm = toffoli_permutation(8, 1, 2, 0);
        for col in 0..8 {
            for row in 0..8 {
                let expected = if perm[col] == row { 1.0 } else { 0.0 };
                assert!((m.get(row, col).re - expected).abs() < 1e-10);
                assert!(m.get(row, col).im.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn singly_controlled_not_passes_through() {
        let mut c = Circuit::new(2, 0);
        c.push(
            Gate::x(QubitRef::data(0))
                .with_controls(vec![ControlSpec::positive(QubitRef::data(1))]),
        );
        let elem = decompose_to_elementary(&c).unwrap();
        assert_eq!(elem.gates(), c.gates());
    }

    #[test]
    fn four_controlled_x_grows_linearly_and_matches() {
        // 4-controlled X on 6 data qubits, verified by exhaustive basis
        // simulation against the integer-level oracle.
        let controls: Vec<ControlSpec> = (1..5)
            .map(|i| ControlSpec::positive(QubitRef::data(i)))
            .collect();
        let mut c = Circuit::new(6, 0);
        c.push(Gate::x(QubitRef::data(0)).with_controls(controls));
        let elem = decompose_to_elementary(&c).unwrap();
        assert!(elem.gates().iter().all(is_elementary));
        // chain of 2*(c-1) Toffolis plus one CNOT
        assert_eq!(elem.len(), 6 * TOFFOLI_ELEMENTARY_COST + 1);

        let m = extract_matrix(&elem).unwrap();
        for col in 0..64usize {
            let expected = if col & 0b11110 == 0b11110 { col ^ 1 } else { col };
            for row in 0..64 {
                let want = if row == expected { 1.0 } else { 0.0 };
                assert!(
                    (m.get(row, col) - Complex64::new(want, 0.0)).norm() < 1e-9,
                    "col {col} row {row}"
                );
            }
        }
    }

    #[test]
    fn controlled_hadamard_matches_block_matrix() {
        let mut c = Circuit::new(2, 0);
        c.push(
            Gate::h(QubitRef::data(0))
                .with_controls(vec![ControlSpec::positive(QubitRef::data(1))]),
        );
        let elem = decompose_to_elementary(&c).unwrap();
        assert!(elem.gates().iter().all(is_elementary));
        let got = extract_matrix(&elem).unwrap();
        let want = extract_matrix(&c).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-12);
    }

    #[test]
    fn negative_control_uses_x_conjugation() {
        let mut c = Circuit::new(2, 0);
        c.push(
            Gate::x(QubitRef::data(0))
                .with_controls(vec![ControlSpec::negative(QubitRef::data(1))]),
        );
        let elem = decompose_to_elementary(&c).unwrap();
        assert_eq!(elem.len(), 3);
        let got = extract_matrix(&elem).unwrap();
        let want = extract_matrix(&c).unwrap();
        assert!(got.max_abs_diff(&want) < 1e-14);
    }

    #[test]
    fn count_consistency_after_decomposition() {
        let mut c = Circuit::new(3, 0);
        c.push(Gate::x(QubitRef::data(0)).with_controls(vec![
            ControlSpec::positive(QubitRef::data(1)),
            ControlSpec::negative(QubitRef::data(2)),
        ]));
        c.push(Gate::h(QubitRef::data(2)));
        let elem = decompose_to_elementary(&c).unwrap();
        let report = count_gates(&elem);
        assert_eq!(report.elementary_total, elem.len());
        assert!(report.elementary_total >= report.logical_total());
    }
}
