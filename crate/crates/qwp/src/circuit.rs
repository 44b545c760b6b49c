//! Gate-level circuit representation.
//!
//! A [`Circuit`] is an ordered list of single-target gates over a register of
//! data qubits and a register of ancilla qubits. Qubit 0 is the least
//! significant bit of the basis-state index, so a basis state decomposes as
//! |a_{n-1} ... a_1 a_0> with index m = sum a_i 2^i. Gates are applied
//! first-to-last, like a score read left to right; as matrices the circuit
//! therefore left-multiplies the state with the product of its gate matrices
//! taken right-to-left.
//!
//! Ancilla qubits are contractually |0> at circuit entry and every builder in
//! this crate restores them to |0> at exit, which is what allows circuits with
//! different ancilla demands to share one scratch register when composed.

use crate::math::Mat2;
use thiserror::Error;

/// Register a qubit index refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum QubitRole {
    Data,
    Ancilla,
}

/// A qubit reference: an index within either the data or the ancilla register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QubitRef {
    pub index: usize,
    pub role: QubitRole,
}

impl QubitRef {
    pub fn data(index: usize) -> Self {
        QubitRef {
            index,
            role: QubitRole::Data,
        }
    }

    pub fn ancilla(index: usize) -> Self {
        QubitRef {
            index,
            role: QubitRole::Ancilla,
        }
    }

    /// Position of this qubit in the combined register, with the ancilla
    /// block sitting above the data block.
    pub fn global_index(&self, n_data: usize) -> usize {
        match self.role {
            QubitRole::Data => self.index,
            QubitRole::Ancilla => n_data + self.index,
        }
    }
}

/// Control polarity: positive fires on |1>, negative fires on |0>.
///
/// Negative controls are first-class here because the splitting circuits
/// condition on the all-zero pattern of the low qubits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Polarity {
    Positive,
    Negative,
}

/// One control condition of a gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ControlSpec {
    pub qubit: QubitRef,
    pub polarity: Polarity,
}

impl ControlSpec {
    pub fn positive(qubit: QubitRef) -> Self {
        ControlSpec {
            qubit,
            polarity: Polarity::Positive,
        }
    }

    pub fn negative(qubit: QubitRef) -> Self {
        ControlSpec {
            qubit,
            polarity: Polarity::Negative,
        }
    }
}

/// The single-qubit operation a gate applies to its target.
///
/// `Rot(theta)` is the real rotation [[cos t, sin t], [-sin t, cos t]];
/// `U2` is an arbitrary (expected unitary) 2x2 matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    X,
    H,
    Rot(f64),
    U2(Mat2),
}

impl GateKind {
    pub fn matrix(&self) -> Mat2 {
        match self {
            GateKind::X => Mat2::PAULI_X,
            GateKind::H => Mat2::HADAMARD,
            GateKind::Rot(theta) => Mat2::rotation(*theta),
            GateKind::U2(m) => *m,
        }
    }

    /// Adjoint of the operation, staying within the same kind.
    pub fn adjoint(&self) -> GateKind {
        match self {
            GateKind::X => GateKind::X,
            GateKind::H => GateKind::H,
            GateKind::Rot(theta) => GateKind::Rot(-theta),
            GateKind::U2(m) => GateKind::U2(m.adjoint()),
        }
    }
}

/// A single-target gate with an arbitrary set of (possibly negative) controls.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub target: QubitRef,
    pub controls: Vec<ControlSpec>,
}

impl Gate {
    pub fn new(kind: GateKind, target: QubitRef, controls: Vec<ControlSpec>) -> Self {
        Gate {
            kind,
            target,
            controls,
        }
    }

    pub fn x(target: QubitRef) -> Self {
        Gate::new(GateKind::X, target, Vec::new())
    }

    pub fn h(target: QubitRef) -> Self {
        Gate::new(GateKind::H, target, Vec::new())
    }

    pub fn rot(theta: f64, target: QubitRef) -> Self {
        Gate::new(GateKind::Rot(theta), target, Vec::new())
    }

    pub fn u2(matrix: Mat2, target: QubitRef) -> Self {
        Gate::new(GateKind::U2(matrix), target, Vec::new())
    }

    pub fn with_controls(mut self, controls: Vec<ControlSpec>) -> Self {
        self.controls = controls;
        self
    }

    /// Appends further controls to an existing gate.
    pub fn add_controls(&mut self, extra: &[ControlSpec]) {
        self.controls.extend_from_slice(extra);
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            kind: self.kind.adjoint(),
            target: self.target,
            controls: self.controls.clone(),
        }
    }
}

/// Unitarity tolerance applied to stored U2 matrices.
pub const UNITARITY_TOL: f64 = 1e-12;

/// An ordered gate list over `n_data` data qubits and `n_ancilla` ancillas.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_data: usize,
    n_ancilla: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_data: usize, n_ancilla: usize) -> Self {
        Circuit {
            n_data,
            n_ancilla,
            gates: Vec::new(),
        }
    }

    pub fn with_gates(n_data: usize, n_ancilla: usize, gates: Vec<Gate>) -> Self {
        Circuit {
            n_data,
            n_ancilla,
            gates,
        }
    }

    pub fn n_data(&self) -> usize {
        self.n_data
    }

    pub fn n_ancilla(&self) -> usize {
        self.n_ancilla
    }

    pub fn n_qubits(&self) -> usize {
        self.n_data + self.n_ancilla
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Grows the ancilla register if `count` exceeds the current size.
    pub fn ensure_ancillas(&mut self, count: usize) {
        self.n_ancilla = self.n_ancilla.max(count);
    }

    fn qubit_in_range(&self, q: QubitRef) -> bool {
        match q.role {
            QubitRole::Data => q.index < self.n_data,
            QubitRole::Ancilla => q.index < self.n_ancilla,
        }
    }

    /// Checks every structural invariant and returns the list of violations.
    /// An empty report means the circuit is valid. This never fails; it is
    /// the reporting half of the validation story.
    pub fn validate(&self) -> Vec<Violation> {
        let mut violations = Vec::new();
        for (i, gate) in self.gates.iter().enumerate() {
            if !self.qubit_in_range(gate.target) {
                violations.push(Violation {
                    gate: Some(i),
                    message: format!("target {:?} out of range", gate.target),
                });
            }
            for ctrl in &gate.controls {
                if !self.qubit_in_range(ctrl.qubit) {
                    violations.push(Violation {
                        gate: Some(i),
                        message: format!("control {:?} out of range", ctrl.qubit),
                    });
                }
                if ctrl.qubit == gate.target {
                    violations.push(Violation {
                        gate: Some(i),
                        message: "target in controls".to_string(),
                    });
                }
            }
            for (a, ca) in gate.controls.iter().enumerate() {
                for cb in gate.controls.iter().skip(a + 1) {
                    if ca.qubit == cb.qubit {
                        violations.push(Violation {
                            gate: Some(i),
                            message: format!("duplicate control {:?}", ca.qubit),
                        });
                    }
                }
            }
            if let GateKind::U2(m) = &gate.kind {
                let residual = m.unitarity_residual();
                if residual > UNITARITY_TOL {
                    violations.push(Violation {
                        gate: Some(i),
                        message: format!("non-unitary U2 matrix (residual {residual:.3e})"),
                    });
                }
            }
        }
        violations
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn require_valid(&self) -> Result<(), CircuitError> {
        let violations = self.validate();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(CircuitError::Invalid(ViolationList(violations)))
        }
    }

    /// The adjoint circuit: gate order reversed and every gate replaced by
    /// its adjoint, controls unchanged. Running it undoes the original.
    pub fn inverted(&self) -> Result<Circuit, CircuitError> {
        self.require_valid()?;
        Ok(Circuit {
            n_data: self.n_data,
            n_ancilla: self.n_ancilla,
            gates: self.gates.iter().rev().map(Gate::adjoint).collect(),
        })
    }
}

/// A single invariant breach found by [`Circuit::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// Index of the offending gate, if the breach is tied to one.
    pub gate: Option<usize>,
    pub message: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.gate {
            Some(i) => write!(f, "gate {}: {}", i, self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ViolationList(pub Vec<Violation>);

impl std::fmt::Display for ViolationList {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|v| v.to_string()).collect();
        write!(f, "{}", parts.join("; "))
    }
}

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("invalid circuit: {0}")]
    Invalid(ViolationList),
    #[error("data register mismatch: {left} vs {right} qubits")]
    DataMismatch { left: usize, right: usize },
}

/// Concatenates two circuits over the same data register, applying `a` first.
/// Ancilla registers are merged by taking the maximum; this relies on the
/// restored-to-zero contract so the scratch space can be shared.
pub fn compose(a: &Circuit, b: &Circuit) -> Result<Circuit, CircuitError> {
    if a.n_data != b.n_data {
        return Err(CircuitError::DataMismatch {
            left: a.n_data,
            right: b.n_data,
        });
    }
    let mut gates = a.gates.clone();
    gates.extend(b.gates.iter().cloned());
    Ok(Circuit {
        n_data: a.n_data,
        n_ancilla: a.n_ancilla.max(b.n_ancilla),
        gates,
    })
}

/// Gate tallies for one kind, bucketed by control count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ControlHistogram {
    pub uncontrolled: usize,
    pub single: usize,
    pub double: usize,
    pub triple_plus: usize,
}

impl ControlHistogram {
    pub fn total(&self) -> usize {
        self.uncontrolled + self.single + self.double + self.triple_plus
    }

    fn record(&mut self, controls: usize) {
        match controls {
            0 => self.uncontrolled += 1,
            1 => self.single += 1,
            2 => self.double += 1,
            _ => self.triple_plus += 1,
        }
    }
}

/// Logical gate counts plus the cost after reduction to the elementary set
/// (uncontrolled single-qubit gates and the singly-controlled NOT).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct GateCountReport {
    pub x: ControlHistogram,
    pub h: ControlHistogram,
    pub rot: ControlHistogram,
    pub u2: ControlHistogram,
    pub elementary_total: usize,
}

impl GateCountReport {
    pub fn logical_total(&self) -> usize {
        self.x.total() + self.h.total() + self.rot.total() + self.u2.total()
    }
}

/// Tallies the circuit's gates and computes the elementary cost via
/// [`crate::decompose::decompose_to_elementary`] on a scratch copy; the
/// input circuit is left untouched.
pub fn count_gates(circuit: &Circuit) -> GateCountReport {
    let mut report = GateCountReport::default();
    for gate in &circuit.gates {
        let bucket = match gate.kind {
            GateKind::X => &mut report.x,
            GateKind::H => &mut report.h,
            GateKind::Rot(_) => &mut report.rot,
            GateKind::U2(_) => &mut report.u2,
        };
        bucket.record(gate.controls.len());
    }
    report.elementary_total = crate::decompose::decompose_unchecked(circuit).len();
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{C_ONE, C_ZERO};
    use num_complex::Complex64;

    #[test]
    fn validate_flags_target_in_controls() {
        let mut c = Circuit::new(3, 0);
        c.push(
            Gate::x(QubitRef::data(1)).with_controls(vec![ControlSpec::positive(QubitRef::data(
                1,
            ))]),
        );
        let report = c.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("target in controls"));
    }

    #[test]
    fn validate_passes_empty_circuit() {
        let c = Circuit::new(3, 0);
        assert!(c.validate().is_empty());
    }

    #[test]
    fn validate_flags_non_unitary_u2() {
        let mut c = Circuit::new(1, 0);
        let m = Mat2::new(C_ONE, C_ZERO, C_ZERO, Complex64::new(2.0, 0.0));
        c.push(Gate::u2(m, QubitRef::data(0)));
        let report = c.validate();
        assert_eq!(report.len(), 1);
        assert!(report[0].message.contains("non-unitary"));
    }

    #[test]
    fn validate_flags_out_of_range_and_duplicates() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::x(QubitRef::data(5)));
        c.push(Gate::x(QubitRef::ancilla(0)));
        c.push(Gate::x(QubitRef::data(0)).with_controls(vec![
            ControlSpec::positive(QubitRef::data(1)),
            ControlSpec::negative(QubitRef::data(1)),
        ]));
        let report = c.validate();
        assert_eq!(report.len(), 3);
    }

    #[test]
    fn invert_is_involution() {
        let mut c = Circuit::new(2, 0);
        c.push(Gate::h(QubitRef::data(0)));
        c.push(Gate::rot(0.37, QubitRef::data(1)));
        c.push(
            Gate::u2(Mat2::rz(1.2), QubitRef::data(0)).with_controls(vec![ControlSpec::negative(
                QubitRef::data(1),
            )]),
        );
        let back = c.inverted().unwrap().inverted().unwrap();
        assert_eq!(c, back);
    }

    #[test]
    fn invert_of_single_h_is_same_gate() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::h(QubitRef::data(0)));
        assert_eq!(c.inverted().unwrap(), c);
    }

    #[test]
    fn invert_rejects_invalid() {
        let mut c = Circuit::new(1, 0);
        c.push(Gate::x(QubitRef::data(3)));
        assert!(matches!(c.inverted(), Err(CircuitError::Invalid(_))));
    }

    #[test]
    fn compose_with_empty_is_identity_element() {
        let empty = Circuit::new(2, 0);
        let mut c = Circuit::new(2, 1);
        c.push(Gate::x(QubitRef::data(0)));
        c.push(Gate::x(QubitRef::ancilla(0)).with_controls(vec![ControlSpec::positive(
            QubitRef::data(1),
        )]));
        let composed = compose(&empty, &c).unwrap();
        assert_eq!(composed, c);
    }

    #[test]
    fn compose_rejects_data_mismatch() {
        let a = Circuit::new(2, 0);
        let b = Circuit::new(3, 0);
        assert!(matches!(
            compose(&a, &b),
            Err(CircuitError::DataMismatch { .. })
        ));
    }

    #[test]
    fn count_empty_circuit_is_all_zero() {
        let report = count_gates(&Circuit::new(3, 0));
        assert_eq!(report.logical_total(), 0);
        assert_eq!(report.elementary_total, 0);
    }
}
