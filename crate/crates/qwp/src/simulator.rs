//! Dense statevector simulation and matrix extraction.
//!
//! This is the ground-truth executor: every circuit in the crate is checked
//! by running it here and comparing against the classical filter-bank path.
//! States are dense complex vectors of length 2^(data + ancilla); inputs need
//! not be normalized, since transforms act on arbitrary signals.

use crate::circuit::{Circuit, Gate, Polarity};
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

/// Largest data register for which dense matrix extraction is allowed.
pub const MAX_MATRIX_QUBITS: usize = 10;

/// Amplitude threshold above which a supposedly restored ancilla counts as
/// leaked during matrix extraction.
pub const ANCILLA_LEAK_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("state has {state} qubits but the circuit addresses {circuit}")]
    DimensionMismatch { state: usize, circuit: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("matrix extraction limited to {MAX_MATRIX_QUBITS} data qubits, got {0}")]
    TooManyQubits(usize),
    #[error("ancilla not restored to |0> on basis column {column} (amplitude {amplitude:.3e})")]
    AncillaNotRestored { column: usize, amplitude: f64 },
    #[error(
        "circuit leaks basis column {column} outside the first {dim} states (amplitude {amplitude:.3e})"
    )]
    SubspaceLeak {
        column: usize,
        dim: usize,
        amplitude: f64,
    },
}

/// A dense register state. Index m holds the coefficient of the basis state
/// |a_{n-1} ... a_1 a_0> with m = sum a_i 2^i.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// The computational basis state |index>.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![Complex64::ZERO; 1 << n_qubits];
        amplitudes[index] = Complex64::ONE;
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        Ok(StateVector {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

/// Places a 2^n_data signal into the circuit's full register with all
/// ancillas |0>.
pub fn embed_signal(signal: &[Complex64], circuit: &Circuit) -> Result<StateVector, SimError> {
    if signal.len() != 1 << circuit.n_data() {
        return Err(SimError::DimensionMismatch {
            state: signal.len().trailing_zeros() as usize,
            circuit: circuit.n_data(),
        });
    }
    let mut amplitudes = vec![Complex64::ZERO; 1 << circuit.n_qubits()];
    amplitudes[..signal.len()].copy_from_slice(signal);
    Ok(StateVector {
        n_qubits: circuit.n_qubits(),
        amplitudes,
    })
}

/// Reads the data-register amplitudes back out of a full-register state,
/// checking that nothing leaked into the ancillas.
pub fn extract_data_amplitudes(
    state: &StateVector,
    circuit: &Circuit,
) -> Result<Vec<Complex64>, SimError> {
    if state.n_qubits != circuit.n_qubits() {
        return Err(SimError::DimensionMismatch {
            state: state.n_qubits,
            circuit: circuit.n_qubits(),
        });
    }
    let dim = 1usize << circuit.n_data();
    let tol = ANCILLA_LEAK_TOL * state.norm().max(1.0);
    for (i, amp) in state.amplitudes.iter().enumerate().skip(dim) {
        if amp.norm() > tol {
            return Err(SimError::AncillaNotRestored {
                column: i,
                amplitude: amp.norm(),
            });
        }
    }
    Ok(state.amplitudes[..dim].to_vec())
}

/// Applies the circuit's gates, first to last, to a copy of the state.
pub fn apply_circuit(state: &StateVector, circuit: &Circuit) -> Result<StateVector, SimError> {
    if state.n_qubits != circuit.n_qubits() {
        return Err(SimError::DimensionMismatch {
            state: state.n_qubits,
            circuit: circuit.n_qubits(),
        });
    }
    let mut amplitudes = state.amplitudes.clone();
    for gate in circuit.gates() {
        apply_gate(&mut amplitudes, circuit.n_data(), gate);
    }
    Ok(StateVector {
        n_qubits: state.n_qubits,
        amplitudes,
    })
}

fn apply_gate(amplitudes: &mut [Complex64], n_data: usize, gate: &Gate) {
    let target_bit = 1usize << gate.target.global_index(n_data);
    let mut positive_mask = 0usize;
    let mut negative_mask = 0usize;
    for ctrl in &gate.controls {
        let bit = 1usize << ctrl.qubit.global_index(n_data);
        match ctrl.polarity {
            Polarity::Positive => positive_mask |= bit,
            Polarity::Negative => negative_mask |= bit,
        }
    }
    let m = gate.kind.matrix();
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));

    for low in 0..amplitudes.len() {
        if low & target_bit != 0 {
            continue;
        }
        if low & positive_mask != positive_mask || low & negative_mask != 0 {
            continue;
        }
        let high = low | target_bit;
        let a = amplitudes[low];
        let b = amplitudes[high];
        amplitudes[low] = m00 * a + m01 * b;
        amplitudes[high] = m10 * a + m11 * b;
    }
}

/// A dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        DenseMatrix {
            dim,
            data: vec![Complex64::ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.set(i, i, Complex64::ONE);
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for row in 0..dim {
            for col in 0..dim {
                m.set(row, col, f(row, col));
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        self.data[row * self.dim + col] = value;
    }

    pub fn mul(&self, other: &DenseMatrix) -> DenseMatrix {
        assert_eq!(self.dim, other.dim);
        let mut out = Self::zeros(self.dim);
        for row in 0..self.dim {
            for k in 0..self.dim {
                let a = self.get(row, k);
                if a == Complex64::ZERO {
                    continue;
                }
                for col in 0..self.dim {
                    let v = out.get(row, col) + a * other.get(k, col);
                    out.set(row, col, v);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|row| {
                (0..self.dim)
                    .map(|col| self.get(row, col) * v[col])
                    .sum::<Complex64>()
            })
            .collect()
    }

    pub fn adjoint(&self) -> DenseMatrix {
        Self::from_fn(self.dim, |row, col| self.get(col, row).conj())
    }

    pub fn kron(&self, other: &DenseMatrix) -> DenseMatrix {
        let dim = self.dim * other.dim;
        let mut out = Self::zeros(dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let a = self.get(i, j);
                for k in 0..other.dim {
                    for l in 0..other.dim {
                        out.set(i * other.dim + k, j * other.dim + l, a * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn max_abs_diff(&self, other: &DenseMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Max-norm residual of M†M - I.
    pub fn unitarity_residual(&self) -> f64 {
        self.adjoint().mul(self).max_abs_diff(&Self::identity(self.dim))
    }

    /// Like [`max_abs_diff`](Self::max_abs_diff) but also reports the column
    /// holding the largest entry difference.
    pub fn worst_column_diff(&self, other: &DenseMatrix) -> (f64, usize) {
        let mut worst = (0.0f64, 0usize);
        for col in 0..self.dim {
            for row in 0..self.dim {
                let d = (self.get(row, col) - other.get(row, col)).norm();
                if d > worst.0 {
                    worst = (d, col);
                }
            }
        }
        worst
    }
}

/// Extracts the full unitary on the data register by simulating every basis
/// column with ancillas in |0>, verifying that the ancillas come back to |0>.
/// Columns are simulated in parallel; they share only the circuit.
pub fn extract_matrix(circuit: &Circuit) -> Result<DenseMatrix, SimError> {
    extract_columns(circuit, 1 << circuit.n_data(), false)
}

/// Extracts the upper-left `dim` x `dim` block of the circuit's action,
/// additionally checking that basis states below `dim` are mapped back below
/// `dim`. This is the extraction to use for general-modulus circuits, whose
/// contract only covers the embedded signal subspace.
pub fn extract_matrix_block(circuit: &Circuit, dim: usize) -> Result<DenseMatrix, SimError> {
    extract_columns(circuit, dim, true)
}

fn extract_columns(
    circuit: &Circuit,
    dim: usize,
    block_check: bool,
) -> Result<DenseMatrix, SimError> {
    if circuit.n_data() > MAX_MATRIX_QUBITS {
        return Err(SimError::TooManyQubits(circuit.n_data()));
    }
    let full = 1usize << circuit.n_data();
    assert!(dim <= full, "block dimension exceeds the data register");

    let columns: Vec<Result<Vec<Complex64>, SimError>> = (0..dim)
        .into_par_iter()
        .map(|col| {
            let input = StateVector::basis(circuit.n_qubits(), col);
            let output = apply_circuit(&input, circuit)?;
            for amp in output.amplitudes.iter().skip(full) {
                if amp.norm() > ANCILLA_LEAK_TOL {
                    return Err(SimError::AncillaNotRestored {
                        column: col,
                        amplitude: amp.norm(),
                    });
                }
            }
            if block_check {
                for amp in output.amplitudes.iter().take(full).skip(dim) {
                    if amp.norm() > ANCILLA_LEAK_TOL {
                        return Err(SimError::SubspaceLeak {
                            column: col,
                            dim,
                            amplitude: amp.norm(),
                        });
                    }
                }
            }
            Ok(output.amplitudes[..dim].to_vec())
        })
        .collect();

    let mut matrix = DenseMatrix::zeros(dim);
    for (col, result) in columns.into_iter().enumerate() {
        let column = result?;
        for (row, amp) in column.into_iter().enumerate() {
            matrix.set(row, col, amp);
        }
    }
    Ok(matrix)
}
