//! Quantum circuits for periodized wavelet and wavelet packet transforms.
//!
//! The crate builds gate-level circuits for filter-bank transforms on
//! cyclic signal spaces and checks every one of them against a classical
//! implementation of the same transform:
//!
//! - [`circuit`] is the gate IR: X/H/R(θ)/U2 gates with positive and
//!   negative multi-controls, inversion, composition, gate counting, and
//!   reduction to elementary gates ([`decompose`]).
//! - [`simulator`] applies circuits to dense state vectors and extracts
//!   unitary matrices for small registers.
//! - [`builders`] constructs the circuits: Walsh-Hadamard stages, modular
//!   increments built from Toffoli carry chains, local rotations, splitting
//!   steps assembled from words of rotations and translations, and full
//!   packet/pyramid transforms.
//! - [`classical`] is the ground truth: periodized QMF pairs, splitting
//!   matrices, filter-bank transforms, subband reordering.
//! - [`lattice`] factors orthogonal filter pairs into rotation angles and
//!   reconstructs them, which is how arbitrary filters become circuits.
//! - [`cli`] wires everything into the `qwp` binary.
//!
//! ```
//! use qwp::builders::{build_transform, TransformKind, TransformPlan, CoefficientOrder};
//! use qwp::classical::haar_word;
//! use qwp::simulator::extract_matrix;
//!
//! // A full Haar packet tree on 8 points is the Walsh-Hadamard transform.
//! let plan = TransformPlan::new(
//!     TransformKind::Packet, 3, 8, CoefficientOrder::Interleaved,
//! ).unwrap();
//! let circuit = build_transform(&plan, &haar_word()).unwrap();
//! let matrix = extract_matrix(&circuit).unwrap();
//! assert!((matrix.get(0, 0).re - 1.0 / 8f64.sqrt()).abs() < 1e-12);
//! ```
//!
//! Runnable walkthroughs of each capability live in `examples/`.

pub mod builders;
pub mod circuit;
pub mod classical;
pub mod cli;
pub mod decompose;
pub mod format;
pub mod lattice;
pub mod math;
pub mod simulator;

pub use builders::{
    build_increment_mod, build_increment_pow2, build_local_rotation, build_split_analysis,
    build_split_synthesis, build_transform, build_walsh_hadamard, lattice_to_word,
    CoefficientOrder, SplitStep, SplitWord, TransformKind, TransformPlan,
};
pub use circuit::{
    compose, count_gates, Circuit, ControlSpec, Gate, GateCountReport, GateKind, Polarity,
    QubitRef,
};
pub use classical::{
    classical_transform, extract_qmf, qmf_check, splitting_matrix_from_pair,
    splitting_matrix_from_word, subband_permutation, QmfPair, SplitDirection,
};
pub use decompose::decompose_to_elementary;
pub use lattice::{lattice_factor, LatticeFactorization};
pub use math::Mat2;
pub use simulator::{apply_circuit, extract_matrix, DenseMatrix, StateVector};
