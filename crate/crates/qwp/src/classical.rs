//! Classical ground truth: periodized QMF filter pairs, splitting matrices,
//! filter-bank transforms and coefficient reorderings.
//!
//! Everything in this module is computed with plain dense linear algebra and
//! never touches a circuit, so it can serve as the independent oracle the
//! circuit builders are verified against.

use crate::builders::{ShiftDirection, SplitStep, SplitWord, TransformKind, TransformPlan};
use crate::math::Mat2;
use crate::simulator::DenseMatrix;
use num_complex::Complex64;
use std::sync::OnceLock;
use thiserror::Error;

/// Residual bound for declaring a pair orthonormal.
pub const QMF_TOL: f64 = 1e-10;

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("period {0} must be even and at least 2")]
    BadPeriod(usize),
    #[error("filter taps must come in pairs of equal even length, got {alpha} and {beta}")]
    BadTapLengths { alpha: usize, beta: usize },
    #[error("signal length {signal} does not match plan length {plan}")]
    LengthMismatch { signal: usize, plan: usize },
    #[error(transparent)]
    Build(#[from] crate::builders::BuildError),
}

/// A quadrature mirror filter pair: two tap sequences whose even translates
/// are expected to form an orthonormal basis of the period-2N signal space.
/// Taps longer than the period are periodized by wrap-around summation,
/// mirroring what translation-mod-2N circuits do physically.
#[derive(Debug, Clone, PartialEq)]
pub struct QmfPair {
    alpha: Vec<Complex64>,
    beta: Vec<Complex64>,
    period: usize,
}

impl QmfPair {
    pub fn new(
        alpha: Vec<Complex64>,
        beta: Vec<Complex64>,
        period: usize,
    ) -> Result<Self, OracleError> {
        if period < 2 || !period.is_multiple_of(2) {
            return Err(OracleError::BadPeriod(period));
        }
        if alpha.len() != beta.len() || alpha.is_empty() || !alpha.len().is_multiple_of(2) {
            return Err(OracleError::BadTapLengths {
                alpha: alpha.len(),
                beta: beta.len(),
            });
        }
        Ok(QmfPair {
            alpha,
            beta,
            period,
        })
    }

    pub fn from_real(alpha: &[f64], beta: &[f64], period: usize) -> Result<Self, OracleError> {
        Self::new(
            alpha.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            beta.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            period,
        )
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[Complex64] {
        &self.beta
    }

    pub fn period(&self) -> usize {
        self.period
    }

    pub fn tap_count(&self) -> usize {
        self.alpha.len()
    }

    /// Taps wrapped around to an even target period.
    pub fn periodized(&self, target: usize) -> (Vec<Complex64>, Vec<Complex64>) {
        let wrap = |taps: &[Complex64]| {
            let mut out = vec![Complex64::ZERO; target];
            for (i, &tap) in taps.iter().enumerate() {
                out[i % target] += tap;
            }
            out
        };
        (wrap(&self.alpha), wrap(&self.beta))
    }

    pub fn max_imag(&self) -> f64 {
        self.alpha
            .iter()
            .chain(self.beta.iter())
            .map(|z| z.im.abs())
            .fold(0.0, f64::max)
    }
}

/// Result of the orthonormality check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QmfReport {
    pub pass: bool,
    pub max_residual: f64,
}

/// Checks that the even translates of alpha and beta form an orthonormal
/// system in the period-2N space, by direct evaluation of every inner
/// product. Passes iff the worst deviation is within [`QMF_TOL`].
pub fn qmf_check(pair: &QmfPair) -> Result<QmfReport, OracleError> {
    let period = pair.period;
    if period < 2 || !period.is_multiple_of(2) {
        return Err(OracleError::BadPeriod(period));
    }
    let (alpha, beta) = pair.periodized(period);
    let translate = |taps: &[Complex64], by: usize| -> Vec<Complex64> {
        (0..period)
            .map(|n| taps[(n + period - by % period) % period])
            .collect()
    };
    let inner = |u: &[Complex64], v: &[Complex64]| -> Complex64 {
        u.iter().zip(v.iter()).map(|(a, b)| a.conj() * b).sum()
    };

    let half = period / 2;
    let mut max_residual = 0.0f64;
    for j in 0..half {
        let ta = translate(&alpha, 2 * j);
        let tb = translate(&beta, 2 * j);
        for k in 0..half {
            let ua = translate(&alpha, 2 * k);
            let ub = translate(&beta, 2 * k);
            let delta = if j == k { 1.0 } else { 0.0 };
            max_residual = max_residual
                .max((inner(&ta, &ua) - delta).norm())
                .max((inner(&tb, &ub) - delta).norm())
                .max(inner(&ta, &ub).norm());
        }
    }
    Ok(QmfReport {
        pass: max_residual <= QMF_TOL,
        max_residual,
    })
}

/// Base-change direction of a splitting matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitDirection {
    /// Columns are the new basis vectors: column 2k holds T_{2k} alpha.
    Synthesis,
    /// The conjugate transpose; left-multiplying a signal performs one
    /// analysis splitting step.
    Analysis,
}

/// The splitting matrix of a filter pair at the given period: entry
/// (n, 2k) is alpha_{n-2k} and entry (n, 2k+1) is beta_{n-2k}, indices mod
/// the period, conjugate-transposed for the analysis direction.
pub fn splitting_matrix_from_pair(
    pair: &QmfPair,
    period: usize,
    direction: SplitDirection,
) -> Result<DenseMatrix, OracleError> {
    if period < 2 || !period.is_multiple_of(2) {
        return Err(OracleError::BadPeriod(period));
    }
    let (alpha, beta) = pair.periodized(period);
    let synthesis = DenseMatrix::from_fn(period, |row, col| {
        let shift = 2 * (col / 2);
        let tap = (row + period - shift) % period;
        if col % 2 == 0 {
            alpha[tap]
        } else {
            beta[tap]
        }
    });
    Ok(match direction {
        SplitDirection::Synthesis => synthesis,
        SplitDirection::Analysis => synthesis.adjoint(),
    })
}

/// The splitting matrix of a word, built purely from permutation matrices
/// and block-diagonal local rotations, step by step. This is the classical
/// route that the quantum splitting circuits are compared against.
pub fn splitting_matrix_from_word(
    word: &SplitWord,
    period: usize,
    direction: SplitDirection,
) -> Result<DenseMatrix, OracleError> {
    if period < 2 || !period.is_multiple_of(2) {
        return Err(OracleError::BadPeriod(period));
    }
    let mut matrix = DenseMatrix::identity(period);
    for step in word.steps() {
        let factor = match step {
            SplitStep::Rot(m) => local_rotation_matrix(m, period),
            SplitStep::Shift(direction) => translation_matrix(period, *direction),
        };
        matrix = factor.mul(&matrix);
    }
    Ok(match direction {
        SplitDirection::Synthesis => matrix,
        SplitDirection::Analysis => matrix.adjoint(),
    })
}

fn local_rotation_matrix(m: &Mat2, period: usize) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(period);
    for block in 0..period / 2 {
        for r in 0..2 {
            for c in 0..2 {
                out.set(2 * block + r, 2 * block + c, m.get(r, c));
            }
        }
    }
    out
}

fn translation_matrix(period: usize, direction: ShiftDirection) -> DenseMatrix {
    let mut out = DenseMatrix::zeros(period);
    for col in 0..period {
        let row = match direction {
            ShiftDirection::Forward => (col + 1) % period,
            ShiftDirection::Backward => (col + period - 1) % period,
        };
        out.set(row, col, Complex64::ONE);
    }
    out
}

/// Reads the filter pair off a word: alpha and beta are the first two
/// columns of the synthesis matrix, trimmed to their joint support. The
/// pair is orthonormal by construction because every step commutes with the
/// even translation.
pub fn extract_qmf(word: &SplitWord, period: usize) -> Result<QmfPair, OracleError> {
    let matrix = splitting_matrix_from_word(word, period, SplitDirection::Synthesis)?;
    let alpha: Vec<Complex64> = (0..period).map(|n| matrix.get(n, 0)).collect();
    let beta: Vec<Complex64> = (0..period).map(|n| matrix.get(n, 1)).collect();

    let mut support = 2usize;
    for n in 0..period {
        if alpha[n].norm() > 1e-13 || beta[n].norm() > 1e-13 {
            support = support.max(n + 1);
        }
    }
    if !support.is_multiple_of(2) {
        support += 1;
    }
    QmfPair::new(
        alpha[..support].to_vec(),
        beta[..support].to_vec(),
        period,
    )
}

/// Runs the filter-bank transform classically. At level j the analysis
/// splitting matrix of the pair periodized to length/2^(j-1) is applied to
/// every stride-2^(j-1) interleaved subsequence (packet) or to the zero
/// offset subsequence only (pyramid). Output is interleaved unless the plan
/// asks for subband ordering.
pub fn classical_transform(
    plan: &TransformPlan,
    pair: &QmfPair,
    signal: &[Complex64],
) -> Result<Vec<Complex64>, OracleError> {
    plan.validate()?;
    if signal.len() != plan.length {
        return Err(OracleError::LengthMismatch {
            signal: signal.len(),
            plan: plan.length,
        });
    }
    let mut coefficients = signal.to_vec();
    for level in 1..=plan.depth {
        let modulus = plan.level_modulus(level);
        let stride = 1usize << (level - 1);
        let analysis = splitting_matrix_from_pair(pair, modulus, SplitDirection::Analysis)?;
        let offsets: Vec<usize> = match plan.kind {
            TransformKind::Packet => (0..stride).collect(),
            TransformKind::Pyramid => vec![0],
        };
        for offset in offsets {
            let gathered: Vec<Complex64> = (0..modulus)
                .map(|k| coefficients[offset + k * stride])
                .collect();
            let transformed = analysis.mul_vec(&gathered);
            for (k, value) in transformed.into_iter().enumerate() {
                coefficients[offset + k * stride] = value;
            }
        }
    }
    if plan.ordering == crate::builders::CoefficientOrder::Subband {
        let perm = subband_permutation(plan)?;
        let mut ordered = vec![Complex64::ZERO; coefficients.len()];
        for (i, &p) in perm.iter().enumerate() {
            ordered[p] = coefficients[i];
        }
        coefficients = ordered;
    }
    Ok(coefficients)
}

/// The permutation taking interleaved coefficients to subband layout;
/// `perm[i]` is the subband position of interleaved index `i`.
///
/// Pyramid layout is [deepest approximation | details, deepest first]: the
/// block of index i is decided by its number of trailing zero bits. Packet
/// layout orders the 2^J leaf subbands by their top-down split choices,
/// which is the bit reversal of the low J bits.
pub fn subband_permutation(plan: &TransformPlan) -> Result<Vec<usize>, OracleError> {
    plan.validate()?;
    let len = plan.length;
    let depth = plan.depth;
    let mut perm = vec![0usize; len];
    match plan.kind {
        TransformKind::Packet => {
            let leaf = len >> depth;
            for (i, slot) in perm.iter_mut().enumerate() {
                let label = i & ((1 << depth) - 1);
                let mut reversed = 0usize;
                for bit in 0..depth {
                    if label & (1 << bit) != 0 {
                        reversed |= 1 << (depth - 1 - bit);
                    }
                }
                *slot = reversed * leaf + (i >> depth);
            }
        }
        TransformKind::Pyramid => {
            // Block offsets: A_J first, then D_J, D_{J-1}, ..., D_1.
            for (i, slot) in perm.iter_mut().enumerate() {
                let tz = if i == 0 {
                    depth
                } else {
                    (i.trailing_zeros() as usize).min(depth)
                };
                if tz >= depth {
                    *slot = i >> depth;
                } else {
                    let level = tz + 1; // detail produced at this level
                    let mut offset = len >> depth; // approximation block
                    for d in (level + 1..=depth).rev() {
                        offset += len >> d;
                    }
                    *slot = offset + (i >> level);
                }
            }
        }
    }
    Ok(perm)
}

/// The Haar pair: alpha = (1,1)/sqrt(2), beta = (1,-1)/sqrt(2).
pub fn haar_pair(period: usize) -> QmfPair {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    QmfPair::from_real(&[h, h], &[h, -h], period).expect("haar pair is well-formed")
}

/// The Haar splitting word: a single local Hadamard rotation.
pub fn haar_word() -> SplitWord {
    SplitWord::new(vec![SplitStep::Rot(Mat2::HADAMARD)]).expect("haar word is nonempty")
}

/// Detail-filter moment sum n^p beta_n, the quantity that must vanish for
/// p = 0, 1 if the detail filter is to kill constant and linear signals.
pub fn detail_moment(pair: &QmfPair, p: u32) -> Complex64 {
    pair.beta
        .iter()
        .enumerate()
        .map(|(n, &b)| b * (n as f64).powi(p as i32))
        .sum()
}

/// Rotation-lattice angles of the 4-tap orthogonal pair with two vanishing
/// detail moments. The angles are not hardcoded: they are found by a Newton
/// iteration on the two moment conditions, evaluated through the actual
/// lattice word and filter extraction machinery, and the result is cached.
pub fn d4_angles() -> [f64; 2] {
    static ANGLES: OnceLock<[f64; 2]> = OnceLock::new();
    *ANGLES.get_or_init(solve_d4_angles)
}

fn d4_moments(theta: [f64; 2]) -> [f64; 2] {
    let word = crate::builders::lattice_to_word(&theta, None).expect("two angles");
    let pair = extract_qmf(&word, 8).expect("period 8 is valid");
    [
        detail_moment(&pair, 0).re,
        detail_moment(&pair, 1).re,
    ]
}

fn solve_d4_angles() -> [f64; 2] {
    // Newton iteration with a finite-difference Jacobian; the starting point
    // selects the branch whose low-pass filter has positive sum.
    let mut theta = [0.3f64, -1.0f64];
    let step = 1e-7;
    for _ in 0..60 {
        let f = d4_moments(theta);
        let residual = f[0].abs().max(f[1].abs());
        if residual < 1e-14 {
            break;
        }
        let mut jacobian = [[0.0f64; 2]; 2];
        for col in 0..2 {
            let mut bumped = theta;
            bumped[col] += step;
            let fb = d4_moments(bumped);
            jacobian[0][col] = (fb[0] - f[0]) / step;
            jacobian[1][col] = (fb[1] - f[1]) / step;
        }
        let det = jacobian[0][0] * jacobian[1][1] - jacobian[0][1] * jacobian[1][0];
        assert!(det.abs() > 1e-12, "singular Jacobian in filter solve");
        theta[0] -= (f[0] * jacobian[1][1] - f[1] * jacobian[0][1]) / det;
        theta[1] -= (f[1] * jacobian[0][0] - f[0] * jacobian[1][0]) / det;
    }
    let f = d4_moments(theta);
    assert!(
        f[0].abs() < 1e-12 && f[1].abs() < 1e-12,
        "moment conditions not met: {f:?}"
    );
    theta
}

/// The 4-tap pair with two vanishing detail moments, derived from the
/// lattice angles.
pub fn d4_pair(period: usize) -> QmfPair {
    let word = d4_word();
    let pair = extract_qmf(&word, period.max(8)).expect("d4 extraction");
    let (alpha, beta) = (pair.alpha, pair.beta);
    QmfPair::new(alpha, beta, period).expect("d4 pair is well-formed")
}

/// The splitting word realizing the 4-tap pair.
pub fn d4_word() -> SplitWord {
    crate::builders::lattice_to_word(&d4_angles(), None).expect("two angles")
}
