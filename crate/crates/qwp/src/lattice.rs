//! Lattice factorization of real orthogonal filter pairs.
//!
//! A finitely supported orthogonal pair has a 2x2 polyphase matrix P(z)
//! (even and odd subsampled taps of each filter) that is paraunitary. The
//! factorization peels planar rotations off that matrix highest degree
//! first: each stage finds the angle that annihilates the top-degree
//! coefficients, divides the resulting one-step delay out of the odd row,
//! and recurses, leaving a constant orthogonal matrix whose angle is the
//! first lattice rotation. Reversing the process is `lattice_to_word`
//! followed by filter extraction.
//!
//! The rotation-delay lattice only reaches polyphase determinant +z^k, so a
//! pair with a negative determinant (the plain Haar pair, for example) is
//! factored after flipping the sign of its detail filter; the flip is kept
//! in the [`NormalizationRecord`]. Genuinely periodic pairs whose
//! determinant is not a monomial are not expressible in this parametrization
//! at all; those are reported as [`LatticeError::NotFactorable`], which is
//! the expected outcome rather than a bug.

use crate::builders::lattice_to_word;
use crate::classical::{extract_qmf, qmf_check, QmfPair};
use num_complex::Complex64;
use thiserror::Error;

/// Peeling residual above which a pair is declared not factorable.
pub const PEELING_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum LatticeError {
    #[error("lattice factorization expects real taps (largest imaginary part {0:.3e})")]
    NonRealTaps(f64),
    #[error("tap count {0} is not even")]
    OddTapCount(usize),
    #[error("period {period} is shorter than the tap support {taps}")]
    PeriodTooShort { period: usize, taps: usize },
    #[error("pair fails the orthonormality check (residual {0:.3e})")]
    NotOrthonormal(f64),
    #[error(
        "pair is not expressible in the rotation-delay lattice (peeling residual {0:.3e}); \
         genuinely periodic filter pairs can be non-factorable, so this is expected behaviour \
         for such inputs"
    )]
    NotFactorable(f64),
    #[error(transparent)]
    Oracle(#[from] crate::classical::OracleError),
    #[error(transparent)]
    Build(#[from] crate::builders::BuildError),
}

/// Bookkeeping for the canonical form used during factorization: the pair
/// actually factored is alpha_n = alpha_sign * input_alpha_{n+even_shift}
/// (same shift for beta) with beta scaled by beta_sign.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalizationRecord {
    pub even_shift: usize,
    pub alpha_sign: f64,
    pub beta_sign: f64,
}

impl NormalizationRecord {
    pub fn identity() -> Self {
        NormalizationRecord {
            even_shift: 0,
            alpha_sign: 1.0,
            beta_sign: 1.0,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.even_shift == 0 && self.alpha_sign == 1.0 && self.beta_sign == 1.0
    }

    /// Maps a reconstructed (canonical) pair back to the original
    /// convention, as period-length tap vectors. The canonical pair is the
    /// input shifted down by `even_shift`, so restoring shifts back up.
    pub fn restore(&self, pair: &QmfPair) -> QmfPair {
        let period = pair.period();
        let (alpha, beta) = pair.periodized(period);
        let shift = self.even_shift % period;
        let restore = |taps: &[Complex64], sign: f64| -> Vec<Complex64> {
            (0..period)
                .map(|n| taps[(n + period - shift) % period] * sign)
                .collect()
        };
        QmfPair::new(
            restore(&alpha, self.alpha_sign),
            restore(&beta, self.beta_sign),
            period,
        )
        .expect("restored pair keeps its shape")
    }
}

/// Angles plus normalization: `lattice_to_word(&angles)` followed by filter
/// extraction and [`NormalizationRecord::restore`] reproduces the input pair.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeFactorization {
    pub angles: Vec<f64>,
    pub normalization: NormalizationRecord,
    /// Worst reconstruction error observed during the internal round trip.
    pub residual: f64,
}

/// 2x2 real polynomial matrix as a list of coefficient matrices, degree
/// index first. Row 0 holds the even-phase taps, row 1 the odd-phase taps;
/// column 0 belongs to alpha, column 1 to beta.
type PolyphaseCoeffs = Vec<[[f64; 2]; 2]>;

fn polyphase(alpha: &[f64], beta: &[f64]) -> PolyphaseCoeffs {
    let degree = alpha.len() / 2;
    (0..degree)
        .map(|d| {
            [
                [alpha[2 * d], beta[2 * d]],
                [alpha[2 * d + 1], beta[2 * d + 1]],
            ]
        })
        .collect()
}

fn coeff_norm(m: &[[f64; 2]; 2]) -> f64 {
    m.iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
}

/// Factors a real orthogonal pair into lattice rotation angles.
pub fn lattice_factor(pair: &QmfPair) -> Result<LatticeFactorization, LatticeError> {
    let max_imag = pair.max_imag();
    if max_imag > 1e-12 {
        return Err(LatticeError::NonRealTaps(max_imag));
    }
    if !pair.tap_count().is_multiple_of(2) {
        return Err(LatticeError::OddTapCount(pair.tap_count()));
    }
    if pair.period() < pair.tap_count() {
        return Err(LatticeError::PeriodTooShort {
            period: pair.period(),
            taps: pair.tap_count(),
        });
    }
    let report = qmf_check(pair)?;
    if !report.pass {
        return Err(LatticeError::NotOrthonormal(report.max_residual));
    }

    let alpha: Vec<f64> = pair.alpha().iter().map(|z| z.re).collect();
    let beta: Vec<f64> = pair.beta().iter().map(|z| z.re).collect();
    let mut coeffs = polyphase(&alpha, &beta);
    let mut record = NormalizationRecord::identity();

    // Strip common whole-period delays (both filters shifted by the same
    // even amount): a leading zero coefficient matrix is a z * I factor.
    while coeffs.len() > 1 && coeff_norm(&coeffs[0]) <= 1e-13 {
        coeffs.remove(0);
        record.even_shift += 2;
    }
    // Trim trailing zero coefficients so the peel count matches the true
    // degree.
    while coeffs.len() > 1 && coeff_norm(coeffs.last().unwrap()) <= 1e-13 {
        coeffs.pop();
    }

    let mut worst_residual = 0.0f64;
    let mut reversed_angles = Vec::new();

    while coeffs.len() > 1 {
        // Gaps can surface after a peel; treat a vanished top coefficient as
        // a genuinely lower degree.
        if coeff_norm(coeffs.last().unwrap()) <= 1e-13 {
            coeffs.pop();
            continue;
        }
        let top = *coeffs.last().unwrap();
        let r1 = top[0];
        let r2 = top[1];
        let n1 = (r1[0] * r1[0] + r1[1] * r1[1]).sqrt();
        let n2 = (r2[0] * r2[0] + r2[1] * r2[1]).sqrt();
        // Paraunitarity forces the top coefficient to have rank one, so both
        // rows are multiples of a common direction w.
        let w = if n1 >= n2 {
            [r1[0] / n1, r1[1] / n1]
        } else {
            [r2[0] / n2, r2[1] / n2]
        };
        let u1 = r1[0] * w[0] + r1[1] * w[1];
        let u2 = r2[0] * w[0] + r2[1] * w[1];
        let theta = u1.atan2(u2);
        reversed_angles.push(theta);

        // Left-multiply every coefficient by R(-theta).
        let (s, c) = theta.sin_cos();
        for m in coeffs.iter_mut() {
            let row0 = [c * m[0][0] - s * m[1][0], c * m[0][1] - s * m[1][1]];
            let row1 = [s * m[0][0] + c * m[1][0], s * m[0][1] + c * m[1][1]];
            m[0] = row0;
            m[1] = row1;
        }

        // The top row must have lost its leading coefficient and the bottom
        // row its constant coefficient.
        let top_leak = {
            let last = coeffs.last().unwrap();
            (last[0][0].abs()).max(last[0][1].abs())
        };
        let bottom_leak = (coeffs[0][1][0].abs()).max(coeffs[0][1][1].abs());
        worst_residual = worst_residual.max(top_leak).max(bottom_leak);
        if worst_residual > PEELING_TOL {
            return Err(LatticeError::NotFactorable(worst_residual));
        }

        // Divide the delay out of the odd row: row1 coefficients shift down.
        let len = coeffs.len();
        for d in 0..len - 1 {
            let next_row1 = coeffs[d + 1][1];
            coeffs[d][1] = next_row1;
        }
        coeffs.truncate(len - 1);
    }

    // Constant stage: a 2x2 orthogonal matrix. Determinant -1 means the
    // detail filter needs a sign flip to land in the rotation group.
    let mut last = coeffs[0];
    let det = last[0][0] * last[1][1] - last[0][1] * last[1][0];
    if det < 0.0 {
        record.beta_sign = -1.0;
        last[0][1] = -last[0][1];
        last[1][1] = -last[1][1];
    }
    let theta = (-last[1][0]).atan2(last[0][0]);
    let (s, c) = theta.sin_cos();
    let rotation_residual = [
        (last[0][0] - c).abs(),
        (last[0][1] - s).abs(),
        (last[1][0] + s).abs(),
        (last[1][1] - c).abs(),
    ]
    .into_iter()
    .fold(0.0f64, f64::max);
    worst_residual = worst_residual.max(rotation_residual);
    if worst_residual > PEELING_TOL {
        return Err(LatticeError::NotFactorable(worst_residual));
    }
    reversed_angles.push(theta);
    reversed_angles.reverse();
    let angles = reversed_angles;

    // Round trip through the actual word machinery.
    let word = lattice_to_word(&angles, None)?;
    let reconstructed = extract_qmf(&word, pair.period())?;
    let restored = record.restore(&QmfPair::new(
        reconstructed.periodized(pair.period()).0,
        reconstructed.periodized(pair.period()).1,
        pair.period(),
    )?);
    let (in_alpha, in_beta) = pair.periodized(pair.period());
    let (out_alpha, out_beta) = (restored.alpha().to_vec(), restored.beta().to_vec());
    let mut round_trip = 0.0f64;
    for n in 0..pair.period() {
        round_trip = round_trip
            .max((in_alpha[n] - out_alpha[n]).norm())
            .max((in_beta[n] - out_beta[n]).norm());
    }
    worst_residual = worst_residual.max(round_trip);
    if worst_residual > PEELING_TOL {
        return Err(LatticeError::NotFactorable(worst_residual));
    }

    Ok(LatticeFactorization {
        angles,
        normalization: record,
        residual: worst_residual,
    })
}

/// Reconstructs a pair from a factorization, including the normalization.
pub fn lattice_reconstruct(
    factorization: &LatticeFactorization,
    period: usize,
) -> Result<QmfPair, LatticeError> {
    let word = lattice_to_word(&factorization.angles, None)?;
    let pair = extract_qmf(&word, period)?;
    let (alpha, beta) = pair.periodized(period);
    Ok(factorization
        .normalization
        .restore(&QmfPair::new(alpha, beta, period)?))
}

/// Builds a splitting word realizing the *original* pair of a factorization,
/// normalization included: sign flips become a first diagonal rotation step
/// and a joint even shift becomes trailing translation steps.
pub fn factorization_to_word(
    factorization: &LatticeFactorization,
) -> Result<crate::builders::SplitWord, LatticeError> {
    use crate::builders::{ShiftDirection, SplitStep, SplitWord};
    use crate::math::Mat2;

    let record = &factorization.normalization;
    let parity_fix = if record.alpha_sign != 1.0 || record.beta_sign != 1.0 {
        Some(Mat2::from_real(
            record.alpha_sign,
            0.0,
            0.0,
            record.beta_sign,
        ))
    } else {
        None
    };
    let base = lattice_to_word(&factorization.angles, parity_fix)?;
    let mut steps = base.steps().to_vec();
    for _ in 0..record.even_shift {
        steps.push(SplitStep::Shift(ShiftDirection::Forward));
    }
    Ok(SplitWord::new(steps)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::{d4_pair, haar_pair};
    use std::f64::consts::FRAC_PI_4;

    fn max_pair_diff(a: &QmfPair, b: &QmfPair) -> f64 {
        let period = a.period();
        let (aa, ab) = a.periodized(period);
        let (ba, bb) = b.periodized(period);
        let mut worst = 0.0f64;
        for n in 0..period {
            worst = worst
                .max((aa[n] - ba[n]).norm())
                .max((ab[n] - bb[n]).norm());
        }
        worst
    }

    #[test]
    fn haar_factors_to_one_angle() {
        let pair = haar_pair(8);
        let f = lattice_factor(&pair).unwrap();
        assert_eq!(f.angles.len(), 1);
        assert!((f.angles[0] + FRAC_PI_4).abs() < 1e-14);
        assert_eq!(f.normalization.beta_sign, -1.0);
        let back = lattice_reconstruct(&f, 8).unwrap();
        assert!(max_pair_diff(&pair, &back) < 1e-12);
    }

    #[test]
    fn trivial_pair_factors_to_zero_angle() {
        let pair = QmfPair::from_real(&[1.0, 0.0], &[0.0, 1.0], 8).unwrap();
        let f = lattice_factor(&pair).unwrap();
        assert_eq!(f.angles.len(), 1);
        assert!(f.angles[0].abs() < 1e-14);
        assert!(f.normalization.is_identity());
    }

    #[test]
    fn four_tap_pair_factors_to_two_angles() {
        let pair = d4_pair(8);
        let f = lattice_factor(&pair).unwrap();
        assert_eq!(f.angles.len(), 2);
        assert!(f.residual < 1e-10);
        let back = lattice_reconstruct(&f, 8).unwrap();
        assert!(max_pair_diff(&pair, &back) < 1e-10);
    }

    #[test]
    fn shifted_trivial_pair_absorbs_delay_into_angles() {
        // alpha = delta_0, beta = delta_3: expressible with two angles.
        let pair = QmfPair::from_real(&[1.0, 0.0, 0.0, 0.0], &[0.0, 0.0, 0.0, 1.0], 8).unwrap();
        let f = lattice_factor(&pair).unwrap();
        assert_eq!(f.angles.len(), 2);
        let back = lattice_reconstruct(&f, 8).unwrap();
        assert!(max_pair_diff(&pair, &back) < 1e-12);
    }

    #[test]
    fn jointly_shifted_pair_records_even_shift() {
        // Both filters delayed by one period step: a z * I polyphase factor.
        let pair =
            QmfPair::from_real(&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], 8).unwrap();
        let f = lattice_factor(&pair).unwrap();
        assert_eq!(f.normalization.even_shift, 2);
        let back = lattice_reconstruct(&f, 8).unwrap();
        assert!(max_pair_diff(&pair, &back) < 1e-12);
    }

    #[test]
    fn complex_taps_are_rejected() {
        let pair = QmfPair::new(
            vec![Complex64::new(0.0, 1.0), Complex64::ZERO],
            vec![Complex64::ZERO, Complex64::ONE],
            8,
        )
        .unwrap();
        assert!(matches!(
            lattice_factor(&pair),
            Err(LatticeError::NonRealTaps(_))
        ));
    }

    #[test]
    fn non_orthonormal_pair_is_rejected() {
        let pair = QmfPair::from_real(&[1.0, 1.0], &[1.0, -1.0], 8).unwrap();
        assert!(matches!(
            lattice_factor(&pair),
            Err(LatticeError::NotOrthonormal(_))
        ));
    }

    #[test]
    fn factorization_word_realizes_the_original_pair() {
        // The textbook-sign Haar pair needs the sign fix step.
        let pair = haar_pair(8);
        let f = lattice_factor(&pair).unwrap();
        let word = factorization_to_word(&f).unwrap();
        let got = extract_qmf(&word, 8).unwrap();
        assert!(max_pair_diff(&pair, &got) < 1e-12);
    }

    #[test]
    fn random_lattice_pairs_round_trip() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x1a77);
        for _ in 0..10 {
            let count = rng.random_range(1..=4usize);
            let angles: Vec<f64> = (0..count)
                .map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let word = lattice_to_word(&angles, None).unwrap();
            let pair = extract_qmf(&word, 16).unwrap();
            let f = lattice_factor(&pair).unwrap();
            let back = lattice_reconstruct(&f, 16).unwrap();
            assert!(
                max_pair_diff(&pair, &back) < 1e-10,
                "angles {angles:?} residual {}",
                f.residual
            );
        }
    }
}
