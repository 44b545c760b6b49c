//! Small fixed-size complex matrix helpers used throughout the crate.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

pub const C_ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const C_ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A 2x2 complex matrix in row-major order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [Complex64; 4]);

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2([C_ONE, C_ZERO, C_ZERO, C_ONE]);

    pub const PAULI_X: Mat2 = Mat2([C_ZERO, C_ONE, C_ONE, C_ZERO]);

    pub const HADAMARD: Mat2 = Mat2([
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ]);

    pub fn new(m00: Complex64, m01: Complex64, m10: Complex64, m11: Complex64) -> Self {
        Mat2([m00, m01, m10, m11])
    }

    pub fn from_real(m00: f64, m01: f64, m10: f64, m11: f64) -> Self {
        Mat2([
            Complex64::new(m00, 0.0),
            Complex64::new(m01, 0.0),
            Complex64::new(m10, 0.0),
            Complex64::new(m11, 0.0),
        ])
    }

    /// The real rotation R(theta) = [[cos, sin], [-sin, cos]].
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Mat2::from_real(c, s, -s, c)
    }

    /// diag(1, e^{i*phi}).
    pub fn phase(phi: f64) -> Self {
        Mat2::new(C_ONE, C_ZERO, C_ZERO, Complex64::from_polar(1.0, phi))
    }

    /// Rz(phi) = diag(e^{-i*phi/2}, e^{i*phi/2}).
    pub fn rz(phi: f64) -> Self {
        Mat2::new(
            Complex64::from_polar(1.0, -phi / 2.0),
            C_ZERO,
            C_ZERO,
            Complex64::from_polar(1.0, phi / 2.0),
        )
    }

    /// Ry(phi) = [[cos(phi/2), -sin(phi/2)], [sin(phi/2), cos(phi/2)]].
    pub fn ry(phi: f64) -> Self {
        let (s, c) = (phi / 2.0).sin_cos();
        Mat2::from_real(c, -s, s, c)
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.0[2 * row + col]
    }

    pub fn mul(&self, other: &Mat2) -> Mat2 {
        let a = &self.0;
        let b = &other.0;
        Mat2([
            a[0] * b[0] + a[1] * b[2],
            a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3],
        ])
    }

    pub fn adjoint(&self) -> Mat2 {
        Mat2([
            self.0[0].conj(),
            self.0[2].conj(),
            self.0[1].conj(),
            self.0[3].conj(),
        ])
    }

    /// Max-norm of M†M - I.
    pub fn unitarity_residual(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        gram.max_abs_diff(&Mat2::IDENTITY)
    }

    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self, tol: f64) -> bool {
        self.0.iter().all(|z| z.im.abs() <= tol)
    }
}
