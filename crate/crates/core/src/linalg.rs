//! Dense 2×2 complex linear algebra.
//!
//! Everything here is closed form: eigenvalues of a Hermitian 2×2 matrix come
//! from the trace/determinant quadratic, and matrix functions (square roots,
//! inverse square roots, projectors) are built from that spectral
//! decomposition. No iteration is involved anywhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance on `|m[i][j] - conj(m[j][i])|` accepted as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// A general complex 2×2 matrix, row major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

impl Mat2 {
    pub const fn zero() -> Self {
        Mat2([[ZERO, ZERO], [ZERO, ZERO]])
    }

    pub const fn identity() -> Self {
        Mat2([[ONE, ZERO], [ZERO, ONE]])
    }

    /// `|a⟩⟨b|`.
    pub fn outer(a: &[Complex64; 2], b: &[Complex64; 2]) -> Self {
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i] * b[j].conj();
            }
        }
        Mat2(m)
    }

    pub fn adjoint(&self) -> Self {
        let m = &self.0;
        Mat2([[m[0][0].conj(), m[1][0].conj()], [m[0][1].conj(), m[1][1].conj()]])
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn det(&self) -> Complex64 {
        self.0[0][0] * self.0[1][1] - self.0[0][1] * self.0[1][0]
    }

    pub fn scale(&self, s: f64) -> Self {
        let m = &self.0;
        Mat2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1],
            m[1][0] * v[0] + m[1][1] * v[1],
        ]
    }

    /// Largest entrywise modulus.
    pub fn max_abs(&self) -> f64 {
        self.0
            .iter()
            .flatten()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Largest entrywise deviation from Hermiticity.
    pub fn hermitian_deviation(&self) -> f64 {
        (*self - self.adjoint()).max_abs()
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        Mat2([
            [a[0][0] + b[0][0], a[0][1] + b[0][1]],
            [a[1][0] + b[1][0], a[1][1] + b[1][1]],
        ])
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, rhs: Mat2) -> Mat2 {
        self + (-rhs)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, rhs: Mat2) -> Mat2 {
        let (a, b) = (&self.0, &rhs.0);
        let mut m = [[ZERO; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Mat2(m)
    }
}

/// Eigen-decomposition of a Hermitian 2×2 matrix, eigenvalues ascending.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub values: [f64; 2],
    /// `vectors[k]` is the unit eigenvector belonging to `values[k]`.
    pub vectors: [[Complex64; 2]; 2],
}

impl Spectrum {
    /// Rebuilds `Σ f(λ_k) |v_k⟩⟨v_k|`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> HermitianOp {
        let m = Mat2::outer(&self.vectors[0], &self.vectors[0]).scale(f(self.values[0]))
            + Mat2::outer(&self.vectors[1], &self.vectors[1]).scale(f(self.values[1]));
        HermitianOp::from_mat_symmetrized(m)
    }
}

/// A Hermitian 2×2 operator (states, POVM elements, Ω, Π₀).
#[derive(Clone, Copy, PartialEq)]
pub struct HermitianOp(Mat2);

impl fmt::Debug for HermitianOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.0 .0;
        write!(
            f,
            "[[{:.6}, {:.6}], [{:.6}, {:.6}]]",
            m[0][0], m[0][1], m[1][0], m[1][1]
        )
    }
}

impl HermitianOp {
    /// Accepts `m` if it is Hermitian within [`HERMITIAN_TOL`].
    pub fn new(m: Mat2) -> Result<Self> {
        let dev = m.hermitian_deviation();
        if !(dev <= HERMITIAN_TOL) {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self::from_mat_symmetrized(m))
    }

    /// Projects onto the Hermitian part, `(m + m†)/2`, without checking.
    pub fn from_mat_symmetrized(m: Mat2) -> Self {
        HermitianOp((m + m.adjoint()).scale(0.5))
    }

    pub fn zero() -> Self {
        HermitianOp(Mat2::zero())
    }

    pub fn identity() -> Self {
        HermitianOp(Mat2::identity())
    }

    pub fn diag(a: f64, d: f64) -> Self {
        HermitianOp(Mat2([
            [Complex64::new(a, 0.0), ZERO],
            [ZERO, Complex64::new(d, 0.0)],
        ]))
    }

    /// `|v⟩⟨v|` for a (not necessarily normalized) vector.
    pub fn projector(v: &[Complex64; 2]) -> Self {
        Self::from_mat_symmetrized(Mat2::outer(v, v))
    }

    /// `(w 𝕀 + r·σ) / 2` from a Bloch-type parameterization.
    pub fn from_bloch(w: f64, r: [f64; 3]) -> Self {
        let [x, y, z] = r;
        HermitianOp(Mat2([
            [Complex64::new((w + z) / 2.0, 0.0), Complex64::new(x / 2.0, -y / 2.0)],
            [Complex64::new(x / 2.0, y / 2.0), Complex64::new((w - z) / 2.0, 0.0)],
        ]))
    }

    /// Inverse of [`HermitianOp::from_bloch`]: returns `(tr, r)`.
    pub fn bloch(&self) -> (f64, [f64; 3]) {
        let m = &self.0 .0;
        let w = m[0][0].re + m[1][1].re;
        let z = m[0][0].re - m[1][1].re;
        (w, [2.0 * m[1][0].re, 2.0 * m[1][0].im, z])
    }

    pub fn mat(&self) -> &Mat2 {
        &self.0
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.0 .0[i][j]
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }

    /// `tr(self · other)`, real for two Hermitian operators.
    pub fn trace_product(&self, other: &HermitianOp) -> f64 {
        (self.0 * other.0).trace().re
    }

    /// `⟨v|self|v⟩`.
    pub fn expectation(&self, v: &[Complex64; 2]) -> f64 {
        let w = self.0.apply(v);
        (v[0].conj() * w[0] + v[1].conj() * w[1]).re
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOp(self.0.scale(s))
    }

    /// `a · self · a` for Hermitian `a` (congruence).
    pub fn sandwich(&self, a: &HermitianOp) -> Self {
        Self::from_mat_symmetrized(a.0 * self.0 * a.0)
    }

    pub fn apply(&self, v: &[Complex64; 2]) -> [Complex64; 2] {
        self.0.apply(v)
    }

    pub fn max_abs(&self) -> f64 {
        self.0.max_abs()
    }

    pub fn eigenvalues(&self) -> [f64; 2] {
        let m = &self.0 .0;
        if m[0][1].norm() == 0.0 {
            let (a, d) = (m[0][0].re, m[1][1].re);
            return [a.min(d), a.max(d)];
        }
        let (mean, radius) = self.mean_radius();
        [mean - radius, mean + radius]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues()[1]
    }

    fn mean_radius(&self) -> (f64, f64) {
        let m = &self.0 .0;
        let (a, d) = (m[0][0].re, m[1][1].re);
        let half = 0.5 * (a - d);
        (0.5 * (a + d), half.hypot(m[0][1].norm()))
    }

    /// Closed-form spectral decomposition.
    pub fn spectrum(&self) -> Spectrum {
        let m = &self.0 .0;
        let (a, d) = (m[0][0].re, m[1][1].re);
        let b = m[0][1];
        let (_, radius) = self.mean_radius();
        let half = 0.5 * (a - d);
        let values = self.eigenvalues();

        if b.norm() == 0.0 {
            let e0 = [ONE, ZERO];
            let e1 = [ZERO, ONE];
            let vectors = if a <= d { [e0, e1] } else { [e1, e0] };
            return Spectrum { values, vectors };
        }

        // Two algebraically equivalent kernels of (A - λ₊); take the better conditioned one.
        let upper = if half >= 0.0 {
            [Complex64::new(radius + half, 0.0), b.conj()]
        } else {
            [b, Complex64::new(radius - half, 0.0)]
        };
        let norm = (upper[0].norm_sqr() + upper[1].norm_sqr()).sqrt();
        let upper = [upper[0] / norm, upper[1] / norm];
        let lower = [-upper[1].conj(), upper[0].conj()];
        Spectrum {
            values,
            vectors: [lower, upper],
        }
    }

    /// Principal square root; eigenvalues below zero (rounding) are clamped.
    pub fn sqrt_psd(&self) -> Self {
        self.spectrum().map(|l| l.max(0.0).sqrt())
    }

    /// Inverse square root on the support: eigenvalues `≤ cutoff` map to zero.
    pub fn pinv_sqrt(&self, cutoff: f64) -> Self {
        self.spectrum()
            .map(|l| if l > cutoff { 1.0 / l.sqrt() } else { 0.0 })
    }

    /// Projector onto the eigenspace with eigenvalues `> cutoff`.
    pub fn support_projector(&self, cutoff: f64) -> Self {
        self.spectrum().map(|l| if l > cutoff { 1.0 } else { 0.0 })
    }
}

impl Add for HermitianOp {
    type Output = HermitianOp;
    fn add(self, rhs: HermitianOp) -> HermitianOp {
        HermitianOp(self.0 + rhs.0)
    }
}

impl Sub for HermitianOp {
    type Output = HermitianOp;
    fn sub(self, rhs: HermitianOp) -> HermitianOp {
        HermitianOp(self.0 - rhs.0)
    }
}

impl Mul<f64> for HermitianOp {
    type Output = HermitianOp;
    fn mul(self, rhs: f64) -> HermitianOp {
        self.scale(rhs)
    }
}

impl std::iter::Sum for HermitianOp {
    fn sum<I: Iterator<Item = HermitianOp>>(iter: I) -> HermitianOp {
        iter.fold(HermitianOp::zero(), |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn reconstruct(op: &HermitianOp) -> HermitianOp {
        op.spectrum().map(|l| l)
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = Mat2([[c(1.0, 0.0), c(0.5, 0.0)], [c(0.4, 0.0), c(0.0, 0.0)]]);
        assert!(matches!(HermitianOp::new(m), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn diagonal_spectrum_is_sorted() {
        let op = HermitianOp::diag(0.7, -0.2);
        let s = op.spectrum();
        assert_eq!(s.values, [-0.2, 0.7]);
        assert!((reconstruct(&op) - op).max_abs() < 1e-15);
    }

    #[test]
    fn spectrum_reconstructs_general_matrix() {
        let m = Mat2([[c(0.3, 0.0), c(0.2, -0.45)], [c(0.2, 0.45), c(-0.8, 0.0)]]);
        let op = HermitianOp::new(m).unwrap();
        let s = op.spectrum();
        assert!((s.values[0] + s.values[1] - op.trace()).abs() < 1e-14);
        assert!((s.values[0] * s.values[1] - op.mat().det().re).abs() < 1e-14);
        assert!((reconstruct(&op) - op).max_abs() < 1e-14);
        for k in 0..2 {
            let v = s.vectors[k];
            let av = op.apply(&v);
            for i in 0..2 {
                assert!((av[i] - v[i] * s.values[k]).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn square_root_squares_back() {
        let m = Mat2([[c(0.6, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.4, 0.0)]]);
        let op = HermitianOp::new(m).unwrap();
        let r = op.sqrt_psd();
        assert!((op.sandwich(&HermitianOp::identity()) - op).max_abs() < 1e-15);
        let back = HermitianOp::from_mat_symmetrized(*r.mat() * *r.mat());
        assert!((back - op).max_abs() < 1e-14);
        let inv = op.pinv_sqrt(1e-12);
        let one = HermitianOp::from_mat_symmetrized(*inv.mat() * *op.mat() * *inv.mat());
        assert!((one - HermitianOp::identity()).max_abs() < 1e-13);
    }

    #[test]
    fn bloch_round_trip() {
        let op = HermitianOp::from_bloch(0.8, [0.1, -0.3, 0.25]);
        let (w, r) = op.bloch();
        assert!((w - 0.8).abs() < 1e-15);
        assert!((r[0] - 0.1).abs() < 1e-15 && (r[1] + 0.3).abs() < 1e-15);
        assert!((r[2] - 0.25).abs() < 1e-15);
        let norm = (0.1f64.powi(2) + 0.3f64.powi(2) + 0.25f64.powi(2)).sqrt();
        let ev = op.eigenvalues();
        assert!((ev[0] - (0.8 - norm) / 2.0).abs() < 1e-15);
        assert!((ev[1] - (0.8 + norm) / 2.0).abs() < 1e-15);
    }
}
