//! 2×2 complex linear algebra.
//!
//! Everything here is plain floating point. Tolerances that decide
//! qualitative questions (is this matrix defective? is this determinant zero?)
//! are exposed as parameters with the defaults below so that callers can
//! tighten or loosen them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{c64, C64};

/// Below this `|det|` a matrix is treated as singular.
pub const SINGULAR_TOL: f64 = 1e-14;
/// Relative tolerance (scaled by `1 + ‖A‖`) for coinciding eigenvalues.
pub const DEFECT_TOL: f64 = 1e-8;
/// Below this `|det H|` a Hermitian form is degenerate.
pub const FORM_DEGENERACY_TOL: f64 = 1e-10;

/// A 2-component complex column vector.
pub type Vec2 = [C64; 2];

/// A 2×2 complex matrix `[[a11, a12], [a21, a22]]`.
///
/// Serialized as four `[re, im]` pairs in row-major order.
#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a11: C64,
    pub a12: C64,
    pub a21: C64,
    pub a22: C64,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl Mat2 {
    pub const fn new(a11: C64, a12: C64, a21: C64, a22: C64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    /// Builds a matrix from real entries given row by row.
    pub fn from_real(rows: [[f64; 2]; 2]) -> Self {
        Mat2::new(
            c64(rows[0][0], 0.0),
            c64(rows[0][1], 0.0),
            c64(rows[1][0], 0.0),
            c64(rows[1][1], 0.0),
        )
    }

    pub fn identity() -> Self {
        Mat2::scalar(C64::new(1.0, 0.0))
    }

    pub fn zero() -> Self {
        Mat2::scalar(C64::new(0.0, 0.0))
    }

    pub fn scalar(c: C64) -> Self {
        Mat2::diag(c, c)
    }

    pub fn diag(d1: C64, d2: C64) -> Self {
        let z = C64::new(0.0, 0.0);
        Mat2::new(d1, z, z, d2)
    }

    /// Matrix whose columns are `c1` and `c2`.
    pub fn from_columns(c1: Vec2, c2: Vec2) -> Self {
        Mat2::new(c1[0], c2[0], c1[1], c2[1])
    }

    pub fn det(&self) -> C64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> C64 {
        self.a11 + self.a22
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        (self.a11.norm_sqr() + self.a12.norm_sqr() + self.a21.norm_sqr() + self.a22.norm_sqr())
            .sqrt()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.a11
            .norm()
            .max(self.a12.norm())
            .max(self.a21.norm())
            .max(self.a22.norm())
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn entries(&self) -> [C64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn scale(&self, c: C64) -> Self {
        Mat2::new(self.a11 * c, self.a12 * c, self.a21 * c, self.a22 * c)
    }

    /// Conjugate transpose `A†`.
    pub fn adjoint(&self) -> Self {
        Mat2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn transpose(&self) -> Self {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    /// Inverse, failing when `|det| ≤ 1e-14`.
    pub fn inverse(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() <= SINGULAR_TOL {
            return Err(Error::SingularMatrix { det_abs: d.norm() });
        }
        let r = d.inv();
        Ok(Mat2::new(self.a22 * r, -self.a12 * r, -self.a21 * r, self.a11 * r))
    }

    /// Similarity transform `t⁻¹·a·t`.
    pub fn conjugate_by(&self, t: &Mat2) -> Result<Self> {
        Ok(t.inverse()? * *self * *t)
    }

    /// `g / √(det g)` on the principal branch; defined up to sign.
    pub fn sqrt_det_rescale(&self) -> Result<Self> {
        let d = self.det();
        if d.norm() <= SINGULAR_TOL {
            return Err(Error::SingularMatrix { det_abs: d.norm() });
        }
        Ok(self.scale(d.sqrt().inv()))
    }

    /// Commutator `AB − BA`.
    pub fn commutator(&self, other: &Mat2) -> Self {
        *self * *other - *other * *self
    }

    pub fn apply(&self, v: Vec2) -> Vec2 {
        [
            self.a11 * v[0] + self.a12 * v[1],
            self.a21 * v[0] + self.a22 * v[1],
        ]
    }

    /// Traceless part `A − (tr A / 2)·I`; zero exactly for scalar matrices.
    pub fn traceless(&self) -> Self {
        *self - Mat2::scalar(self.trace() * 0.5)
    }

    /// True when `A` is a multiple of the identity within `tol·‖A‖`.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.traceless().norm() <= tol * self.norm().max(f64::MIN_POSITIVE)
    }

    /// Real coordinates `(Re a11, Im a11, …, Re a22, Im a22)` in ℝ⁸.
    pub fn to_real8(&self) -> [f64; 8] {
        let e = self.entries();
        [
            e[0].re, e[0].im, e[1].re, e[1].im, e[2].re, e[2].im, e[3].re, e[3].im,
        ]
    }

    pub fn from_real8(v: &[f64; 8]) -> Self {
        Mat2::new(
            c64(v[0], v[1]),
            c64(v[2], v[3]),
            c64(v[4], v[5]),
            c64(v[6], v[7]),
        )
    }

    pub fn eigen(&self) -> EigenPair {
        self.eigen_with_tol(DEFECT_TOL)
    }

    /// Eigenvalues from the characteristic polynomial `λ² − tλ + d`.
    ///
    /// The larger-magnitude root is taken from `(t ± √(t²−4d))/2` with the sign
    /// that avoids cancellation and the other root as `d/λ₁`. The pair is
    /// flagged defective when the roots agree within `tol·(1+‖A‖)` while
    /// `A − λI` still has rank one.
    pub fn eigen_with_tol(&self, tol: f64) -> EigenPair {
        let t = self.trace();
        let d = self.det();
        let disc = (t * t - 4.0 * d).sqrt();
        let q = if (t.conj() * disc).re >= 0.0 {
            (t + disc) * 0.5
        } else {
            (t - disc) * 0.5
        };
        let (l1, l2) = if q.norm() == 0.0 {
            (q, q)
        } else {
            (q, d / q)
        };
        let scale = 1.0 + self.norm();
        let close = (l1 - l2).norm() <= tol * scale;
        if close {
            let mean = (l1 + l2) * 0.5;
            let shifted = *self - Mat2::scalar(mean);
            if shifted.norm() <= tol * scale {
                // scalar matrix: every vector is an eigenvector
                let one = c64(1.0, 0.0);
                let zero = c64(0.0, 0.0);
                return EigenPair {
                    lambda1: l1,
                    lambda2: l2,
                    v1: [one, zero],
                    v2: [zero, one],
                    defective: false,
                };
            }
            let v = null_vector(&shifted);
            return EigenPair {
                lambda1: l1,
                lambda2: l2,
                v1: v,
                v2: v,
                defective: true,
            };
        }
        EigenPair {
            lambda1: l1,
            lambda2: l2,
            v1: null_vector(&(*self - Mat2::scalar(l1))),
            v2: null_vector(&(*self - Mat2::scalar(l2))),
            defective: false,
        }
    }
}

/// Unit vector spanning (approximately) the kernel of a rank-≤1 matrix.
fn null_vector(m: &Mat2) -> Vec2 {
    // Each row r gives the candidate (−r2, r1); use the longer one.
    let c1 = [m.a12, -m.a11];
    let c2 = [m.a22, -m.a21];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let v = if n1 >= n2 { c1 } else { c2 };
    let n = n1.max(n2).sqrt();
    if n == 0.0 {
        return [c64(1.0, 0.0), c64(0.0, 0.0)];
    }
    normalize(v, n)
}

fn normalize(v: Vec2, n: f64) -> Vec2 {
    [v[0] / n, v[1] / n]
}

/// Euclidean norm of a 2-vector.
pub fn vec_norm(v: &Vec2) -> f64 {
    (v[0].norm_sqr() + v[1].norm_sqr()).sqrt()
}

/// `v₁·w₂ − v₂·w₁`; zero iff the vectors are parallel.
pub fn wedge(v: &Vec2, w: &Vec2) -> C64 {
    v[0] * w[1] - v[1] * w[0]
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 + o.a11,
            self.a12 + o.a12,
            self.a21 + o.a21,
            self.a22 + o.a22,
        )
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 - o.a11,
            self.a12 - o.a12,
            self.a21 - o.a21,
            self.a22 - o.a22,
        )
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        Mat2::new(-self.a11, -self.a12, -self.a21, -self.a22)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a11 * o.a11 + self.a12 * o.a21,
            self.a11 * o.a12 + self.a12 * o.a22,
            self.a21 * o.a11 + self.a22 * o.a21,
            self.a21 * o.a12 + self.a22 * o.a22,
        )
    }
}

impl Mul<C64> for Mat2 {
    type Output = Mat2;
    fn mul(self, c: C64) -> Mat2 {
        self.scale(c)
    }
}

impl Mul<f64> for Mat2 {
    type Output = Mat2;
    fn mul(self, c: f64) -> Mat2 {
        self.scale(c64(c, 0.0))
    }
}

impl Serialize for Mat2 {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.entries().iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<[f64; 2]> = Vec::deserialize(d)?;
        if pairs.len() != 4 {
            return Err(serde::de::Error::custom(format!(
                "expected 4 [re, im] entries, got {}",
                pairs.len()
            )));
        }
        let m = Mat2::new(
            c64(pairs[0][0], pairs[0][1]),
            c64(pairs[1][0], pairs[1][1]),
            c64(pairs[2][0], pairs[2][1]),
            c64(pairs[3][0], pairs[3][1]),
        );
        if !m.is_finite() {
            return Err(serde::de::Error::custom("matrix entries must be finite"));
        }
        Ok(m)
    }
}

/// Eigenvalues and unit eigenvectors of a 2×2 matrix.
///
/// For a defective matrix `v1 == v2` spans the only eigendirection.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EigenPair {
    pub lambda1: C64,
    pub lambda2: C64,
    pub v1: Vec2,
    pub v2: Vec2,
    pub defective: bool,
}

/// A 2×2 Hermitian matrix `[[h11, h12], [conj(h12), h22]]`.
///
/// Storage makes `H = H†` hold by construction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HermitianForm {
    pub h11: f64,
    pub h22: f64,
    #[serde(with = "complex_pair")]
    pub h12: C64,
}

impl HermitianForm {
    pub fn new(h11: f64, h12: C64, h22: f64) -> Self {
        HermitianForm { h11, h22, h12 }
    }

    /// The Euclidean form `I`.
    pub fn identity() -> Self {
        HermitianForm::new(1.0, c64(0.0, 0.0), 1.0)
    }

    /// The indefinite form `[[0, i], [−i, 0]]` whose unitary group is
    /// generated by SL(2,ℝ) and unit scalars.
    pub fn standard() -> Self {
        HermitianForm::new(0.0, c64(0.0, 1.0), 0.0)
    }

    pub fn diag(h11: f64, h22: f64) -> Self {
        HermitianForm::new(h11, c64(0.0, 0.0), h22)
    }

    /// Hermitian part `(M + M†)/2` of an arbitrary matrix.
    pub fn from_mat(m: &Mat2) -> Self {
        HermitianForm::new(m.a11.re, (m.a12 + m.a21.conj()) * 0.5, m.a22.re)
    }

    pub fn to_mat(&self) -> Mat2 {
        Mat2::new(
            c64(self.h11, 0.0),
            self.h12,
            self.h12.conj(),
            c64(self.h22, 0.0),
        )
    }

    pub fn det(&self) -> f64 {
        self.h11 * self.h22 - self.h12.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.to_mat().norm()
    }

    pub fn is_nondegenerate(&self, tol: f64) -> bool {
        self.det().abs() > tol
    }

    /// `g†·H·g`.
    pub fn act(&self, g: &Mat2) -> HermitianForm {
        HermitianForm::from_mat(&(g.adjoint() * self.to_mat() * *g))
    }

    /// `‖g†Hg − H‖ / ‖H‖`.
    pub fn preservation_residual(&self, g: &Mat2) -> f64 {
        (self.act(g).to_mat() - self.to_mat()).norm() / self.norm()
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianForm::new(self.h11 * s, self.h12 * s, self.h22 * s)
    }

    /// Scales to `h11 = ±1`, or to unit `max(|h12|, |h22|)` when `h11`
    /// vanishes relative to the other entries (in which case it is set to 0).
    pub fn normalized(&self) -> Self {
        let rest = self.h12.norm().max(self.h22.abs());
        if self.h11.abs() > 1e-12 * rest {
            self.scale(1.0 / self.h11.abs())
        } else if rest > 0.0 {
            let mut h = self.scale(1.0 / rest);
            h.h11 = 0.0;
            h
        } else {
            *self
        }
    }

    /// Whether `self` equals `other` up to a nonzero real factor.
    pub fn proportional_to(&self, other: &HermitianForm, tol: f64) -> bool {
        let a = self.to_mat().to_real8();
        let b = other.to_mat().to_real8();
        let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
        let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            return false;
        }
        let dot: f64 = a.iter().zip(b.iter()).map(|(x, y)| x * y).sum::<f64>() / (na * nb);
        1.0 - dot.abs() <= tol
    }
}

/// `g†·H·g`.
pub fn form_action(g: &Mat2, h: &HermitianForm) -> HermitianForm {
    h.act(g)
}

pub(crate) mod complex_pair {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        [z.re, z.im].serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        let [re, im] = <[f64; 2]>::deserialize(d)?;
        Ok(Complex64::new(re, im))
    }
}
