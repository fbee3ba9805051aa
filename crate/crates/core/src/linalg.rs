//! Exact 2×2 complex matrix algebra.
//!
//! Everything here is closed form: operator norms from the Frobenius norm and
//! the determinant, Hermitian functional calculus from the two eigenvalues, and
//! the matricial Möbius automorphism of the unit ball of `C^{2×2}`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Eigenvalues of `1 - Z*Z` below this are clipped before inversion.
pub const EIG_CLIP: f64 = 1e-14;
/// Absolute tolerance for Hermitian checks.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Condition number above which `1 - Z*X` counts as singular.
pub const RESOLVENT_COND_MAX: f64 = 1e12;

/// A 2×2 complex matrix `[[a11, a12], [a21, a22]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub a11: Complex64,
    pub a12: Complex64,
    pub a21: Complex64,
    pub a22: Complex64,
}

/// A vector of `C^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vec2 {
    pub c1: Complex64,
    pub c2: Complex64,
}

impl Vec2 {
    pub const fn new(c1: Complex64, c2: Complex64) -> Self {
        Vec2 { c1, c2 }
    }

    pub fn e1() -> Self {
        Vec2::new(ONE, ZERO)
    }

    pub fn e2() -> Self {
        Vec2::new(ZERO, ONE)
    }

    pub fn norm_sq(&self) -> f64 {
        self.c1.norm_sqr() + self.c2.norm_sqr()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// `<self, other> = Σ self_i · conj(other_i)`.
    pub fn inner(&self, other: &Vec2) -> Complex64 {
        self.c1 * other.c1.conj() + self.c2 * other.c2.conj()
    }

    pub fn scale(&self, s: Complex64) -> Vec2 {
        Vec2::new(self.c1 * s, self.c2 * s)
    }

    pub fn conj(&self) -> Vec2 {
        Vec2::new(self.c1.conj(), self.c2.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.norm_sq() == 0.0
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.c1 + o.c1, self.c2 + o.c2)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.c1 - o.c1, self.c2 - o.c2)
    }
}

impl Mat2 {
    pub const fn new(a11: Complex64, a12: Complex64, a21: Complex64, a22: Complex64) -> Self {
        Mat2 { a11, a12, a21, a22 }
    }

    /// Real-entry constructor, handy in tests and examples.
    pub fn real(a11: f64, a12: f64, a21: f64, a22: f64) -> Self {
        Mat2::new(a11.into(), a12.into(), a21.into(), a22.into())
    }

    pub const fn zero() -> Self {
        Mat2::new(ZERO, ZERO, ZERO, ZERO)
    }

    pub const fn identity() -> Self {
        Mat2::new(ONE, ZERO, ZERO, ONE)
    }

    pub fn diag(d1: Complex64, d2: Complex64) -> Self {
        Mat2::new(d1, ZERO, ZERO, d2)
    }

    pub fn scalar(s: Complex64) -> Self {
        Mat2::diag(s, s)
    }

    pub fn entries(&self) -> [Complex64; 4] {
        [self.a11, self.a12, self.a21, self.a22]
    }

    pub fn from_entries(e: [Complex64; 4]) -> Self {
        Mat2::new(e[0], e[1], e[2], e[3])
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Mat2 {
        Mat2::new(
            self.a11.conj(),
            self.a21.conj(),
            self.a12.conj(),
            self.a22.conj(),
        )
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a11, self.a21, self.a12, self.a22)
    }

    pub fn det(&self) -> Complex64 {
        self.a11 * self.a22 - self.a12 * self.a21
    }

    pub fn trace(&self) -> Complex64 {
        self.a11 + self.a22
    }

    /// Classical adjugate, `adj(A) A = det(A) I`.
    pub fn adjugate(&self) -> Mat2 {
        Mat2::new(self.a22, -self.a12, -self.a21, self.a11)
    }

    pub fn inverse(&self) -> Option<Mat2> {
        let d = self.det();
        if d == ZERO || !d.is_finite() {
            return None;
        }
        Some(self.adjugate().scale(d.inv()))
    }

    pub fn scale(&self, s: Complex64) -> Mat2 {
        Mat2::new(self.a11 * s, self.a12 * s, self.a21 * s, self.a22 * s)
    }

    pub fn apply(&self, v: &Vec2) -> Vec2 {
        Vec2::new(
            self.a11 * v.c1 + self.a12 * v.c2,
            self.a21 * v.c1 + self.a22 * v.c2,
        )
    }

    pub fn column(&self, k: usize) -> Vec2 {
        match k {
            0 => Vec2::new(self.a11, self.a21),
            _ => Vec2::new(self.a12, self.a22),
        }
    }

    /// Outer product `x y*`.
    pub fn outer(x: &Vec2, y: &Vec2) -> Mat2 {
        Mat2::new(
            x.c1 * y.c1.conj(),
            x.c1 * y.c2.conj(),
            x.c2 * y.c1.conj(),
            x.c2 * y.c2.conj(),
        )
    }

    pub fn frobenius_sq(&self) -> f64 {
        self.entries().iter().map(|c| c.norm_sqr()).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Mat2) -> f64 {
        let d = *self - *other;
        d.entries().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries().iter().all(|c| c.is_finite())
    }

    /// Squares of the two singular values, largest first.
    ///
    /// With `t = ‖A‖_F²` and `δ = |det A|²`, the squares solve `s² - t s + δ = 0`.
    pub fn singular_values_sq(&self) -> (f64, f64) {
        // Eigenvalues of A*A in gap form, free of the t² - 4|det|² cancellation.
        let t = self.frobenius_sq();
        let delta = self.det().norm_sqr();
        let c1 = self.a11.norm_sqr() + self.a21.norm_sqr();
        let c2 = self.a12.norm_sqr() + self.a22.norm_sqr();
        let off = self.a11.conj() * self.a12 + self.a21.conj() * self.a22;
        let big = 0.5 * (t + ((c1 - c2) * (c1 - c2) + 4.0 * off.norm_sqr()).sqrt());
        let small = if big > 0.0 { delta / big } else { 0.0 };
        (big, small)
    }

    /// Operator (spectral) norm: the largest singular value.
    pub fn op_norm(&self) -> f64 {
        self.singular_values_sq().0.sqrt()
    }

    pub fn min_singular_value(&self) -> f64 {
        self.singular_values_sq().1.sqrt()
    }

    /// `max(|H - H*|)` entrywise.
    pub fn hermitian_defect(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_defect() <= tol
    }
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

impl Mul<Complex64> for Mat2 {
    type Output = Mat2;
    fn mul(self, s: Complex64) -> Mat2 {
        self.scale(s)
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            self.a11, self.a12, self.a21, self.a22
        )
    }
}

impl Serialize for Mat2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let e = self.entries().map(|c| [c.re, c.im]);
        e.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Mat2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let e = <[[f64; 2]; 4]>::deserialize(d)?;
        Ok(Mat2::from_entries(e.map(|[re, im]| Complex64::new(re, im))))
    }
}

impl Serialize for Vec2 {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [[self.c1.re, self.c1.im], [self.c2.re, self.c2.im]].serialize(s)
    }
}

impl<'de> Deserialize<'de> for Vec2 {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [[a, b], [c, e]] = <[[f64; 2]; 2]>::deserialize(d)?;
        Ok(Vec2::new(Complex64::new(a, b), Complex64::new(c, e)))
    }
}

/// Free-function form of [`Mat2::op_norm`].
pub fn op_norm(m: &Mat2) -> f64 {
    m.op_norm()
}

/// Spectral data of a Hermitian 2×2 matrix: eigenvalues `lo <= hi`.
fn hermitian_eigenvalues(h: &Mat2) -> (f64, f64) {
    let p = h.a11.re;
    let s = h.a22.re;
    let mean = 0.5 * (p + s);
    let half_gap = (0.25 * (p - s) * (p - s) + h.a12.norm_sqr()).sqrt();
    (mean - half_gap, mean + half_gap)
}

/// Apply a scalar function to a Hermitian matrix.
///
/// Uses `f(H) = f(lo) I + Δ (H - lo I)` where `Δ` is the divided difference
/// `(f(hi) - f(lo)) / (hi - lo)`, supplied by the caller in a form that stays
/// accurate as `hi → lo`.
fn hermitian_apply(h: &Mat2, f: impl Fn(f64) -> f64, divided: impl Fn(f64, f64) -> f64) -> Mat2 {
    let (lo, hi) = hermitian_eigenvalues(h);
    let f_lo = f(lo);
    let slope = divided(lo, hi);
    Mat2::scalar(f_lo.into()) + (*h - Mat2::scalar(lo.into())).scale(slope.into())
}

/// `H^{1/2}` for Hermitian positive semidefinite `H`; eigenvalues clipped at [`EIG_CLIP`].
pub fn hermitian_sqrt(h: &Mat2) -> Mat2 {
    hermitian_apply(
        h,
        |x| x.max(EIG_CLIP).sqrt(),
        |a, b| 1.0 / (a.max(EIG_CLIP).sqrt() + b.max(EIG_CLIP).sqrt()),
    )
}

/// `H^{-1/2}` for Hermitian positive definite `H`; eigenvalues clipped at [`EIG_CLIP`].
pub fn hermitian_inv_sqrt(h: &Mat2) -> Mat2 {
    hermitian_apply(
        h,
        |x| 1.0 / x.max(EIG_CLIP).sqrt(),
        |a, b| {
            let (ra, rb) = (a.max(EIG_CLIP).sqrt(), b.max(EIG_CLIP).sqrt());
            -1.0 / (ra * rb * (ra + rb))
        },
    )
}

fn require_strict_contraction(z: &Mat2) -> Result<()> {
    let norm = z.op_norm();
    if norm < 1.0 {
        Ok(())
    } else {
        Err(Error::NotContraction { norm })
    }
}

/// Matricial Möbius transformation
/// `M_Z(X) = (1 - ZZ*)^{-1/2} (X - Z)(1 - Z*X)^{-1} (1 - Z*Z)^{1/2}`.
///
/// `M_Z` maps `Z` to `0`, preserves the open unit ball, and `M_{-Z}` inverts it.
pub fn mobius(z: &Mat2, x: &Mat2) -> Result<Mat2> {
    require_strict_contraction(z)?;
    let zs = z.adjoint();
    let left = hermitian_inv_sqrt(&(Mat2::identity() - *z * zs));
    let right = hermitian_sqrt(&(Mat2::identity() - zs * *z));
    let resolvent = Mat2::identity() - zs * *x;
    let (big, small) = resolvent.singular_values_sq();
    let condition = if small > 0.0 {
        (big / small).sqrt()
    } else {
        f64::INFINITY
    };
    if !(condition <= RESOLVENT_COND_MAX) {
        return Err(Error::SingularResolvent { condition });
    }
    let inv = resolvent
        .inverse()
        .ok_or(Error::SingularResolvent { condition })?;
    Ok(left * (*x - *z) * inv * right)
}

/// The vectors
/// `u_Z(α) = (1 - ZZ*)^{-1/2}(α₁ Z e₁ + α₂ e₂)` and
/// `v_Z(α) = -(1 - Z*Z)^{-1/2}(α₁ e₁ + α₂ Z* e₂)`.
///
/// For a contraction `X`, `[M_{-Z}(X)]₂₂ = 0` exactly when `X* u_Z(α) = v_Z(α)`
/// for some nonzero `α`.
pub fn uv_vectors(z: &Mat2, alpha: &Vec2) -> Result<(Vec2, Vec2)> {
    require_strict_contraction(z)?;
    if alpha.is_zero() {
        return Err(Error::ZeroAlpha);
    }
    let zs = z.adjoint();
    let u_inner = z.column(0).scale(alpha.c1) + Vec2::e2().scale(alpha.c2);
    let v_inner = Vec2::e1().scale(alpha.c1) + zs.column(1).scale(alpha.c2);
    let u = hermitian_inv_sqrt(&(Mat2::identity() - *z * zs)).apply(&u_inner);
    let v = hermitian_inv_sqrt(&(Mat2::identity() - zs * *z))
        .apply(&v_inner)
        .scale((-1.0).into());
    Ok((u, v))
}

/// The test matrix
/// ```text
/// K_Z(ρ) = [ [(1-ρ²Z*Z)(1-Z*Z)^{-1}]₁₁      [(1-ρ²)(1-ZZ*)^{-1}Z]₂₁   ]
///          [ [(1-ρ²)Z*(1-ZZ*)^{-1}]₁₂       [(ZZ*-ρ²)(1-ZZ*)^{-1}]₂₂  ]
/// ```
pub fn k_matrix(z: &Mat2, rho: f64) -> Result<Mat2> {
    require_strict_contraction(z)?;
    if !(0.0..1.0).contains(&rho) {
        return Err(Error::InvalidArgument(format!(
            "rho = {rho} must lie in [0, 1)"
        )));
    }
    let id = Mat2::identity();
    let zs = z.adjoint();
    let r2: Complex64 = (rho * rho).into();
    let inv_zsz = (id - zs * *z)
        .inverse()
        .ok_or(Error::NotContraction { norm: 1.0 })?;
    let inv_zzs = (id - *z * zs)
        .inverse()
        .ok_or(Error::NotContraction { norm: 1.0 })?;
    let one_minus_r2: Complex64 = (1.0 - rho * rho).into();
    let k11 = ((id - (zs * *z).scale(r2)) * inv_zsz).a11;
    let k12 = (inv_zzs * *z).scale(one_minus_r2).a21;
    let k21 = (zs * inv_zzs).scale(one_minus_r2).a12;
    let k22 = ((*z * zs - Mat2::scalar(r2)) * inv_zzs).a22;
    Ok(Mat2::new(k11, k12, k21, k22))
}

/// Hermitian form in the row-vector convention, `αᵀ K ᾱ = Σ α_i K_ik conj(α_k)`.
///
/// This is the convention in which
/// `αᵀ K_Z(ρ) ᾱ = ‖v_Z(α)‖² - ρ² ‖u_Z(α)‖²`.
pub fn row_form(k: &Mat2, alpha: &Vec2) -> f64 {
    let (a1, a2) = (alpha.c1, alpha.c2);
    let s = a1 * k.a11 * a1.conj()
        + a1 * k.a12 * a2.conj()
        + a2 * k.a21 * a1.conj()
        + a2 * k.a22 * a2.conj();
    s.re
}

/// Smallest eigenvalue of a Hermitian matrix and a unit eigenvector for it.
///
/// The eigenvector phase is fixed so that its first component is real and
/// positive (or, when that component vanishes, the second one).
pub fn hermitian_min_eig(h: &Mat2) -> Result<(f64, Vec2)> {
    let defect = h.hermitian_defect();
    if defect > HERMITIAN_TOL * h.frobenius_sq().sqrt().max(1.0) {
        return Err(Error::NotHermitian { defect });
    }
    let (lo, _) = hermitian_eigenvalues(h);
    let p = h.a11.re;
    let s = h.a22.re;
    let r = 0.5 * (h.a12 + h.a21.conj());
    // Null vectors of the two rows of H - lo I; keep the better conditioned one.
    let from_row1 = Vec2::new(r, Complex64::from(lo - p));
    let from_row2 = Vec2::new(Complex64::from(lo - s), r.conj());
    let mut v = if from_row1.norm_sq() >= from_row2.norm_sq() {
        from_row1
    } else {
        from_row2
    };
    if v.norm_sq() == 0.0 {
        // H is a multiple of the identity.
        v = Vec2::e1();
    }
    let v = v.scale((1.0 / v.norm()).into());
    let pivot = if v.c1.norm() > 1e-12 { v.c1 } else { v.c2 };
    let phase = pivot.conj() / pivot.norm();
    Ok((lo, v.scale(phase)))
}
