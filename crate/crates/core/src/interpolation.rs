//! Analytic discs `ψ: D → G̃_n` with `ψ(0) = 0` and `ψ(λ₀) = y⁰`.
//!
//! Each factor is `F(λ) = M_{-Z}(B(λ) Q(λ)) diag(λ, 1)` with `Z = Z_{ν,j}`, `B` the
//! Blaschke factor vanishing at `λ₀`, and `Q` a Schur function whose value at the
//! origin is pinned by `Q(0)* conj(λ₀) u_Z(α) = v_Z(α)`. Then `F(0)` has a zero
//! diagonal and `F(λ₀) = Z diag(λ₀, 1)`, so `ψ = π_n(F₁, …)` interpolates.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{binom, in_gtilde, in_jn, pi_assemble, PointGn};
use crate::json;
use crate::linalg::{mobius, uv_vectors, Mat2, Vec2};
use crate::oracles::{halton_disc, DEFAULT_SEED};
use crate::poly::{balanced_factorize_rational, poly_roots, BalancedFactors, PolyC};
use crate::schwarz::{blaschke_b, SchwarzInstance};

/// Tolerance on `Q(0)* conj(λ₀) u = v`.
pub const Q_CONSTRAINT_TOL: f64 = 1e-10;
/// Allowed excess of `sup ‖Q‖` over 1 on the test circle.
pub const SCHUR_TOL: f64 = 1e-9;
/// Radius of the circle on which Schur tails are sampled.
pub const SCHUR_RADIUS: f64 = 0.999;
/// Largest allowed spread of factor determinants.
pub const DET_TOL: f64 = 1e-9;

/// Matrix polynomial `Σ_k C_k λ^k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MatPoly {
    pub coeffs: Vec<Mat2>,
}

impl MatPoly {
    pub fn constant(m: Mat2) -> Self {
        MatPoly { coeffs: vec![m] }
    }

    pub fn eval(&self, l: Complex64) -> Mat2 {
        self.coeffs
            .iter()
            .rev()
            .fold(Mat2::zero(), |acc, &c| acc.scale(l) + c)
    }

    pub fn at_zero(&self) -> Mat2 {
        self.coeffs.first().copied().unwrap_or_else(Mat2::zero)
    }

    /// Entry `(row, col)` (0-based) as a scalar polynomial.
    fn entry(&self, k: usize) -> PolyC {
        PolyC::new(self.coeffs.iter().map(|m| m.entries()[k]).collect())
    }

    /// Largest `‖Q(λ)‖` over `samples` points of the circle of radius `r`.
    pub fn sup_on_circle(&self, r: f64, samples: usize) -> f64 {
        (0..samples)
            .map(|k| {
                let l = Complex64::from_polar(r, std::f64::consts::TAU * k as f64 / samples as f64);
                self.eval(l).op_norm()
            })
            .fold(0.0, f64::max)
    }
}

/// 2×2 matrix of polynomials.
#[derive(Clone, Debug)]
struct PolyMat([PolyC; 4]);

impl PolyMat {
    fn from_matpoly(m: &MatPoly) -> Self {
        PolyMat([m.entry(0), m.entry(1), m.entry(2), m.entry(3)])
    }

    fn constant(m: &Mat2) -> Self {
        PolyMat(m.entries().map(PolyC::constant))
    }

    fn scale(&self, p: &PolyC) -> Self {
        PolyMat(self.0.clone().map(|e| e * p.clone()))
    }

    fn add(&self, o: &PolyMat) -> Self {
        let [a, b, c, d] = self.0.clone();
        let [e, f, g, h] = o.0.clone();
        PolyMat([a + e, b + f, c + g, d + h])
    }

    fn mul(&self, o: &PolyMat) -> Self {
        let [a, b, c, d] = self.0.clone();
        let [e, f, g, h] = o.0.clone();
        PolyMat([
            a.clone() * e.clone() + b.clone() * g.clone(),
            a * f.clone() + b * h.clone(),
            c.clone() * e + d.clone() * g,
            c * f + d * h,
        ])
    }

    fn adjugate(&self) -> Self {
        let [a, b, c, d] = self.0.clone();
        let neg = PolyC::constant((-1.0).into());
        PolyMat([d, b * neg.clone(), c * neg, a])
    }

    fn det(&self) -> PolyC {
        let [a, b, c, d] = self.0.clone();
        a * d - b * c
    }
}

/// One factor `F(λ) = M_{-Z}(B(λ) Q(λ)) diag(λ, 1)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InterpolantFactor {
    pub j: usize,
    pub z: Mat2,
    #[serde(with = "json::complex")]
    pub lambda0: Complex64,
    pub nu: f64,
    pub alpha: Vec2,
    pub q: MatPoly,
}

impl InterpolantFactor {
    pub fn eval(&self, l: Complex64) -> Result<Mat2> {
        let modulus = l.norm();
        if !(modulus < 1.0) {
            return Err(Error::OutsideDisc { modulus });
        }
        let x = self.q.eval(l).scale(blaschke_b(self.lambda0, l));
        let g = mobius(&-self.z, &x)?;
        Ok(g * Mat2::diag(l, 1.0.into()))
    }

    /// `‖Q(0)* conj(λ₀) u_Z(α) - v_Z(α)‖`.
    pub fn q_constraint_residual(&self) -> Result<f64> {
        let (u, v) = uv_vectors(&self.z, &self.alpha)?;
        Ok((self
            .q
            .at_zero()
            .adjoint()
            .apply(&u)
            .scale(self.lambda0.conj())
            - v)
            .norm())
    }

    fn check_q(&self) -> Result<()> {
        let residual = self.q_constraint_residual()?;
        if !(residual <= Q_CONSTRAINT_TOL) {
            return Err(Error::QConstraintViolated { residual });
        }
        let sup = self.q.sup_on_circle(SCHUR_RADIUS, 360);
        if !(sup <= 1.0 + SCHUR_TOL) {
            return Err(Error::NotSchur { sup });
        }
        Ok(())
    }
}

/// Free-function form of [`InterpolantFactor::eval`].
pub fn eval_factor(fac: &InterpolantFactor, l: Complex64) -> Result<Mat2> {
    fac.eval(l)
}

/// `ψ = π_n(F₁, …, F_k)`; a single factor stands for `π̂_n(F)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interpolant {
    pub n: usize,
    #[serde(with = "json::complex")]
    pub lambda0: Complex64,
    pub target: PointGn,
    pub factors: Vec<InterpolantFactor>,
}

impl Interpolant {
    pub fn eval(&self, l: Complex64) -> Result<PointGn> {
        let mats = self
            .factors
            .iter()
            .map(|f| f.eval(l))
            .collect::<Result<Vec<_>>>()?;
        if mats.len() == 1 {
            return Ok(pi_assemble(&vec![mats[0]; self.n / 2], self.n));
        }
        if mats.len() != self.n / 2 {
            return Err(Error::LengthMismatch {
                expected: self.n / 2,
                found: mats.len(),
            });
        }
        let spread = det_spread(&mats);
        if spread > DET_TOL {
            return Err(Error::DetInconsistent { spread });
        }
        Ok(pi_assemble(&mats, self.n))
    }
}

fn det_spread(mats: &[Mat2]) -> f64 {
    let d0 = mats[0].det();
    mats.iter()
        .map(|m| (m.det() - d0).norm())
        .fold(0.0, f64::max)
}

/// Free-function form of [`Interpolant::eval`].
pub fn eval_interpolant(psi: &Interpolant, l: Complex64) -> Result<PointGn> {
    psi.eval(l)
}

/// Construction for targets in `J_n` (including `n = 2`), with pair index `j = 1`.
///
/// `nu` defaults to [`crate::schwarz::SchwarzData::default_nu`]; `q` defaults to the
/// constant `Q(0)` built from the minimal eigenvector `α`. A caller-supplied `q`
/// must satisfy the `Q(0)` constraint for that `α` and be Schur on the test circle.
pub fn build_interpolant_jn(
    y: &PointGn,
    lambda0: Complex64,
    nu: Option<f64>,
    q: Option<MatPoly>,
) -> Result<Interpolant> {
    if !in_jn(y) {
        return Err(Error::hypothesis("y in J_n", in_gtilde(y).worst_margin()));
    }
    let inst = SchwarzInstance::new(lambda0, y.clone(), 1)?;
    let data = inst.compute()?;
    let nu = nu.unwrap_or_else(|| data.default_nu());
    if !data.admits(nu) {
        return Err(Error::NuOutOfRange {
            nu,
            theta: data.theta,
            vartheta: data.vartheta,
        });
    }
    let alpha = inst.choose_alpha(nu)?;
    let q = match q {
        Some(q) => q,
        None => MatPoly::constant(inst.build_q0(nu, &alpha)?),
    };
    let factor = InterpolantFactor {
        j: 1,
        z: inst.z_matrix(nu)?,
        lambda0,
        nu,
        alpha,
        q,
    };
    factor.check_q()?;
    Ok(Interpolant {
        n: y.n(),
        lambda0,
        target: y.clone(),
        factors: vec![factor],
    })
}

/// The case `G̃₂`: `ψ = (tr F, det F)` through `(s, p)` at `λ₀`.
pub fn build_interpolant_g2(
    s: Complex64,
    p: Complex64,
    lambda0: Complex64,
    nu: Option<f64>,
    q: Option<MatPoly>,
) -> Result<Interpolant> {
    build_interpolant_jn(&PointGn::g2(s, p), lambda0, nu, q)
}

/// The default verification grid: Halton points in the disc plus a ring at radius 0.999.
pub fn default_grid(count: usize, seed: u64) -> Vec<Complex64> {
    let mut pts = halton_disc(count, seed, 1.0);
    pts.extend(
        (0..360).map(|k| Complex64::from_polar(0.999, std::f64::consts::TAU * k as f64 / 360.0)),
    );
    pts
}

/// Outcome of [`verify_interpolant`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    /// `max |ψ(0)|`.
    pub origin_residual: f64,
    /// `max |ψ(λ₀) - y⁰|`.
    pub endpoint_residual: f64,
    /// Smallest membership margin over the grid.
    pub worst_margin: f64,
    /// Largest spread of factor determinants over the grid.
    pub worst_det_spread: f64,
    /// Largest factor operator norm over the grid.
    pub max_factor_norm: f64,
    /// Largest `Q(0)` constraint residual.
    pub q_residual: f64,
    pub samples: usize,
    pub passed: bool,
}

/// Endpoint residuals, membership margins and determinant consistency over `grid`.
pub fn verify_interpolant(psi: &Interpolant, grid: &[Complex64]) -> Result<VerifyReport> {
    let origin = psi.eval(Complex64::new(0.0, 0.0))?;
    let origin_residual = origin.max_modulus();
    let endpoint_residual = psi.eval(psi.lambda0)?.max_abs_diff(&psi.target);
    let q_residual = psi
        .factors
        .iter()
        .map(|f| f.q_constraint_residual())
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let mut worst_margin = f64::INFINITY;
    let mut worst_det_spread: f64 = 0.0;
    let mut max_factor_norm: f64 = 0.0;
    for &l in grid {
        let mats = psi
            .factors
            .iter()
            .map(|f| f.eval(l))
            .collect::<Result<Vec<_>>>()?;
        worst_det_spread = worst_det_spread.max(det_spread(&mats));
        for m in &mats {
            max_factor_norm = max_factor_norm.max(m.op_norm());
        }
        let point = if mats.len() == 1 {
            pi_assemble(&vec![mats[0]; psi.n / 2], psi.n)
        } else {
            pi_assemble(&mats, psi.n)
        };
        worst_margin = worst_margin.min(in_gtilde(&point).worst_margin());
    }
    let passed = origin_residual <= 1e-10
        && endpoint_residual <= 1e-8
        && worst_margin > 0.0
        && worst_det_spread <= DET_TOL
        && max_factor_norm < 1.0
        && q_residual <= Q_CONSTRAINT_TOL;
    Ok(VerifyReport {
        origin_residual,
        endpoint_residual,
        worst_margin,
        worst_det_spread,
        max_factor_norm,
        q_residual,
        samples: grid.len(),
        passed,
    })
}

/// A rational curve `λ ↦ (num_1, …, num_n)(λ) / den(λ)`, the last coordinate being `q`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalCurve {
    pub n: usize,
    pub num: Vec<PolyC>,
    pub den: PolyC,
}

impl RationalCurve {
    /// Polynomial coordinates, denominator `1`.
    pub fn polynomial(coords: Vec<PolyC>) -> Result<Self> {
        let n = coords.len();
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        Ok(RationalCurve {
            n,
            num: coords,
            den: PolyC::constant(1.0.into()),
        })
    }

    pub fn eval(&self, l: Complex64) -> Result<PointGn> {
        let d = self.den.eval(l);
        let coords: Vec<Complex64> = self.num.iter().map(|p| p.eval(l) / d).collect();
        PointGn::from_coords(&coords)
    }

    fn validate(&self) -> Result<()> {
        if self.num.len() != self.n || self.n < 2 {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.num.len(),
            });
        }
        if self.den.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.den.degree().unwrap_or(0) > 0 {
            let closest = poly_roots(&self.den)?
                .into_iter()
                .map(|r| r.norm())
                .fold(f64::INFINITY, f64::min);
            if closest <= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "denominator vanishes at modulus {closest} in the closed disc"
                )));
            }
        }
        Ok(())
    }
}

/// The exact rational form of a single-factor interpolant with polynomial `Q`.
///
/// With `P = (λ₀ - λ) Q`, `d = 1 - conj(λ₀) λ`, `A = (1 - ZZ*)^{-1/2}`,
/// `B = (1 - Z*Z)^{1/2}`: `M_{-Z}(P/d) = A (P + dZ) adj(dI + Z*P) B / δ` with
/// `δ = det(dI + Z*P)`, and `det F = λ det(P + dZ)/δ` because `det A det B = 1`.
pub fn to_rational_curve(psi: &Interpolant) -> Result<RationalCurve> {
    if psi.factors.len() != 1 {
        return Err(Error::InvalidArgument(
            "rational form is only available for single-factor interpolants".into(),
        ));
    }
    let f = &psi.factors[0];
    let z = f.z;
    let zs = z.adjoint();
    let id = Mat2::identity();
    let a = crate::linalg::hermitian_inv_sqrt(&(id - z * zs));
    let b = crate::linalg::hermitian_sqrt(&(id - zs * z));
    let blaschke_num = PolyC::new(vec![f.lambda0, (-1.0).into()]);
    let d = PolyC::new(vec![1.0.into(), -f.lambda0.conj()]);
    let p = PolyMat::from_matpoly(&f.q).scale(&blaschke_num);
    let p_plus_dz = p.add(&PolyMat::constant(&z).scale(&d));
    let inner = PolyMat::constant(&id)
        .scale(&d)
        .add(&PolyMat::constant(&zs).mul(&p));
    let delta = inner.det();
    let n_mat = PolyMat::constant(&a)
        .mul(&p_plus_dz)
        .mul(&inner.adjugate())
        .mul(&PolyMat::constant(&b));
    let lam = PolyC::lambda();
    let f11 = n_mat.0[0].clone() * lam.clone();
    let f22 = n_mat.0[3].clone();
    let qn = p_plus_dz.det() * lam;
    let n = psi.n;
    let mut num = vec![PolyC::zero(); n];
    for j in 1..=n / 2 {
        let c: Complex64 = binom(n, j).into();
        if 2 * j == n {
            num[j - 1] = (f11.clone() + f22.clone()).scale(c * 0.5);
        } else {
            num[j - 1] = f11.scale(c);
            num[n - j - 1] = f22.scale(c);
        }
    }
    num[n - 1] = qn;
    Ok(RationalCurve { n, num, den: delta })
}

/// What [`characterize`] recovers for one pair index.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CharacterizedFactor {
    pub j: usize,
    /// `|f_j(λ₀)/w_j|`.
    pub nu: f64,
    /// `G_j(λ₀)` after the diagonal unitary making `ν` positive.
    pub g_at_lambda0: Mat2,
    /// `Z_{ν,j}` built from `ψ(λ₀)` with the recovered `ν`.
    pub z: Mat2,
    /// `‖G_j(λ₀) - Z_{ν,j}‖` entrywise.
    pub z_residual: f64,
    /// Whether `θ_j < ν² < ϑ_j`; absent when the Schwarz hypotheses fail for `j`.
    pub nu_in_window: Option<bool>,
    pub theta: Option<f64>,
    pub vartheta: Option<f64>,
    /// Largest `‖F_j‖` on the unit circle.
    pub max_norm_circle: f64,
    /// Largest `‖F_j‖` on an interior grid.
    pub max_norm_interior: f64,
    /// Largest `|det F_j - ψ_n|` on the interior grid.
    pub det_residual: f64,
    /// Largest `|f g - h|` on the interior grid.
    pub product_residual: f64,
    /// Largest `||f| - |g||` on the unit circle.
    pub balance_residual: f64,
    /// `‖F_j‖ <= 1` on the circle and `< 1` inside.
    pub schur: bool,
    pub factors: BalancedFactors,
}

/// Recover the factors `F_j = [[ψ_j/C, f_j], [g_j, ψ_{n-j}/C]]` of an analytic disc.
///
/// `f_j g_j = h_j = ψ_j ψ_{n-j}/C² - ψ_n` is the balanced factorization, so
/// `π_n(F₁, …) = ψ` by construction. The caller is responsible for `ψ(D) ⊂ G̃_n`;
/// the Schur property of each `F_j` is reported, not enforced.
pub fn characterize(curve: &RationalCurve, lambda0: Complex64) -> Result<Vec<CharacterizedFactor>> {
    curve.validate()?;
    let n = curve.n;
    let modulus = lambda0.norm();
    if !(modulus > 0.0 && modulus < 1.0) {
        return Err(Error::OutsideDisc { modulus });
    }
    if curve.num.iter().all(|p| p.is_zero()) {
        return Err(Error::DegenerateTarget { j: 1 });
    }
    let origin = curve.eval(Complex64::new(0.0, 0.0))?;
    if origin.max_modulus() > 1e-10 {
        return Err(Error::InvalidArgument(format!(
            "psi(0) is not the origin (max modulus {:e})",
            origin.max_modulus()
        )));
    }
    let y0 = curve.eval(lambda0)?;
    let interior = halton_disc(200, DEFAULT_SEED, 0.99);
    let circle: Vec<Complex64> = (0..360)
        .map(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 360.0))
        .collect();
    let mut out = Vec::new();
    for j in 1..=n / 2 {
        let c = binom(n, j);
        let dj = y0.coord(j) * y0.coord(n - j) - y0.q() * (c * c);
        if dj.norm() <= 1e-14 {
            return Err(Error::DegenerateTarget { j });
        }
        let (pj, pnj) = (curve.num[j - 1].clone(), curve.num[n - j - 1].clone());
        let h_num = (pj.clone() * pnj.clone()).scale((1.0 / (c * c)).into())
            - curve.num[n - 1].clone() * curve.den.clone();
        if h_num.is_zero() {
            return Err(Error::FactorizationFailed(format!(
                "h_{j} vanishes identically"
            )));
        }
        let bf = balanced_factorize_rational(&h_num, &curve.den)
            .map_err(|e| Error::FactorizationFailed(e.to_string()))?;
        let entry = |l: Complex64| -> Mat2 {
            let den = curve.den.eval(l);
            Mat2::new(
                pj.eval(l) / (den * c),
                bf.f(l),
                bf.g(l),
                pnj.eval(l) / (den * c),
            )
        };
        // Normalize the phase of ν with a diagonal unitary.
        let w = (dj / (lambda0 * (c * c))).sqrt();
        let nu_c = bf.f(lambda0) / w;
        let nu = nu_c.norm();
        let u = nu_c / nu;
        let at = entry(lambda0);
        let g = Mat2::new(
            at.a11 / lambda0,
            at.a12 * u.conj(),
            at.a21 * u / lambda0,
            at.a22,
        );
        let c_inv = 1.0 / c;
        let z = Mat2::new(
            y0.coord(j) / lambda0 * c_inv,
            w * nu,
            w / nu,
            y0.coord(n - j) * c_inv,
        );
        let z_residual = g.max_abs_diff(&z);
        let (nu_in_window, theta, vartheta) =
            match SchwarzInstance::new(lambda0, y0.clone(), j).and_then(|inst| inst.compute()) {
                Ok(d) => (Some(d.admits(nu)), Some(d.theta), Some(d.vartheta)),
                Err(_) => (None, None, None),
            };
        let max_norm_circle = circle
            .iter()
            .map(|&l| entry(l).op_norm())
            .fold(0.0, f64::max);
        let mut max_norm_interior: f64 = 0.0;
        let mut det_residual: f64 = 0.0;
        let mut product_residual: f64 = 0.0;
        for &l in &interior {
            let m = entry(l);
            max_norm_interior = max_norm_interior.max(m.op_norm());
            let qv = curve.num[n - 1].eval(l) / curve.den.eval(l);
            det_residual = det_residual.max((m.det() - qv).norm());
            let hv = h_num.eval(l) / (curve.den.eval(l) * curve.den.eval(l));
            product_residual = product_residual.max((bf.f(l) * bf.g(l) - hv).norm());
        }
        let balance_residual = circle
            .iter()
            .map(|&l| (bf.f(l).norm() - bf.g(l).norm()).abs())
            .fold(0.0, f64::max);
        let schur = max_norm_circle <= 1.0 + 1e-9 && max_norm_interior < 1.0;
        out.push(CharacterizedFactor {
            j,
            nu,
            g_at_lambda0: g,
            z,
            z_residual,
            nu_in_window,
            theta,
            vartheta,
            max_norm_circle,
            max_norm_interior,
            det_residual,
            product_residual,
            balance_residual,
            schur,
            factors: bf,
        });
    }
    Ok(out)
}
