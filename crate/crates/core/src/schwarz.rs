//! Two-point Schwarz data for a target `y⁰` at a node `λ₀`.
//!
//! For a pair index `j` with `C = C(n, j)` and `D = y_j⁰ y_{n-j}⁰ - C² q⁰`, the
//! matrices
//! ```text
//! Z_{ν,j} = [[ y_j⁰/(C λ₀),  ν w_j       ],
//!            [ w_j/ν,        y_{n-j}⁰/C  ]],   w_j² = D/(C² λ₀),
//! ```
//! are strict contractions exactly for `θ_j < ν² < ϑ_j`, the roots of
//! `z + 1/z = X_{n-j}`. Inside that window `K_{Z_{ν,j}}(|λ₀|)` has a negative
//! eigenvalue, which yields the Schur parameter `Q(0)` of the interpolant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{binom, in_gtilde, phi_supnorm, PointGn};
use crate::json;
use crate::linalg::{hermitian_min_eig, k_matrix, uv_vectors, Mat2, Vec2};

/// Below this `|D|` the target counts as degenerate.
pub const DEGENERATE_TOL: f64 = 1e-14;
/// Slack allowed on `‖Q(0)‖ <= 1`.
pub const Q_NORM_TOL: f64 = 1e-12;

/// The data `(λ₀, y⁰, j)` of one Schwarz problem.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzInstance {
    #[serde(with = "json::complex")]
    pub lambda0: Complex64,
    pub y0: PointGn,
    pub j: usize,
}

/// The scalars of the norm window.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SchwarzData {
    #[serde(with = "json::complex")]
    pub w: Complex64,
    pub x_j: f64,
    pub x_nj: f64,
    pub r_j: f64,
    pub theta: f64,
    pub vartheta: f64,
}

impl SchwarzData {
    /// Whether `θ_j < ν² < ϑ_j`.
    pub fn admits(&self, nu: f64) -> bool {
        let s = nu * nu;
        nu > 0.0 && self.theta < s && s < self.vartheta
    }

    /// `1` when admissible, else the geometric midpoint `√(θ ϑ)`.
    pub fn default_nu(&self) -> f64 {
        if self.admits(1.0) {
            1.0
        } else {
            (self.theta * self.vartheta).sqrt().sqrt()
        }
    }

    fn require(&self, nu: f64) -> Result<()> {
        if self.admits(nu) {
            Ok(())
        } else {
            Err(Error::NuOutOfRange {
                nu,
                theta: self.theta,
                vartheta: self.vartheta,
            })
        }
    }
}

impl SchwarzInstance {
    /// Validates every hypothesis; the error names the first one that fails.
    pub fn new(lambda0: Complex64, y0: PointGn, j: usize) -> Result<Self> {
        let inst = SchwarzInstance { lambda0, y0, j };
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.y0.n();
        if self.j == 0 || self.j >= n {
            return Err(Error::InvalidArgument(format!(
                "index j = {} outside 1..={}",
                self.j,
                n - 1
            )));
        }
        let m = self.lambda0.norm();
        if !(m > 0.0 && m < 1.0) {
            return Err(Error::hypothesis("0 < |lambda0| < 1", m.min(1.0 - m)));
        }
        let report = in_gtilde(&self.y0);
        if !report.inside {
            return Err(Error::hypothesis("y0 interior", report.worst_margin()));
        }
        let d = self.d().norm();
        if d <= DEGENERATE_TOL {
            return Err(Error::hypothesis("y_j y_(n-j) != C^2 q", d));
        }
        let (yj, ynj) = (self.yj().norm(), self.ynj().norm());
        if ynj > yj {
            return Err(Error::hypothesis("|y_(n-j)| <= |y_j|", yj - ynj));
        }
        let norm = phi_supnorm(self.j, &self.y0)?;
        if norm >= m {
            return Err(Error::hypothesis("||Phi_j|| < |lambda0|", m - norm));
        }
        Ok(())
    }

    pub fn c(&self) -> f64 {
        binom(self.y0.n(), self.j)
    }

    pub fn yj(&self) -> Complex64 {
        self.y0.coord(self.j)
    }

    pub fn ynj(&self) -> Complex64 {
        self.y0.coord(self.y0.n() - self.j)
    }

    pub fn q(&self) -> Complex64 {
        self.y0.q()
    }

    /// `D = y_j y_{n-j} - C² q`.
    pub fn d(&self) -> Complex64 {
        let c = self.c();
        self.yj() * self.ynj() - self.q() * (c * c)
    }

    /// Principal root of `D/(C² λ₀)`.
    pub fn w(&self) -> Complex64 {
        let c = self.c();
        (self.d() / (self.lambda0 * (c * c))).sqrt()
    }

    /// Left minus right side of
    /// `C² - |y_j|²/|λ₀|² - |y_{n-j}|² + C²|q|²/|λ₀|² > 2|D|/|λ₀|`.
    pub fn y_condition_slack(&self) -> f64 {
        let (c2, l2) = (self.c() * self.c(), self.lambda0.norm_sqr());
        c2 - self.yj().norm_sqr() / l2 - self.ynj().norm_sqr() + c2 * self.q().norm_sqr() / l2
            - 2.0 * self.d().norm() / self.lambda0.norm()
    }

    /// All window quantities.
    pub fn compute(&self) -> Result<SchwarzData> {
        self.validate()?;
        let (c2, l, l2) = (
            self.c() * self.c(),
            self.lambda0.norm(),
            self.lambda0.norm_sqr(),
        );
        let (a2, b2, q2) = (
            self.yj().norm_sqr(),
            self.ynj().norm_sqr(),
            self.q().norm_sqr(),
        );
        let dm = self.d().norm();
        let x_j = l / dm * (c2 - a2 - b2 / l2 + c2 * q2 / l2);
        // X_(n-j) - 2 = (C² - |y_(n-j)|²)(l - l₊)(l - l₋)/(l |D|), where l₊ = ‖Φ_j‖ and
        // l₊ l₋ = (C²|q|² - |y_j|²)/(C² - |y_(n-j)|²); this keeps the gap accurate near l = l₊.
        let lp = (self.c() * (self.yj() - self.ynj().conj() * self.q()).norm() + dm) / (c2 - b2);
        let lm = (c2 * q2 - a2) / ((c2 - b2) * lp);
        let gap = (c2 - b2) * (l - lp) * (l - lm) / (l * dm);
        let x_nj = 2.0 + gap;
        let r_j = l * (c2 - b2) / dm;
        if !(gap > 0.0) {
            return Err(Error::hypothesis("X_(n-j) > 2", gap));
        }
        let vartheta = 0.5 * (x_nj + (gap * (x_nj + 2.0)).sqrt());
        Ok(SchwarzData {
            w: self.w(),
            x_j,
            x_nj,
            r_j,
            theta: 1.0 / vartheta,
            vartheta,
        })
    }

    /// `Z_{ν,j}`.
    pub fn z_matrix(&self, nu: f64) -> Result<Mat2> {
        if !(nu > 0.0 && nu.is_finite()) {
            return Err(Error::hypothesis("nu > 0", nu));
        }
        self.validate()?;
        Ok(self.z_unchecked(nu))
    }

    fn z_unchecked(&self, nu: f64) -> Mat2 {
        let c = self.c();
        let w = self.w();
        Mat2::new(
            self.yj() / (self.lambda0 * c),
            w * nu,
            w / nu,
            self.ynj() / c,
        )
    }

    /// `det(1 - Z*Z)` in closed form:
    /// `1 - |y_j|²/(C²|λ₀|²) - |y_{n-j}|²/C² + |q|²/|λ₀|² - |D|/(C²|λ₀|)(ν² + 1/ν²)`.
    pub fn det_one_minus_zstarz(&self, nu: f64) -> f64 {
        let (c2, l, l2) = (
            self.c() * self.c(),
            self.lambda0.norm(),
            self.lambda0.norm_sqr(),
        );
        let s = nu * nu;
        1.0 - self.yj().norm_sqr() / (c2 * l2) - self.ynj().norm_sqr() / c2
            + self.q().norm_sqr() / l2
            - self.d().norm() / (c2 * l) * (s + 1.0 / s)
    }

    /// `K_{Z_{ν,j}}(|λ₀|) det(1 - Z*Z)` entrywise in closed form, and its determinant
    /// `-(l - k_j)(l - k_{n-j})/C⁴` with `l = |D|(ν² + 1/ν²)`, `k_i = |D| X_i`.
    pub fn kappa_closed_form(&self, nu: f64) -> Result<(Mat2, f64)> {
        let data = self.compute()?;
        data.require(nu)?;
        let c2 = self.c() * self.c();
        let (l, l2) = (self.lambda0.norm(), self.lambda0.norm_sqr());
        let (a2, b2, q2) = (
            self.yj().norm_sqr(),
            self.ynj().norm_sqr(),
            self.q().norm_sqr(),
        );
        let dm = self.d().norm();
        let s = nu * nu;
        let w = data.w;
        let k11 = 1.0 - a2 / c2 - b2 / c2 + q2 - dm / c2 * (l / s + s / l);
        let k12 = (w / nu + self.q() / self.lambda0 * w.conj() * nu) * (1.0 - l2);
        let k22 = -l2 + a2 / c2 + b2 / c2 - q2 / l2 + dm / c2 * (s * l + 1.0 / (s * l));
        let m = Mat2::new(k11.into(), k12, k12.conj(), k22.into());
        let lv = dm * (s + 1.0 / s);
        let det = -(lv - dm * data.x_j) * (lv - dm * data.x_nj) / (c2 * c2);
        Ok((m, det))
    }

    /// `K_{Z_{ν,j}}(|λ₀|)` computed directly.
    pub fn k_direct(&self, nu: f64) -> Result<Mat2> {
        k_matrix(&self.z_matrix(nu)?, self.lambda0.norm())
    }

    /// `R_j + 1/R_j - X_{n-j}` from the window quantities.
    pub fn r_x_gap(&self) -> Result<f64> {
        let d = self.compute()?;
        Ok(d.r_j + 1.0 / d.r_j - d.x_nj)
    }

    /// `C²|y_j - conj(y_{n-j}) q|² / (|λ₀| (C² - |y_{n-j}|²) |D|)`.
    pub fn r_x_gap_closed_form(&self) -> f64 {
        let c2 = self.c() * self.c();
        let num = c2 * (self.yj() - self.ynj().conj() * self.q()).norm_sqr();
        num / (self.lambda0.norm() * (c2 - self.ynj().norm_sqr()) * self.d().norm())
    }

    /// Unit `α` with `αᵀ K ᾱ` minimal, for `K = K_{Z_{ν,j}}(|λ₀|)`.
    ///
    /// In this pairing `αᵀ K ᾱ = ‖v_Z(α)‖² - |λ₀|²‖u_Z(α)‖²`, so the choice makes
    /// `Q(0) = u v*/(λ₀‖u‖²)` a contraction.
    pub fn choose_alpha(&self, nu: f64) -> Result<Vec2> {
        self.compute()?.require(nu)?;
        let k = self.k_direct(nu)?;
        Ok(hermitian_min_eig(&k.transpose())?.1)
    }

    /// `Q(0) = u v*/(λ₀ ‖u‖²)`, the rank-one solution of `Q(0)* conj(λ₀) u = v`.
    pub fn build_q0(&self, nu: f64, alpha: &Vec2) -> Result<Mat2> {
        let z = self.z_matrix(nu)?;
        let (u, v) = uv_vectors(&z, alpha)?;
        if v.is_zero() {
            return Ok(Mat2::zero());
        }
        if u.norm() <= 1e-14 * alpha.norm() {
            return Err(Error::ZeroU);
        }
        let q0 = Mat2::outer(&u, &v).scale(1.0 / (self.lambda0 * u.norm_sq()));
        let norm = q0.op_norm();
        if norm > 1.0 + Q_NORM_TOL {
            return Err(Error::QNotContractive { norm });
        }
        Ok(q0)
    }

    /// `‖Q(0)* conj(λ₀) u - v‖`.
    pub fn q0_residual(&self, nu: f64, alpha: &Vec2, q0: &Mat2) -> Result<f64> {
        let (u, v) = uv_vectors(&self.z_matrix(nu)?, alpha)?;
        Ok((q0.adjoint().apply(&u).scale(self.lambda0.conj()) - v).norm())
    }
}

/// `B(λ) = (λ₀ - λ)/(1 - conj(λ₀) λ)`: `B(0) = λ₀`, `B(λ₀) = 0`, unimodular on the circle.
pub fn blaschke_b(lambda0: Complex64, lambda: Complex64) -> Complex64 {
    (lambda0 - lambda) / (1.0 - lambda0.conj() * lambda)
}
