//! The structured singular value for the 2×2 diagonal structure
//! `E = {diag(z, w)}`, and the realizations of `G̃_n` in its unit ball.
//!
//! `det(I - B diag(z, w)) = 1 - b11 z - b22 w + det(B) z w`, so `μ_E(B) <= 1/t`
//! iff that bilinear form has no zero on the closed bidisc of radius `t`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{bidisc_has_zero, bilinear_min_z};
use crate::error::{Error, Result};
use crate::geometry::{binom, in_gtilde, jn_embed, phi_supnorm, pi_hat, PointGn, JN_TOL};
use crate::interpolation::RationalCurve;
use crate::json;
use crate::linalg::Mat2;

/// Radius beyond which the bidisc search gives up and reports `μ = 0`.
pub const T_MAX: f64 = 1e6;
/// Bisection stops when the bracket is narrower than this (relative above `t = 1`).
pub const BISECTION_TOL: f64 = 1e-10;
const MAX_ITERATIONS: usize = 400;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MuResult {
    pub value: f64,
    /// `(z, w)` with `max(|z|, |w|) = 1/value` at which `I - B diag(z, w)` is singular.
    #[serde(with = "witness_serde")]
    pub witness: Option<(Complex64, Complex64)>,
    pub iterations: usize,
}

mod witness_serde {
    use num_complex::Complex64;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(
        v: &Option<(Complex64, Complex64)>,
        s: S,
    ) -> Result<S::Ok, S::Error> {
        v.map(|(z, w)| [[z.re, z.im], [w.re, w.im]]).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<Option<(Complex64, Complex64)>, D::Error> {
        let raw = Option::<[[f64; 2]; 2]>::deserialize(d)?;
        Ok(raw.map(|[z, w]| (Complex64::new(z[0], z[1]), Complex64::new(w[0], w[1]))))
    }
}

/// `1 - b11 z - b22 w + det(B) z w`.
pub fn singularity_form(b: &Mat2, z: Complex64, w: Complex64) -> Complex64 {
    1.0 - b.a11 * z - b.a22 * w + b.det() * z * w
}

/// `μ_E(B)` by bisection on `t = 1/μ` with the exact disc-image zero test.
pub fn mu_diag(b: &Mat2) -> MuResult {
    let (b11, b22, p) = (b.a11, b.a22, b.det());
    let norm = b.op_norm();
    if norm == 0.0 {
        return MuResult {
            value: 0.0,
            witness: None,
            iterations: 0,
        };
    }
    let scale = 1.0 + b11.norm() * b22.norm() + p.norm();
    if (b.a12 * b.a21).norm() <= 1e-15 * scale {
        // Triangular: the form factors as (1 - b11 z)(1 - b22 w).
        let (m11, m22) = (b11.norm(), b22.norm());
        let value = m11.max(m22);
        let witness = if value == 0.0 {
            None
        } else if m11 >= m22 {
            Some((1.0 / b11, Complex64::new(0.0, 0.0)))
        } else {
            Some((Complex64::new(0.0, 0.0), 1.0 / b22))
        };
        return MuResult {
            value,
            witness,
            iterations: 0,
        };
    }
    let hits = |t: f64| bidisc_has_zero(b11, b22, p, t);
    // No singular Δ with ‖Δ‖ < 1/‖B‖.
    let mut lo = (1.0 / norm) * (1.0 - 1e-12);
    let mut hi = lo;
    let mut iterations = 0;
    while !hits(hi) {
        iterations += 1;
        lo = hi;
        hi *= 2.0;
        if hi > T_MAX {
            if hits(T_MAX) {
                hi = T_MAX;
                break;
            }
            return MuResult {
                value: 0.0,
                witness: None,
                iterations,
            };
        }
    }
    while hi - lo > BISECTION_TOL * hi.max(1.0) && iterations < MAX_ITERATIONS {
        iterations += 1;
        let mid = 0.5 * (lo + hi);
        if hits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    let witness = bilinear_min_z(b11, b22, p, hi).1;
    MuResult {
        value: 1.0 / hi,
        witness,
        iterations,
    }
}

/// `B_j = [[y_j/C, w_j], [w_j, y_{n-j}/C]]` with `w_j² = (y_j y_{n-j} - C² q)/C²`, `j = 1..=n/2`.
///
/// Every `B_j` has determinant `q` and `π_n(B_1, …) = y`.
pub fn realization_matrices(y: &PointGn) -> Vec<Mat2> {
    let n = y.n();
    (1..=n / 2)
        .map(|j| {
            let c = binom(n, j);
            let (yj, ynj) = (y.coord(j), y.coord(n - j));
            let w = ((yj * ynj - y.q() * (c * c)) / (c * c)).sqrt();
            Mat2::new(yj / c, w, w, ynj / c)
        })
        .collect()
}

/// The realization of an interior point: `μ_E(B_j) < 1` for every `j`.
pub fn mu_realization(y: &PointGn) -> Result<Vec<Mat2>> {
    if !in_gtilde(y).inside {
        return Err(Error::NotInterior);
    }
    Ok(realization_matrices(y))
}

/// Membership through μ: every realization matrix lies in the open μ-unit ball.
///
/// For points shaped like `J_n` the single matrix `B_1` must also reproduce `y`
/// under `π̂_n`.
pub fn mu_membership_check(y: &PointGn) -> bool {
    let mats = realization_matrices(y);
    if !mats.iter().all(|b| mu_diag(b).value < 1.0) {
        return false;
    }
    let n = y.n();
    if n >= 3 {
        if let Ok(e) = jn_embed(y.coord(1), y.coord(n - 1), y.q(), n) {
            if e.max_abs_diff(y) <= JN_TOL {
                return pi_hat(&mats[0], n).is_ok_and(|z| z.max_abs_diff(y) <= 1e-10);
            }
        }
    }
    true
}

/// Lifts `φ: D → G̃_n` into the μ-unit ball:
/// `F_j = [[φ_j/C, φ_j φ_{n-j}/C² - φ_n], [1, φ_{n-j}/C]]`, so `det F_j = φ_n`.
#[derive(Clone, Debug)]
pub struct MuLift {
    curve: RationalCurve,
}

impl MuLift {
    pub fn n(&self) -> usize {
        self.curve.n
    }

    pub fn eval(&self, j: usize, l: Complex64) -> Result<Mat2> {
        let n = self.curve.n;
        if j == 0 || j > n / 2 {
            return Err(Error::InvalidArgument(format!(
                "j = {j} outside 1..={}",
                n / 2
            )));
        }
        let y = self.curve.eval(l)?;
        Ok(lift_point(&y, j))
    }

    pub fn eval_all(&self, l: Complex64) -> Result<Vec<Mat2>> {
        let y = self.curve.eval(l)?;
        Ok((1..=self.curve.n / 2).map(|j| lift_point(&y, j)).collect())
    }
}

fn lift_point(y: &PointGn, j: usize) -> Mat2 {
    let n = y.n();
    let c = binom(n, j);
    let (yj, ynj) = (y.coord(j), y.coord(n - j));
    Mat2::new(yj / c, yj * ynj / (c * c) - y.q(), 1.0.into(), ynj / c)
}

/// Build the lift after checking that `φ` stays interior on `grid`.
pub fn lift_to_mu_ball(curve: &RationalCurve, grid: &[Complex64]) -> Result<MuLift> {
    for &l in grid {
        if !in_gtilde(&curve.eval(l)?).inside {
            return Err(Error::NotInterior);
        }
    }
    Ok(MuLift {
        curve: curve.clone(),
    })
}

/// Output of [`structured_np_necessary`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpReport {
    /// The induced `J_n` data `(λ_i, π̂_n(B_i))`.
    pub data: Vec<NpNode>,
    /// For the Schwarz shape (one node `0 ↦ 0`): whether `max_j ‖Φ_j(·, y)‖ <= |λ|`.
    pub schwarz_pass: Option<bool>,
    /// `max_j ‖Φ_j(·, y)‖` for that test.
    pub schwarz_bound: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NpNode {
    #[serde(with = "json::complex")]
    pub lambda: Complex64,
    pub mu: f64,
    pub target: PointGn,
}

/// Necessary condition for the structured Nevanlinna–Pick problem
/// `F(λ_i) = B_i`, `F: D → {μ_E < 1}`, via the induced `J_n` problem.
pub fn structured_np_necessary(nodes: &[(Complex64, Mat2)], n: usize) -> Result<NpReport> {
    let mut data = Vec::with_capacity(nodes.len());
    for (i, (l, b)) in nodes.iter().enumerate() {
        let mu = mu_diag(b).value;
        let modulus = l.norm();
        if !(mu < 1.0 && modulus < 1.0) {
            return Err(Error::NodeNotInBall {
                index: i,
                mu,
                modulus,
            });
        }
        if let Some(k) = nodes[..i].iter().position(|(m, _)| m == l) {
            return Err(Error::DuplicateNodes {
                first: k,
                second: i,
            });
        }
        data.push(NpNode {
            lambda: *l,
            mu,
            target: pi_hat(b, n)?,
        });
    }
    let (mut schwarz_pass, mut schwarz_bound) = (None, None);
    if nodes.len() == 2 {
        let at_origin = nodes
            .iter()
            .position(|(l, b)| l.norm() == 0.0 && b.max_abs_diff(&Mat2::zero()) <= 1e-14);
        if let Some(k) = at_origin {
            let other = &data[1 - k];
            let mut bound: f64 = 0.0;
            for j in 1..n {
                bound = bound.max(phi_supnorm(j, &other.target)?);
            }
            schwarz_pass = Some(bound <= other.lambda.norm());
            schwarz_bound = Some(bound);
        }
    }
    Ok(NpReport {
        data,
        schwarz_pass,
        schwarz_bound,
    })
}
