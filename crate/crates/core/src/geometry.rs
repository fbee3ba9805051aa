//! Points of `G̃_n` and the maps attached to them.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{bidisc_has_zero, mobius_disc_image};
use crate::error::{Error, Result};
use crate::json;
use crate::linalg::Mat2;

/// Margins must exceed this to count as interior.
pub const INTERIOR_TOL: f64 = 1e-12;
/// Tolerance for the `J_n` proportionality relations.
pub const JN_TOL: f64 = 1e-12;
/// Radii used by [`in_gamma_tilde`].
pub const GAMMA_SCHEDULE: [f64; 4] = [0.9, 0.99, 0.999, 0.9999];

/// Binomial coefficient `C(n, k)` as a float.
pub fn binom(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    let mut acc = 1.0;
    for i in 0..k {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc.round()
}

/// A point `(y₁, …, y_{n-1}, q)` of `C^n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPoint", into = "RawPoint")]
pub struct PointGn {
    n: usize,
    y: Vec<Complex64>,
    q: Complex64,
}

#[derive(Serialize, Deserialize)]
struct RawPoint {
    n: usize,
    #[serde(with = "json::complex_vec")]
    y: Vec<Complex64>,
    #[serde(with = "json::complex")]
    q: Complex64,
}

impl TryFrom<RawPoint> for PointGn {
    type Error = Error;
    fn try_from(r: RawPoint) -> Result<Self> {
        PointGn::new(r.n, r.y, r.q)
    }
}

impl From<PointGn> for RawPoint {
    fn from(p: PointGn) -> Self {
        RawPoint {
            n: p.n,
            y: p.y,
            q: p.q,
        }
    }
}

impl PointGn {
    pub fn new(n: usize, y: Vec<Complex64>, q: Complex64) -> Result<Self> {
        if n < 2 {
            return Err(Error::DimensionTooSmall { n });
        }
        if y.len() != n - 1 {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                found: y.len(),
            });
        }
        Ok(PointGn { n, y, q })
    }

    pub fn origin(n: usize) -> Result<Self> {
        PointGn::new(
            n,
            vec![Complex64::new(0.0, 0.0); n.saturating_sub(1)],
            0.0.into(),
        )
    }

    /// The point of `G̃₂` with coordinates `(s, p)`.
    pub fn g2(s: Complex64, p: Complex64) -> Self {
        PointGn {
            n: 2,
            y: vec![s],
            q: p,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn y(&self) -> &[Complex64] {
        &self.y
    }

    pub fn q(&self) -> Complex64 {
        self.q
    }

    /// `y_j` for `1 <= j <= n-1`, and `q` for `j = n`.
    pub fn coord(&self, j: usize) -> Complex64 {
        if j == self.n {
            self.q
        } else {
            self.y[j - 1]
        }
    }

    /// All `n` coordinates, `q` last.
    pub fn coords(&self) -> Vec<Complex64> {
        let mut v = self.y.clone();
        v.push(self.q);
        v
    }

    pub fn from_coords(c: &[Complex64]) -> Result<Self> {
        if c.len() < 2 {
            return Err(Error::DimensionTooSmall { n: c.len() });
        }
        let n = c.len();
        PointGn::new(n, c[..n - 1].to_vec(), c[n - 1])
    }

    /// Largest coordinatewise distance to `other` (same `n` assumed).
    pub fn max_abs_diff(&self, other: &PointGn) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_modulus(&self) -> f64 {
        self.coords().iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j == 0 || j >= self.n {
            return Err(Error::InvalidArgument(format!(
                "index j = {j} outside 1..={}",
                self.n - 1
            )));
        }
        Ok(())
    }
}

/// `Φ_j(z, y) = (C q z - y_j)/(y_{n-j} z - C)` with `C = C(n, j)`.
pub fn phi(j: usize, z: Complex64, y: &PointGn) -> Result<Complex64> {
    y.check_index(j)?;
    let c = binom(y.n, j);
    let den = y.coord(y.n - j) * z - c;
    if den.norm() < 1e-14 {
        return Err(Error::PoleHit { j });
    }
    Ok((y.q * z * c - y.coord(j)) / den)
}

fn pole_free(j: usize, y: &PointGn) -> Result<f64> {
    y.check_index(j)?;
    let c = binom(y.n, j);
    let modulus = y.coord(y.n - j).norm();
    if modulus >= c {
        return Err(Error::PoleOnDisc { j, modulus });
    }
    Ok(c)
}

/// `sup_{|z| <= 1} |Φ_j(z, y)|` in closed form:
/// `(C |y_j - conj(y_{n-j}) q| + |y_j y_{n-j} - C² q|) / (C² - |y_{n-j}|²)`.
pub fn phi_supnorm(j: usize, y: &PointGn) -> Result<f64> {
    let c = pole_free(j, y)?;
    let (yj, ynj, q) = (y.coord(j), y.coord(y.n - j), y.q);
    let num = c * (yj - ynj.conj() * q).norm() + (yj * ynj - q * c * c).norm();
    Ok(num / (c * c - ynj.norm_sqr()))
}

/// The same supremum, read off the image circle of the unit circle under `Φ_j(·, y)`.
pub fn phi_supnorm_circle_image(j: usize, y: &PointGn) -> Result<f64> {
    let c = pole_free(j, y)?;
    let img = mobius_disc_image(y.q * c, -y.coord(j), y.coord(y.n - j), (-c).into(), 1.0).ok_or(
        Error::PoleOnDisc {
            j,
            modulus: y.coord(y.n - j).norm(),
        },
    )?;
    Ok(img.max_modulus())
}

/// `β_j = (y_j - q conj(y_{n-j}))/(1 - |q|²)`, for `j = 1, …, n-1`.
pub fn beta_coeffs(y: &PointGn) -> Result<Vec<Complex64>> {
    let modulus = y.q.norm();
    if modulus >= 1.0 {
        return Err(Error::QOnBoundary { modulus });
    }
    let s = 1.0 - y.q.norm_sqr();
    Ok((1..y.n)
        .map(|j| (y.coord(j) - y.q * y.coord(y.n - j).conj()) / s)
        .collect())
}

/// Slack in each defining inequality of `G̃_n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MembershipReport {
    pub inside: bool,
    /// `C(n,j) - |β_j| - |β_{n-j}|` for `j = 1, …, n-1`; empty when `|q| >= 1`.
    pub margins: Vec<f64>,
    pub q_margin: f64,
}

impl MembershipReport {
    /// Smallest of all margins, including `q_margin`.
    pub fn worst_margin(&self) -> f64 {
        self.margins.iter().copied().fold(self.q_margin, f64::min)
    }
}

/// Interior membership in `G̃_n` through the `β` coefficients.
pub fn in_gtilde(y: &PointGn) -> MembershipReport {
    let q_margin = 1.0 - y.q.norm();
    let margins = match beta_coeffs(y) {
        Ok(beta) => (1..y.n)
            .map(|j| binom(y.n, j) - beta[j - 1].norm() - beta[y.n - j - 1].norm())
            .collect(),
        Err(_) => Vec::new(),
    };
    let inside =
        q_margin > INTERIOR_TOL && !margins.is_empty() && margins.iter().all(|&m| m > INTERIOR_TOL);
    MembershipReport {
        inside,
        margins,
        q_margin,
    }
}

/// Membership in the closure `Γ̃_n`: no `D_j(z,w) = C - y_j z - y_{n-j} w + C q z w`
/// vanishes on the open bidisc, probed on the radii of [`GAMMA_SCHEDULE`].
pub fn in_gamma_tilde(y: &PointGn) -> bool {
    if y.q.norm() > 1.0 {
        return false;
    }
    (1..y.n).all(|j| {
        let c = binom(y.n, j);
        let (b11, b22) = (y.coord(j) / c, y.coord(y.n - j) / c);
        GAMMA_SCHEDULE
            .iter()
            .all(|&t| !bidisc_has_zero(b11, b22, y.q, t))
    })
}

/// Whether `y` lies in `J_n`: interior, with the middle coordinates tied to `y₁` and `y_{n-1}`.
///
/// For `n = 2, 3` there are no middle coordinates and this is plain interior membership.
pub fn in_jn(y: &PointGn) -> bool {
    if !in_gtilde(y).inside {
        return false;
    }
    if y.n < 4 {
        return true;
    }
    match jn_embed(y.coord(1), y.coord(y.n - 1), y.q, y.n) {
        Ok(p) => p.max_abs_diff(y) <= JN_TOL * (1.0 + y.max_modulus()),
        Err(_) => false,
    }
}

/// The unique point of `J_n` over `(y₁, y_{n-1}, q)`.
pub fn jn_embed(y1: Complex64, yn1: Complex64, q: Complex64, n: usize) -> Result<PointGn> {
    if n < 3 {
        return Err(Error::DimensionTooSmall { n });
    }
    let nf = n as f64;
    let mut y = vec![Complex64::new(0.0, 0.0); n - 1];
    y[0] = y1;
    y[n - 2] = yn1;
    for j in 2..=(n / 2) {
        let c = binom(n, j);
        if 2 * j == n {
            y[j - 1] = (y1 + yn1) * (c / (2.0 * nf));
        } else {
            y[j - 1] = y1 * (c / nf);
            y[n - j - 1] = yn1 * (c / nf);
        }
    }
    PointGn::new(n, y, q)
}

/// `π_n(B₁, …, B_{[n/2]})`.
pub fn pi_map(b: &[Mat2], n: usize) -> Result<PointGn> {
    if n < 2 {
        return Err(Error::DimensionTooSmall { n });
    }
    let k = n / 2;
    if b.len() != k {
        return Err(Error::LengthMismatch {
            expected: k,
            found: b.len(),
        });
    }
    let q = b[0].det();
    let spread = b.iter().map(|m| (m.det() - q).norm()).fold(0.0, f64::max);
    if spread > 1e-12 {
        return Err(Error::DeterminantMismatch { spread });
    }
    Ok(pi_assemble(b, n))
}

/// `π_n` without the determinant check; `q` is taken from `B₁`.
pub(crate) fn pi_assemble(b: &[Mat2], n: usize) -> PointGn {
    let mut y = vec![Complex64::new(0.0, 0.0); n - 1];
    for (idx, m) in b.iter().enumerate() {
        let j = idx + 1;
        let c = binom(n, j);
        if 2 * j == n {
            y[j - 1] = (m.a11 + m.a22) * (c / 2.0);
        } else {
            y[j - 1] = m.a11 * c;
            y[n - j - 1] = m.a22 * c;
        }
    }
    PointGn {
        n,
        y,
        q: b[0].det(),
    }
}

/// `π̂_n(B) = π_n(B, …, B)`.
pub fn pi_hat(b: &Mat2, n: usize) -> Result<PointGn> {
    pi_map(&vec![*b; n / 2], n)
}
