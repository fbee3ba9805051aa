//! Brute-force baselines, independent of the closed forms they check.

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::geometry::{binom, PointGn};
use crate::linalg::Mat2;

/// Default quasi-random seed.
pub const DEFAULT_SEED: u64 = 0x5EED;

/// Sample counts for the oracles.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    /// Index offset into the Halton sequence.
    pub seed: u64,
}

impl GridSpec {
    pub fn new(radial: usize, angular: usize, seed: u64) -> Self {
        GridSpec {
            radial: radial.max(1),
            angular: angular.max(1),
            seed,
        }
    }

    /// Just the unit circle, `angular` points.
    pub fn circle(angular: usize) -> Self {
        GridSpec::new(1, angular, DEFAULT_SEED)
    }

    /// Points `e^{iθ_k}`, `k < angular`.
    pub fn circle_points(&self, radius: f64) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.angular)
            .map(move |k| Complex64::from_polar(radius, TAU * k as f64 / self.angular as f64))
    }
}

/// Radical inverse of `i` in `base`.
pub fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// `count` Halton points (bases 2, 3) mapped area-uniformly into the disc of the given radius.
pub fn halton_disc(count: usize, seed: u64, radius: f64) -> Vec<Complex64> {
    (0..count as u64)
        .map(|i| {
            let k = i + 1 + seed;
            let r = radius * radical_inverse(k, 2).sqrt();
            Complex64::from_polar(r, TAU * radical_inverse(k, 3))
        })
        .collect()
}

/// `max |f|` over `grid.angular` points of the unit circle.
pub fn supnorm_sampling(f: impl Fn(Complex64) -> Complex64, grid: &GridSpec) -> f64 {
    grid.circle_points(1.0)
        .map(|z| f(z).norm())
        .fold(0.0, f64::max)
}

/// Smallest modulus of `z(w) = (1 - b22 w)/(b11 - p w)` over `|w| <= t`, by scanning
/// angles on `|w| = t` with golden-section refinement of the best one.
///
/// The minimum of a Möbius image over a disc is attained on the boundary unless the
/// value zero is attained inside, which happens iff `|1/b22| <= t`.
fn scan_min_z(b11: Complex64, b22: Complex64, p: Complex64, t: f64, angular: usize) -> f64 {
    if b22.norm() * t >= 1.0 {
        return 0.0;
    }
    let z = |theta: f64| {
        let w = Complex64::from_polar(t, theta);
        let den = b11 - p * w;
        if den.norm() == 0.0 {
            f64::INFINITY
        } else {
            ((1.0 - b22 * w) / den).norm()
        }
    };
    let h = TAU / angular as f64;
    let (mut best, mut arg) = (f64::INFINITY, 0.0);
    for k in 0..angular {
        let th = k as f64 * h;
        let v = z(th);
        if v < best {
            best = v;
            arg = th;
        }
    }
    let (mut a, mut b) = (arg - h, arg + h);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    for _ in 0..80 {
        let c = b - g * (b - a);
        let d = a + g * (b - a);
        if z(c) < z(d) {
            b = d;
        } else {
            a = c;
        }
    }
    best.min(z(0.5 * (a + b)))
}

/// μ for the diagonal structure by brute force: the smallest `t` on a level grid
/// (refined by bisection) at which `1 - b11 z - b22 w + det(B) z w` vanishes on the
/// closed `t`-bidisc. Returns `1/t`, or `0` when no level up to `10⁶` triggers.
pub fn mu_grid(b: &Mat2, grid: &GridSpec) -> f64 {
    let (b11, b22, p) = (b.a11, b.a22, b.det());
    let levels = grid.radial.max(8);
    let angular = grid.angular.max(16);
    // Symmetrize in (z, w): scan whichever variable the solved form is in.
    let hits = |t: f64| {
        scan_min_z(b11, b22, p, t, angular) <= t || scan_min_z(b22, b11, p, t, angular) <= t
    };
    // Geometric level grid over [1e-6, 1e6].
    let ts: Vec<f64> = (0..=levels)
        .map(|k| 10f64.powf(-6.0 + 12.0 * k as f64 / levels as f64))
        .collect();
    let Some(first) = ts.iter().position(|&t| hits(t)) else {
        return 0.0;
    };
    if first == 0 {
        return 1.0 / ts[0];
    }
    let (mut lo, mut hi) = (ts[first - 1], ts[first]);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if hits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    1.0 / hi
}

/// One-sided membership check: every `D_j(z,w) = C - y_j z - y_{n-j} w + C q z w`
/// stays away from zero on a sampled open bidisc (Halton radii × torus angles).
pub fn membership_torus_sampling(y: &PointGn, grid: &GridSpec) -> bool {
    let pts = halton_disc(grid.radial * grid.angular, grid.seed, 1.0);
    let n = y.n();
    (1..n).all(|j| {
        let c = binom(n, j);
        let (yj, ynj, q) = (y.coord(j), y.coord(n - j), y.q());
        // Resolution: |∇D| times the mean sample spacing.
        let spacing = 2.0 / (pts.len() as f64).sqrt();
        let lip = yj.norm() + ynj.norm() + 2.0 * c * q.norm();
        let threshold = lip * spacing;
        pts.iter().all(|&z| {
            pts.iter()
                .step_by(7)
                .all(|&w| (c - yj * z - ynj * w + q * z * w * c).norm() > threshold)
        })
    })
}

/// Largest singular value via Jacobi iteration on `A* A`; dense and iterative, no closed forms.
pub fn dense_op_norm(a: &Mat2) -> f64 {
    let h = a.adjoint() * *a;
    let (mut p, mut s, mut r) = (h.a11.re, h.a22.re, h.a12);
    for _ in 0..8 {
        let rn = r.norm();
        if rn <= 1e-300 {
            break;
        }
        // Rotate out the off-diagonal: tan 2φ = 2|r|/(p - s).
        let phi = 0.5 * (2.0 * rn).atan2(p - s);
        let (cs, sn) = (phi.cos(), phi.sin());
        let np = cs * cs * p + 2.0 * cs * sn * rn + sn * sn * s;
        let ns = sn * sn * p - 2.0 * cs * sn * rn + cs * cs * s;
        let nr = (s - p) * cs * sn + rn * (cs * cs - sn * sn);
        p = np;
        s = ns;
        r = nr.into();
    }
    p.max(s).max(0.0).sqrt()
}
