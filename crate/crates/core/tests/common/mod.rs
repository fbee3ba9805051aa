#![allow(dead_code)]

use gtilde::{binom, phi_supnorm, pi_hat, Complex64, Mat2, PointGn, SchwarzInstance};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn rand_unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Entries uniform in the square `[-s, s]²`.
pub fn random_mat(rng: &mut ChaCha8Rng, s: f64) -> Mat2 {
    let mut e = || c(rng.gen_range(-s..s), rng.gen_range(-s..s));
    Mat2::new(e(), e(), e(), e())
}

/// A strict contraction with norm uniform in `(0, 0.99)`.
pub fn random_contraction(rng: &mut ChaCha8Rng) -> Mat2 {
    loop {
        let m = random_mat(rng, 1.0);
        let nm = m.op_norm();
        if nm > 1e-3 {
            let target = rng.gen_range(0.0..0.99);
            return m.scale(c(target / nm, 0.0));
        }
    }
}

/// `B` with `|b22| <= |b11|`, so `π̂_n(B)` satisfies the ordering hypothesis for `j = 1`.
pub fn ordered_mat(rng: &mut ChaCha8Rng, r: f64) -> Mat2 {
    let mut e = || Complex64::from_polar(r * rng.gen::<f64>(), rng.gen_range(0.0..6.3));
    let mut b = Mat2::new(e(), e(), e(), e());
    if b.a22.norm() > b.a11.norm() {
        std::mem::swap(&mut b.a11, &mut b.a22);
    }
    b
}

/// A feasible Schwarz instance for a random pair index.
pub fn random_instance(
    rng: &mut ChaCha8Rng,
    ns: std::ops::RangeInclusive<usize>,
) -> SchwarzInstance {
    loop {
        let n = rng.gen_range(ns.clone());
        let j = rng.gen_range(1..=n / 2);
        let r = rng.gen_range(0.05..0.6);
        let b = ordered_mat(rng, r);
        let Ok(y) = pi_hat(&b, n) else { continue };
        let Ok(norm) = phi_supnorm(j, &y) else {
            continue;
        };
        let m = norm * rng.gen_range(1.05..2.0);
        if m >= 0.98 || norm < 1e-3 {
            continue;
        }
        let lambda0 = Complex64::from_polar(m, rng.gen_range(0.0..6.3));
        if let Ok(inst) = SchwarzInstance::new(lambda0, y, j) {
            return inst;
        }
    }
}

/// A `J_n` target together with `λ₀ = factor × ‖Φ₁‖`, feasible for the construction.
pub fn random_jn_target(
    rng: &mut ChaCha8Rng,
    ns: std::ops::RangeInclusive<usize>,
    factor: f64,
) -> (PointGn, Complex64) {
    loop {
        let inst = random_instance(rng, ns.clone());
        if inst.j != 1 {
            continue;
        }
        let y = inst.y0.clone();
        let Ok(norm) = phi_supnorm(1, &y) else {
            continue;
        };
        let m = factor * norm;
        if m < 0.98 && norm > 1e-3 {
            return (y, Complex64::from_polar(m, rng.gen_range(0.0..6.3)));
        }
    }
}

/// A random point of `C^{n-1} × C` scaled to straddle `G̃_n`.
pub fn random_point(rng: &mut ChaCha8Rng, n: usize, spread: f64) -> PointGn {
    let mut coord = |scale: f64| {
        let s = rng.gen_range(0.0..spread);
        Complex64::from_polar(s * scale, rng.gen_range(0.0..6.3))
    };
    let y: Vec<Complex64> = (1..n).map(|j| coord(binom(n, j))).collect();
    let q = coord(1.0);
    PointGn::new(n, y, q).unwrap()
}

pub fn scale_point(y: &PointGn, t: f64) -> PointGn {
    let coords: Vec<Complex64> = y.coords().iter().map(|z| z * t).collect();
    PointGn::from_coords(&coords).unwrap()
}
