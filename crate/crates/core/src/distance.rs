//! Carathéodory and Lempert distances from the origin.
//!
//! The lower bound `max_j tanh⁻¹ ‖Φ_j(·, y)‖` holds on all of `G̃_n`. On `J_n`, an
//! interpolant through `y` at `λ₀ = max_j ‖Φ_j(·, y)‖` bounds the Lempert function
//! from above by the same number, so the two coincide.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{in_gtilde, in_jn, phi_supnorm, PointGn};
use crate::interpolation::{build_interpolant_jn, Interpolant};

/// Relative bump applied to `λ₀` when the strict Schwarz inequality fails at equality.
pub const RELAX: f64 = 1e-9;
/// `|upper - lower|` below which the bounds are reported equal.
pub const EQUAL_TOL: f64 = 1e-8;

/// `tanh⁻¹ |(a - b)/(1 - conj(b) a)|`.
pub fn hyperbolic_distance(a: Complex64, b: Complex64) -> Result<f64> {
    for z in [a, b] {
        let modulus = z.norm();
        if !(modulus < 1.0) {
            return Err(Error::OutsideDisc { modulus });
        }
    }
    let d = ((a - b) / (1.0 - b.conj() * a)).norm();
    Ok(d.min(1.0).atanh())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    /// Carathéodory lower bound.
    pub lower: f64,
    /// Lempert upper bound from an explicit analytic disc.
    pub upper: Option<f64>,
    pub equal: bool,
    /// The `j` attaining `lower` (1-based; 0 at the origin).
    pub argmax_j: usize,
    /// Whether `λ₀` had to be bumped by [`RELAX`].
    pub relaxed: bool,
    /// Why no upper bound was produced.
    pub note: Option<String>,
}

/// Distances from the origin, with the disc certifying the upper bound when one exists.
pub fn dist_origin_with_disc(y: &PointGn) -> Result<(DistanceReport, Option<Interpolant>)> {
    if !in_gtilde(y).inside {
        return Err(Error::NotInterior);
    }
    let n = y.n();
    let (mut best, mut argmax_j) = (0.0, 0);
    for j in 1..n {
        let s = phi_supnorm(j, y)?;
        if s > best {
            best = s;
            argmax_j = j;
        }
    }
    let lower = best.atanh();
    let mut report = DistanceReport {
        lower,
        upper: None,
        equal: false,
        argmax_j,
        relaxed: false,
        note: None,
    };
    if best == 0.0 {
        // Only the origin has all sup-norms zero; the constant disc realizes it.
        report.upper = Some(0.0);
        report.equal = true;
        return Ok((report, None));
    }
    if !in_jn(y) {
        report.note = Some("point is not in J_n".into());
        return Ok((report, None));
    }
    let attempt = |l: f64| build_interpolant_jn(y, Complex64::new(l, 0.0), None, None);
    let built = match attempt(best) {
        Ok(psi) => Ok((psi, false)),
        Err(_) => attempt(best * (1.0 + RELAX)).map(|p| (p, true)),
    };
    match built {
        Ok((psi, relaxed)) => {
            let upper = psi.lambda0.norm().atanh();
            report.upper = Some(upper);
            report.relaxed = relaxed;
            report.equal = (upper - lower).abs() < EQUAL_TOL;
            Ok((report, Some(psi)))
        }
        Err(e) => {
            report.note = Some(e.to_string());
            Ok((report, None))
        }
    }
}

pub fn dist_origin(y: &PointGn) -> Result<DistanceReport> {
    dist_origin_with_disc(y).map(|r| r.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{binom, jn_embed, phi, pi_hat};
    use crate::interpolation::{default_grid, verify_interpolant};
    use crate::linalg::Mat2;
    use crate::oracles::DEFAULT_SEED;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rand_disc(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::from_polar(
            rng.gen_range(0.0f64..1.0).sqrt() * 0.999,
            rng.gen_range(0.0..6.3),
        )
    }

    #[test]
    fn hyperbolic_examples() {
        assert_eq!(hyperbolic_distance(c(0.0, 0.0), c(0.0, 0.0)).unwrap(), 0.0);
        assert!(
            (hyperbolic_distance(c(0.0, 0.0), c(0.0, 0.6)).unwrap() - 0.6f64.atanh()).abs() < 1e-15
        );
        assert!(matches!(
            hyperbolic_distance(c(1.0, 0.0), c(0.0, 0.0)),
            Err(Error::OutsideDisc { .. })
        ));
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..1000 {
            let (a, b, z) = (
                rand_disc(&mut rng),
                rand_disc(&mut rng),
                rand_disc(&mut rng),
            );
            let ab = hyperbolic_distance(a, b).unwrap();
            assert!((ab - hyperbolic_distance(b, a).unwrap()).abs() < 1e-9);
            assert!(
                ab <= hyperbolic_distance(a, z).unwrap()
                    + hyperbolic_distance(z, b).unwrap()
                    + 1e-9
            );
        }
    }

    #[test]
    fn origin_and_g2() {
        let r = dist_origin(&PointGn::origin(4).unwrap()).unwrap();
        assert_eq!((r.lower, r.upper, r.equal), (0.0, Some(0.0), true));
        let p = c(0.3, -0.4);
        let (r, psi) = dist_origin_with_disc(&PointGn::g2(c(0.0, 0.0), p)).unwrap();
        assert!((r.lower - 0.5f64.atanh()).abs() < 1e-14);
        assert!(r.equal, "{r:?}");
        let report = verify_interpolant(&psi.unwrap(), &default_grid(500, DEFAULT_SEED)).unwrap();
        assert!(report.passed, "{report:?}");
    }

    #[test]
    fn equality_on_j3_and_hypothesis_gap() {
        let y = pi_hat(
            &Mat2::new(c(0.3, 0.1), c(0.2, 0.0), c(0.1, 0.1), c(0.1, 0.0)),
            3,
        )
        .unwrap();
        assert!(y.coord(2).norm() <= y.coord(1).norm());
        let (r, psi) = dist_origin_with_disc(&y).unwrap();
        assert!(r.equal, "{r:?}");
        let psi = psi.unwrap();
        assert!((psi.lambda0.norm() - r.lower.tanh()).abs() < 1e-8);
        assert!(
            verify_interpolant(&psi, &default_grid(500, DEFAULT_SEED))
                .unwrap()
                .passed
        );
        // Swap the roles of y1 and y2.
        let swapped = PointGn::new(3, vec![y.coord(2), y.coord(1)], y.q()).unwrap();
        let r = dist_origin(&swapped).unwrap();
        assert!(r.upper.is_none() && !r.equal);
        assert!(r.note.is_some());
    }

    #[test]
    fn caratheodory_candidates_stay_below() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut tested = 0;
        while tested < 30 {
            let n = rng.gen_range(2..7);
            let y: Vec<Complex64> = (1..n)
                .map(|j| rand_disc(&mut rng) * (0.4 * binom(n, j)))
                .collect();
            let p = PointGn::new(n, y, rand_disc(&mut rng) * 0.4).unwrap();
            if !in_gtilde(&p).inside {
                continue;
            }
            tested += 1;
            let lower = dist_origin(&p).unwrap().lower;
            for j in 1..n {
                for k in 0..36 {
                    let om = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 36.0);
                    let v = phi(j, om, &p).unwrap().norm();
                    assert!(v.atanh() <= lower + 1e-12);
                }
            }
        }
    }

    #[test]
    fn monotone_along_a_ray() {
        let (y1, yn1, q) = (c(0.5, 0.2), c(0.3, -0.1), c(0.05, 0.02));
        let mut last = -1.0;
        for k in 1..=40 {
            let t = k as f64 / 40.0 * 1.2;
            let y = jn_embed(y1 * t, yn1 * t, q * (t * t), 5).unwrap();
            if !in_gtilde(&y).inside {
                break;
            }
            let l = dist_origin(&y).unwrap().lower;
            assert!(l >= last - 1e-14);
            last = l;
        }
        assert!(last > 0.0);
    }

    #[test]
    fn exterior_point_rejected() {
        assert!(matches!(
            dist_origin(&PointGn::g2(c(3.0, 0.0), c(0.0, 0.0))),
            Err(Error::NotInterior)
        ));
    }
}
