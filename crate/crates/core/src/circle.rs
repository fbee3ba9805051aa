//! Images of discs under scalar Möbius maps, and the bilinear zero test built on them.

use num_complex::Complex64;

/// The image of a closed disc under `w ↦ (a w + b)/(c w + d)`.
///
/// When the pole `-d/c` lies inside the disc the image is the closed exterior
/// of the circle, flagged by `exterior`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DiscImage {
    pub center: Complex64,
    pub radius: f64,
    pub exterior: bool,
}

impl DiscImage {
    /// Largest modulus over the image. Infinite for an exterior region.
    pub fn max_modulus(&self) -> f64 {
        if self.exterior {
            f64::INFINITY
        } else {
            self.center.norm() + self.radius
        }
    }

    /// Smallest modulus over the image.
    pub fn min_modulus(&self) -> f64 {
        let c = self.center.norm();
        if self.exterior {
            (self.radius - c).max(0.0)
        } else {
            (c - self.radius).max(0.0)
        }
    }

    /// A point of the image of smallest modulus.
    pub fn closest_to_origin(&self) -> Complex64 {
        let c = self.center.norm();
        if self.min_modulus() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if c == 0.0 {
            return Complex64::new(self.radius, 0.0);
        }
        self.center - self.center * (self.radius / c)
    }
}

/// Image of `{|w| <= t}` under `(a w + b)/(c w + d)`.
///
/// Returns `None` when the pole sits on the boundary circle (or the map is undefined).
pub fn mobius_disc_image(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    d: Complex64,
    t: f64,
) -> Option<DiscImage> {
    if c == Complex64::new(0.0, 0.0) {
        if d == Complex64::new(0.0, 0.0) {
            return None;
        }
        return Some(DiscImage {
            center: b / d,
            radius: a.norm() * t / d.norm(),
            exterior: false,
        });
    }
    // (a w + b)/(c w + d) = a/c + k/u with u = c w + d ranging over |u - d| <= r.
    let k = (b * c - a * d) / c;
    let r = t * c.norm();
    let gap = d.norm_sqr() - r * r;
    if gap == 0.0 || !gap.is_finite() {
        return None;
    }
    Some(DiscImage {
        center: a / c + k * d.conj() / gap,
        radius: k.norm() * r / gap.abs(),
        exterior: gap < 0.0,
    })
}

/// Minimum over `|w| <= t` of `|z(w)|`, where `z(w)` solves
/// `1 - b11 z - b22 w + p z w = 0`, together with a minimizing `(z, w)`.
///
/// The second component is `None` when the minimum is not attained by a finite
/// solution (the degenerate, separable case reports its own witness).
pub fn bilinear_min_z(
    b11: Complex64,
    b22: Complex64,
    p: Complex64,
    t: f64,
) -> (f64, Option<(Complex64, Complex64)>) {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    // z(w) = (1 - b22 w)/(b11 - p w).
    let (a, b, c, d) = (-b22, one, -p, b11);
    let det = a * d - b * c;
    let scale = 1.0 + b11.norm() * b22.norm() + p.norm();
    if det.norm() <= 1e-15 * scale {
        // Separable: g = (1 - b11 z)(1 - b22 w).
        if b22.norm() * t >= 1.0 {
            let w = one / b22;
            return (0.0, Some((zero, w)));
        }
        if b11 == zero {
            return (f64::INFINITY, None);
        }
        return (1.0 / b11.norm(), Some((one / b11, zero)));
    }
    let mut tt = t;
    let image = loop {
        if let Some(img) = mobius_disc_image(a, b, c, d, tt) {
            break img;
        }
        tt *= 1.0 - 1e-13;
    };
    let m = image.min_modulus();
    let z = image.closest_to_origin();
    let den = b22 - z * p;
    let w = if den == zero {
        None
    } else {
        Some((one - z * b11) / den)
    };
    (m, w.map(|w| (z, w)))
}

/// Whether `1 - b11 z - b22 w + p z w` vanishes somewhere on the closed bidisc of radius `t`.
pub fn bidisc_has_zero(b11: Complex64, b22: Complex64, p: Complex64, t: f64) -> bool {
    bilinear_min_z(b11, b22, p, t).0 <= t
}
