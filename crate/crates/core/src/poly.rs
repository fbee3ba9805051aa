//! Complex polynomials, their roots, and the balanced factorization `h = f g`.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;

/// Trailing coefficients with modulus at or below this are dropped.
pub const TRIM_TOL: f64 = 1e-14;
/// Roots with `|r| >= 1 - BOUNDARY_BAND` belong to the outer part.
pub const BOUNDARY_BAND: f64 = 1e-10;
pub const MAX_ITERATIONS: usize = 500;

/// Polynomial with complex coefficients in ascending degree.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PolyC {
    #[serde(with = "json::complex_vec")]
    coeffs: Vec<Complex64>,
}

impl PolyC {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.norm() <= TRIM_TOL) {
            coeffs.pop();
        }
        PolyC { coeffs }
    }

    pub fn zero() -> Self {
        PolyC { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        PolyC::new(vec![c])
    }

    /// The monomial `λ`.
    pub fn lambda() -> Self {
        PolyC::new(vec![0.0.into(), 1.0.into()])
    }

    /// `lead · Π (λ - r)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut p = PolyC::constant(lead);
        for &r in roots {
            p = p * PolyC::new(vec![-r, 1.0.into()]);
        }
        p
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or_default()
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner.
    fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut dp = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> PolyC {
        PolyC::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> PolyC {
        PolyC::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Largest coefficient difference.
    pub fn max_abs_diff(&self, other: &PolyC) -> f64 {
        let n = self.coeffs.len().max(other.coeffs.len());
        (0..n)
            .map(|k| {
                let a = self.coeffs.get(k).copied().unwrap_or_default();
                let b = other.coeffs.get(k).copied().unwrap_or_default();
                (a - b).norm()
            })
            .fold(0.0, f64::max)
    }
}

impl Add for PolyC {
    type Output = PolyC;
    fn add(self, o: PolyC) -> PolyC {
        let n = self.coeffs.len().max(o.coeffs.len());
        PolyC::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or_default()
                        + o.coeffs.get(k).copied().unwrap_or_default()
                })
                .collect(),
        )
    }
}

impl Sub for PolyC {
    type Output = PolyC;
    fn sub(self, o: PolyC) -> PolyC {
        self + o.scale((-1.0).into())
    }
}

impl Mul for PolyC {
    type Output = PolyC;
    fn mul(self, o: PolyC) -> PolyC {
        if self.is_zero() || o.is_zero() {
            return PolyC::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (k, &b) in o.coeffs.iter().enumerate() {
                out[i + k] += a * b;
            }
        }
        PolyC::new(out)
    }
}

/// All roots of `p`, repeated by multiplicity.
///
/// Exact zeros at the origin are split off first; the rest is solved by Aberth's
/// simultaneous iteration and polished with Newton steps.
pub fn poly_roots(p: &PolyC) -> Result<Vec<Complex64>> {
    let Some(deg) = p.degree() else {
        return Err(Error::ZeroPolynomial);
    };
    if deg == 0 {
        return Err(Error::InvalidArgument(
            "constant polynomial has no roots".into(),
        ));
    }
    let lead_zeros = p.coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let mut roots = vec![Complex64::new(0.0, 0.0); lead_zeros];
    let rest = PolyC::new(p.coeffs[lead_zeros..].to_vec());
    roots.extend(aberth(&rest)?);
    Ok(roots)
}

fn aberth(p: &PolyC) -> Result<Vec<Complex64>> {
    let d = p.degree().unwrap_or(0);
    match d {
        0 => return Ok(Vec::new()),
        1 => return Ok(vec![-p.coeffs[0] / p.coeffs[1]]),
        _ => {}
    }
    let lead = p.leading();
    let radius = (p.coeffs[0] / lead).norm().powf(1.0 / d as f64).max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, std::f64::consts::TAU * k as f64 / d as f64 + 0.4))
        .collect();
    let mut converged = false;
    for _ in 0..MAX_ITERATIONS {
        let mut worst: f64 = 0.0;
        for k in 0..d {
            let (val, der) = p.eval_with_derivative(z[k]);
            if val.norm() == 0.0 {
                continue;
            }
            let ratio = val / der;
            let repulsion: Complex64 = (0..d)
                .filter(|&m| m != k)
                .map(|m| (z[k] - z[m]).inv())
                .sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                worst = worst.max(step.norm() / (1.0 + z[k].norm()));
            } else {
                // Coincident iterates: nudge apart.
                let bump = Complex64::new(1e-8, 1e-8) * (1.0 + z[k].norm());
                z[k] += bump;
                worst = f64::INFINITY;
            }
        }
        if worst <= 1e-15 {
            converged = true;
            break;
        }
    }
    for zk in z.iter_mut() {
        for _ in 0..3 {
            let (val, der) = p.eval_with_derivative(*zk);
            if der.norm() == 0.0 {
                break;
            }
            let next = *zk - val / der;
            if next.is_finite() && p.eval(next).norm() < val.norm() {
                *zk = next;
            } else {
                break;
            }
        }
    }
    if !converged {
        let scale =
            p.max_coeff() * (1.0 + z.iter().map(|r| r.norm()).fold(0.0, f64::max)).powi(d as i32);
        let residual = z.iter().map(|&r| p.eval(r).norm()).fold(0.0, f64::max);
        if !(residual <= 1e-8 * scale) {
            return Err(Error::NoConvergence {
                iterations: MAX_ITERATIONS,
            });
        }
    }
    Ok(z)
}

/// The factors `f = Π B_a · S / den` and `g = λ S / den` of `h = H / den²`, where
/// `H = lead · λ · Π(λ - a) · Π(λ - r)`, the `a` lie inside the disc, the `r` on or
/// outside the circle, `B_a(λ) = (λ - a)/(1 - conj(a) λ)` and
/// `S = √lead · Π √(-r) √(1 - λ/r) · Π √(1 - conj(a) λ)` with principal branches.
///
/// On the circle `|f| = |g|`, and `g(0) = 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BalancedFactors {
    #[serde(with = "json::complex")]
    pub lead: Complex64,
    /// Zeros of `H` in the open disc, one origin zero removed.
    #[serde(with = "json::complex_vec")]
    pub inside: Vec<Complex64>,
    /// Zeros of `H` on or outside the unit circle.
    #[serde(with = "json::complex_vec")]
    pub outside: Vec<Complex64>,
    /// Denominator, zero-free on the closed disc; `1` for polynomial `h`.
    pub den: PolyC,
}

impl BalancedFactors {
    /// `S(λ)`, the analytic square root of the outer part.
    pub fn sqrt_outer(&self, l: Complex64) -> Complex64 {
        let mut s = self.lead.sqrt();
        for &r in &self.outside {
            s *= (-r).sqrt() * (1.0 - l / r).sqrt();
        }
        for &a in &self.inside {
            s *= (1.0 - a.conj() * l).sqrt();
        }
        s
    }

    /// The Blaschke product over [`Self::inside`].
    pub fn blaschke(&self, l: Complex64) -> Complex64 {
        self.inside
            .iter()
            .map(|&a| (l - a) / (1.0 - a.conj() * l))
            .product()
    }

    pub fn f(&self, l: Complex64) -> Complex64 {
        self.blaschke(l) * self.sqrt_outer(l) / self.den.eval(l)
    }

    pub fn g(&self, l: Complex64) -> Complex64 {
        l * self.sqrt_outer(l) / self.den.eval(l)
    }

    /// `H(λ)/den(λ)²` rebuilt from the stored roots.
    pub fn h(&self, l: Complex64) -> Complex64 {
        let num: Complex64 = self.lead
            * l
            * self.inside.iter().map(|&a| l - a).product::<Complex64>()
            * self.outside.iter().map(|&r| l - r).product::<Complex64>();
        let den = self.den.eval(l);
        num / (den * den)
    }
}

/// Balanced factorization of a polynomial `h` with `h(0) = 0`.
pub fn balanced_factorize(h: &PolyC) -> Result<BalancedFactors> {
    balanced_factorize_rational(h, &PolyC::constant(1.0.into()))
}

/// Balanced factorization of `h = num / den²`, `num(0) = 0`, `den` zero-free on the closed disc.
pub fn balanced_factorize_rational(num: &PolyC, den: &PolyC) -> Result<BalancedFactors> {
    if num.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if den.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let value = num.coeffs[0].norm();
    if value > 1e-12 * num.max_coeff().max(1.0) {
        return Err(Error::RootOnOriginMissing { value });
    }
    let deflated = PolyC::new(num.coeffs[1..].to_vec());
    let lead = deflated.leading();
    let roots = if deflated.degree() == Some(0) {
        Vec::new()
    } else {
        poly_roots(&deflated)?
    };
    let (inside, outside) = roots
        .into_iter()
        .partition(|r| r.norm() < 1.0 - BOUNDARY_BAND);
    Ok(BalancedFactors {
        lead,
        inside,
        outside,
        den: den.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    /// Hausdorff distance between two finite point sets.
    fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
        let one = |x: &[Complex64], y: &[Complex64]| {
            x.iter()
                .map(|p| {
                    y.iter()
                        .map(|q| (p - q).norm())
                        .fold(f64::INFINITY, f64::min)
                })
                .fold(0.0, f64::max)
        };
        one(a, b).max(one(b, a))
    }

    #[test]
    fn trimming_and_arithmetic() {
        let p = PolyC::new(vec![c(1.0, 0.0), c(2.0, 0.0), c(1e-15, 0.0)]);
        assert_eq!(p.degree(), Some(1));
        let sq = p.clone() * p.clone();
        assert_eq!(sq.coeffs(), &[c(1.0, 0.0), c(4.0, 0.0), c(4.0, 0.0)]);
        assert_eq!(sq.derivative().coeffs(), &[c(4.0, 0.0), c(8.0, 0.0)]);
        assert!((sq.clone() - sq).is_zero());
        assert_eq!(
            PolyC::from_roots(c(2.0, 0.0), &[c(1.0, 0.0)]).eval(c(3.0, 0.0)),
            c(4.0, 0.0)
        );
    }

    #[test]
    fn root_examples() {
        let mut r = poly_roots(&PolyC::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        r.sort_by(|a, b| a.re.partial_cmp(&b.re).unwrap());
        assert!((r[0] + 1.0).norm() < 1e-14 && (r[1] - 1.0).norm() < 1e-14);
        let r = poly_roots(&PolyC::new(vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)])).unwrap();
        assert_eq!(r, vec![c(0.0, 0.0); 2]);
        assert_eq!(poly_roots(&PolyC::zero()), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn recovers_known_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..100 {
            let roots: Vec<Complex64> = (0..8)
                .map(|_| Complex64::from_polar(rng.gen_range(0.1..3.0), rng.gen_range(0.0..6.3)))
                .collect();
            let lead = c(rng.gen_range(0.5..2.0), rng.gen_range(-1.0..1.0));
            let p = PolyC::from_roots(lead, &roots);
            let found = poly_roots(&p).unwrap();
            assert!(hausdorff(&roots, &found) < 1e-9);
            let rebuilt = PolyC::from_roots(lead, &found);
            assert!(rebuilt.max_abs_diff(&p) < 1e-9);
        }
    }

    #[test]
    fn double_roots_reconstruct() {
        let p = PolyC::from_roots(c(1.0, 0.0), &[c(0.5, 0.0), c(0.5, 0.0), c(-2.0, 1.0)]);
        let found = poly_roots(&p).unwrap();
        // A double root is only determined to about sqrt(eps).
        assert!(PolyC::from_roots(c(1.0, 0.0), &found).max_abs_diff(&p) < 1e-7);
    }

    #[test]
    fn factor_lambda() {
        let bf = balanced_factorize(&PolyC::lambda()).unwrap();
        assert!(bf.inside.is_empty() && bf.outside.is_empty());
        let z = c(0.3, 0.2);
        assert!((bf.f(z) - 1.0).norm() < 1e-15);
        assert!((bf.g(z) - z).norm() < 1e-15);
    }

    #[test]
    fn factor_lambda_times_lambda_minus_two() {
        let h = PolyC::from_roots(c(1.0, 0.0), &[c(0.0, 0.0), c(2.0, 0.0)]);
        let bf = balanced_factorize(&h).unwrap();
        assert_eq!(bf.outside.len(), 1);
        for k in 0..360 {
            let z = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 360.0);
            let target = (2.0 - z).norm().sqrt();
            assert!((bf.f(z).norm() - target).abs() < 1e-12);
            assert!((bf.g(z).norm() - target).abs() < 1e-12);
        }
        let z = c(0.4, -0.1);
        assert!((bf.f(z) * bf.g(z) - h.eval(z)).norm() < 1e-14);
    }

    #[test]
    fn factor_with_inside_root() {
        let h = PolyC::from_roots(c(1.0, 0.0), &[c(0.0, 0.0), c(0.5, 0.0)]);
        let bf = balanced_factorize(&h).unwrap();
        assert_eq!(bf.inside.len(), 1);
        for k in 0..360 {
            let z = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 360.0);
            assert!((bf.blaschke(z).norm() - 1.0).abs() < 1e-12);
            assert!((bf.f(z).norm() - bf.g(z).norm()).abs() < 1e-12);
        }
    }

    #[test]
    fn factorization_errors() {
        assert_eq!(
            balanced_factorize(&PolyC::zero()),
            Err(Error::ZeroPolynomial)
        );
        assert!(matches!(
            balanced_factorize(&PolyC::constant(c(1.0, 0.0))),
            Err(Error::RootOnOriginMissing { .. })
        ));
    }

    #[test]
    fn random_factorizations_balance() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let deg = rng.gen_range(1..=10);
            let mut roots = vec![c(0.0, 0.0)];
            for _ in 1..deg {
                let r = if rng.gen_bool(0.5) {
                    rng.gen_range(0.0..0.95)
                } else {
                    rng.gen_range(1.05..3.0)
                };
                roots.push(Complex64::from_polar(r, rng.gen_range(0.0..6.3)));
            }
            let h = PolyC::from_roots(c(rng.gen_range(0.2..2.0), rng.gen_range(-1.0..1.0)), &roots);
            let bf = balanced_factorize(&h).unwrap();
            assert_eq!(bf.g(c(0.0, 0.0)), c(0.0, 0.0));
            let scale = 1.0 + h.max_coeff();
            for k in 0..200 {
                let z =
                    Complex64::from_polar(0.95 * ((k % 20) as f64 + 0.5) / 20.0, k as f64 * 0.7);
                assert!((bf.f(z) * bf.g(z) - h.eval(z)).norm() < 1e-8 * scale);
            }
            for k in 0..360 {
                let z = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 360.0);
                assert!((bf.f(z).norm() - bf.g(z).norm()).abs() < 1e-8 * scale);
            }
        }
    }

    #[test]
    fn no_branch_jumps() {
        let h = PolyC::from_roots(
            c(0.7, 0.3),
            &[c(0.0, 0.0), c(-1.5, 0.2), c(0.3, 0.6), c(0.0, 2.0)],
        );
        let bf = balanced_factorize(&h).unwrap();
        for radius in [0.9, 0.99] {
            let n = 2000;
            let step = std::f64::consts::TAU / n as f64;
            for k in 0..n {
                let z0 = Complex64::from_polar(radius, k as f64 * step);
                let z1 = Complex64::from_polar(radius, (k + 1) as f64 * step);
                let dz = (z1 - z0).norm();
                for func in [
                    |b: &BalancedFactors, z| b.f(z),
                    |b: &BalancedFactors, z| b.g(z),
                ] {
                    let h_step = 1e-6;
                    let deriv = ((func(&bf, z0 + h_step) - func(&bf, z0)) / h_step).norm();
                    let jump = (func(&bf, z1) - func(&bf, z0)).norm();
                    assert!(jump <= 10.0 * deriv * dz + 1e-12);
                }
            }
        }
    }
}
