//! Acceptance suite: one line per criterion, tolerances and budgets pinned below.
//!
//! Run with `cargo test -p gtilde --test acceptance` (add `--release` for timing headroom).

mod common;

use std::time::{Duration, Instant};

use common::*;
use gtilde::interpolation::{default_grid, to_rational_curve};
use gtilde::oracles::{dense_op_norm, mu_grid, GridSpec, DEFAULT_SEED};
use gtilde::{
    build_interpolant_jn, characterize, dist_origin, in_gtilde, k_matrix, mobius, mu_diag,
    mu_membership_check, phi, verify_interpolant, Complex64, Mat2, MatPoly, PointGn,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const WINDOW_BAND: f64 = 1e-9;
const CLOSED_FORM_TOL: f64 = 1e-9;
const ORIGIN_TOL: f64 = 1e-10;
const ENDPOINT_TOL: f64 = 1e-8;
const NONUNIQUE_GAP: f64 = 1e-6;
const ROUNDTRIP_Z_TOL: f64 = 1e-7;
const FACTOR_TOL: f64 = 1e-8;
const MU_GRID_TOL: f64 = 1e-4;
const NEAR_BOUNDARY: f64 = 1e-6;
const DISTANCE_TOL: f64 = 1e-8;
const CARATHEODORY_SLACK: f64 = 1e-12;
const MOBIUS_TOL: f64 = 1e-9;
const SVD_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Sign of `op_norm(Z) < 1` against the `ν²` window on a grid over `(θ/2, 2ϑ)`.
fn window() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked = 0;
    for _ in 0..200 {
        let inst = random_instance(&mut rng, 2..=8);
        let d = inst.compute().map_err(|e| e.to_string())?;
        let (lo, hi) = (0.5 * d.theta, 2.0 * d.vartheta);
        for k in 0..100 {
            let s = lo + (hi - lo) * (k as f64 + 0.5) / 100.0;
            let band = WINDOW_BAND * d.vartheta;
            if (s - d.theta).abs() <= band || (s - d.vartheta).abs() <= band {
                continue;
            }
            let nu = s.sqrt();
            let z = inst.z_matrix(nu).map_err(|e| e.to_string())?;
            let inside = d.theta < s && s < d.vartheta;
            check((z.op_norm() < 1.0) == inside, || {
                format!(
                    "nu^2 = {s} in ({}, {}): |Z| = {}",
                    d.theta,
                    d.vartheta,
                    z.op_norm()
                )
            })?;
            if inside {
                let det = inst.k_direct(nu).map_err(|e| e.to_string())?.det().re;
                check(det < 0.0, || format!("det K = {det} at nu^2 = {s}"))?;
            }
            checked += 1;
        }
    }
    Ok(format!("{checked} grid points"))
}

/// Closed forms of `det(1 - Z*Z)`, `R + 1/R - X`, `K det(1 - Z*Z)` and `det K`.
fn closed_forms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let inst = random_instance(&mut rng, 2..=8);
        let d = inst.compute().map_err(|e| e.to_string())?;
        let nu = (d.theta * (d.vartheta / d.theta).powf(rng.gen_range(0.01..0.99))).sqrt();
        let z = inst.z_matrix(nu).map_err(|e| e.to_string())?;
        let det_direct = (Mat2::identity() - z.adjoint() * z).det().re;
        let e2 = (det_direct - inst.det_one_minus_zstarz(nu)).abs();
        let gap = inst.r_x_gap().map_err(|e| e.to_string())?;
        let e3 = (gap - inst.r_x_gap_closed_form()).abs() / (1.0 + gap);
        let (closed, det) = inst.kappa_closed_form(nu).map_err(|e| e.to_string())?;
        let direct = inst
            .k_direct(nu)
            .map_err(|e| e.to_string())?
            .scale(det_direct.into());
        let e11 = closed.max_abs_diff(&direct);
        let e6 = (direct.det().re - det).abs();
        let e = e2.max(e3).max(e11).max(e6);
        worst = worst.max(e);
        check(e < CLOSED_FORM_TOL, || {
            format!("residuals {e2:e} {e3:e} {e11:e} {e6:e}")
        })?;
    }
    Ok(format!("worst residual {worst:.2e}"))
}

/// Build, evaluate and sweep 50 interpolants.
fn interpolation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let grid = default_grid(10_000, DEFAULT_SEED);
    let (mut worst_origin, mut worst_end, mut worst_margin) = (0.0f64, 0.0f64, f64::INFINITY);
    for _ in 0..50 {
        let (y, l0) = random_jn_target(&mut rng, 2..=5, 1.2);
        let psi = build_interpolant_jn(&y, l0, None, None).map_err(|e| e.to_string())?;
        let r = verify_interpolant(&psi, &grid).map_err(|e| e.to_string())?;
        worst_origin = worst_origin.max(r.origin_residual);
        worst_end = worst_end.max(r.endpoint_residual);
        worst_margin = worst_margin.min(r.worst_margin);
        check(
            r.origin_residual < ORIGIN_TOL
                && r.endpoint_residual < ENDPOINT_TOL
                && r.worst_margin > 0.0,
            || format!("{r:?}"),
        )?;
    }
    Ok(format!(
        "|psi(0)| {worst_origin:.1e}, |psi(l0) - y| {worst_end:.1e}, min margin {worst_margin:.2e}"
    ))
}

/// Two admissible `ν` give different interpolants through the same data.
fn non_uniqueness() -> Outcome {
    let y = gtilde::pi_hat(&Mat2::real(0.1, 0.05, 0.05, 0.04), 3).map_err(|e| e.to_string())?;
    let l0 = c(
        1.2 * gtilde::phi_supnorm(1, &y).map_err(|e| e.to_string())?,
        0.0,
    );
    let inst = gtilde::SchwarzInstance::new(l0, y.clone(), 1).map_err(|e| e.to_string())?;
    let d = inst.compute().map_err(|e| e.to_string())?;
    let nu2 = d.vartheta.powf(0.25);
    let a = build_interpolant_jn(&y, l0, Some(1.0), None).map_err(|e| e.to_string())?;
    let b = build_interpolant_jn(&y, l0, Some(nu2), None).map_err(|e| e.to_string())?;
    let mut nodes: f64 = 0.0;
    for l in [c(0.0, 0.0), l0] {
        let (pa, pb) = (
            a.eval(l).map_err(|e| e.to_string())?,
            b.eval(l).map_err(|e| e.to_string())?,
        );
        nodes = nodes.max(pa.max_abs_diff(&pb));
    }
    let third = c(-0.5, 0.3);
    let gap = a
        .eval(third)
        .map_err(|e| e.to_string())?
        .max_abs_diff(&b.eval(third).map_err(|e| e.to_string())?);
    check(nodes < ENDPOINT_TOL && gap > NONUNIQUE_GAP, || {
        format!("node disagreement {nodes:e}, third-point gap {gap:e}")
    })?;
    Ok(format!(
        "nu = 1 vs {nu2:.4}: node diff {nodes:.1e}, gap at third point {gap:.2e}"
    ))
}

/// Characterize polynomial-`Q` interpolants and recover their Schwarz data.
fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let (mut worst_z, mut worst_bal, mut worst_prod, mut worst_nu) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let (y, l0) = random_jn_target(&mut rng, 2..=5, 1.3);
        let inst = gtilde::SchwarzInstance::new(l0, y.clone(), 1).map_err(|e| e.to_string())?;
        let d = inst.compute().map_err(|e| e.to_string())?;
        let nu = (d.theta * (d.vartheta / d.theta).powf(rng.gen_range(0.2..0.8))).sqrt();
        let alpha = inst.choose_alpha(nu).map_err(|e| e.to_string())?;
        let q0 = inst.build_q0(nu, &alpha).map_err(|e| e.to_string())?;
        let e = random_mat(&mut rng, 1.0);
        let e = e.scale(c(0.9 * (1.0 - q0.op_norm()) / e.op_norm(), 0.0));
        let q = MatPoly {
            coeffs: vec![q0, e],
        };
        let psi = build_interpolant_jn(&y, l0, Some(nu), Some(q)).map_err(|e| e.to_string())?;
        let curve = to_rational_curve(&psi).map_err(|e| e.to_string())?;
        let rec = characterize(&curve, l0).map_err(|e| e.to_string())?;
        let r = &rec[0];
        worst_z = worst_z.max(r.z_residual);
        worst_bal = worst_bal.max(r.balance_residual);
        worst_prod = worst_prod.max(r.product_residual);
        worst_nu = worst_nu.max((r.nu - nu).abs());
        check(
            r.z_residual < ROUNDTRIP_Z_TOL
                && r.nu_in_window == Some(true)
                && r.balance_residual < FACTOR_TOL
                && r.product_residual < FACTOR_TOL,
            || format!("{r:?}"),
        )?;
    }
    Ok(format!(
        "|G - Z| {worst_z:.1e}, ||f|-|g|| {worst_bal:.1e}, |fg - h| {worst_prod:.1e}, |nu_rec - nu| {worst_nu:.1e}"
    ))
}

/// A point on the segment towards `y` whose membership margin is `±δ`-close to zero.
fn near_boundary(rng: &mut ChaCha8Rng, y: &PointGn) -> Option<PointGn> {
    let inside = |t: f64| in_gtilde(&scale_point(y, t)).inside;
    if !inside(0.0) || inside(1.0) {
        return None;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let delta = 10f64.powf(rng.gen_range(-5.0..-2.0));
    let sign = if rng.gen::<bool>() { 1.0 } else { -1.0 };
    Some(scale_point(y, lo * (1.0 + sign * delta)))
}

/// μ-membership against the β test, and `mu_diag` against the grid oracle.
fn mu_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(106);
    let (mut tested, mut inside) = (0, 0);
    while tested < 500 {
        let n = rng.gen_range(2..=7);
        let raw = random_point(&mut rng, n, 1.5);
        let p = if tested % 3 == 2 {
            match near_boundary(&mut rng, &raw) {
                Some(p) => p,
                None => continue,
            }
        } else {
            raw
        };
        let rep = in_gtilde(&p);
        if rep.worst_margin().abs() <= NEAR_BOUNDARY {
            continue;
        }
        tested += 1;
        inside += rep.inside as usize;
        check(mu_membership_check(&p) == rep.inside, || {
            format!("disagreement at {p:?}")
        })?;
    }
    let grid = GridSpec::new(40, 200, DEFAULT_SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let b = random_mat(&mut rng, 1.0);
        let exact = mu_diag(&b).value;
        let brute = mu_grid(&b, &grid);
        let e = (exact - brute).abs();
        worst = worst.max(e);
        check(e < MU_GRID_TOL, || {
            format!("mu {exact} vs grid {brute} for {b}")
        })?;
    }
    Ok(format!(
        "500 points ({inside} inside), worst |mu - grid| {worst:.1e}"
    ))
}

/// Carathéodory lower bound against the construction-backed Lempert upper bound.
fn distances() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (y, _) = random_jn_target(&mut rng, 2..=6, 1.2);
        let r = dist_origin(&y).map_err(|e| e.to_string())?;
        let upper = r.upper.ok_or_else(|| format!("no upper bound: {r:?}"))?;
        worst = worst.max((upper - r.lower).abs());
        check(r.equal && (upper - r.lower).abs() < DISTANCE_TOL, || {
            format!("{r:?}")
        })?;
    }
    let mut sampled = 0;
    while sampled < 100 {
        let n = rng.gen_range(2..=7);
        let p = random_point(&mut rng, n, 0.6);
        if !in_gtilde(&p).inside {
            continue;
        }
        sampled += 1;
        let lower = dist_origin(&p).map_err(|e| e.to_string())?.lower;
        for j in 1..n {
            for k in 0..36 {
                let om = Complex64::from_polar(1.0, k as f64 * std::f64::consts::TAU / 36.0);
                let v = phi(j, om, &p).map_err(|e| e.to_string())?.norm().atanh();
                check(v <= lower + CARATHEODORY_SLACK, || {
                    format!("{v} > {lower} at j = {j}")
                })?;
            }
        }
    }
    Ok(format!(
        "50 equalities (worst gap {worst:.1e}), 100 interior lower bounds"
    ))
}

/// Möbius round trip, spectral norm against Jacobi, Hermitian `K`.
fn core_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let (mut e_mob, mut e_svd, mut e_herm) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let z = random_contraction(&mut rng);
        let x = random_contraction(&mut rng);
        let m = mobius(&z, &x).map_err(|e| e.to_string())?;
        check(m.op_norm() < 1.0, || {
            format!("M_Z(X) not a contraction: {}", m.op_norm())
        })?;
        let back = mobius(&-z, &m).map_err(|e| e.to_string())?;
        e_mob = e_mob.max(back.max_abs_diff(&x));
        let s = rng.gen_range(0.01..10.0);
        let a = random_mat(&mut rng, s);
        e_svd = e_svd.max((a.op_norm() - dense_op_norm(&a)).abs() / a.op_norm().max(1.0));
        let k = k_matrix(&z, rng.gen_range(0.0..1.0)).map_err(|e| e.to_string())?;
        e_herm = e_herm.max(k.hermitian_defect());
    }
    check(
        e_mob < MOBIUS_TOL && e_svd < SVD_TOL && e_herm < HERMITIAN_TOL,
        || format!("mobius {e_mob:e}, svd {e_svd:e}, hermitian {e_herm:e}"),
    )?;
    Ok(format!(
        "mobius {e_mob:.1e}, svd {e_svd:.1e}, hermitian {e_herm:.1e}"
    ))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 norm window of Z", window, 30),
        ("2 closed-form identities", closed_forms, 10),
        ("3 end-to-end interpolation", interpolation, 120),
        ("4 non-uniqueness", non_uniqueness, 5),
        ("5 characterization round trip", round_trip, 30),
        ("6 mu membership equivalence", mu_equivalence, 120),
        ("7 distances from the origin", distances, 60),
        ("8 core algebra", core_algebra, 5),
    ];
    let mut failed = 0;
    for (name, run, budget) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let over = elapsed > Duration::from_secs(budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; over budget of {budget} s")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!(
            "[{status}] {name} ({:.2} s): {detail}",
            elapsed.as_secs_f64()
        );
    }
    if failed > 0 {
        println!("{failed} of 8 criteria failed");
        std::process::exit(1);
    }
    println!("all 8 criteria passed");
}
