use gtilde::distance::dist_origin_with_disc;
use gtilde::interpolation::{
    default_grid, to_rational_curve, MatPoly, RationalCurve, VerifyReport, DET_TOL,
    Q_CONSTRAINT_TOL,
};
use gtilde::json::to_canonical_string;
use gtilde::oracles::DEFAULT_SEED;
use gtilde::{
    build_interpolant_jn, characterize, in_gamma_tilde, in_gtilde, in_jn, mu_diag,
    mu_membership_check, phi_supnorm, verify_interpolant, Complex64, Interpolant, Mat2,
    MembershipReport, PointGn, SchwarzData, SchwarzInstance,
};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::{Command, Failure, Opts};

const DEFAULT_VERIFY_POINTS: usize = 10_000;
const DEFAULT_EVAL_GRID: usize = 8;

pub fn canonical<T: Serialize>(v: &T) -> String {
    let mut s = to_canonical_string(v).expect("report types serialize");
    s.push('\n');
    s
}

fn parse<T: DeserializeOwned>(text: &str) -> Result<T, Failure> {
    serde_json::from_str(text).map_err(|e| Failure::Parse(e.to_string()))
}

#[derive(Serialize)]
struct MembershipOut {
    #[serde(flatten)]
    report: MembershipReport,
    in_closure: bool,
    in_jn: bool,
    mu_check: bool,
}

#[derive(Serialize)]
struct PhiNorm {
    j: usize,
    supnorm: f64,
}

#[derive(Serialize)]
struct SchwarzOut {
    instance: SchwarzInstance,
    data: SchwarzData,
    default_nu: f64,
    #[serde(with = "gtilde::json::complex")]
    w: Complex64,
}

#[derive(Deserialize)]
struct InterpolateIn {
    target: PointGn,
    #[serde(with = "gtilde::json::complex")]
    lambda0: Complex64,
    #[serde(default)]
    nu: Option<f64>,
    #[serde(default)]
    q: Option<MatPoly>,
}

#[derive(Serialize, Deserialize)]
struct InterpolateOut {
    interpolant: Interpolant,
    report: VerifyReport,
}

/// An interpolant, bare or wrapped in the output of `interpolate`.
#[derive(Deserialize)]
#[serde(untagged)]
enum Artifact {
    Wrapped { interpolant: Interpolant },
    Bare(Interpolant),
}

impl Artifact {
    fn into_interpolant(self) -> Interpolant {
        match self {
            Artifact::Wrapped { interpolant } | Artifact::Bare(interpolant) => interpolant,
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CharacterizeIn {
    Curve {
        curve: RationalCurve,
        #[serde(with = "gtilde::json::complex")]
        lambda0: Complex64,
    },
    Interpolant(Artifact),
}

pub fn run(cmd: Command, opts: &Opts, text: &str) -> Result<String, Failure> {
    if opts.csv && cmd != Command::Eval {
        return Err(Failure::Parse("--csv is only available for eval".into()));
    }
    let seed = opts.seed.unwrap_or(DEFAULT_SEED);
    match cmd {
        Command::Membership => {
            let y: PointGn = parse(text)?;
            Ok(canonical(&MembershipOut {
                report: in_gtilde(&y),
                in_closure: in_gamma_tilde(&y),
                in_jn: in_jn(&y),
                mu_check: mu_membership_check(&y),
            }))
        }
        Command::Phinorm => {
            let y: PointGn = parse(text)?;
            let norms = (1..y.n())
                .map(|j| {
                    Ok(PhiNorm {
                        j,
                        supnorm: phi_supnorm(j, &y)?,
                    })
                })
                .collect::<Result<Vec<_>, gtilde::Error>>()?;
            Ok(canonical(&norms))
        }
        Command::Schwarz => {
            let inst: SchwarzInstance = parse(text)?;
            let data = inst.compute()?;
            Ok(canonical(&SchwarzOut {
                default_nu: data.default_nu(),
                w: inst.w(),
                instance: inst,
                data,
            }))
        }
        Command::Interpolate => {
            let input: InterpolateIn = parse(text)?;
            let psi = build_interpolant_jn(&input.target, input.lambda0, input.nu, input.q)?;
            let grid = default_grid(opts.grid.unwrap_or(DEFAULT_VERIFY_POINTS), seed);
            let report = apply_tol(verify_interpolant(&psi, &grid)?, opts.tol);
            Ok(canonical(&InterpolateOut {
                interpolant: psi,
                report,
            }))
        }
        Command::Verify => {
            let psi = parse::<Artifact>(text)?.into_interpolant();
            let grid = default_grid(opts.grid.unwrap_or(DEFAULT_VERIFY_POINTS), seed);
            let report = apply_tol(verify_interpolant(&psi, &grid)?, opts.tol);
            let recanonical = to_canonical_string(&psi).expect("interpolants serialize");
            let stored = serde_json::from_str::<Value>(text)
                .ok()
                .and_then(|v| v.get("interpolant").cloned().or(Some(v)))
                .map(|v| to_canonical_string(&v).expect("values serialize"));
            let out = json!({
                "report": report,
                "canonical_round_trip": stored.as_deref() == Some(recanonical.as_str()),
            });
            if report.passed {
                Ok(canonical(&out))
            } else {
                Err(Failure::Verification(out))
            }
        }
        Command::Eval => {
            let psi = parse::<Artifact>(text)?.into_interpolant();
            let rows = eval_rows(&psi, opts.grid.unwrap_or(DEFAULT_EVAL_GRID))?;
            if opts.json {
                Ok(canonical(&rows))
            } else {
                Ok(to_csv(&psi, &rows))
            }
        }
        Command::Characterize => {
            let (curve, l0) = match parse::<CharacterizeIn>(text)? {
                CharacterizeIn::Curve { curve, lambda0 } => (curve, lambda0),
                CharacterizeIn::Interpolant(a) => {
                    let psi = a.into_interpolant();
                    (to_rational_curve(&psi)?, psi.lambda0)
                }
            };
            Ok(canonical(&characterize(&curve, l0)?))
        }
        Command::Mu => {
            let b: Mat2 = parse(text)?;
            Ok(canonical(&mu_diag(&b)))
        }
        Command::Distance => {
            let y: PointGn = parse(text)?;
            Ok(canonical(&dist_origin_with_disc(&y)?.0))
        }
    }
}

/// With `--tol`, the endpoint residuals are judged against it instead of the defaults.
fn apply_tol(mut r: VerifyReport, tol: Option<f64>) -> VerifyReport {
    if let Some(t) = tol {
        r.passed = r.origin_residual <= t
            && r.endpoint_residual <= t
            && r.worst_margin > 0.0
            && r.worst_det_spread <= DET_TOL
            && r.max_factor_norm < 1.0
            && r.q_residual <= Q_CONSTRAINT_TOL;
    }
    r
}

#[derive(Serialize)]
struct EvalRow {
    #[serde(with = "gtilde::json::complex")]
    lambda: Complex64,
    point: PointGn,
    worst_margin: f64,
    factor_norms: Vec<f64>,
}

/// The origin, `λ₀`, then a polar grid of `m` radii in `(0, 0.99]` by `m` angles.
fn eval_rows(psi: &Interpolant, m: usize) -> Result<Vec<EvalRow>, Failure> {
    let mut lambdas = vec![Complex64::new(0.0, 0.0), psi.lambda0];
    for a in 0..m {
        for r in 1..=m {
            let theta = std::f64::consts::TAU * a as f64 / m as f64;
            lambdas.push(Complex64::from_polar(0.99 * r as f64 / m as f64, theta));
        }
    }
    lambdas
        .into_iter()
        .map(|l| {
            let point = psi.eval(l)?;
            let factor_norms = psi
                .factors
                .iter()
                .map(|f| f.eval(l).map(|m| m.op_norm()))
                .collect::<Result<Vec<_>, _>>()?;
            Ok(EvalRow {
                lambda: l,
                worst_margin: in_gtilde(&point).worst_margin(),
                point,
                factor_norms,
            })
        })
        .collect()
}

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_csv(psi: &Interpolant, rows: &[EvalRow]) -> String {
    let n = psi.n;
    let mut header = vec!["lambda_re".to_string(), "lambda_im".to_string()];
    for j in 1..n {
        header.push(format!("y{j}_re"));
        header.push(format!("y{j}_im"));
    }
    header.extend([
        "q_re".to_string(),
        "q_im".to_string(),
        "worst_margin".to_string(),
    ]);
    for k in 1..=psi.factors.len() {
        header.push(format!("factor{k}_norm"));
    }
    let mut out = header.join(",");
    out.push('\n');
    for r in rows {
        let mut cells = vec![num(r.lambda.re), num(r.lambda.im)];
        for z in r.point.coords() {
            cells.push(num(z.re));
            cells.push(num(z.im));
        }
        cells.push(num(r.worst_margin));
        cells.extend(r.factor_norms.iter().map(|&x| num(x)));
        out.push_str(&cells.join(","));
        out.push('\n');
    }
    out
}
