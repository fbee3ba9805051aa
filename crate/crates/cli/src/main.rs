//! `gtilde`: JSON in, JSON or CSV out.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 library error (hypothesis violations,
//! failed verification), 3 unparsable arguments or input.

mod commands;

use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(
    name = "gtilde",
    version,
    about = "Geometry, interpolation and mu for the extended symmetrized polydisc"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Input file, '-' for stdin, or inline JSON.
    #[arg(short, long, global = true, default_value = "-")]
    input: String,
    /// Output file (stdout when absent).
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Endpoint tolerance for interpolate/verify.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    /// Sample count (verification points, or eval grid resolution).
    #[arg(long, global = true)]
    pub grid: Option<usize>,
    /// Quasi-random seed, hexadecimal.
    #[arg(long, global = true, value_parser = parse_hex)]
    pub seed: Option<u64>,
    /// JSON output (default except for eval).
    #[arg(long, global = true, conflicts_with = "csv")]
    pub json: bool,
    /// CSV output (eval only).
    #[arg(long, global = true)]
    pub csv: bool,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Membership report for a point.
    Membership,
    /// Sup-norms of Phi_j for every j.
    Phinorm,
    /// Schwarz window data for an instance.
    Schwarz,
    /// Build and verify an interpolant.
    Interpolate,
    /// Sweep an interpolant over a grid of the disc.
    Eval,
    /// Recover the factors of a rational analytic disc.
    Characterize,
    /// Structured singular value of a 2x2 matrix.
    Mu,
    /// Distances from the origin.
    Distance,
    /// Re-run the checks on a serialized interpolant.
    Verify,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Membership => "membership",
            Command::Phinorm => "phinorm",
            Command::Schwarz => "schwarz",
            Command::Interpolate => "interpolate",
            Command::Eval => "eval",
            Command::Characterize => "characterize",
            Command::Mu => "mu",
            Command::Distance => "distance",
            Command::Verify => "verify",
        }
    }
}

fn parse_hex(s: &str) -> Result<u64, String> {
    let t = s.trim_start_matches("0x").trim_start_matches("0X");
    u64::from_str_radix(t, 16).map_err(|e| format!("invalid hex seed '{s}': {e}"))
}

/// A failure ready to be reported.
pub enum Failure {
    Io(String),
    Parse(String),
    Lib(gtilde::Error),
    Verification(Value),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Lib(_) | Failure::Verification(_) => 2,
            Failure::Parse(_) => 3,
        }
    }

    fn to_json(&self, command: &str) -> Value {
        let (code, message, mut context) = match self {
            Failure::Io(m) => ("IoError", m.clone(), json!({})),
            Failure::Parse(m) => ("ParseError", m.clone(), json!({})),
            Failure::Lib(e) => (e.code(), e.to_string(), lib_context(e)),
            Failure::Verification(r) => (
                "VerificationFailed",
                "interpolant failed verification".to_string(),
                json!({ "report": r }),
            ),
        };
        context["command"] = json!(command);
        json!({ "error": { "code": code, "message": message, "context": context } })
    }
}

impl From<gtilde::Error> for Failure {
    fn from(e: gtilde::Error) -> Self {
        Failure::Lib(e)
    }
}

fn lib_context(e: &gtilde::Error) -> Value {
    use gtilde::Error as E;
    match e {
        E::HypothesisViolated { hypothesis, slack } => {
            json!({ "hypothesis": hypothesis, "slack": slack })
        }
        E::NuOutOfRange {
            nu,
            theta,
            vartheta,
        } => json!({ "nu": nu, "theta": theta, "vartheta": vartheta }),
        E::NotContraction { norm } | E::QNotContractive { norm } => json!({ "norm": norm }),
        E::QConstraintViolated { residual } => json!({ "residual": residual }),
        E::NotSchur { sup } => json!({ "sup": sup }),
        E::OutsideDisc { modulus } | E::QOnBoundary { modulus } => json!({ "modulus": modulus }),
        E::DetInconsistent { spread } | E::DeterminantMismatch { spread } => {
            json!({ "spread": spread })
        }
        E::NodeNotInBall { index, mu, modulus } => {
            json!({ "index": index, "mu": mu, "modulus": modulus })
        }
        E::DegenerateTarget { j } | E::PoleHit { j } => json!({ "j": j }),
        _ => json!({}),
    }
}

fn read_input(spec: &str) -> Result<String, Failure> {
    let trimmed = spec.trim_start();
    if trimmed.starts_with('{') || trimmed.starts_with('[') {
        return Ok(spec.to_string());
    }
    let mut text = String::new();
    if spec == "-" {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Failure::Io(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(spec).map_err(|e| Failure::Io(format!("{spec}: {e}")))?;
    }
    Ok(text)
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display())))
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

fn validate(opts: &Opts) -> Result<(), Failure> {
    if let Some(t) = opts.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Failure::Parse(format!("--tol must be positive, got {t}")));
        }
    }
    if opts.grid == Some(0) {
        return Err(Failure::Parse("--grid must be at least 1".into()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let name = cli.command.name();
    let result = validate(&cli.opts)
        .and_then(|_| read_input(&cli.opts.input))
        .and_then(|text| commands::run(cli.command, &cli.opts, &text))
        .and_then(|out| write_output(&cli.opts.output, &out));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Verification(report) = &f {
                // The report itself is still useful output.
                let _ = write_output(&cli.opts.output, &commands::canonical(report));
            }
            eprintln!("{}", f.to_json(name));
            ExitCode::from(f.exit_code())
        }
    }
}
