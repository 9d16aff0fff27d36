//! `dsq` — command-line analyses for the Deligne–Simpson machinery:
//! solvability verdicts, orbit solving with dimension certification,
//! quadratic-form and root data, decomposition scans, Kronecker pencil
//! splitting types, representation censuses, and squid moment residuals.
//!
//! Every command emits a single JSON report (stdout, or `--json-out PATH`)
//! and is deterministic given identical inputs and `--seed`; floats are
//! printed with 17 significant digits so reports re-parse bit-exactly.
//! Exit codes: 0 success, 2 invalid input, 3 solver non-convergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use dsq_core::ds::{self, ComplexValue, DSInstance, Mode, Verdict};
use dsq_core::pencil::{bundle_invariants, splitting_type, BundleInvariants, KroneckerPencil, SplittingType};
use dsq_core::quiver::{
    classify_root, in_fundamental_region, tits_q, Quiver, RootClass, StarShape,
};
use dsq_core::reps::{check_inequality_302, parameter_census, Census, Inequality302};
use dsq_core::solver::{
    certify, solve_additive, solve_multiplicative, tangent_dimension, SolverError, SolverOptions,
    SolverResult,
};
use dsq_core::squid::{residual, theta_n, CotangentSquidPoint};

#[derive(Parser)]
#[command(
    name = "dsq",
    version,
    about = "Deligne-Simpson analyses: verdicts, orbit solving, forms, roots, pencils"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Master seed for randomized operations (solver starts, censuses).
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Solver tolerance on the squared constraint residual.
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Number of solver starts.
    #[arg(long, global = true)]
    starts: Option<usize>,

    /// Iteration cap per solver start.
    #[arg(long, global = true)]
    max_iter: Option<usize>,

    /// Enumeration budget for decomposition scans.
    #[arg(long, global = true, default_value_t = 200_000)]
    budget: i64,

    /// Write the report to PATH instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    json_out: Option<PathBuf>,

    /// Suppress stdout output.
    #[arg(long, global = true)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Solvability verdict for an instance JSON file.
    Verdict {
        /// Instance JSON: {"mode": …, "classes": [{"eigenvalues": …}, …]}.
        #[arg(long)]
        instance: PathBuf,
    },
    /// Verdict, then orbit solve, then tangent-dimension certification.
    Solve {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Tits/Euler form data of a dimension vector on a star quiver.
    Forms {
        /// Leg lengths, e.g. 2,2,2,2.
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        w: Vec<usize>,
        /// Dimension vector (center first, then leg vertices).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<i64>,
    },
    /// Kac-style root classification on a star (--w) or a quiver file.
    Roots {
        #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with = "quiver")]
        w: Option<Vec<usize>>,
        /// Quiver JSON: {"vertices": [...], "arrows": [["t","h"], …]}.
        #[arg(long)]
        quiver: Option<PathBuf>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<i64>,
    },
    /// Defect-inequality scan over all proper decompositions of alpha.
    Decomp {
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        w: Vec<usize>,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<i64>,
    },
    /// Splitting type and bundle invariants of a Kronecker pencil file.
    Splitting {
        /// Pencil JSON: {"psi0": [["p/q", …], …], "psi1": …}.
        #[arg(long)]
        pencil: PathBuf,
    },
    /// Stabilizer-dimension histogram over random representations.
    Census {
        #[arg(long)]
        quiver: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<i64>,
        #[arg(long, default_value_t = 20)]
        samples: u64,
    },
    /// Moment-map residual of a squid point against the θᴺ target.
    MomentResidual {
        /// Cotangent squid point JSON (see the library's point schema).
        #[arg(long)]
        point: PathBuf,
        /// Star dimension vector α (center first).
        #[arg(long, value_delimiter = ',', num_args = 1..)]
        alpha: Vec<i64>,
        /// Residue exponents per leg as [[{"re":…,"im":…}, …], …]; defaults to ζ ≡ 0.
        #[arg(long)]
        zeta: Option<PathBuf>,
        /// Twist index N of the target.
        #[arg(long, default_value_t = 0)]
        twist: i64,
    },
}

/// One JSON report per invocation; only the section relevant to the command
/// is populated.
#[derive(Debug, Serialize, Deserialize)]
struct Report {
    command: String,
    input_digest: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    verdict: Option<Verdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    solver: Option<SolverResult>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    certified: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    forms: Option<FormsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    decomp: Option<Inequality302>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    splitting: Option<SplittingType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    bundle: Option<BundleInvariants>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    census: Option<Census>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    moment: Option<MomentSection>,
    elapsed_ms: u64,
}

impl Report {
    fn new(command: &str, digest: String) -> Self {
        Report {
            command: command.to_string(),
            input_digest: digest,
            verdict: None,
            solver: None,
            certified: None,
            forms: None,
            decomp: None,
            splitting: None,
            bundle: None,
            census: None,
            moment: None,
            elapsed_ms: 0,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct FormsSection {
    q: i64,
    p: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    delta: Option<i64>,
    fundamental: bool,
    root_class: RootClass,
}

#[derive(Debug, Serialize, Deserialize)]
struct MomentSection {
    residual: f64,
    alpha_inf: i64,
    dims: Vec<i64>,
    theta: Vec<ComplexValue>,
}

struct Failure {
    code: u8,
    message: String,
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// JSON with floats at 17 significant digits (scientific), which re-parse to
/// the identical f64; everything else is compact `serde_json` output.
struct SigDigits17;

impl serde_json::ser::Formatter for SigDigits17 {
    fn write_f64<W: ?Sized + std::io::Write>(&mut self, w: &mut W, value: f64) -> std::io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

fn to_json_17<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, SigDigits17);
    value.serialize(&mut ser).expect("report serialization");
    String::from_utf8(buf).expect("reports are UTF-8")
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    h.finalize().iter().map(|b| format!("{b:02x}")).collect()
}

fn read_input(path: &Path) -> Result<Vec<u8>, Failure> {
    fs::read(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(bytes: &[u8], what: &str) -> Result<T, Failure> {
    serde_json::from_slice(bytes).map_err(|e| invalid(format!("malformed {what}: {e}")))
}

fn join<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(&cli) {
        Ok((mut report, code)) => {
            report.elapsed_ms = started.elapsed().as_millis() as u64;
            let text = to_json_17(&report);
            if let Some(path) = &cli.json_out {
                if let Err(e) = fs::write(path, text + "\n") {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return ExitCode::from(2);
                }
            } else if !cli.quiet {
                // Tolerate a closed pipe (e.g. `dsq … | head`) instead of panicking.
                use std::io::Write;
                let mut out = std::io::stdout().lock();
                if let Err(e) = out.write_all(text.as_bytes()).and_then(|()| out.write_all(b"\n"))
                {
                    if e.kind() != std::io::ErrorKind::BrokenPipe {
                        eprintln!("error: cannot write report: {e}");
                        return ExitCode::from(2);
                    }
                }
            }
            ExitCode::from(code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(Report, u8), Failure> {
    match &cli.command {
        Command::Verdict { instance } => cmd_verdict(instance),
        Command::Solve { instance } => cmd_solve(cli, instance),
        Command::Forms { w, alpha } => cmd_forms(w, alpha),
        Command::Roots { w, quiver, alpha } => cmd_roots(w.as_deref(), quiver.as_deref(), alpha),
        Command::Decomp { w, alpha } => cmd_decomp(w, alpha, cli.budget),
        Command::Splitting { pencil } => cmd_splitting(pencil),
        Command::Census { quiver, alpha, samples } => {
            cmd_census(quiver, alpha, *samples, cli.seed)
        }
        Command::MomentResidual { point, alpha, zeta, twist } => {
            cmd_moment_residual(point, alpha, zeta.as_deref(), *twist)
        }
    }
}

fn cmd_verdict(path: &Path) -> Result<(Report, u8), Failure> {
    let bytes = read_input(path)?;
    let inst: DSInstance = parse_json(&bytes, "instance")?;
    let verdict = ds::verdict(&inst).map_err(|e| invalid(e.to_string()))?;
    let mut report = Report::new("verdict", sha256_hex(&bytes));
    report.verdict = Some(verdict);
    Ok((report, 0))
}

fn solver_options(cli: &Cli) -> SolverOptions {
    let d = SolverOptions::default();
    SolverOptions {
        starts: cli.starts.unwrap_or(d.starts),
        max_iter: cli.max_iter.unwrap_or(d.max_iter),
        tol: cli.tol.unwrap_or(d.tol),
        seed: cli.seed,
        step0: d.step0,
    }
}

fn cmd_solve(cli: &Cli, path: &Path) -> Result<(Report, u8), Failure> {
    let bytes = read_input(path)?;
    let inst: DSInstance = parse_json(&bytes, "instance")?;
    let verdict = ds::verdict(&inst).map_err(|e| invalid(e.to_string()))?;
    let opts = solver_options(cli);
    let solved = match inst.mode {
        Mode::Additive => solve_additive(&inst, &opts),
        Mode::Multiplicative => solve_multiplicative(&inst, &opts),
        Mode::Connection => {
            return Err(invalid(
                "connection-mode instances have no direct solver; use verdict or moment-residual",
            ))
        }
    };
    let mut result = solved.map_err(|e| match e {
        SolverError::Ds(_)
        | SolverError::InvalidMode { .. }
        | SolverError::ResidueConditionViolated { .. }
        | SolverError::ShapeMismatch(_)
        | SolverError::NotConverged => invalid(e.to_string()),
    })?;
    let mut report = Report::new("solve", sha256_hex(&bytes));
    let code = if result.converged {
        let (tangent, rank) =
            tangent_dimension(&result, &inst).map_err(|e| invalid(e.to_string()))?;
        result.tangent_dim = Some(tangent);
        result.constraint_rank = Some(rank);
        report.certified = Some(certify(&result, &inst, 1e-8));
        0
    } else {
        3
    };
    report.verdict = Some(verdict);
    report.solver = Some(result);
    Ok((report, code))
}

fn star_quiver(w: &[usize]) -> Result<(StarShape, Quiver), Failure> {
    let star = StarShape::new(w.to_vec()).map_err(|e| invalid(e.to_string()))?;
    let quiver = star.build();
    Ok((star, quiver))
}

fn forms_section(
    quiver: &Quiver,
    alpha: &[i64],
    delta: Option<i64>,
) -> Result<FormsSection, Failure> {
    let q = tits_q(quiver, alpha).map_err(|e| invalid(e.to_string()))?;
    let fundamental = in_fundamental_region(quiver, alpha).map_err(|e| invalid(e.to_string()))?;
    let root_class = classify_root(quiver, alpha).map_err(|e| invalid(e.to_string()))?;
    Ok(FormsSection { q, p: 1 - q, delta, fundamental, root_class })
}

fn cmd_forms(w: &[usize], alpha: &[i64]) -> Result<(Report, u8), Failure> {
    let (star, quiver) = star_quiver(w)?;
    let delta = star.delta(alpha).map_err(|e| invalid(e.to_string()))?;
    let digest = sha256_hex(format!("forms:w={};alpha={}", join(w), join(alpha)).as_bytes());
    let mut report = Report::new("forms", digest);
    report.forms = Some(forms_section(&quiver, alpha, Some(delta))?);
    Ok((report, 0))
}

fn cmd_roots(
    w: Option<&[usize]>,
    quiver_path: Option<&Path>,
    alpha: &[i64],
) -> Result<(Report, u8), Failure> {
    let (quiver, delta, digest) = match (w, quiver_path) {
        (Some(w), None) => {
            let (star, quiver) = star_quiver(w)?;
            let delta = star.delta(alpha).map_err(|e| invalid(e.to_string()))?;
            let digest =
                sha256_hex(format!("roots:w={};alpha={}", join(w), join(alpha)).as_bytes());
            (quiver, Some(delta), digest)
        }
        (None, Some(path)) => {
            let bytes = read_input(path)?;
            let quiver: Quiver = parse_json(&bytes, "quiver")?;
            (quiver, None, sha256_hex(&bytes))
        }
        _ => return Err(invalid("pass exactly one of --w or --quiver")),
    };
    let mut report = Report::new("roots", digest);
    report.forms = Some(forms_section(&quiver, alpha, delta)?);
    Ok((report, 0))
}

fn cmd_decomp(w: &[usize], alpha: &[i64], budget: i64) -> Result<(Report, u8), Failure> {
    let (star, _) = star_quiver(w)?;
    let outcome: Inequality302 =
        check_inequality_302(&star, alpha, budget).map_err(|e| invalid(e.to_string()))?;
    let digest = sha256_hex(format!("decomp:w={};alpha={}", join(w), join(alpha)).as_bytes());
    let mut report = Report::new("decomp", digest);
    report.decomp = Some(outcome);
    Ok((report, 0))
}

fn cmd_splitting(path: &Path) -> Result<(Report, u8), Failure> {
    let bytes = read_input(path)?;
    let pencil: KroneckerPencil = parse_json(&bytes, "pencil")?;
    let splitting = splitting_type(&pencil).map_err(|e| invalid(e.to_string()))?;
    let bundle = bundle_invariants(&pencil).map_err(|e| invalid(e.to_string()))?;
    let mut report = Report::new("splitting", sha256_hex(&bytes));
    report.splitting = Some(splitting);
    report.bundle = Some(bundle);
    Ok((report, 0))
}

fn cmd_census(
    path: &Path,
    alpha: &[i64],
    samples: u64,
    seed: u64,
) -> Result<(Report, u8), Failure> {
    let bytes = read_input(path)?;
    let quiver: Quiver = parse_json(&bytes, "quiver")?;
    let census = parameter_census(&quiver, alpha, samples, seed)
        .map_err(|e| invalid(e.to_string()))?;
    let digest = sha256_hex(
        format!("census:{};alpha={};samples={samples};seed={seed}", sha256_hex(&bytes), join(alpha))
            .as_bytes(),
    );
    let mut report = Report::new("census", digest);
    report.census = Some(census);
    Ok((report, 0))
}

fn cmd_moment_residual(
    point_path: &Path,
    alpha: &[i64],
    zeta_path: Option<&Path>,
    twist: i64,
) -> Result<(Report, u8), Failure> {
    let bytes = read_input(point_path)?;
    let point: CotangentSquidPoint = parse_json(&bytes, "squid point")?;
    let shape = point.shape().clone();
    let zeta: Vec<Vec<Complex64>> = match zeta_path {
        Some(zp) => {
            let zbytes = read_input(zp)?;
            let raw: Vec<Vec<ComplexValue>> = parse_json(&zbytes, "zeta")?;
            raw.iter()
                .map(|leg| leg.iter().map(|z| Complex64::new(z.re, z.im)).collect())
                .collect()
        }
        None => shape.w.iter().map(|&wi| vec![Complex64::new(0.0, 0.0); wi]).collect(),
    };
    let target = theta_n(&shape, alpha, &zeta, twist).map_err(|e| invalid(e.to_string()))?;
    let value = residual(&point, &target).map_err(|e| invalid(e.to_string()))?;
    let alpha_inf = target.dims.last().copied().unwrap_or(0) - twist * alpha.first().copied().unwrap_or(0);
    let digest = sha256_hex(
        format!("moment-residual:{};alpha={};twist={twist}", sha256_hex(&bytes), join(alpha))
            .as_bytes(),
    );
    let mut report = Report::new("moment-residual", digest);
    report.moment = Some(MomentSection {
        residual: value,
        alpha_inf,
        dims: target.dims.clone(),
        theta: target.theta.iter().map(|&z| ComplexValue::from(z)).collect(),
    });
    Ok((report, 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digit_floats_reparse_bit_exactly() {
        let values = [
            0.1,
            -0.30000000000000004,
            1.0,
            f64::MIN_POSITIVE,
            2.0f64.powi(-40) * 0.918273645,
            -0.0,
            1e300,
        ];
        for v in values {
            let text = to_json_17(&v);
            let back: f64 = serde_json::from_str(&text).unwrap();
            assert_eq!(back.to_bits(), v.to_bits(), "{text}");
            assert_eq!(to_json_17(&back), text);
        }
    }

    #[test]
    fn report_json_round_trip_is_byte_identical() {
        let mut report = Report::new("forms", sha256_hex(b"abc"));
        report.forms = Some(FormsSection {
            q: 0,
            p: 1,
            delta: Some(0),
            fundamental: true,
            root_class: RootClass::ImaginaryRoot,
        });
        report.moment = Some(MomentSection {
            residual: 22.5,
            alpha_inf: 2,
            dims: vec![4, 1, 2],
            theta: vec![ComplexValue { re: -1.5, im: 0.0 }],
        });
        report.elapsed_ms = 3;
        let text = to_json_17(&report);
        let back: Report = serde_json::from_str(&text).unwrap();
        assert_eq!(to_json_17(&back), text);
        // Unpopulated sections are absent.
        assert!(!text.contains("\"solver\""));
        assert!(!text.contains("\"census\""));
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            sha256_hex(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
