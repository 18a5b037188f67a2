use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use theta_forge::dft::{build_dft, eig_report, residual, theta_vector};
use theta_forge::identities::{consistency_violations, register_all, run_all, SamplesOrCutoff};
use theta_forge::{Complex64, DftError, EigClass, Rational64, RunConfig, Status, ThetaArgs, TruncationPolicy, VerificationReport};

use crate::expr::{eval_expr, parse_expr};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Residual bound for `eigen`, relative to `max(1, ‖v‖∞)`.
const EIGEN_TOL: f64 = 1e-9;

#[derive(Debug, Parser)]
#[command(name = "theta-forge", version, about = "Theta-function identities, exact q-series and DFT eigenvectors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the identity verification suite.
    Verify(VerifyArgs),
    /// Expand a q-series expression exactly.
    Expand(ExpandArgs),
    /// Build a theta-series DFT eigenvector and report its residual.
    Eigen(EigenArgs),
    /// Compare expected and measured DFT eigenvalue multiplicities.
    Spectrum(SpectrumArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Only run these identity ids (repeatable).
    #[arg(long = "id", value_name = "ID")]
    pub ids: Vec<String>,
    #[arg(long, env = "THETA_FORGE_SEED", default_value_t = 42)]
    pub seed: u64,
    /// Numeric samples per identity.
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    /// Relative tolerance for every numeric identity. Without it each
    /// identity uses its own (1e-9, or 1e-10 for the theta property checks).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Exact-mode cutoff exponent.
    #[arg(long, default_value = "20")]
    pub cutoff: Rational64,
    /// Write the machine-readable report to PATH, or to standard output
    /// (instead of the table) when PATH is omitted.
    #[arg(long, value_name = "PATH", num_args = 0..=1, default_missing_value = "-")]
    pub json: Option<PathBuf>,
    /// Record wall-clock milliseconds per report.
    #[arg(long)]
    pub timings: bool,
}

#[derive(Debug, Args)]
pub struct ExpandArgs {
    /// Expression, e.g. "fsum(3/2,-1/2)^5" or "poch(1,1/8,1/4) * (1 - q^(1/8))".
    pub expr: String,
    /// Expand through this exponent.
    #[arg(long, default_value = "10")]
    pub order: Rational64,
}

#[derive(Debug, Args)]
pub struct EigenArgs {
    #[arg(long)]
    pub n: usize,
    /// Eigenvalue class: the vector targets eigenvalue i^k.
    #[arg(long, allow_negative_numbers = true)]
    pub k: i64,
    #[arg(long, allow_negative_numbers = true)]
    pub a: Complex64,
    #[arg(long, allow_negative_numbers = true)]
    pub b: Complex64,
    #[arg(long, allow_negative_numbers = true, default_value = "0")]
    pub x: Complex64,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub n: usize,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    match cli.command {
        Command::Verify(a) => verify(a, out, err),
        Command::Expand(a) => expand(a, out, err),
        Command::Eigen(a) => eigen(a, out, err),
        Command::Spectrum(a) => spectrum(a, out, err),
    }
}

fn verify(args: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let known: Vec<&str> = register_all().iter().map(|d| d.id).collect();
    if let Some(bad) = args.ids.iter().find(|id| !known.contains(&id.as_str())) {
        writeln!(err, "unknown identity id '{bad}'; known ids: {}", known.join(", "))?;
        return Ok(EXIT_USAGE);
    }
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            writeln!(err, "--tol must be a positive number")?;
            return Ok(EXIT_USAGE);
        }
    }
    if args.samples == 0 {
        writeln!(err, "--samples must be at least 1")?;
        return Ok(EXIT_USAGE);
    }
    let config = RunConfig {
        seed: args.seed,
        n_samples: args.samples,
        tol: args.tol,
        cutoff: args.cutoff,
        ids: args.ids,
        record_timings: args.timings,
        policy: TruncationPolicy::default(),
    };
    let reports = run_all(&config);

    let json_to_stdout = args.json.as_deref().is_some_and(|p| p.as_os_str() == "-");
    if let Some(path) = &args.json {
        let mut text = serde_json::to_string_pretty(&reports).map_err(io::Error::other)?;
        text.push('\n');
        if json_to_stdout {
            out.write_all(text.as_bytes())?;
        } else {
            std::fs::write(path, text)?;
        }
    }
    if !json_to_stdout {
        print_table(&reports, out)?;
    }
    for v in consistency_violations(&reports) {
        writeln!(err, "consistency: {v}")?;
    }
    let failed = reports.iter().any(|r| r.status == Status::Fail);
    Ok(if failed { EXIT_FAIL } else { EXIT_PASS })
}

fn status_text(s: Status) -> &'static str {
    match s {
        Status::Pass => "PASS",
        Status::Fail => "FAIL",
        Status::SkippedDegenerate => "SKIPPED_DEGENERATE",
    }
}

fn print_table(reports: &[VerificationReport], out: &mut dyn Write) -> io::Result<()> {
    writeln!(out, "{:<30} {:<8} {:<18} {:>10} {:>8}  note", "id", "mode", "status", "residual", "params")?;
    for r in reports {
        let mode = format!("{:?}", r.mode).to_uppercase();
        let residual = r.max_residual.map_or_else(|| "-".to_string(), |x| format!("{x:.2e}"));
        let params = match &r.samples_or_cutoff {
            SamplesOrCutoff::Samples(n) => format!("n={n}"),
            SamplesOrCutoff::Cutoff(c) => format!("q^{c}"),
        };
        let mut note = match (&r.first_mismatch_exponent, &r.mismatch_lhs_coeff, &r.mismatch_rhs_coeff) {
            (Some(e), Some(l), Some(rh)) => format!("first mismatch at q^({e}): lhs {l}, rhs {rh}"),
            _ => String::new(),
        };
        if let Some(n) = &r.note {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str(n);
        }
        if r.skipped > 0 {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str(&format!("{} degenerate samples skipped", r.skipped));
        }
        if let Some(ms) = r.millis {
            if !note.is_empty() {
                note.push_str("; ");
            }
            note.push_str(&format!("{ms} ms"));
        }
        writeln!(out, "{:<30} {:<8} {:<18} {:>10} {:>8}  {note}", r.id, mode, status_text(r.status), residual, params)?;
    }
    let count = |s| reports.iter().filter(|r| r.status == s).count();
    writeln!(
        out,
        "{} reports: {} pass, {} fail, {} skipped",
        reports.len(),
        count(Status::Pass),
        count(Status::Fail),
        count(Status::SkippedDegenerate)
    )
}

fn expand(args: ExpandArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let ast = match parse_expr(&args.expr) {
        Ok(a) => a,
        Err(e) => {
            writeln!(err, "{}", args.expr)?;
            writeln!(err, "{}^", " ".repeat(e.offset))?;
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    match eval_expr(&ast, args.order) {
        Ok(series) => {
            writeln!(out, "{series}")?;
            if series.cutoff() < args.order {
                writeln!(err, "note: exact only through q^({}) because of negative exponents", series.cutoff())?;
            }
            Ok(EXIT_PASS)
        }
        Err(e) => {
            writeln!(err, "cannot expand {ast}: {e}")?;
            Ok(EXIT_USAGE)
        }
    }
}

fn eigen(args: EigenArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    let class = match EigClass::new(args.k) {
        Ok(c) => c,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let log_args = match ThetaArgs::new(args.a, args.b, args.x).and_then(|t| t.to_log()) {
        Ok(l) => l,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let a = match build_dft(args.n) {
        Ok(a) => a,
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
    };
    let v = match theta_vector(args.n, class, &log_args, &TruncationPolicy::default()) {
        Ok(v) => v,
        Err(DftError::Degenerate(norm)) => {
            writeln!(out, "degenerate: |v| = {norm:.3e}; the construction gives the zero vector here")?;
            return Ok(EXIT_PASS);
        }
        Err(e @ DftError::Theta(_)) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_USAGE);
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            return Ok(EXIT_FAIL);
        }
    };
    let ev = class.eigenvalue();
    writeln!(out, "n = {}, k = {}, eigenvalue {}", args.n, class.k(), fmt_complex(ev))?;
    for (j, z) in v.iter().enumerate() {
        writeln!(out, "v[{j}] = {}", fmt_complex(*z))?;
    }
    let res = residual(&a, &v, class);
    let verdict = if res <= EIGEN_TOL { "PASS" } else { "FAIL" };
    writeln!(out, "residual = {res:.3e} ({verdict})")?;
    Ok(if res <= EIGEN_TOL { EXIT_PASS } else { EXIT_FAIL })
}

fn fmt_complex(z: Complex64) -> String {
    let sign = if z.im < 0.0 { '-' } else { '+' };
    format!("{:.12} {sign} {:.12}i", z.re, z.im.abs())
}

fn spectrum(args: SpectrumArgs, out: &mut dyn Write, err: &mut dyn Write) -> io::Result<u8> {
    match eig_report(args.n) {
        Ok(r) => {
            writeln!(out, "n = {}", r.n)?;
            writeln!(out, "expected {}", r.expected)?;
            writeln!(out, "measured {}", r.measured)?;
            writeln!(out, "|A^4 - I| = {:.3e}", r.fourth_power_defect)?;
            Ok(if r.consistent() { EXIT_PASS } else { EXIT_FAIL })
        }
        Err(e @ (DftError::EmptyOrder | DftError::SizeLimit(_))) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_USAGE)
        }
        Err(e) => {
            writeln!(err, "{e}")?;
            Ok(EXIT_FAIL)
        }
    }
}
