//! Command-line front end. [`run`] does all the work and returns the
//! process exit code, so the binary is a one-liner and tests can drive it
//! in-process.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::criteria::{certify, compute_thresholds, Certificate, CertifyOptions, DEFAULT_N_MAX};
use crate::geom::DEFAULT_TOL;
use crate::json::format_sig;
use crate::pattern::{validate_pattern, BallBeamPattern, PatternError, DEFAULT_WINDOW};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATIONS: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;
pub const EXIT_INTERNAL: i32 = 70;

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "TUNNELCERT_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "tunnelcert",
    version,
    about = "Check ball-and-beam patterns for unknotting tunnels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check disjointness and beam lengths of a pattern file.
    Validate {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run the certification rules and print the certificate.
    Certify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_N_MAX)]
        n_max: usize,
        #[arg(long, default_value_t = DEFAULT_WINDOW)]
        window: u32,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Also write the JSON certificate here.
        #[arg(long)]
        report: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Print the three length thresholds.
    Thresholds,
}

struct Failure {
    code: i32,
    message: String,
}

fn fail(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Parse `args` (including the program name), run the subcommand, and
/// return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "tunnelcert: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<i32, Failure> {
    match cli.command {
        Command::Thresholds => {
            let t = compute_thresholds();
            for (name, v) in [("prop4", t.t4), ("prop5", t.t5), ("elder", t.t_es)] {
                writeln!(out, "{name} {}", format_sig(v, 10)).map_err(io_failure)?;
            }
            Ok(EXIT_OK)
        }
        Command::Validate { file, window, tol } => {
            check_tol(tol)?;
            let p = load(&file)?;
            let report = validate_pattern(&p, window, tol);
            if report.is_clean() {
                writeln!(out, "{}: ok (window {window})", file.display()).map_err(io_failure)?;
                Ok(EXIT_OK)
            } else {
                for v in &report.violations {
                    writeln!(out, "{}: {v}", file.display()).map_err(io_failure)?;
                }
                writeln!(out, "{} violation(s)", report.violations.len()).map_err(io_failure)?;
                Ok(EXIT_VIOLATIONS)
            }
        }
        Command::Certify {
            file,
            n_max,
            window,
            tol,
            report,
            format,
        } => {
            if n_max < 3 {
                return Err(fail(
                    EXIT_USAGE,
                    format!("--n-max must be at least 3 (got {n_max})"),
                ));
            }
            check_tol(tol)?;
            let threads = threads_from_env()?;
            let p = load(&file)?;
            let validation = validate_pattern(&p, window, tol);
            if !validation.is_clean() {
                let lines: Vec<String> = validation
                    .violations
                    .iter()
                    .map(|v| format!("{}: {v}", file.display()))
                    .collect();
                return Err(fail(
                    EXIT_DATA,
                    format!("invalid pattern\n{}", lines.join("\n")),
                ));
            }
            let opts = CertifyOptions { n_max, window, tol };
            let cert = match threads {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| fail(EXIT_INTERNAL, e.to_string()))?
                    .install(|| certify(&p, &opts)),
                None => certify(&p, &opts),
            }
            .map_err(|e| {
                fail(
                    EXIT_INTERNAL,
                    format!("internal consistency check failed: {e}"),
                )
            })?;

            let json = cert.to_json();
            if let Some(path) = report {
                std::fs::write(&path, &json)
                    .map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
            }
            match format {
                Format::Json => write!(out, "{json}"),
                Format::Text => write!(out, "{}", render_text(&cert)),
            }
            .map_err(io_failure)?;
            Ok(if cert.is_tunnel() {
                EXIT_OK
            } else {
                EXIT_INCONCLUSIVE
            })
        }
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    fail(EXIT_INTERNAL, e.to_string())
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol < 1e-3 {
        Ok(())
    } else {
        Err(fail(
            EXIT_USAGE,
            format!("--tol must lie in (0, 1e-3) (got {tol})"),
        ))
    }
}

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_VAR) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(fail(
                EXIT_USAGE,
                format!("{THREADS_VAR} must be a positive integer (got {v:?})"),
            )),
        },
        Err(e) => Err(fail(EXIT_USAGE, format!("{THREADS_VAR}: {e}"))),
    }
}

fn load(path: &Path) -> Result<BallBeamPattern, Failure> {
    let bytes =
        std::fs::read(path).map_err(|e| fail(EXIT_DATA, format!("{}: {e}", path.display())))?;
    BallBeamPattern::parse(&bytes).map_err(|e| match e {
        PatternError::Syntax {
            line,
            column,
            message,
        } => fail(
            EXIT_DATA,
            format!("{}:{line}:{column}: {message}", path.display()),
        ),
        other => fail(EXIT_DATA, format!("{}: {other}", path.display())),
    })
}

/// Short human-readable summary of a certificate.
pub fn render_text(cert: &Certificate) -> String {
    let mut s = String::new();
    let verdict = match cert.rule {
        Some(rule) => format!("tunnel ({rule:?})"),
        None => "inconclusive".to_string(),
    };
    s += &format!("verdict: {verdict}\n");
    s += &format!("g: {}\n", format_sig(cert.witness.g, 17));
    if let Some(b) = &cert.witness.bracelet {
        let cycle: Vec<String> = b
            .cycle
            .iter()
            .map(|e| match e.offset {
                o if o == crate::pattern::Offset::ZERO => e.id.clone(),
                o => format!("{}[{},{}]", e.id, o.0, o.1),
            })
            .collect();
        s += &format!("bracelet ({}): {}\n", b.n, cycle.join(" - "));
    }
    if !cert.witness.elder_failures.is_empty() {
        s += &format!(
            "no elder sibling chain: {}\n",
            cert.witness.elder_failures.join(", ")
        );
    }
    s += "rules:\n";
    for r in &cert.metadata.rule_reports {
        let mark = if r.applicable { "yes" } else { "no " };
        s += &format!("  {:<13}{mark}  {}\n", format!("{:?}", r.rule), r.detail);
    }
    s += "hypotheses:\n";
    for h in &cert.conditions.hypotheses {
        s += &format!("  - {h}\n");
    }
    s += &format!("input sha256: {}\n", cert.metadata.input_sha256);
    s
}
