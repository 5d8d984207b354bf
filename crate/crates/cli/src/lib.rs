//! Argument parsing and dispatch for the `quadric` binary.
//!
//! [`run`] takes the argument list and two writers and returns the process
//! exit code: 0 when every check passes, 1 when a check fails or the input
//! lies outside the hypotheses, 2 on usage or input errors.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::{ArgAction, Args, Parser, Subcommand};

use quadric_core::models::{TubeOptions, TubeVariant};
use quadric_core::report::{CheckReport, DEFAULT_SEED};
use quadric_core::suites::{
    cmd_classify, cmd_nonexistence, cmd_scan_tube, cmd_spectrum, cmd_verify_ambient,
    cmd_verify_tube, load_hypersurface, SpectrumTarget, DEFAULT_TOL,
};
use quadric_core::theorem::{sample_alphas, CLASSIFY_TOL};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

pub const TUBE_TOL: f64 = 1e-11;
pub const DEFAULT_ALPHA_SAMPLES: usize = 25;

#[derive(Parser, Debug)]
#[command(name = "quadric", version, about = "Verification suites for real hypersurfaces in the complex quadric")]
struct Cli {
    /// Write the JSON report to this file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check tangent-space algebra or the tube model at one radius
    #[command(subcommand)]
    Verify(VerifyTarget),
    /// Run the tube checks over a radius grid
    #[command(subcommand)]
    Scan(ScanTarget),
    /// Certificate that A-principal Reeb-parallel data is contradictory
    Nonexistence(NonexistenceArgs),
    /// Classify serialized hypersurface data
    Classify(ClassifyArgs),
    /// Spectra of the Jacobi, shape and structure Jacobi operators
    Spectrum(SpectrumArgs),
}

#[derive(Subcommand, Debug)]
enum VerifyTarget {
    Ambient(AmbientArgs),
    Tube(TubeArgs),
}

#[derive(Subcommand, Debug)]
enum ScanTarget {
    Tube(ScanArgs),
}

#[derive(Args, Debug)]
struct AmbientArgs {
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug, Clone, Copy)]
struct TubeFlags {
    /// Reject r = pi/4, where the Reeb curvature vanishes
    #[arg(long, default_value_t = true, action = ArgAction::Set)]
    non_vanishing: bool,
    /// Use the splitting in which A exchanges W1 and W2
    #[arg(long)]
    swapped: bool,
}

impl TubeFlags {
    fn options(self) -> TubeOptions {
        TubeOptions {
            non_vanishing: self.non_vanishing,
            variant: if self.swapped {
                TubeVariant::Swapped
            } else {
                TubeVariant::Preserving
            },
        }
    }
}

#[derive(Args, Debug)]
struct TubeArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r: f64,
    #[arg(long, default_value_t = TUBE_TOL)]
    tol: f64,
    #[command(flatten)]
    flags: TubeFlags,
}

#[derive(Args, Debug)]
struct ScanArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    r_min: f64,
    #[arg(long)]
    r_max: f64,
    #[arg(long)]
    steps: usize,
    #[arg(long, default_value_t = TUBE_TOL)]
    tol: f64,
    #[command(flatten)]
    flags: TubeFlags,
}

#[derive(Args, Debug)]
struct NonexistenceArgs {
    #[arg(long)]
    m: usize,
    /// A sample count, or a comma-separated list of nonzero alpha values
    #[arg(long, default_value_t = DEFAULT_ALPHA_SAMPLES.to_string())]
    alpha_samples: String,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct ClassifyArgs {
    /// Hypersurface JSON: {m, N, S, alpha, q_xi}
    input: PathBuf,
    #[arg(long, default_value_t = CLASSIFY_TOL)]
    tol: f64,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    /// Hypersurface JSON to analyse instead of a model
    input: Option<PathBuf>,
    #[arg(long, conflicts_with_all = ["k", "r", "input"])]
    m: Option<usize>,
    #[arg(long, requires = "r", conflicts_with = "input")]
    k: Option<usize>,
    #[arg(long, requires = "k")]
    r: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    #[command(flatten)]
    flags: TubeFlags,
}

/// Parse `--alpha-samples`: either a count of seeded draws or an explicit list.
pub fn parse_alpha_samples(text: &str, seed: u64) -> Result<Vec<f64>, String> {
    let text = text.trim();
    if let Ok(n) = text.parse::<usize>() {
        if n == 0 {
            return Err("--alpha-samples must be at least 1".into());
        }
        return Ok(sample_alphas(n, seed));
    }
    text.split(',')
        .map(|s| {
            let v: f64 = s
                .trim()
                .parse()
                .map_err(|_| format!("invalid alpha value '{}'", s.trim()))?;
            if v == 0.0 || !v.is_finite() {
                return Err(format!("alpha values must be finite and nonzero, got {v}"));
            }
            Ok(v)
        })
        .collect()
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load(path: &PathBuf) -> Result<quadric_core::HypersurfaceData, String> {
    let text = read_input(path)?;
    load_hypersurface(&text).map_err(|e| e.to_string())
}

fn execute(command: Command) -> Result<CheckReport, String> {
    let rep = match command {
        Command::Verify(VerifyTarget::Ambient(a)) => cmd_verify_ambient(a.m, a.tol, a.seed),
        Command::Verify(VerifyTarget::Tube(a)) => cmd_verify_tube(a.k, a.r, a.tol, a.flags.options()),
        Command::Scan(ScanTarget::Tube(a)) => {
            cmd_scan_tube(a.k, a.r_min, a.r_max, a.steps, a.tol, a.flags.options())
        }
        Command::Nonexistence(a) => {
            let alphas = parse_alpha_samples(&a.alpha_samples, a.seed)?;
            cmd_nonexistence(a.m, &alphas, a.seed, a.tol).map(|r| r.param("alpha_samples", a.alpha_samples.clone()))
        }
        Command::Classify(a) => {
            let h = load(&a.input)?;
            cmd_classify(&h, a.tol)
        }
        Command::Spectrum(a) => {
            let target = match (a.input, a.m, a.k, a.r) {
                (Some(path), None, None, None) => SpectrumTarget::Data(Box::new(load(&path)?)),
                (None, Some(m), None, None) => SpectrumTarget::Ambient { m },
                (None, None, Some(k), Some(r)) => SpectrumTarget::Tube {
                    k,
                    r,
                    opts: a.flags.options(),
                },
                _ => return Err("spectrum needs exactly one of: an input file, --m, or --k with --r".into()),
            };
            cmd_spectrum(&target, a.tol)
        }
    };
    rep.map_err(|e| e.to_string())
}

fn summary_line(rep: &CheckReport) -> String {
    let status = if rep.exit_code() == EXIT_PASS { "PASS" } else { "FAIL" };
    let mut line = format!(
        "{status} {}: {}/{} checks passed",
        rep.command, rep.summary.passed, rep.summary.total
    );
    if let Some(v) = rep.outcome.get("verdict").and_then(|v| v.as_str()) {
        line.push_str(&format!("; {v}"));
    }
    for c in rep.checks.iter().filter(|c| !c.pass) {
        line.push_str(&format!("\n  failed {} (residual {:e}, tol {:e})", c.name, c.residual, c.tol));
    }
    if let Some(r) = rep.outcome.get("commutator_residual").and_then(|v| v.as_f64()) {
        line.push_str(&format!("\n  max |(phi S - S phi) Y_i| = {r:e}"));
    }
    for n in &rep.notes {
        line.push_str(&format!("\n  note: {n}"));
    }
    line
}

/// Run the command line `args` (including the program name) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_PASS,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_PASS {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return code;
        }
    };

    let rep = match execute(cli.command) {
        Ok(rep) => rep,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };

    let json = rep.to_json();
    match &cli.json {
        Some(path) => {
            if let Err(e) = fs::write(path, &json) {
                let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
                return EXIT_USAGE;
            }
            let _ = writeln!(out, "{}", summary_line(&rep));
        }
        None => {
            let _ = write!(out, "{json}");
            let _ = writeln!(err, "{}", summary_line(&rep));
        }
    }
    rep.exit_code()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("quadric").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn alpha_samples_count_or_list() {
        assert_eq!(parse_alpha_samples("3", 7).unwrap().len(), 3);
        assert_eq!(parse_alpha_samples("0.5, -2", 7).unwrap(), vec![0.5, -2.0]);
        assert!(parse_alpha_samples("0", 7).is_err());
        assert!(parse_alpha_samples("1,0", 7).is_err());
        assert!(parse_alpha_samples("x", 7).is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        assert_eq!(run_args(&["verify", "ambient"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "ambient", "--m", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["verify", "ambient", "--m", "3", "--tol", "-1"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_PASS);
        assert!(out.contains("nonexistence"));
    }

    #[test]
    fn non_vanishing_flag_takes_a_value() {
        let (code, _, _) = run_args(&["verify", "tube", "--k", "2", "--r", "0.7853981633974483", "--non-vanishing", "false"]);
        assert_eq!(code, EXIT_PASS);
    }

    #[test]
    fn spectrum_requires_a_target() {
        assert_eq!(run_args(&["spectrum"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["spectrum", "--m", "4"]).0, EXIT_PASS);
        assert_eq!(run_args(&["spectrum", "--k", "2", "--r", "0.5"]).0, EXIT_PASS);
    }
}
