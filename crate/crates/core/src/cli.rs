//! Command-line front end.
//!
//! Exit codes: 0 on success (including a definite "no limit cycle" answer),
//! 1 when a certificate fails verification, 2 on bad input or usage.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::closure::{residuals_three_zone, solve, ClosureOutcome};
use crate::cycle::{search_limit_cycle, verify_certificate, CycleCertificate, CycleOutcome};
use crate::fixtures;
use crate::io::{read_system, to_pretty_json};
use crate::model::{PiecewiseSystem, Point};
use crate::plot::{render_svg, write_svg, PlotContent, Window};
use crate::poincare::{fixed_point, integrate, integrate_partial, IntegratorOptions};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFICATION_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "pwlham",
    version,
    about = "Crossing limit cycles of piecewise linear Hamiltonian systems"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Singular point types, locations and continuity
    Classify(Common),
    /// Solve the closure equations
    Solve(Common),
    /// Find and certify the crossing limit cycle
    Cycle(CycleArgs),
    /// Locate the cycle with the numerical return map
    Oracle(OracleArgs),
    /// Draw the system and its cycle as SVG
    Plot(PlotArgs),
    /// Check a certificate against the system
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// System definition (JSON)
    #[arg(
        long,
        value_name = "FILE",
        conflicts_with = "example",
        required_unless_present = "example"
    )]
    pub input: Option<PathBuf>,
    /// Bundled example: CCC, SCC, SCS, CSC, SSS or SSC
    #[arg(long, value_name = "NAME")]
    pub example: Option<String>,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CycleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Polyline samples per arc
    #[arg(long, default_value_t = crate::cycle::DEFAULT_ARC_SAMPLES)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub common: Common,
    /// Integrator accuracy target
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
    /// Bracket for y0 as LO,HI; defaults to a small interval around the
    /// certified y0
    #[arg(long, value_name = "LO,HI", value_parser = parse_pair)]
    pub bracket: Option<(f64, f64)>,
    /// Also dump one period of the numerical orbit as CSV
    #[arg(long, value_name = "FILE")]
    pub trajectory: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub common: Common,
    /// Plot window as XMIN,XMAX,YMIN,YMAX
    #[arg(long, value_name = "XMIN,XMAX,YMIN,YMAX", value_parser = parse_window)]
    pub window: Option<[f64; 4]>,
    /// Overlay a numerical trajectory starting here
    #[arg(long, value_name = "X,Y", value_parser = parse_pair)]
    pub start: Option<(f64, f64)>,
    /// Duration of the overlaid trajectory
    #[arg(long, default_value_t = 10.0)]
    pub duration: f64,
    /// Integrator accuracy target for the overlay
    #[arg(long, default_value_t = 1e-9)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: Common,
    /// Certificate JSON written by `cycle`; recomputed when omitted
    #[arg(long, value_name = "FILE")]
    pub certificate: Option<PathBuf>,
}

fn parse_floats(s: &str, n: usize) -> Result<Vec<f64>, String> {
    let values: Result<Vec<f64>, _> = s.split(',').map(|t| t.trim().parse::<f64>()).collect();
    match values {
        Ok(v) if v.len() == n && v.iter().all(|x| x.is_finite()) => Ok(v),
        _ => Err(format!("expected {n} comma-separated numbers")),
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = parse_floats(s, 2)?;
    Ok((v[0], v[1]))
}

fn parse_window(s: &str) -> Result<[f64; 4], String> {
    let v = parse_floats(s, 4)?;
    Ok([v[0], v[1], v[2], v[3]])
}

/// A failure that maps to a nonzero exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl<E: std::error::Error> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure {
            code: EXIT_INPUT,
            message: e.to_string(),
        }
    }
}

fn input_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INPUT,
        message: message.into(),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(&cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn load(common: &Common) -> Result<PiecewiseSystem, Failure> {
    match (&common.input, &common.example) {
        (Some(path), _) => Ok(read_system(path)?.system),
        (None, Some(name)) => Ok(fixtures::example(name)?),
        (None, None) => Err(input_failure("one of --input or --example is required")),
    }
}

fn emit(common: &Common, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| input_failure(format!("cannot write {}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(Failure::from),
    }
}

fn execute(
    command: &Command,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<i32, Failure> {
    match command {
        Command::Classify(common) => {
            let system = load(common)?;
            let report = json!({
                "layout": system.layout(),
                "configuration": system.configuration(),
                "zones": system.singular_points(),
                "continuity": system.continuity(),
            });
            emit(common, &(to_pretty_json(&report) + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Solve(common) => {
            let system = load(common)?;
            let outcome = solve(&system);
            let mut report = json!({
                "closure": outcome,
                "description": outcome.branch().description(),
            });
            if let ClosureOutcome::UniqueCycleCandidate { ordinates, .. } = &outcome {
                let residuals = residuals_three_zone(&system, *ordinates)?;
                report["residuals"] = json!(residuals.values);
                report["residual_norm"] = json!(residuals.max_abs());
            }
            emit(common, &(to_pretty_json(&report) + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Cycle(args) => {
            let system = load(&args.common)?;
            let outcome = search_limit_cycle(&system, args.samples.max(1));
            emit(&args.common, &(to_pretty_json(&outcome) + "\n"), stdout)?;
            Ok(EXIT_OK)
        }
        Command::Oracle(args) => oracle(args, stdout),
        Command::Plot(args) => plot(args, stdout, stderr),
        Command::Verify(args) => verify(args, stdout),
    }
}

fn oracle(args: &OracleArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let system = load(&args.common)?;
    let opts = IntegratorOptions {
        tol: args.tol,
        ..IntegratorOptions::default()
    };
    let certified = search_limit_cycle(&system, 1)
        .certificate()
        .map(|c| c.ordinates[0]);
    let (lo, hi) = match (args.bracket, certified) {
        (Some(b), _) => b,
        (None, Some(y0)) => {
            let half = 1e-3 * (1.0 + y0.abs());
            (y0 - half, y0 + half)
        }
        (None, None) => {
            return Err(input_failure(
                "no certified cycle to centre the search on; pass --bracket LO,HI",
            ))
        }
    };
    let fp = fixed_point(&system, lo, hi, 1e-10, &opts)?;
    let mut report = json!({
        "fixed_point": fp.y,
        "period": fp.period,
        "displacement": fp.displacement,
        "displacement_slope": fp.displacement_slope,
        "bracket": [lo, hi],
        "tol": args.tol,
    });
    if let Some(y0) = certified {
        report["certified_y0"] = json!(y0);
        report["difference"] = json!((fp.y - y0).abs());
    }
    if let Some(path) = &args.trajectory {
        let traj = integrate(&system, Point::new(1.0, fp.y), fp.period, &opts)?;
        let file = std::fs::File::create(path)
            .map_err(|e| input_failure(format!("cannot write {}: {e}", path.display())))?;
        traj.write_csv(file)?;
    }
    emit(&args.common, &(to_pretty_json(&report) + "\n"), stdout)?;
    Ok(EXIT_OK)
}

fn plot(args: &PlotArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, Failure> {
    let system = load(&args.common)?;
    let certificate = match search_limit_cycle(&system, crate::cycle::DEFAULT_ARC_SAMPLES) {
        CycleOutcome::Found { certificate } => Some(*certificate),
        CycleOutcome::NotFound { .. } => None,
    };
    let trajectory = match args.start {
        Some((x, y)) => {
            let opts = IntegratorOptions {
                tol: args.tol,
                ..IntegratorOptions::default()
            };
            let (traj, stopped) =
                integrate_partial(&system, Point::new(x, y), args.duration, &opts);
            if let Some(e) = stopped {
                if traj.samples.is_empty() {
                    return Err(e.into());
                }
                let _ = writeln!(
                    stderr,
                    "note: trajectory drawn up to t = {}: {e}",
                    traj.samples.last().map_or(0.0, |s| s.t)
                );
            }
            Some(traj.points())
        }
        None => None,
    };
    let window = match args.window {
        Some([x0, x1, y0, y1]) => Window::new(x0, x1, y0, y1)?,
        None => {
            let mut pts: Vec<Point> = certificate
                .as_ref()
                .map(|c| c.polyline.clone())
                .unwrap_or_default();
            pts.extend(trajectory.iter().flatten().copied());
            Window::around(&pts)
        }
    };
    let content = PlotContent {
        cycle: certificate.as_ref(),
        trajectory: trajectory.as_deref(),
    };
    let svg = render_svg(&system, &window, &content)?;
    match &args.common.output {
        Some(path) => write_svg(path, &svg)?,
        None => stdout.write_all(svg.as_bytes())?,
    }
    Ok(EXIT_OK)
}

fn verify(args: &VerifyArgs, stdout: &mut dyn Write) -> Result<i32, Failure> {
    let system = load(&args.common)?;
    let certificate: CycleCertificate = match &args.certificate {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| input_failure(format!("cannot read {}: {e}", path.display())))?;
            let value: Value = serde_json::from_str(&text)?;
            // accept both a bare certificate and the `cycle` command output
            let inner = value.get("certificate").cloned().unwrap_or(value);
            serde_json::from_value(inner)?
        }
        None => match search_limit_cycle(&system, 1) {
            CycleOutcome::Found { certificate } => *certificate,
            CycleOutcome::NotFound { reason, .. } => {
                let report = json!({ "passed": false, "reason": reason });
                emit(&args.common, &(to_pretty_json(&report) + "\n"), stdout)?;
                return Ok(EXIT_VERIFICATION_FAILED);
            }
        },
    };
    let report = verify_certificate(&system, &certificate);
    let passed = report.passed();
    let out = json!({ "passed": passed, "checks": report.checks });
    emit(&args.common, &(to_pretty_json(&out) + "\n"), stdout)?;
    Ok(if passed {
        EXIT_OK
    } else {
        EXIT_VERIFICATION_FAILED
    })
}
