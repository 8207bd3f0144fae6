//! `hsvol`: check triangulations, find angle structures, locate critical
//! points of the volume and report the resulting structure.
//!
//! Exit codes: 0 success, 1 invalid input, 2 no angle structure, 3 not
//! converged (or not a consistent critical point).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hsvol_core::config::{parse_config, ConfigFile};
use hsvol_core::geomlib::DEFAULT_EPS_CLASS;
use hsvol_core::optimizer::{
    find_critical, polytope_constraints, project, starting_point, AngleStructure, OptimizerError,
    OptimizerOptions,
};
use hsvol_core::quadrature::QuadratureOptions;
use hsvol_core::report::{CriticalReport, OptimizationSummary, Real, ReportOptions};
use hsvol_core::triangulation::{edge_orbit_report, parse_input, Triangulation, TriangulationInput};
use hsvol_core::volume::total_gradient;

const EXIT_INVALID: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;
const EXIT_NOT_CONVERGED: u8 = 3;

#[derive(Parser, Debug)]
#[command(name = "hsvol", version, about = "Volume of angle structures on triangulated 3-manifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    args: Args,
}

#[derive(Subcommand, Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    /// Validate a triangulation and print its edge orbits.
    Check,
    /// Find a strictly feasible angle structure.
    Feasible,
    /// Search for a critical point of the volume and report it.
    Maximize,
    /// Classify the angle structure given in the input's "theta" array.
    Classify,
    /// Like `classify`, and also require the given angles to be critical.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::Check => "check",
            Command::Feasible => "feasible",
            Command::Maximize => "maximize",
            Command::Classify => "classify",
            Command::Report => "report",
        }
    }
}

#[derive(clap::Args, Debug)]
struct Args {
    /// Triangulation JSON.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// JSON file with default values for the options below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    grad_tol: Option<f64>,
    #[arg(long, global = true)]
    length_tol: Option<f64>,
    #[arg(long, global = true)]
    eps_class: Option<f64>,
    #[arg(long, global = true)]
    abs_tol: Option<f64>,
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Try Newton refinement only below this projected-gradient norm.
    #[arg(long, global = true)]
    newton_threshold: Option<f64>,
    /// Allow unglued faces (for single-simplex experiments).
    #[arg(long, global = true)]
    test_mode: bool,
}

#[derive(Debug)]
struct RunConfig {
    command: Command,
    input: PathBuf,
    output: Option<PathBuf>,
    test_mode: bool,
    seed: Option<u64>,
    optimizer: OptimizerOptions,
    report: ReportOptions,
}

/// A failed run: exit code and message for stderr.
struct Failure(u8, String);

fn invalid(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INVALID, msg.into())
}

fn positive(name: &str, x: f64) -> Result<f64, Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(x)
    } else {
        Err(invalid(format!("{name} must be positive and finite, got {x}")))
    }
}

impl RunConfig {
    fn resolve(cli: Cli) -> Result<Self, Failure> {
        let a = cli.args;
        let file: ConfigFile = match &a.config {
            Some(path) => {
                let text = fs::read(path).map_err(|e| invalid(format!("{}: {e}", path.display())))?;
                parse_config(&text).map_err(|e| invalid(format!("{}: {e}", path.display())))?
            }
            None => ConfigFile::default(),
        };
        let input = a.input.ok_or_else(|| invalid("--input is required"))?;
        let defaults = OptimizerOptions::default();
        let report_defaults = ReportOptions::default();
        let abs_tol = positive("abs_tol", a.abs_tol.or(file.abs_tol).unwrap_or(defaults.quadrature.abs_tol))?;
        let quadrature = QuadratureOptions {
            abs_tol,
            ..QuadratureOptions::default()
        };
        let newton_threshold = match a.newton_threshold.or(file.newton_threshold) {
            Some(x) if x >= 0.0 => Some(x),
            Some(x) => return Err(invalid(format!("newton_threshold must be non-negative, got {x}"))),
            None => None,
        };
        Ok(RunConfig {
            command: cli.command,
            input,
            output: a.output,
            test_mode: a.test_mode || file.test_mode.unwrap_or(false),
            seed: a.seed.or(file.seed),
            optimizer: OptimizerOptions {
                grad_tol: positive("grad_tol", a.grad_tol.or(file.grad_tol).unwrap_or(defaults.grad_tol))?,
                max_iter: a.max_iter.or(file.max_iter).unwrap_or(defaults.max_iter),
                quadrature,
                newton_threshold,
            },
            report: ReportOptions {
                length_tol: positive(
                    "length_tol",
                    a.length_tol.or(file.length_tol).unwrap_or(report_defaults.length_tol),
                )?,
                eps_class: positive(
                    "eps_class",
                    a.eps_class.or(file.eps_class).unwrap_or(DEFAULT_EPS_CLASS),
                )?,
                quadrature,
            },
        })
    }
}

fn load(cfg: &RunConfig) -> Result<(Triangulation, TriangulationInput), Failure> {
    let bytes = fs::read(&cfg.input).map_err(|e| invalid(format!("{}: {e}", cfg.input.display())))?;
    let input = parse_input(&bytes, cfg.test_mode).map_err(|e| invalid(format!("{}: {e}", cfg.input.display())))?;
    Ok((Triangulation::build(input.spec.clone()), input))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| invalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn optimizer_failure(e: OptimizerError) -> Failure {
    match e {
        OptimizerError::Infeasible { .. } => Failure(EXIT_INFEASIBLE, e.to_string()),
        _ => invalid(e.to_string()),
    }
}

fn supplied_theta(t: &Triangulation, input: &TriangulationInput) -> Result<AngleStructure, Failure> {
    let theta = input
        .theta
        .clone()
        .ok_or_else(|| invalid("input has no \"theta\" array"))?;
    AngleStructure::new(t, theta).map_err(|e| invalid(format!("theta is not an angle structure: {e}")))
}

fn run(cfg: &RunConfig) -> Result<(), Failure> {
    let (t, input) = load(cfg)?;
    let out = cfg.output.as_deref();
    match cfg.command {
        Command::Check => {
            let summary = edge_orbit_report(&t);
            eprintln!("{summary}");
            let mut json = serde_json::to_string_pretty(&summary).expect("orbit report serializes");
            json.push('\n');
            if out.is_some() {
                write_output(out, &json)?;
            } else {
                println!("{summary}");
            }
            Ok(())
        }
        Command::Feasible => {
            let p = starting_point(&t, cfg.seed).map_err(optimizer_failure)?;
            let slack = polytope_constraints(&t).min_slack(p.theta());
            #[derive(serde::Serialize)]
            struct Feasible {
                command: &'static str,
                test_mode: bool,
                min_slack: Real,
                theta: Vec<Real>,
            }
            let body = Feasible {
                command: "feasible",
                test_mode: cfg.test_mode,
                min_slack: Real(slack),
                theta: p.theta().iter().copied().map(Real).collect(),
            };
            let mut json = serde_json::to_string_pretty(&body).expect("serializes");
            json.push('\n');
            write_output(out, &json)
        }
        Command::Maximize => {
            let start = starting_point(&t, cfg.seed).map_err(optimizer_failure)?;
            let cp = find_critical(&t, &start, &cfg.optimizer).map_err(optimizer_failure)?;
            let summary = OptimizationSummary {
                converged: cp.converged,
                stalled: cp.stalled,
                iterations: cp.iterations,
                projected_gradient_norm: Real(cp.projected_gradient_norm),
                grad_tol: Real(cfg.optimizer.grad_tol),
            };
            finish(cfg, &t, cp.theta.theta(), Some(summary), cp.converged)
        }
        Command::Classify => {
            let theta = supplied_theta(&t, &input)?;
            let report = build_report(cfg, &t, theta.theta(), None)?;
            write_output(out, &report.to_json())?;
            match &report.structure.error {
                Some(msg) => Err(invalid(msg.clone())),
                None => Ok(()),
            }
        }
        Command::Report => {
            let theta = supplied_theta(&t, &input)?;
            let mut g = total_gradient(&t, theta.theta()).map_err(|e| invalid(e.to_string()))?;
            project(&t, &mut g);
            let norm = g.iter().fold(0.0f64, |m, x| m.max(x.abs()));
            let critical = norm <= cfg.optimizer.grad_tol;
            let summary = OptimizationSummary {
                converged: critical,
                stalled: false,
                iterations: 0,
                projected_gradient_norm: Real(norm),
                grad_tol: Real(cfg.optimizer.grad_tol),
            };
            finish(cfg, &t, theta.theta(), Some(summary), critical)
        }
    }
}

fn build_report(
    cfg: &RunConfig,
    t: &Triangulation,
    theta: &[f64],
    summary: Option<OptimizationSummary>,
) -> Result<CriticalReport, Failure> {
    CriticalReport::build(cfg.command.name(), cfg.test_mode, t, theta, summary, &cfg.report)
        .map_err(|e| invalid(e.to_string()))
}

/// Writes the report; succeeds only for a consistent critical point.
fn finish(
    cfg: &RunConfig,
    t: &Triangulation,
    theta: &[f64],
    summary: Option<OptimizationSummary>,
    converged: bool,
) -> Result<(), Failure> {
    let report = build_report(cfg, t, theta, summary)?;
    write_output(cfg.output.as_deref(), &report.to_json())?;
    if !converged {
        return Err(Failure(EXIT_NOT_CONVERGED, "not converged to a critical point".into()));
    }
    if !report.is_consistent() {
        let why = report
            .structure
            .error
            .clone()
            .unwrap_or_else(|| format!("edge lengths disagree (max residual {:e})", report.edge_consistency.max_residual.0));
        return Err(Failure(EXIT_NOT_CONVERGED, why));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = RunConfig::resolve(cli).and_then(|cfg| run(&cfg));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure(code, msg)) => {
            eprintln!("hsvol: {msg}");
            ExitCode::from(code)
        }
    }
}
