//! `cpa-scatter`: scans, detection reports, oracle validation and figure data
//! for one-dimensional complex scattering potentials.
//!
//! Exit codes: 0 success, 1 validation outside tolerance, 2 bad config or
//! arguments, 3 solver failure, 4 no closed-form reference for the potential.

pub mod plot;
pub mod potential_args;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use cpa_scatter::analytic::ScarfDomain;
use cpa_scatter::config::FamilyRegistry;
use cpa_scatter::detect::{self, format_f64, DetectorConfig, ScanRow};
use cpa_scatter::oracle::{validate, OracleRegistry};
use cpa_scatter::potential::bound_states_of;
use cpa_scatter::{PotentialSpec, ScatterError, SolverConfig};
use serde::Serialize;

use crate::plot::Panels;
use crate::potential_args::PotentialArgs;

const THREADS_ENV: &str = "CPA_SCATTER_THREADS";

#[derive(Parser)]
#[command(name = "cpa-scatter", version, about = "Coherent scattering, spectral singularities and CPA in 1D complex potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Observables at +k and -k on a uniform energy grid
    Scan(ScanArgs),
    /// Find and classify spectral singularities and CPA points
    Detect(DetectArgs),
    /// Compare the integrator with the closed-form reference
    Validate(ValidateArgs),
    /// Discrete spectrum of the unbroken-phase Scarf II potential
    BoundStates(BoundStatesArgs),
    /// Write the three figure panels as two-column data files
    PlotData(PlotDataArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Range {
    e_min: f64,
    e_max: f64,
    points: Option<usize>,
}

fn parse_range(s: &str) -> Result<Range, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let number = |p: &str| p.trim().parse::<f64>().map_err(|_| format!("`{p}` is not a number"));
    let (e_min, e_max, points) = match parts.as_slice() {
        [a, b] => (number(a)?, number(b)?, None),
        [a, b, n] => (
            number(a)?,
            number(b)?,
            Some(n.trim().parse::<usize>().map_err(|_| format!("`{n}` is not a point count"))?),
        ),
        _ => return Err("expected Emin:Emax or Emin:Emax:N".to_string()),
    };
    if !(e_min > 0.0 && e_min < e_max && e_max.is_finite()) {
        return Err(format!("need 0 < Emin < Emax, got {e_min}:{e_max}"));
    }
    if points.is_some_and(|n| n < 2) {
        return Err("need at least 2 points".to_string());
    }
    Ok(Range { e_min, e_max, points })
}

#[derive(Args)]
struct SolverArgs {
    /// RK4 step in x
    #[arg(long)]
    step: Option<f64>,
    /// Integration half-width; defaults to the potential's truncation radius
    #[arg(long)]
    xmax: Option<f64>,
}

impl SolverArgs {
    fn config(&self, spec: &PotentialSpec) -> SolverConfig {
        let mut cfg = SolverConfig::for_spec(spec);
        if let Some(step) = self.step {
            cfg = cfg.with_step(step);
        }
        if let Some(x_max) = self.xmax {
            cfg = cfg.with_x_max(x_max);
        }
        cfg
    }
}

#[derive(Args)]
struct ScanArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Energy grid `Emin:Emax:N`
    #[arg(long, value_parser = parse_range)]
    range: Range,
    #[command(flatten)]
    solver: SolverArgs,
    /// Output file; stdout when omitted
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    /// Energy range `Emin:Emax`, optionally `:N` for the minimum number of coarse points
    #[arg(long, value_parser = parse_range, default_value = "0.5:10")]
    range: Range,
    #[command(flatten)]
    solver: SolverArgs,
    /// Refined T above which a peak counts as a pole
    #[arg(long)]
    t_huge: Option<f64>,
    /// Coarse 1/T below which a peak is refined
    #[arg(long)]
    g_trigger: Option<f64>,
    /// Refined |det S| below which a dip counts as CPA
    #[arg(long)]
    tol_cpa: Option<f64>,
    /// Coarse grid density
    #[arg(long)]
    points_per_decade: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, value_parser = parse_range, default_value = "0.5:10:200")]
    range: Range,
    #[command(flatten)]
    solver: SolverArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundStatesArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Args)]
struct PlotDataArgs {
    #[command(flatten)]
    potential: PotentialArgs,
    #[arg(long, value_parser = parse_range, default_value = "0.5:10:400")]
    range: Range,
    #[command(flatten)]
    solver: SolverArgs,
    /// Directory for the `fig_<tag>_{a,b,c}.dat` files
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// File name tag; defaults to the potential family
    #[arg(long)]
    tag: Option<String>,
    /// Integrate even when a closed form exists
    #[arg(long)]
    numeric: bool,
}

#[derive(Debug)]
enum Failure {
    OutOfTolerance,
    Config(anyhow::Error),
    Solver(anyhow::Error),
    NoOracle(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::OutOfTolerance => 1,
            Failure::Config(_) => 2,
            Failure::Solver(_) => 3,
            Failure::NoOracle(_) => 4,
        }
    }
}

impl From<ScatterError> for Failure {
    fn from(e: ScatterError) -> Self {
        match e {
            ScatterError::InvalidSolver(_) | ScatterError::InvalidPotential(_) | ScatterError::InvalidRange(_) => {
                Failure::Config(e.into())
            }
            _ => Failure::Solver(e.into()),
        }
    }
}

type Outcome = Result<(), Failure>;

fn config<T>(r: anyhow::Result<T>) -> Result<T, Failure> {
    r.map_err(Failure::Config)
}

fn emit(out: &Option<PathBuf>, stdout: &mut dyn Write, bytes: &[u8]) -> Outcome {
    let written = match out {
        Some(path) => std::fs::write(path, bytes).with_context(|| format!("writing {}", path.display())),
        None => stdout.write_all(bytes).and_then(|_| stdout.flush()).context("writing to stdout"),
    };
    written.map_err(Failure::Config)
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::Solver(e.into()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{raw}`"))?;
    // a second run in the same process keeps the pool it already has
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn run_scan(args: &ScanArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = config(args.potential.resolve())?;
    let cfg = args.solver.config(&spec);
    let n = args.range.points.ok_or_else(|| Failure::Config(anyhow::anyhow!("--range needs Emin:Emax:N")))?;
    let samples = detect::scan(&spec, args.range.e_min, args.range.e_max, n, &cfg)?;
    let rows: Vec<ScanRow> = samples.iter().map(ScanRow::from).collect();
    let bytes = match args.format {
        Format::Csv => {
            let mut buf = Vec::new();
            detect::write_csv(&rows, &mut buf).map_err(|e| Failure::Config(e.into()))?;
            buf
        }
        Format::Json => json_bytes(&rows)?,
    };
    emit(&args.out, stdout, &bytes)?;
    let failed: Vec<&str> = samples.iter().filter_map(|s| s.error.as_deref()).collect();
    match failed.first() {
        Some(first) => Err(Failure::Solver(anyhow::anyhow!("{} of {} points failed; first: {first}", failed.len(), n))),
        None => Ok(()),
    }
}

fn run_detect(args: &DetectArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = config(args.potential.resolve())?;
    let cfg = args.solver.config(&spec);
    let mut thresholds = DetectorConfig::default();
    if let Some(v) = args.t_huge {
        thresholds.t_huge = v;
    }
    if let Some(v) = args.g_trigger {
        thresholds.g_trigger = v;
    }
    if let Some(v) = args.tol_cpa {
        thresholds.tol_cpa = v;
    }
    if let Some(v) = args.points_per_decade {
        thresholds.points_per_decade = v;
    }
    if let Some(n) = args.range.points {
        thresholds.min_points = n;
    }
    let report = detect::detect(&spec, args.range.e_min, args.range.e_max, &cfg, thresholds)?;
    let bytes = match args.format {
        Format::Json => json_bytes(&report)?,
        Format::Csv => {
            let mut text = String::from("kind,E,k,T_pos,T_neg,absDetS,refinementIterations,bracketWidth\n");
            for e in &report.events {
                let kind = serde_json::to_value(e.kind).map_err(|e| Failure::Solver(e.into()))?;
                let d = &e.diagnostics;
                text.push_str(&format!(
                    "{},{},{},{},{},{},{},{}\n",
                    kind.as_str().unwrap_or_default(),
                    format_f64(e.energy),
                    format_f64(e.k),
                    format_f64(d.t_pos),
                    format_f64(d.t_neg),
                    format_f64(d.abs_det_s),
                    d.refinement_iterations,
                    format_f64(d.bracket_width),
                ));
            }
            text.into_bytes()
        }
    };
    emit(&args.out, stdout, &bytes)
}

#[derive(Serialize)]
struct ValidationOutput {
    potential: serde_json::Value,
    #[serde(flatten)]
    summary: cpa_scatter::oracle::ValidationSummary,
}

fn run_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = config(args.potential.resolve())?;
    let registry = OracleRegistry::default();
    let oracle = registry
        .for_spec(&spec)
        .ok_or_else(|| Failure::NoOracle(format!("no closed-form oracle for the {} family", spec.family())))?;
    let cfg = args.solver.config(&spec);
    let n = args.range.points.unwrap_or(200);
    let energies = detect::uniform_grid(args.range.e_min, args.range.e_max, n)?;
    let summary = validate(oracle, &spec, &energies, &cfg)?;
    let passed = summary.passed;
    let output = ValidationOutput { potential: FamilyRegistry::default().to_value(&spec), summary };
    emit(&args.out, stdout, &json_bytes(&output)?)?;
    if passed {
        Ok(())
    } else {
        Err(Failure::OutOfTolerance)
    }
}

fn run_bound_states(args: &BoundStatesArgs, stdout: &mut dyn Write) -> Outcome {
    let spec = config(args.potential.resolve())?;
    let levels = bound_states_of(&spec).ok_or_else(|| {
        Failure::NoOracle("no closed-form bound-state spectrum; only the unbroken (a, b) Scarf II has one".to_string())
    })?;
    let bytes = match args.format {
        Format::Json => json_bytes(&levels)?,
        Format::Csv => {
            let mut text = String::from("branch,index,E\n");
            for b in &levels {
                text.push_str(&format!("{},{},{}\n", b.branch, b.index, format_f64(b.energy)));
            }
            text.into_bytes()
        }
    };
    emit(&args.out, stdout, &bytes)
}

fn run_plot_data(args: &PlotDataArgs) -> Outcome {
    let spec = config(args.potential.resolve())?;
    let n = args.range.points.unwrap_or(400);
    let grid = detect::uniform_grid(args.range.e_min, args.range.e_max, n)?;
    let domain = ScarfDomain::of(&spec).filter(|_| !args.numeric);
    let panels = match &domain {
        Some(domain) => Panels::from_closed_form(domain, &grid)?,
        None => {
            let cfg = args.solver.config(&spec);
            let samples = detect::scan(&spec, args.range.e_min, args.range.e_max, n, &cfg)?;
            Panels::from_scan(&samples)
        }
    };
    let tag = match (&args.tag, &domain) {
        (Some(tag), _) => tag.clone(),
        (None, Some(d)) => d.tag().to_string(),
        (None, None) => spec.family().to_string(),
    };
    let paths = panels.write(&args.out, &tag).map_err(|e| Failure::Config(e.into()))?;
    for p in paths {
        eprintln!("wrote {}", p.display());
    }
    Ok(())
}

/// Runs one command line (program name first) and returns the exit code.
/// Reports go to `stdout` unless `--out` is given; diagnostics go to stderr.
pub fn run<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code() as u8;
        }
    };
    let result = configure_threads().map_err(Failure::Config).and_then(|_| match &cli.command {
        Command::Scan(a) => run_scan(a, stdout),
        Command::Detect(a) => run_detect(a, stdout),
        Command::Validate(a) => run_validate(a, stdout),
        Command::BoundStates(a) => run_bound_states(a, stdout),
        Command::PlotData(a) => run_plot_data(a),
    });
    match result {
        Ok(()) => 0,
        Err(failure) => {
            match &failure {
                Failure::OutOfTolerance => eprintln!("error: deviation from the reference exceeds tolerance"),
                Failure::Config(e) => eprintln!("config error: {e:#}"),
                Failure::Solver(e) => eprintln!("solver error: {e:#}"),
                Failure::NoOracle(msg) => eprintln!("error: {msg}"),
            }
            failure.code()
        }
    }
}
