//! Command-line front end: scenario configs in, CSV and JSON out.
//!
//! Exit codes: 0 success, 2 configuration error, 3 numerical failure,
//! 4 boundary-to-initial map refused for incompatible data, 1 for output
//! I/O failures.

mod config;
mod run;
mod scenarios;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

pub use config::{GridBlock, NumericsBlock, OutputsBlock, Problem, ProblemBlock, ReferenceBlock, ScenarioConfig, MAX_LATTICE_INDEX};
pub use run::{converge, map_initial, solve, ConvergeReport, MapReport, RunReport, SampleRow, Summary, Table};
pub use scenarios::{builtin, BUILTIN};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("numerics: {0}")]
    Numerics(String),
    #[error("incompatible data: {0}")]
    Incompatible(String),
    #[error("output: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numerics(_) => 3,
            CliError::Incompatible(_) => 4,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "utm", version, about = "Unified transform solutions, their analytic continuation and boundary-to-initial maps")]
pub struct Cli {
    /// Worker threads for grid sweeps.
    #[arg(long, global = true, env = "UTM_THREADS")]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the continued solution on the configured grid.
    Solve(RunArgs),
    /// Tabulate the whole-line initial condition w0.
    MapInitial(RunArgs),
    /// Refinement study of a lattice problem against its continuum limit.
    Converge(RunArgs),
    /// List the built-in scenarios.
    ListScenarios,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Scenario config (JSON).
    #[arg(long, required_unless_present = "scenario", conflicts_with = "scenario")]
    pub config: Option<PathBuf>,
    /// Name of a built-in scenario.
    #[arg(long)]
    pub scenario: Option<String>,
    /// CSV output path; the JSON summary goes next to it with a .json extension.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override numerics.tol.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl RunArgs {
    pub fn load(&self) -> Result<ScenarioConfig, CliError> {
        let text = match (&self.config, &self.scenario) {
            (Some(path), _) => std::fs::read_to_string(path)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?,
            (None, Some(name)) => builtin(name)
                .ok_or_else(|| CliError::Config(format!("no built-in scenario named '{name}'")))?
                .to_string(),
            (None, None) => return Err(CliError::Config("either --config or --scenario is required".into())),
        };
        let mut cfg = ScenarioConfig::from_json(&text)?;
        if let Some(tol) = self.tol {
            if !(tol > 0.0 && tol < 1.0) {
                return Err(CliError::Config(format!("--tol must lie in (0, 1), got {tol}")));
            }
            cfg.numerics.tol = tol;
        }
        Ok(cfg)
    }

    fn paths(&self, cfg: &ScenarioConfig) -> (Option<PathBuf>, Option<PathBuf>) {
        let csv = self.out.clone().or_else(|| cfg.outputs.csv.as_ref().map(PathBuf::from));
        let json = match (&self.out, &cfg.outputs.json) {
            (Some(out), _) => Some(out.with_extension("json")),
            (None, Some(j)) => Some(PathBuf::from(j)),
            (None, None) => csv.as_ref().map(|c| c.with_extension("json")),
        };
        (csv, json)
    }
}

/// Formats a value with 17 significant digits; missing values are empty.
pub fn format_value(v: Option<f64>) -> String {
    match v {
        Some(v) => format!("{v:.16e}"),
        None => String::new(),
    }
}

pub fn table_to_csv(table: &Table) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| format_value(*v))).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn emit(args: &RunArgs, cfg: &ScenarioConfig, table: &Table, summary: &impl serde::Serialize, line: String) -> Result<(), CliError> {
    let csv = table_to_csv(table)?;
    let json = serde_json::to_string_pretty(summary).map_err(|e| CliError::Io(e.to_string()))?;
    let (csv_path, json_path) = args.paths(cfg);
    match csv_path {
        Some(p) => write_file(&p, &csv)?,
        None => std::io::stdout().write_all(csv.as_bytes()).map_err(|e| CliError::Io(e.to_string()))?,
    }
    if let Some(p) = json_path {
        write_file(&p, &json)?;
    }
    eprintln!("{line}");
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"))
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::ListScenarios => {
            for (name, text) in BUILTIN {
                let cfg = ScenarioConfig::from_json(text)?;
                println!("{name:<24} {:<20} {}", cfg.problem.kind, cfg.description);
            }
            Ok(())
        }
        Command::Solve(args) => {
            let cfg = args.load()?;
            let report = solve(&cfg)?;
            let s = &report.summary;
            let line = format!("solve {}: {} samples, max abs err {}, {:.2} s", s.scenario, s.samples, fmt_opt(s.max_abs_err), s.wall_time_s);
            emit(args, &cfg, &report.table(), &report, line)
        }
        Command::MapInitial(args) => {
            let cfg = args.load()?;
            let report = map_initial(&cfg)?;
            let s = &report.summary;
            let jump = s.jumps.iter().map(|j| j.jump.abs()).fold(0.0, f64::max);
            let line = format!("map-initial {}: {} samples, largest jump {jump:.3e}", s.scenario, s.samples);
            emit(args, &cfg, &report.table, &report.summary, line)
        }
        Command::Converge(args) => {
            let cfg = args.load()?;
            let report = converge(&cfg)?;
            let orders: Vec<String> = report.summary.times.iter().map(|t| fmt_opt(t.observed_order)).collect();
            let line = format!("converge {}: observed order {}", report.summary.scenario, orders.join(", "));
            emit(args, &cfg, &report.table, &report.summary, line)
        }
    }
}

/// Runs the CLI on the given arguments and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: config: cannot start worker pool: {e}");
            return 2;
        }
    };
    match pool.install(|| dispatch(&cli)) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
