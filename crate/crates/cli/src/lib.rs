//! Experiment driver: builds search circuits over sets of oracles, simulates
//! them exactly and with noise, and writes circuits, JSON reports, CSV tables
//! and pgfplots fragments.

pub mod config;
pub mod experiment;
pub mod plot;
pub mod sweep;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qsearch::circuit::serialize;
use thiserror::Error;

use config::{ExperimentConfig, Overrides};
use experiment::run_experiment;

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "QSEARCH_OUT";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid `{field}`: {message}")]
    Invalid { field: String, message: String },
    #[error("{path}: {message}")]
    BadInput { path: String, message: String },
    #[error("oracle {mask}: {message}")]
    Oracle { mask: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Runtime(String),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// 1 for invalid input, 2 for failures while running.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Invalid { .. } | CliError::BadInput { .. } => 1,
            CliError::Oracle { .. } | CliError::Io { .. } | CliError::Runtime(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qsearch", version, about = "Build, simulate and plot unstructured-search circuits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the lowered circuit of every oracle and print gate counts.
    Build(ExperimentArgs),
    /// Simulate every oracle and write a JSON report.
    Run(ExperimentArgs),
    /// Turn a report into a CSV table and a pgfplots fragment.
    Plot {
        /// Report written by `run`.
        report: PathBuf,
        /// Output directory (default: the report's directory).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run once per two-qubit noise level and tabulate p_succ and R.
    Sweep {
        #[command(flatten)]
        args: ExperimentArgs,
        /// Ascending p2 values, e.g. `0,0.005,0.01`.
        #[arg(long)]
        grid: String,
        /// Also fit p2 within the grid's range so that R matches this value.
        #[arg(long)]
        fit_r: Option<f64>,
    },
}

#[derive(Debug, Default, Args)]
pub struct ExperimentArgs {
    /// JSON configuration file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub family: Option<String>,
    #[arg(long)]
    pub n: Option<usize>,
    /// Block sizes, e.g. `3,2`.
    #[arg(long)]
    pub partition: Option<String>,
    /// A single marked pattern, e.g. `10110`.
    #[arg(long)]
    pub oracle: Option<String>,
    /// `all`, `sample:k:seed` or a comma-separated mask list.
    #[arg(long)]
    pub oracle_set: Option<String>,
    #[arg(long)]
    pub shots: Option<u64>,
    /// e.g. `p1=0,p2=0.01,pm=0.005`.
    #[arg(long)]
    pub noise: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Oracle style: plain-mcz, ancilla-relphase, ancilla-relphase-partial-uncompute, measurement-assisted.
    #[arg(long)]
    pub style: Option<String>,
    /// full, partial or measurement-assisted.
    #[arg(long)]
    pub uncompute: Option<String>,
    #[arg(long)]
    pub diffuser_size: Option<usize>,
    #[arg(long)]
    pub iterations: Option<usize>,
    /// Block schedule, e.g. `"O G2 O G1"`.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Output directory (default: $QSEARCH_OUT, else the working directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl ExperimentArgs {
    pub fn load(&self) -> Result<ExperimentConfig, CliError> {
        let overrides = Overrides {
            family: self.family.clone(),
            n: self.n,
            partition: self.partition.clone(),
            oracle: self.oracle.clone(),
            oracle_set: self.oracle_set.clone(),
            shots: self.shots,
            noise: self.noise.clone(),
            seed: self.seed,
            style: self.style.clone(),
            uncompute: self.uncompute.clone(),
            diffuser_size: self.diffuser_size,
            iterations: self.iterations,
            schedule: self.schedule.clone(),
            out: self.out.clone(),
        };
        ExperimentConfig::load(self.config.as_deref(), &overrides)
    }
}

/// Output directory: the configured one, else `$QSEARCH_OUT`, else `.`.
pub fn output_dir(config_out: Option<&Path>) -> PathBuf {
    config_out
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."))
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::io(path, e))
}

pub fn cmd_build(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<Vec<PathBuf>, CliError> {
    let dir = output_dir(config.out.as_deref());
    create_dir(&dir)?;
    let mut written = Vec::new();
    for (mask, _, lowered) in experiment::build_all(config)? {
        let census = lowered.census().map_err(|e| CliError::Oracle { mask: mask.to_string(), message: e.to_string() })?;
        let path = dir.join(format!("circuit_{}_{}.qasm", config.family, mask));
        write_file(&path, &serialize(&lowered))?;
        writeln!(
            stdout,
            "{}: two-qubit gates {} (cx {}, cz {}), one-qubit gates {}, qubits {}",
            path.display(),
            census.two_qubit_count,
            census.cx_count(),
            census.cz_count(),
            census.one_qubit_count,
            lowered.n_qubits()
        )
        .map_err(|e| CliError::Runtime(e.to_string()))?;
        written.push(path);
    }
    Ok(written)
}

pub fn cmd_run(config: &ExperimentConfig, stdout: &mut dyn Write) -> Result<PathBuf, CliError> {
    let dir = output_dir(config.out.as_deref());
    create_dir(&dir)?;
    let report = run_experiment(config)?;
    let path = dir.join(format!("report_{}.json", config.label()));
    write_file(&path, &report.to_json())?;
    let m = &report.metrics;
    writeln!(
        stdout,
        "{}: oracles {}, p_t {:.6}, p_succ {:.6} (worst {:.6}), R {:.4}, ci [{:.4}, {:.4}] ({}), two-qubit gates {}",
        path.display(),
        report.runs.len(),
        m.p_t,
        m.p_succ,
        m.p_succ_worst,
        m.r,
        m.ci.0,
        m.ci.1,
        m.ci_method,
        report.circuit.census.two_qubit_count
    )
    .map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok(path)
}

pub fn cmd_plot(report: &Path, out: Option<&Path>, stdout: &mut dyn Write) -> Result<(PathBuf, PathBuf), CliError> {
    let dir = match out {
        Some(d) => d.to_path_buf(),
        None => report.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from(".")),
    };
    let (csv, tex) = plot::write_plot(report, &dir)?;
    writeln!(stdout, "{}\n{}", csv.display(), tex.display()).map_err(|e| CliError::Runtime(e.to_string()))?;
    Ok((csv, tex))
}

pub fn cmd_sweep(
    config: &ExperimentConfig,
    grid: &str,
    fit_r: Option<f64>,
    stdout: &mut dyn Write,
) -> Result<PathBuf, CliError> {
    let grid = sweep::parse_grid(grid)?;
    let dir = output_dir(config.out.as_deref());
    create_dir(&dir)?;
    let rows = sweep::run_sweep(config, &grid)?;
    let table = sweep::sweep_csv(&rows);
    let path = dir.join(format!("sweep_{}.csv", config.label()));
    write_file(&path, &table)?;
    let io = |e: std::io::Error| CliError::Runtime(e.to_string());
    write!(stdout, "{table}").map_err(io)?;
    if let Some(target) = fit_r {
        let fit = sweep::fit_p2(config, target, grid[0], grid[grid.len() - 1])?;
        let fit_path = dir.join(format!("fit_{}.json", config.label()));
        write_file(&fit_path, &(serde_json::to_string_pretty(&fit).expect("fit serialises") + "\n"))?;
        writeln!(stdout, "fitted p2 {:.6} gives R {:.4} (target {target})", fit.p2, fit.r).map_err(io)?;
    }
    Ok(path)
}

/// Runs one parsed command line.
pub fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match cli.command {
        Command::Build(args) => cmd_build(&args.load()?, stdout).map(drop),
        Command::Run(args) => cmd_run(&args.load()?, stdout).map(drop),
        Command::Plot { report, out } => cmd_plot(&report, out.as_deref(), stdout).map(drop),
        Command::Sweep { args, grid, fit_r } => cmd_sweep(&args.load()?, &grid, fit_r, stdout).map(drop),
    }
}
