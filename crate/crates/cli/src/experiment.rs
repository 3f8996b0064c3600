//! Building and simulating every oracle of an experiment, and the report
//! that records the result.

use std::collections::BTreeMap;
use std::time::Instant;

use qsearch::analysis::{relabel_average, Metrics, OracleRun};
use qsearch::sim::{run_exact, run_noisy, Distribution};
use qsearch::synth::lower_and_cancel;
use qsearch::{Circuit, GateCensus, Pattern};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::CliError;

/// Version of the report layout; bumped on incompatible changes.
pub const SCHEMA_VERSION: u32 = 1;

/// SplitMix64 finaliser.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Noise seed of one oracle's run, independent of the oracle set it is in.
pub fn oracle_seed(seed: u64, mask: Pattern) -> u64 {
    splitmix64(seed ^ splitmix64(mask.value()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        ToolInfo { name: env!("CARGO_PKG_NAME").to_string(), version: env!("CARGO_PKG_VERSION").to_string() }
    }
}

/// Outcome of one oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleSummary {
    pub mask: Pattern,
    /// Seed of the noisy run.
    pub seed: u64,
    /// Exact success probability.
    pub p_t: f64,
    /// Measured (or, without shots, exact) success probability.
    pub p_succ: f64,
    /// Lowered two-qubit gate count for this mask.
    pub two_qubit_count: usize,
    /// Exact search-register distribution, indexed by outcome.
    pub theoretical: Vec<f64>,
    /// Measured search-register distribution.
    pub measured: Distribution,
}

/// Oracle-averaged distributions on the relabelled axis `x XOR x0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RelabeledAverage {
    pub theoretical: Vec<f64>,
    pub measured: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TheorySummary {
    pub per_oracle: Vec<f64>,
    pub average: f64,
}

/// The lowered circuit of the first oracle.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSummary {
    pub qubits: usize,
    pub clbits: usize,
    pub census: GateCensus,
    pub cx: usize,
    pub cz: usize,
    pub oracle_calls: u64,
    /// Construction metadata (style, decomposition tree, schedule, ...).
    pub metadata: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub build_seconds: f64,
    pub simulate_seconds: f64,
    pub total_seconds: f64,
}

/// Everything needed to re-analyse or plot an experiment.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub schema_version: u32,
    pub tool: ToolInfo,
    pub config: ExperimentConfig,
    pub oracles: Vec<Pattern>,
    pub runs: Vec<OracleSummary>,
    pub relabeled_average: RelabeledAverage,
    pub p_t: TheorySummary,
    pub metrics: Metrics,
    pub circuit: CircuitSummary,
    /// Wall-clock timings; the only non-deterministic part of a report.
    pub timing: Timing,
}

impl ExperimentReport {
    pub fn n(&self) -> usize {
        self.config.n
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("report serialises");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

struct Built {
    mask: Pattern,
    circuit: Circuit,
    lowered: Circuit,
}

fn oracle_error(mask: Pattern, e: impl std::fmt::Display) -> CliError {
    CliError::Oracle { mask: mask.to_string(), message: e.to_string() }
}

/// Builds the circuit of every oracle, in mask order.
pub fn build_all(config: &ExperimentConfig) -> Result<Vec<(Pattern, Circuit, Circuit)>, CliError> {
    Ok(build_inner(config)?.into_iter().map(|b| (b.mask, b.circuit, b.lowered)).collect())
}

fn build_inner(config: &ExperimentConfig) -> Result<Vec<Built>, CliError> {
    config
        .masks()?
        .into_par_iter()
        .map(|mask| {
            let circuit = config.circuit(mask)?;
            let lowered = lower_and_cancel(&circuit);
            Ok(Built { mask, circuit, lowered })
        })
        .collect()
}

fn simulate(config: &ExperimentConfig, b: &Built) -> Result<OracleSummary, CliError> {
    let n = config.n;
    let exact = run_exact(&b.circuit).map_err(|e| oracle_error(b.mask, e))?.marginal_leading(n);
    let seed = oracle_seed(config.seed, b.mask);
    let measured = if config.shots == 0 {
        exact.clone()
    } else {
        run_noisy(&b.lowered, &config.noise, config.shots, seed).map_err(|e| oracle_error(b.mask, e))?.marginal_leading(n)
    };
    let census = b.lowered.census().map_err(|e| oracle_error(b.mask, e))?;
    Ok(OracleSummary {
        mask: b.mask,
        seed,
        p_t: exact.prob(b.mask.value()),
        p_succ: measured.prob(b.mask.value()),
        two_qubit_count: census.two_qubit_count,
        theoretical: exact.probabilities(),
        measured,
    })
}

/// Runs the experiment. The result depends only on `config`, apart from
/// `timing`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport, CliError> {
    let start = Instant::now();
    let built = build_inner(config)?;
    let build_seconds = start.elapsed().as_secs_f64();

    let sim_start = Instant::now();
    let runs: Vec<OracleSummary> = built.par_iter().map(|b| simulate(config, b)).collect::<Result<_, _>>()?;
    let simulate_seconds = sim_start.elapsed().as_secs_f64();

    let n = config.n;
    let to_runs = |pick: &dyn Fn(&OracleSummary) -> Distribution| -> Result<Vec<OracleRun>, CliError> {
        runs.iter()
            .map(|r| OracleRun::new(r.mask, pick(r)).map_err(|e| oracle_error(r.mask, e)))
            .collect()
    };
    let theory_runs = to_runs(&|r| Distribution::exact(n, r.theoretical.clone()))?;
    let measured_runs = to_runs(&|r| r.measured.clone())?;
    let analysis = |e| CliError::Runtime(format!("analysis: {e}"));
    let relabeled_average = RelabeledAverage {
        theoretical: relabel_average(&theory_runs).map_err(analysis)?,
        measured: relabel_average(&measured_runs).map_err(analysis)?,
    };

    let per_oracle: Vec<f64> = runs.iter().map(|r| r.p_t).collect();
    let average = per_oracle.iter().sum::<f64>() / per_oracle.len() as f64;

    let first = &built[0].lowered;
    let census = first.census().map_err(|e| oracle_error(built[0].mask, e))?;
    let oracle_calls = first.meta("oracle_calls").and_then(|s| s.parse().ok()).unwrap_or(1);
    let metrics = Metrics::compute(&measured_runs, average, oracle_calls).map_err(analysis)?;
    let circuit = CircuitSummary {
        qubits: first.n_qubits(),
        clbits: first.n_clbits(),
        cx: census.cx_count(),
        cz: census.cz_count(),
        census,
        oracle_calls,
        metadata: first.metadata().clone(),
    };

    Ok(ExperimentReport {
        schema_version: SCHEMA_VERSION,
        tool: ToolInfo::current(),
        config: config.clone(),
        oracles: runs.iter().map(|r| r.mask).collect(),
        runs,
        relabeled_average,
        p_t: TheorySummary { per_oracle, average },
        metrics,
        circuit,
        timing: Timing { build_seconds, simulate_seconds, total_seconds: start.elapsed().as_secs_f64() },
    })
}
