//! Two-qubit noise sweeps and fitting `p2` to a target effectiveness ratio.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::experiment::run_experiment;
use crate::plot::{format_sig, SIG_DIGITS};
use crate::CliError;

/// Bisection steps of [`fit_p2`]; the bracket shrinks by `2^-FIT_STEPS`.
pub const FIT_STEPS: usize = 24;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub p2: f64,
    pub p_succ: f64,
    pub r: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

/// Parses a comma-separated grid and checks it is non-empty, ascending and
/// inside `[0, 1]`.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let invalid = |message: String| CliError::Invalid { field: "grid".to_string(), message };
    let grid = s
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| invalid(format!("bad number '{t}'"))))
        .collect::<Result<Vec<_>, _>>()?;
    if grid.is_empty() {
        return Err(invalid("grid is empty".to_string()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(invalid("grid must be strictly ascending".to_string()));
    }
    if grid.iter().any(|p| !(0.0..=1.0).contains(p)) {
        return Err(invalid("grid values must lie in [0, 1]".to_string()));
    }
    Ok(grid)
}

fn with_p2(config: &ExperimentConfig, p2: f64) -> Result<ExperimentConfig, CliError> {
    let mut c = config.clone();
    c.noise.p2 = p2;
    c.validate()?;
    Ok(c)
}

/// Runs the experiment once per `p2` value. Every point uses the same seed,
/// so points differ only through the noise strength.
pub fn run_sweep(config: &ExperimentConfig, grid: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    grid.iter()
        .map(|&p2| {
            let m = run_experiment(&with_p2(config, p2)?)?.metrics;
            Ok(SweepRow { p2, p_succ: m.p_succ, r: m.r, ci_low: m.ci.0, ci_high: m.ci.1 })
        })
        .collect()
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("p2,p_succ,R,ci_low,ci_high\n");
    for r in rows {
        let f = |v: f64| format_sig(v, SIG_DIGITS);
        writeln!(out, "{},{},{},{},{}", f(r.p2), f(r.p_succ), f(r.r), f(r.ci_low), f(r.ci_high)).unwrap();
    }
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct P2Fit {
    pub target_r: f64,
    pub p2: f64,
    /// Ratio achieved at the fitted `p2`.
    pub r: f64,
    pub shots: u64,
    pub seed: u64,
}

/// Finds `p2` in `[lo, hi]` whose ratio `R` is closest to `target` by
/// bisection, assuming `R` does not increase with `p2`.
pub fn fit_p2(config: &ExperimentConfig, target: f64, lo: f64, hi: f64) -> Result<P2Fit, CliError> {
    let invalid = |message: String| CliError::Invalid { field: "fit_r".to_string(), message };
    if config.shots == 0 {
        return Err(CliError::Invalid { field: "shots".to_string(), message: "fitting needs shots >= 1".to_string() });
    }
    let ratio = |p2: f64| -> Result<f64, CliError> { Ok(run_experiment(&with_p2(config, p2)?)?.metrics.r) };
    let (r_lo, r_hi) = (ratio(lo)?, ratio(hi)?);
    if !(r_hi <= target && target <= r_lo) {
        return Err(invalid(format!("target R={target} is outside [{r_hi}, {r_lo}] spanned by p2 in [{lo}, {hi}]")));
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..FIT_STEPS {
        let mid = 0.5 * (a + b);
        if ratio(mid)? >= target {
            a = mid;
        } else {
            b = mid;
        }
    }
    let p2 = 0.5 * (a + b);
    Ok(P2Fit { target_r: target, p2, r: ratio(p2)?, shots: config.shots, seed: config.seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert_eq!(parse_grid("0, 0.005,0.01").unwrap(), vec![0.0, 0.005, 0.01]);
        for bad in ["", "0.1,0.05", "0,0", "0,x", "0,1.5"] {
            assert!(matches!(parse_grid(bad), Err(CliError::Invalid { ref field, .. }) if field == "grid"), "{bad}");
        }
    }
}
