//! Result analysis: success probability, oracle-relabelled averaging, the
//! `R = p_succ / p_t` effectiveness ratio, Wilson intervals and classical
//! baselines.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::Pattern;
use crate::sim::Distribution;

/// Two-sided 95% standard-normal quantile.
pub const Z_95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalysisError {
    #[error("distribution width {got} is narrower than mask width {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("no runs to average")]
    Empty,
    #[error("theoretical success probability is zero")]
    ZeroTheoretical,
    #[error("success probability is zero")]
    ZeroSuccess,
    #[error("oracle calls {q} outside 1..={max}")]
    BadQ { q: u64, max: u64 },
    #[error("bad counts: {successes} successes out of {shots} shots")]
    BadCounts { successes: u64, shots: u64 },
}

/// Outcome table of one oracle, restricted to the search register.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleRun {
    pub mask: Pattern,
    pub distribution: Distribution,
}

impl OracleRun {
    /// Keeps the leading `mask.width()` classical bits (the search readout)
    /// of `distribution`.
    pub fn new(mask: Pattern, distribution: Distribution) -> Result<Self, AnalysisError> {
        let (w, n) = (distribution.width(), mask.width());
        if w < n {
            return Err(AnalysisError::WidthMismatch { expected: n, got: w });
        }
        let distribution = if w == n { distribution } else { distribution.marginal_leading(n) };
        Ok(OracleRun { mask, distribution })
    }

    pub fn shots(&self) -> Option<u64> {
        self.distribution.shots()
    }

    /// Successful shots (sampled runs only).
    pub fn successes(&self) -> Option<u64> {
        self.distribution.count(self.mask.value())
    }
}

/// Probability mass (or count fraction) on the marked pattern.
pub fn success_probability(run: &OracleRun) -> f64 {
    run.distribution.prob(run.mask.value())
}

/// Maps each run's outcome `x` to `x XOR x0` and averages with equal weight
/// per oracle. Bucket 0 of the result is the success probability.
pub fn relabel_average(runs: &[OracleRun]) -> Result<Vec<f64>, AnalysisError> {
    let first = runs.first().ok_or(AnalysisError::Empty)?;
    let n = first.mask.width();
    let mut acc = vec![0.0; 1 << n];
    for run in runs {
        if run.mask.width() != n || run.distribution.width() != n {
            return Err(AnalysisError::WidthMismatch { expected: n, got: run.distribution.width() });
        }
        for (x, p) in run.distribution.relabel(run.mask.value()).probabilities().into_iter().enumerate() {
            acc[x] += p;
        }
    }
    let k = runs.len() as f64;
    Ok(acc.into_iter().map(|p| p / k).collect())
}

pub fn r_metric(p_succ: f64, p_t: f64) -> Result<f64, AnalysisError> {
    if p_t <= 0.0 {
        return Err(AnalysisError::ZeroTheoretical);
    }
    Ok(p_succ / p_t)
}

/// Classical success probabilities and expected query count on `2^n`
/// elements with `q` queries.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassicalBaselines {
    /// Success iff one of the `q` queried elements is the marked one: `q/N`.
    pub single_model: f64,
    /// `q` queries plus one free final guess: `(q+1)/N`, capped at 1.
    pub guess_model: f64,
    /// Expected queries of exhaustive random search: `(N+1)/2`.
    pub expected_calls: f64,
}

pub fn classical_baselines(n: usize, q: u64) -> Result<ClassicalBaselines, AnalysisError> {
    let big_n = 1u64 << n;
    if q == 0 || q > big_n {
        return Err(AnalysisError::BadQ { q, max: big_n });
    }
    let nf = big_n as f64;
    Ok(ClassicalBaselines {
        single_model: q as f64 / nf,
        guess_model: if q < big_n { (q + 1) as f64 / nf } else { 1.0 },
        expected_calls: (nf + 1.0) / 2.0,
    })
}

/// Repeat-until-success oracle calls: `calls / p_succ`.
pub fn expected_quantum_calls(p_succ: f64, oracle_calls_per_circuit: u64) -> Result<f64, AnalysisError> {
    if p_succ <= 0.0 {
        return Err(AnalysisError::ZeroSuccess);
    }
    Ok(oracle_calls_per_circuit as f64 / p_succ)
}

/// 95% Wilson score interval for `successes` out of `shots`.
pub fn confidence_interval(successes: u64, shots: u64) -> Result<(f64, f64), AnalysisError> {
    if shots == 0 || successes > shots {
        return Err(AnalysisError::BadCounts { successes, shots });
    }
    let n = shots as f64;
    let p = successes as f64 / n;
    let z2 = Z_95 * Z_95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z_95 * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // the bounds are exactly 0 and 1 at the boundaries; avoid rounding residue
    let low = if successes == 0 { 0.0 } else { (centre - half).max(0.0) };
    let high = if successes == shots { 1.0 } else { (centre + half).min(1.0) };
    Ok((low, high))
}

/// Summary of an experiment over a set of oracles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Metrics {
    /// Oracle-averaged success probability.
    pub p_succ: f64,
    /// Worst success probability over the oracles.
    pub p_succ_worst: f64,
    pub p_t: f64,
    #[serde(rename = "R")]
    pub r: f64,
    /// Wilson 95% interval on `p_succ` from pooled counts; degenerate for
    /// exact runs.
    pub ci: (f64, f64),
    pub ci_method: String,
    pub oracle_calls_per_circuit: u64,
    pub expected_calls_quantum: Option<f64>,
    pub classical_single_call: f64,
    pub classical_guess: f64,
    pub classical_expected_calls: f64,
}

impl Metrics {
    pub fn compute(runs: &[OracleRun], p_t: f64, oracle_calls: u64) -> Result<Metrics, AnalysisError> {
        let first = runs.first().ok_or(AnalysisError::Empty)?;
        let n = first.mask.width();
        let probs: Vec<f64> = runs.iter().map(success_probability).collect();
        let p_succ = probs.iter().sum::<f64>() / probs.len() as f64;
        let p_succ_worst = probs.iter().copied().fold(f64::INFINITY, f64::min);
        let pooled = runs.iter().map(|r| r.successes().zip(r.shots())).collect::<Option<Vec<_>>>();
        let (ci, ci_method) = match pooled {
            Some(pairs) => {
                let (s, t) = pairs.iter().fold((0, 0), |(a, b), (s, t)| (a + s, b + t));
                (confidence_interval(s, t)?, "wilson-95".to_string())
            }
            None => ((p_succ, p_succ), "exact".to_string()),
        };
        let classical = classical_baselines(n, oracle_calls.clamp(1, 1 << n))?;
        Ok(Metrics {
            p_succ,
            p_succ_worst,
            p_t,
            r: r_metric(p_succ, p_t)?,
            ci,
            ci_method,
            oracle_calls_per_circuit: oracle_calls,
            expected_calls_quantum: expected_quantum_calls(p_succ, oracle_calls).ok(),
            classical_single_call: classical.single_model,
            classical_guess: classical.guess_model,
            classical_expected_calls: classical.expected_calls,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(s: &str) -> Pattern {
        s.parse().unwrap()
    }

    #[test]
    fn success_from_counts() {
        let mut counts = vec![0u64; 4];
        counts[0b10] = 300;
        counts[0b01] = 700;
        let run = OracleRun::new(pat("10"), Distribution::sampled(2, counts)).unwrap();
        assert!((success_probability(&run) - 0.30).abs() < 1e-15);
    }

    #[test]
    fn uniform_success() {
        let run = OracleRun::new(pat("1011"), Distribution::exact(4, vec![1.0 / 16.0; 16])).unwrap();
        assert_eq!(success_probability(&run), 0.0625);
    }

    #[test]
    fn relabel_single_run() {
        let mut probs = vec![0.0; 8];
        probs[0b111] = 1.0;
        let run = OracleRun::new(pat("101"), Distribution::exact(3, probs)).unwrap();
        let avg = relabel_average(&[run]).unwrap();
        assert_eq!(avg[0b010], 1.0);
    }

    #[test]
    fn relabel_uniform_stays_uniform() {
        let u = Distribution::exact(2, vec![0.25; 4]);
        let runs = [OracleRun::new(pat("00"), u.clone()).unwrap(), OracleRun::new(pat("11"), u).unwrap()];
        assert_eq!(relabel_average(&runs).unwrap(), vec![0.25; 4]);
        assert_eq!(relabel_average(&[]), Err(AnalysisError::Empty));
    }

    #[test]
    fn r_values() {
        assert!((r_metric(0.6614, 0.78125).unwrap() - 0.8466).abs() < 1e-4);
        assert_eq!(r_metric(0.9518, 1.0).unwrap(), 0.9518);
        assert_eq!(r_metric(0.3, 0.3).unwrap(), 1.0);
        assert_eq!(r_metric(0.3, 0.0), Err(AnalysisError::ZeroTheoretical));
    }

    #[test]
    fn baselines() {
        assert_eq!(classical_baselines(4, 1).unwrap().single_model, 0.0625);
        assert_eq!(classical_baselines(6, 1).unwrap().guess_model, 2.0 / 64.0);
        assert_eq!(classical_baselines(2, 1).unwrap().expected_calls, 2.5);
        assert_eq!(classical_baselines(2, 4).unwrap().guess_model, 1.0);
        assert!(classical_baselines(2, 0).is_err());
        assert!(classical_baselines(2, 5).is_err());
    }

    #[test]
    fn expected_calls() {
        assert!((expected_quantum_calls(0.66, 1).unwrap() - 1.515).abs() < 1e-3);
        assert!((expected_quantum_calls(0.26, 1).unwrap() - 3.846).abs() < 1e-3);
        assert_eq!(expected_quantum_calls(1.0, 4).unwrap(), 4.0);
        assert_eq!(expected_quantum_calls(0.0, 1), Err(AnalysisError::ZeroSuccess));
    }

    #[test]
    fn wilson_examples() {
        assert_eq!(confidence_interval(0, 100).unwrap().0, 0.0);
        let (lo, hi) = confidence_interval(50, 100).unwrap();
        assert!(((0.5 - lo) - (hi - 0.5)).abs() < 1e-9);
        let (lo, hi) = confidence_interval(662, 1000).unwrap();
        // Wilson bounds for 662/1000 are (0.63211, 0.69065)
        assert!((lo - 0.632_111_575).abs() < 1e-8 && (hi - 0.690_648_555).abs() < 1e-8);
        assert!(lo > 0.63 && hi < 0.691 && lo < 0.662 && 0.662 < hi);
        assert!(confidence_interval(5, 4).is_err());
        assert!(confidence_interval(0, 0).is_err());
    }
}
