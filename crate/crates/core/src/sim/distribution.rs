use serde::{Deserialize, Serialize};

/// Probability table over classical outcome words. Outcome `x` is read with
/// `c0` as its most significant bit, matching [`crate::Pattern`] values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum Distribution {
    Exact { width: usize, probs: Vec<f64> },
    Sampled { width: usize, shots: u64, counts: Vec<u64> },
}

impl Distribution {
    pub fn exact(width: usize, probs: Vec<f64>) -> Self {
        assert_eq!(probs.len(), 1 << width, "probability table length");
        Distribution::Exact { width, probs }
    }

    pub fn sampled(width: usize, counts: Vec<u64>) -> Self {
        assert_eq!(counts.len(), 1 << width, "count table length");
        let shots = counts.iter().sum();
        Distribution::Sampled { width, shots, counts }
    }

    pub fn width(&self) -> usize {
        match self {
            Distribution::Exact { width, .. } | Distribution::Sampled { width, .. } => *width,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Distribution::Exact { .. })
    }

    pub fn shots(&self) -> Option<u64> {
        match self {
            Distribution::Exact { .. } => None,
            Distribution::Sampled { shots, .. } => Some(*shots),
        }
    }

    /// Probability (or empirical frequency) of `outcome`.
    pub fn prob(&self, outcome: u64) -> f64 {
        match self {
            Distribution::Exact { probs, .. } => probs.get(outcome as usize).copied().unwrap_or(0.0),
            Distribution::Sampled { shots, counts, .. } => {
                if *shots == 0 {
                    0.0
                } else {
                    counts.get(outcome as usize).copied().unwrap_or(0) as f64 / *shots as f64
                }
            }
        }
    }

    /// Raw count of `outcome` for sampled tables.
    pub fn count(&self, outcome: u64) -> Option<u64> {
        match self {
            Distribution::Exact { .. } => None,
            Distribution::Sampled { counts, .. } => Some(counts.get(outcome as usize).copied().unwrap_or(0)),
        }
    }

    pub fn probabilities(&self) -> Vec<f64> {
        (0..1u64 << self.width()).map(|x| self.prob(x)).collect()
    }

    /// Marginal over the leading `k` classical bits (`c0..c{k-1}`).
    pub fn marginal_leading(&self, k: usize) -> Distribution {
        let w = self.width();
        assert!(k <= w, "marginal width {k} exceeds {w}");
        let shift = w - k;
        match self {
            Distribution::Exact { probs, .. } => {
                let mut out = vec![0.0; 1 << k];
                for (x, p) in probs.iter().enumerate() {
                    out[x >> shift] += p;
                }
                Distribution::Exact { width: k, probs: out }
            }
            Distribution::Sampled { shots, counts, .. } => {
                let mut out = vec![0u64; 1 << k];
                for (x, c) in counts.iter().enumerate() {
                    out[x >> shift] += c;
                }
                Distribution::Sampled { width: k, shots: *shots, counts: out }
            }
        }
    }

    /// Relabels outcomes `x -> x XOR mask`.
    pub fn relabel(&self, mask: u64) -> Distribution {
        let perm = |x: usize| (x as u64 ^ mask) as usize;
        match self {
            Distribution::Exact { width, probs } => {
                let mut out = vec![0.0; probs.len()];
                for (x, p) in probs.iter().enumerate() {
                    out[perm(x)] = *p;
                }
                Distribution::Exact { width: *width, probs: out }
            }
            Distribution::Sampled { width, shots, counts } => {
                let mut out = vec![0; counts.len()];
                for (x, c) in counts.iter().enumerate() {
                    out[perm(x)] = *c;
                }
                Distribution::Sampled { width: *width, shots: *shots, counts: out }
            }
        }
    }

    pub fn total_mass(&self) -> f64 {
        self.probabilities().iter().sum()
    }

    /// Total-variation distance to `other` (same width required).
    pub fn total_variation(&self, other: &Distribution) -> f64 {
        assert_eq!(self.width(), other.width(), "width mismatch");
        let (a, b) = (self.probabilities(), other.probabilities());
        0.5 * a.iter().zip(&b).map(|(x, y)| (x - y).abs()).sum::<f64>()
    }
}
