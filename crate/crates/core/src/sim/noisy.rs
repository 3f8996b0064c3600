use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind};
use crate::synth::lower;

use super::exact::terminal_measurements;
use super::{check_width, clbit_mask, Distribution, SimError, StateVector, MAX_CLBITS, MAX_EXACT_QUBITS};

/// Stochastic Pauli noise on the lowered circuit plus symmetric readout
/// error.
///
/// After every one-qubit gate, with probability `p1`, one of `X, Y, Z` is
/// applied uniformly at random; after every two-qubit gate, with probability
/// `p2`, one of the 15 non-identity two-qubit Paulis. Each stored
/// measurement result is flipped with probability `p_meas`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    #[serde(default)]
    pub p1: f64,
    #[serde(default)]
    pub p2: f64,
    #[serde(default)]
    pub p_meas: f64,
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        NoiseModel::default()
    }

    pub fn is_noiseless(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.p_meas == 0.0
    }

    pub fn validate(&self) -> Result<(), SimError> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p_meas", self.p_meas)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(SimError::BadNoise { name, value });
            }
        }
        Ok(())
    }
}

fn apply_pauli(state: &mut StateVector, q: usize, code: u64) {
    match code {
        1 => state.x(q),
        2 => state.y(q),
        3 => state.z(q),
        _ => {}
    }
}

struct Trajectory<'a> {
    circuit: &'a Circuit,
    terminal: &'a [bool],
    noise: NoiseModel,
}

impl Trajectory<'_> {
    fn run(&self, rng: &mut ChaCha8Rng) -> Result<u64, SimError> {
        let m = self.circuit.n_clbits();
        let mut state = StateVector::zero(self.circuit.n_qubits());
        let mut bits = 0u64;
        let mut reads = Vec::new();
        for (i, instr) in self.circuit.instructions().iter().enumerate() {
            if let Some(cond) = instr.condition {
                if (bits & clbit_mask(m, cond.clbit) != 0) != cond.value {
                    continue;
                }
            }
            match instr.kind {
                GateKind::Barrier => continue,
                GateKind::Measure { qubit, clbit } => {
                    if self.terminal[i] {
                        reads.push((qubit, clbit));
                        continue;
                    }
                    let p1 = state.prob_one(qubit);
                    let outcome = rng.gen::<f64>() < p1;
                    state.project(qubit, outcome);
                    let keep = if outcome { p1 } else { 1.0 - p1 };
                    state.scale(1.0 / keep.sqrt());
                    let stored = outcome ^ self.readout_flip(rng);
                    let b = clbit_mask(m, clbit);
                    bits = if stored { bits | b } else { bits & !b };
                }
                ref kind => {
                    state.apply(kind)?;
                    self.gate_noise(&mut state, &kind.qubits(), rng);
                }
            }
        }
        if !reads.is_empty() {
            let idx = sample_index(&state, rng);
            for (q, c) in reads {
                let stored = (idx & state.bit(q) != 0) ^ self.readout_flip(rng);
                let b = clbit_mask(m, c);
                bits = if stored { bits | b } else { bits & !b };
            }
        }
        Ok(bits)
    }

    fn readout_flip(&self, rng: &mut ChaCha8Rng) -> bool {
        self.noise.p_meas > 0.0 && rng.gen::<f64>() < self.noise.p_meas
    }

    fn gate_noise(&self, state: &mut StateVector, qubits: &[usize], rng: &mut ChaCha8Rng) {
        let p = match qubits.len() {
            1 => self.noise.p1,
            2 => self.noise.p2,
            _ => return,
        };
        if p == 0.0 || rng.gen::<f64>() >= p {
            return;
        }
        let k = qubits.len() as u32;
        let mut code = rng.gen_range(1..4u64.pow(k));
        for &q in qubits.iter().rev() {
            apply_pauli(state, q, code % 4);
            code /= 4;
        }
    }
}

fn sample_index(state: &StateVector, rng: &mut ChaCha8Rng) -> usize {
    let total = state.norm_sqr();
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    let amps = state.amplitudes();
    for (i, a) in amps.iter().enumerate() {
        acc += a.norm_sqr();
        if r < acc {
            return i;
        }
    }
    // rounding at the top end: last non-zero entry
    amps.iter().rposition(|a| a.norm_sqr() > 0.0).unwrap_or(0)
}

/// Samples `shots` noisy trajectories of the lowered circuit.
///
/// Trajectory `t` draws from a ChaCha8 stream selected by `t` under `seed`,
/// so the result depends only on `(circuit, noise, shots, seed)` and not on
/// thread scheduling.
pub fn run_noisy(circuit: &Circuit, noise: &NoiseModel, shots: u64, seed: u64) -> Result<Distribution, SimError> {
    check_width("qubits", circuit.n_qubits(), MAX_EXACT_QUBITS)?;
    check_width("classical bits", circuit.n_clbits(), MAX_CLBITS)?;
    noise.validate()?;
    let lowered = lower(circuit);
    let terminal = terminal_measurements(&lowered);
    let traj = Trajectory { circuit: &lowered, terminal: &terminal, noise: *noise };
    let width = circuit.n_clbits();
    let counts = (0..shots)
        .into_par_iter()
        .try_fold(
            || vec![0u64; 1 << width],
            |mut acc, t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(t);
                let outcome = traj.run(&mut rng)?;
                acc[outcome as usize] += 1;
                Ok::<_, SimError>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; 1 << width],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                Ok(a)
            },
        )?;
    Ok(Distribution::sampled(width, counts))
}
