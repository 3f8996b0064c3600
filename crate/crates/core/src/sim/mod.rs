//! Simulation: exact branching statevector runs, dense unitaries of
//! measurement-free fragments, noisy Monte-Carlo trajectories and the
//! deferred-measurement rewrite.

mod defer;
mod distribution;
mod exact;
mod matrix;
mod noisy;
mod state;

pub use defer::defer_measurements;
pub use distribution::Distribution;
pub use exact::{branch_operators, run_exact, run_exact_from, terminal_measurements, unitary_of};
pub use matrix::DenseMatrix;
pub use noisy::{run_noisy, NoiseModel};
pub use state::StateVector;

use thiserror::Error;

/// Largest register an exact run will allocate a statevector for.
pub const MAX_EXACT_QUBITS: usize = 24;
/// Largest register a dense unitary is built for.
pub const MAX_UNITARY_QUBITS: usize = 12;
/// Largest classical register an outcome table is built for.
pub const MAX_CLBITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("circuit needs {needed} {what}, limit is {limit}")]
    TooWide { what: &'static str, needed: usize, limit: usize },
    #[error("a unitary is only defined for measurement-free circuits")]
    HasMeasurement,
    #[error("cannot defer measurement: gate '{gate}' at instruction {index} is classically conditioned")]
    UnsupportedDeferral { index: usize, gate: String },
    #[error("noise probability {name}={value} is outside [0, 1]")]
    BadNoise { name: &'static str, value: f64 },
    #[error("initial state has {got} qubits, circuit has {expected}")]
    StateWidth { expected: usize, got: usize },
    #[error(transparent)]
    Circuit(#[from] crate::circuit::CircuitError),
}

pub(crate) fn check_width(what: &'static str, needed: usize, limit: usize) -> Result<(), SimError> {
    if needed > limit {
        Err(SimError::TooWide { what, needed, limit })
    } else {
        Ok(())
    }
}

/// Bit of classical register index `c` inside an outcome word of width `m`
/// (`c0` is the most significant bit, like qubits).
#[inline]
pub(crate) fn clbit_mask(m: usize, c: usize) -> u64 {
    1u64 << (m - 1 - c)
}
