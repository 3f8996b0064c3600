//! Unstructured-search circuits at desk scale.
//!
//! The crate is split the same way the workflow is:
//!
//! * [`circuit`] — the gate-level IR, gate census, peephole cancellation and
//!   the QASM-flavoured text format.
//! * [`synth`] — diffusers, phase oracles, multi-controlled Z decompositions
//!   (exact, relative-phase and measurement-assisted) and lowering to one- and
//!   two-qubit gates.
//! * [`families`] — the Grover, partial-diffuser, Wojter, Drzewker and
//!   Wielomianer circuit constructors.
//! * [`sim`] — exact branching statevector simulation, dense unitaries and
//!   noisy trajectory sampling.
//! * [`analysis`] — success probability, oracle-relabelled averaging, the
//!   `R` effectiveness ratio, Wilson intervals and classical baselines.

pub mod analysis;
pub mod circuit;
pub mod families;
pub mod pattern;
pub mod sim;
pub mod synth;

pub use circuit::{Circuit, CircuitError, Condition, Control, Direction, GateCensus, GateKind, Instruction};
pub use pattern::Pattern;
