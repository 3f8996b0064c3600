//! Relative-phase Toffoli primitives.
//!
//! Both sequences use only `H`, phase rotations and CX. The CCX variant
//! (Margolus class) costs three CX and the `C^3X` variant six. Each matches
//! the corresponding Toffoli permutation up to basis-dependent phases, so it
//! is only exact when paired with its adjoint around a computation that is
//! diagonal in the target's computational basis.

use std::f64::consts::FRAC_PI_4;

use crate::circuit::{Direction, GateKind};

fn t(q: usize) -> GateKind {
    GateKind::phase(q, FRAC_PI_4)
}

fn tdg(q: usize) -> GateKind {
    GateKind::phase(q, -FRAC_PI_4)
}

fn adjoint(seq: Vec<GateKind>) -> Vec<GateKind> {
    seq.into_iter().rev().map(|g| g.inverse().expect("unitary gate")).collect()
}

/// Lowered relative-phase Toffoli on `[c0, c1, target]`.
pub fn rccx_gates(qubits: [usize; 3], direction: Direction) -> Vec<GateKind> {
    let [a, b, c] = qubits;
    let fwd = vec![
        GateKind::Hadamard(c),
        t(c),
        GateKind::cx(b, c),
        tdg(c),
        GateKind::cx(a, c),
        t(c),
        GateKind::cx(b, c),
        tdg(c),
        GateKind::Hadamard(c),
    ];
    match direction {
        Direction::Forward => fwd,
        Direction::Inverse => adjoint(fwd),
    }
}

/// Lowered relative-phase `C^3X` on `[c0, c1, c2, target]`.
pub fn rcccx_gates(qubits: [usize; 4], direction: Direction) -> Vec<GateKind> {
    let [a, b, c, d] = qubits;
    let fwd = vec![
        GateKind::Hadamard(d),
        t(d),
        GateKind::cx(c, d),
        tdg(d),
        GateKind::Hadamard(d),
        GateKind::cx(a, d),
        t(d),
        GateKind::cx(b, d),
        tdg(d),
        GateKind::cx(a, d),
        t(d),
        GateKind::cx(b, d),
        tdg(d),
        GateKind::Hadamard(d),
        t(d),
        GateKind::cx(c, d),
        tdg(d),
        GateKind::Hadamard(d),
    ];
    match direction {
        Direction::Forward => fwd,
        Direction::Inverse => adjoint(fwd),
    }
}
