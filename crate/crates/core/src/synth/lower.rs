//! Lowering to `{X, Z, H, phase, CX, CZ}` with positive polarity.

use std::f64::consts::PI;

use crate::circuit::{Circuit, Condition, Control, GateKind, Instruction};

use super::relphase::{rccx_gates, rcccx_gates};

/// Exact `C^{k-1}Z` on `qubits` with no ancilla, as a phase polynomial.
///
/// The product `x_1 x_2 ... x_k` equals `2^{1-k} * sum_S (-1)^{|S|-1} parity(S)`
/// over all non-empty subsets `S`. Each parity is accumulated on the last
/// qubit of the current prefix while walking a Gray code over the remaining
/// qubits, giving `2^k - 2` CX in total (6 for CCZ).
pub fn phase_polynomial_mcz(qubits: &[usize]) -> Vec<GateKind> {
    let k = qubits.len();
    let mut out = Vec::new();
    match k {
        0 => {}
        1 => out.push(GateKind::PauliZ(qubits[0])),
        2 => out.push(GateKind::cz(qubits[0], qubits[1])),
        _ => emit_parities(qubits, PI / (1u64 << (k - 1)) as f64, &mut out),
    }
    out
}

fn emit_parities(qubits: &[usize], unit: f64, out: &mut Vec<GateKind>) {
    let Some((&acc, rest)) = qubits.split_last() else {
        return;
    };
    // subsets containing `acc`; sign alternates with subset size
    let sign = |size: u32| if size % 2 == 1 { 1.0 } else { -1.0 };
    out.push(GateKind::phase(acc, unit));
    let m = rest.len();
    if m > 0 {
        for i in 1u64..(1 << m) {
            let flip = i.trailing_zeros() as usize;
            out.push(GateKind::cx(rest[flip], acc));
            let gray = i ^ (i >> 1);
            out.push(GateKind::phase(acc, sign(gray.count_ones() + 1) * unit));
        }
        // the Gray walk ends on the single highest element
        out.push(GateKind::cx(rest[m - 1], acc));
    }
    emit_parities(rest, unit, out);
}

fn flips(controls: &[Control]) -> Vec<GateKind> {
    controls.iter().filter(|c| !c.on).map(|c| GateKind::PauliX(c.qubit)).collect()
}

/// Lowers one gate kind (ignoring any condition).
pub fn lower_gate(kind: &GateKind) -> Vec<GateKind> {
    match kind {
        GateKind::ControlledX { controls, target } => {
            let pre = flips(controls);
            let mut out = pre.clone();
            if controls.len() == 1 {
                out.push(GateKind::cx(controls[0].qubit, *target));
            } else {
                let mut qs: Vec<usize> = controls.iter().map(|c| c.qubit).collect();
                qs.push(*target);
                out.push(GateKind::Hadamard(*target));
                out.extend(phase_polynomial_mcz(&qs));
                out.push(GateKind::Hadamard(*target));
            }
            out.extend(pre);
            out
        }
        GateKind::ControlledZ { qubits } => {
            let pre = flips(qubits);
            let qs: Vec<usize> = qubits.iter().map(|c| c.qubit).collect();
            let mut out = pre.clone();
            out.extend(phase_polynomial_mcz(&qs));
            out.extend(pre);
            out
        }
        GateKind::RelPhaseCCX { qubits, direction } => rccx_gates(*qubits, *direction),
        GateKind::RelPhaseCCCX { qubits, direction } => rcccx_gates(*qubits, *direction),
        other => vec![other.clone()],
    }
}

fn emit(out: &mut Vec<Instruction>, gates: Vec<GateKind>, condition: Option<Condition>) {
    out.extend(gates.into_iter().map(|kind| Instruction { kind, condition }));
}

/// Rewrites a circuit into one- and two-qubit gates with positive polarity.
/// Conditions are copied onto every emitted gate; the result is exactly
/// equal (no global phase) to the input.
pub fn lower(circuit: &Circuit) -> Circuit {
    let mut out = Vec::with_capacity(circuit.len() * 4);
    for instr in circuit.instructions() {
        emit(&mut out, lower_gate(&instr.kind), instr.condition);
    }
    Circuit::from_instructions(circuit.n_qubits(), circuit.n_clbits(), out)
        .expect("lowering preserves operands and conditions")
        .with_metadata(circuit.metadata().clone())
}

/// `lower` followed by inverse-pair cancellation.
pub fn lower_and_cancel(circuit: &Circuit) -> Circuit {
    crate::circuit::peephole_cancel(&lower(circuit))
}
