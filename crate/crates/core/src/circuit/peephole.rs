//! Inverse-pair cancellation and trailing-uncompute removal.
//!
//! Together these implement partial uncompute: when an ancilla is
//! uncomputed by one fragment and recomputed by the next with only
//! disjoint-support instructions in between, the pair cancels; an uncompute
//! whose ancilla is never observed again can be dropped.

use super::{Circuit, GateKind, Instruction};

fn support(instr: &Instruction, n_qubits: usize) -> (Vec<usize>, Vec<usize>) {
    let qubits = match instr.kind {
        GateKind::Barrier => (0..n_qubits).collect(),
        ref k => k.qubits(),
    };
    (qubits, instr.clbits())
}

fn overlaps(a: &(Vec<usize>, Vec<usize>), b: &(Vec<usize>, Vec<usize>)) -> bool {
    a.0.iter().any(|q| b.0.contains(q)) || a.1.iter().any(|c| b.1.contains(c))
}

/// Repeatedly removes pairs `G ... G^-1` acting on the same qubits under the
/// same condition, where every instruction between them has support disjoint
/// from the pair. Measurements and barriers never cancel.
pub fn peephole_cancel(circuit: &Circuit) -> Circuit {
    let n = circuit.n_qubits();
    let mut instrs: Vec<Instruction> = circuit.instructions().to_vec();
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < instrs.len() {
            let here = support(&instrs[i], n);
            let partner = (i + 1..instrs.len()).find(|&j| overlaps(&here, &support(&instrs[j], n)));
            if let Some(j) = partner {
                if instrs[i].condition == instrs[j].condition && instrs[i].kind.is_inverse_of(&instrs[j].kind) {
                    instrs.remove(j);
                    instrs.remove(i);
                    changed = true;
                    continue;
                }
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    Circuit::from_instructions(n, circuit.n_clbits(), instrs)
        .expect("removing inverse pairs keeps a circuit valid")
        .with_metadata(circuit.metadata().clone())
}

fn target_and_controls(kind: &GateKind) -> Option<(usize, Vec<usize>)> {
    match kind {
        GateKind::RelPhaseCCX { qubits, .. } => Some((qubits[2], qubits[..2].to_vec())),
        GateKind::RelPhaseCCCX { qubits, .. } => Some((qubits[3], qubits[..3].to_vec())),
        GateKind::ControlledX { controls, target } => Some((*target, controls.iter().map(|c| c.qubit).collect())),
        _ => None,
    }
}

fn droppable(instrs: &[Instruction], i: usize) -> bool {
    if instrs[i].condition.is_some() {
        return false;
    }
    let Some((target, controls)) = target_and_controls(&instrs[i].kind) else {
        return false;
    };
    instrs[i + 1..].iter().all(|later| {
        if later.condition.is_some() {
            return false;
        }
        let qs = later.kind.qubits();
        if matches!(later.kind, GateKind::Barrier) {
            return true;
        }
        if qs.contains(&target) {
            return false;
        }
        if qs.iter().any(|q| controls.contains(q)) {
            // only basis-preserving single-qubit actions on the controls
            return matches!(
                later.kind,
                GateKind::PauliX(_) | GateKind::PauliZ(_) | GateKind::PhaseRz { .. } | GateKind::Measure { .. }
            );
        }
        true
    })
}

/// Removes compute/uncompute gates (`CX`-family or relative-phase Toffolis)
/// whose target qubit is never touched again and whose controls are only
/// read out afterwards. Such a gate cannot change the distribution of any
/// later measurement. Runs [`peephole_cancel`] between removals so exposed
/// `X` conjugation pairs disappear too.
pub fn drop_trailing_uncompute(circuit: &Circuit) -> Circuit {
    let mut current = peephole_cancel(circuit);
    loop {
        let instrs = current.instructions();
        let Some(i) = (0..instrs.len()).rev().find(|&i| droppable(instrs, i)) else {
            return current;
        };
        let mut kept = instrs.to_vec();
        kept.remove(i);
        let next = Circuit::from_instructions(current.n_qubits(), current.n_clbits(), kept)
            .expect("removing a unitary keeps a circuit valid")
            .with_metadata(current.metadata().clone());
        current = peephole_cancel(&next);
    }
}
