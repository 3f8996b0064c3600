use std::collections::HashMap;

use crate::circuit::{Circuit, Control, GateKind, Instruction};

use super::exact::terminal_measurements;
use super::SimError;

/// Rewrites mid-circuit measurements into coherent copies.
///
/// Each non-terminal `measure q -> c` becomes `cx q -> f` onto a fresh qubit
/// `f`; instructions conditioned on `c == v` gain a control on `f` with
/// polarity `v`, and `measure f -> c` is appended at the end. The outcome
/// distribution is unchanged. Only X, Z, CX and CZ can carry conditions
/// through this rewrite.
pub fn defer_measurements(circuit: &Circuit) -> Result<Circuit, SimError> {
    let terminal = terminal_measurements(circuit);
    let mut fresh: HashMap<usize, usize> = HashMap::new();
    let mut next_qubit = circuit.n_qubits();
    let mut out = Vec::with_capacity(circuit.len());
    let mut tail = Vec::new();
    for (i, instr) in circuit.instructions().iter().enumerate() {
        if let GateKind::Measure { qubit, clbit } = instr.kind {
            if instr.condition.is_some() {
                return Err(SimError::UnsupportedDeferral { index: i, gate: instr.kind.name().to_string() });
            }
            if terminal[i] {
                out.push(instr.clone());
                continue;
            }
            let f = next_qubit;
            next_qubit += 1;
            fresh.insert(clbit, f);
            out.push(Instruction::new(GateKind::cx(qubit, f)));
            tail.push(Instruction::new(GateKind::Measure { qubit: f, clbit }));
            continue;
        }
        let Some(cond) = instr.condition else {
            out.push(instr.clone());
            continue;
        };
        let Some(&f) = fresh.get(&cond.clbit) else {
            // the bit is never written, so it reads 0
            if !cond.value {
                out.push(Instruction::new(instr.kind.clone()));
            }
            continue;
        };
        let guard = Control::new(f, cond.value);
        let kind = match &instr.kind {
            GateKind::PauliX(t) => GateKind::ControlledX { controls: vec![guard], target: *t },
            GateKind::PauliZ(t) => GateKind::ControlledZ { qubits: vec![guard, Control::on(*t)] },
            GateKind::ControlledX { controls, target } => {
                let mut c = controls.clone();
                c.push(guard);
                GateKind::ControlledX { controls: c, target: *target }
            }
            GateKind::ControlledZ { qubits } => {
                let mut q = qubits.clone();
                q.push(guard);
                GateKind::ControlledZ { qubits: q }
            }
            GateKind::Barrier => GateKind::Barrier,
            other => return Err(SimError::UnsupportedDeferral { index: i, gate: other.name().to_string() }),
        };
        out.push(Instruction::new(kind));
    }
    out.extend(tail);
    Ok(Circuit::from_instructions(next_qubit, circuit.n_clbits(), out)?.with_metadata(circuit.metadata().clone()))
}
