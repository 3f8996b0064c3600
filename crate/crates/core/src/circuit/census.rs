use std::collections::BTreeMap;
use std::ops::Add;

use serde::{Deserialize, Serialize};

use super::{Circuit, CircuitError, GateKind};

/// Gate counts of a fully lowered circuit. Every two-qubit gate (CX or CZ)
/// counts as one entangling gate; single-qubit gates are tallied separately.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCensus {
    pub two_qubit_count: usize,
    pub one_qubit_count: usize,
    pub measure_count: usize,
    pub per_kind: BTreeMap<String, usize>,
}

impl GateCensus {
    pub fn of(circuit: &Circuit) -> Result<Self, CircuitError> {
        let mut census = GateCensus::default();
        for (index, instr) in circuit.instructions().iter().enumerate() {
            let kind = &instr.kind;
            match kind {
                GateKind::Barrier => continue,
                GateKind::Measure { .. } => census.measure_count += 1,
                GateKind::PauliX(_) | GateKind::PauliZ(_) | GateKind::Hadamard(_) | GateKind::PhaseRz { .. } => {
                    census.one_qubit_count += 1
                }
                GateKind::ControlledX { controls, .. } if controls.len() == 1 => census.two_qubit_count += 1,
                GateKind::ControlledZ { qubits } if qubits.len() == 2 => census.two_qubit_count += 1,
                GateKind::ControlledZ { qubits } if qubits.len() == 1 => census.one_qubit_count += 1,
                _ => return Err(CircuitError::NotLowered { index, gate: kind.name().to_string() }),
            }
            let name = match kind {
                GateKind::ControlledZ { qubits } if qubits.len() == 1 => "z",
                _ => kind.name(),
            };
            *census.per_kind.entry(name.to_string()).or_default() += 1;
        }
        Ok(census)
    }

    pub fn cx_count(&self) -> usize {
        self.per_kind.get("cx").copied().unwrap_or(0)
    }

    pub fn cz_count(&self) -> usize {
        self.per_kind.get("cz").copied().unwrap_or(0)
    }
}

impl Add for GateCensus {
    type Output = GateCensus;

    fn add(mut self, rhs: GateCensus) -> GateCensus {
        self.two_qubit_count += rhs.two_qubit_count;
        self.one_qubit_count += rhs.one_qubit_count;
        self.measure_count += rhs.measure_count;
        for (k, v) in rhs.per_kind {
            *self.per_kind.entry(k).or_default() += v;
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Control;

    #[test]
    fn counts_direct() {
        let c = Circuit::from_instructions(
            2,
            0,
            [GateKind::Hadamard(0).into(), GateKind::cx(0, 1).into(), GateKind::cx(0, 1).into()],
        )
        .unwrap();
        let census = c.census().unwrap();
        assert_eq!(census.two_qubit_count, 2);
        assert_eq!(census.one_qubit_count, 1);
        assert_eq!(census.cx_count(), 2);
    }

    #[test]
    fn three_qubit_gate_is_not_lowered() {
        let c = Circuit::from_instructions(
            3,
            0,
            [
                GateKind::Hadamard(0).into(),
                GateKind::ControlledZ { qubits: vec![Control::on(0), Control::on(1), Control::on(2)] }.into(),
            ],
        )
        .unwrap();
        assert_eq!(
            c.census().unwrap_err(),
            CircuitError::NotLowered { index: 1, gate: "mcz".into() }
        );
    }
}
