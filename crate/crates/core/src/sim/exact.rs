use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::circuit::{Circuit, GateKind};

use super::{
    check_width, clbit_mask, DenseMatrix, Distribution, SimError, StateVector, MAX_CLBITS, MAX_EXACT_QUBITS,
    MAX_UNITARY_QUBITS,
};

/// Branches whose squared norm falls below this are dropped.
const PRUNE: f64 = 1e-28;

/// Flags each instruction that is a measurement nothing later depends on:
/// no later instruction touches its qubit or reads its classical bit. Such
/// measurements commute to the end and are read off the final amplitudes
/// instead of splitting the run.
pub fn terminal_measurements(circuit: &Circuit) -> Vec<bool> {
    let instrs = circuit.instructions();
    let mut qubit_used = vec![false; circuit.n_qubits()];
    let mut clbit_used = vec![false; circuit.n_clbits()];
    let mut out = vec![false; instrs.len()];
    for (i, instr) in instrs.iter().enumerate().rev() {
        if let GateKind::Measure { qubit, clbit } = instr.kind {
            out[i] = instr.condition.is_none() && !qubit_used[qubit] && !clbit_used[clbit];
        }
        for q in instr.kind.qubits() {
            qubit_used[q] = true;
        }
        for c in instr.clbits() {
            clbit_used[c] = true;
        }
    }
    out
}

pub(super) struct Branch {
    pub state: StateVector,
    pub bits: u64,
}

/// Runs every instruction over all measurement branches. Branch states stay
/// unnormalised so their squared norms are the branch probabilities.
/// Returns the branches and the deferred (qubit, clbit) terminal reads.
fn evolve(
    circuit: &Circuit,
    init: StateVector,
    defer_terminal: bool,
) -> Result<(Vec<Branch>, Vec<(usize, usize)>), SimError> {
    let m = circuit.n_clbits();
    let terminal = if defer_terminal { terminal_measurements(circuit) } else { vec![false; circuit.len()] };
    let mut branches = vec![Branch { state: init, bits: 0 }];
    let mut reads = Vec::new();
    for (i, instr) in circuit.instructions().iter().enumerate() {
        if let GateKind::Measure { qubit, clbit } = instr.kind {
            if terminal[i] {
                reads.push((qubit, clbit));
                continue;
            }
            let bit = clbit_mask(m, clbit);
            let mut next = Vec::with_capacity(branches.len() * 2);
            for br in branches {
                if let Some(cond) = instr.condition {
                    if (br.bits & clbit_mask(m, cond.clbit) != 0) != cond.value {
                        next.push(br);
                        continue;
                    }
                }
                let p1 = br.state.prob_one(qubit);
                let p0 = br.state.norm_sqr() - p1;
                if p1 > PRUNE {
                    let mut s = br.state.clone();
                    s.project(qubit, true);
                    next.push(Branch { state: s, bits: br.bits | bit });
                }
                if p0 > PRUNE {
                    let mut s = br.state;
                    s.project(qubit, false);
                    next.push(Branch { state: s, bits: br.bits & !bit });
                }
            }
            branches = next;
            continue;
        }
        for br in &mut branches {
            let fire = match instr.condition {
                None => true,
                Some(cond) => (br.bits & clbit_mask(m, cond.clbit) != 0) == cond.value,
            };
            if fire {
                br.state.apply(&instr.kind)?;
            }
        }
    }
    Ok((branches, reads))
}

/// Exact outcome distribution over the classical register, starting from
/// `|0...0>`. Mid-circuit measurements branch; classical bits never written
/// read as 0.
pub fn run_exact(circuit: &Circuit) -> Result<Distribution, SimError> {
    check_width("qubits", circuit.n_qubits(), MAX_EXACT_QUBITS)?;
    run_exact_from(circuit, StateVector::zero(circuit.n_qubits()))
}

/// [`run_exact`] from an arbitrary (normalised) initial state.
pub fn run_exact_from(circuit: &Circuit, init: StateVector) -> Result<Distribution, SimError> {
    check_width("qubits", circuit.n_qubits(), MAX_EXACT_QUBITS)?;
    check_width("classical bits", circuit.n_clbits(), MAX_CLBITS)?;
    if init.n_qubits() != circuit.n_qubits() {
        return Err(SimError::StateWidth { expected: circuit.n_qubits(), got: init.n_qubits() });
    }
    let m = circuit.n_clbits();
    let (branches, reads) = evolve(circuit, init, true)?;
    let mut probs = vec![0.0; 1 << m];
    for br in &branches {
        if reads.is_empty() {
            probs[br.bits as usize] += br.state.norm_sqr();
            continue;
        }
        let masks: Vec<(usize, u64)> = reads.iter().map(|&(q, c)| (br.state.bit(q), clbit_mask(m, c))).collect();
        for (idx, amp) in br.state.amplitudes().iter().enumerate() {
            let p = amp.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let mut word = br.bits;
            for &(qb, cb) in &masks {
                if idx & qb != 0 {
                    word |= cb;
                } else {
                    word &= !cb;
                }
            }
            probs[word as usize] += p;
        }
    }
    Ok(Distribution::exact(m, probs))
}

/// Dense unitary of a measurement-free circuit.
pub fn unitary_of(circuit: &Circuit) -> Result<DenseMatrix, SimError> {
    check_width("qubits", circuit.n_qubits(), MAX_UNITARY_QUBITS)?;
    if circuit.has_measurements() {
        return Err(SimError::HasMeasurement);
    }
    let n = circuit.n_qubits();
    let mut columns = Vec::with_capacity(1 << n);
    for j in 0..1usize << n {
        let mut s = StateVector::basis(n, j);
        for instr in circuit.instructions() {
            s.apply(&instr.kind)?;
        }
        columns.push(s.amplitudes().to_vec());
    }
    Ok(DenseMatrix::from_columns(columns))
}

/// Kraus-style branch operators of a fragment with measurements: for each
/// classical record, the (generally non-unitary) linear map applied to the
/// qubits when that record is observed. Summing `K^dagger K` over records
/// gives the identity.
pub fn branch_operators(circuit: &Circuit) -> Result<BTreeMap<u64, DenseMatrix>, SimError> {
    check_width("qubits", circuit.n_qubits(), MAX_UNITARY_QUBITS)?;
    check_width("classical bits", circuit.n_clbits(), MAX_CLBITS)?;
    let n = circuit.n_qubits();
    let dim = 1usize << n;
    let mut cols: BTreeMap<u64, Vec<Vec<Complex64>>> = BTreeMap::new();
    for j in 0..dim {
        let (branches, _) = evolve(circuit, StateVector::basis(n, j), false)?;
        for br in branches {
            let entry = cols.entry(br.bits).or_insert_with(|| vec![vec![Complex64::new(0.0, 0.0); dim]; dim]);
            entry[j] = br.state.amplitudes().to_vec();
        }
    }
    Ok(cols.into_iter().map(|(k, c)| (k, DenseMatrix::from_columns(c))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Control, Instruction};

    #[test]
    fn bell_pair_distribution() {
        let c = Circuit::from_instructions(
            2,
            2,
            [
                Instruction::new(GateKind::Hadamard(0)),
                Instruction::new(GateKind::cx(0, 1)),
                Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 }),
                Instruction::new(GateKind::Measure { qubit: 1, clbit: 1 }),
            ],
        )
        .unwrap();
        let d = run_exact(&c).unwrap();
        assert!((d.prob(0b00) - 0.5).abs() < 1e-12);
        assert!((d.prob(0b11) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn conditioned_reset_after_mid_measurement() {
        // H, measure, conditionally flip back, measure again: always 0 on c1.
        let c = Circuit::from_instructions(
            1,
            2,
            [
                Instruction::new(GateKind::Hadamard(0)),
                Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 }),
                Instruction::when(GateKind::PauliX(0), 0, true),
                Instruction::new(GateKind::Measure { qubit: 0, clbit: 1 }),
            ],
        )
        .unwrap();
        let t = terminal_measurements(&c);
        assert_eq!(t, vec![false, false, false, true]);
        let d = run_exact(&c).unwrap();
        assert!((d.prob(0b00) - 0.5).abs() < 1e-12);
        assert!((d.prob(0b10) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unitary_of_cz_is_diagonal() {
        let c = Circuit::from_instructions(
            2,
            0,
            [Instruction::new(GateKind::ControlledZ { qubits: vec![Control::on(0), Control::off(1)] })],
        )
        .unwrap();
        let u = unitary_of(&c).unwrap();
        assert_eq!(u.get(2, 2), Complex64::new(-1.0, 0.0));
        assert_eq!(u.get(3, 3), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn branch_operators_are_complete() {
        let c = Circuit::from_instructions(
            2,
            1,
            [
                Instruction::new(GateKind::Hadamard(0)),
                Instruction::new(GateKind::Measure { qubit: 0, clbit: 0 }),
                Instruction::when(GateKind::PauliX(1), 0, true),
            ],
        )
        .unwrap();
        let ops = branch_operators(&c).unwrap();
        let mut sum = DenseMatrix::zeros(4);
        for k in ops.values() {
            let p = k.adjoint().mul(k);
            for r in 0..4 {
                for col in 0..4 {
                    sum.set(r, col, sum.get(r, col) + p.get(r, col));
                }
            }
        }
        assert!(sum.frobenius_distance(&DenseMatrix::identity(4)) < 1e-12);
    }
}
