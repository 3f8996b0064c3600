//! Gate-level circuit representation with classical control.
//!
//! A [`Circuit`] is an ordered list of [`Instruction`]s over `n_qubits`
//! qubits and `n_clbits` write-once classical bits. Multi-controlled gates
//! carry per-control polarity; [`crate::synth::lower`] expands polarity into
//! `X` conjugation and decomposes everything into one- and two-qubit gates.

mod census;
mod peephole;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use census::GateCensus;
pub use peephole::{drop_trailing_uncompute, peephole_cancel};
pub use text::{parse, serialize};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CircuitError {
    #[error("instruction {index}: qubit {qubit} out of range for width {width}")]
    IndexOutOfRange { index: usize, qubit: usize, width: usize },
    #[error("instruction {index}: classical bit {clbit} out of range ({n_clbits} declared)")]
    ClbitOutOfRange { index: usize, clbit: usize, n_clbits: usize },
    #[error("instruction {index}: qubit {qubit} appears more than once")]
    DuplicateQubit { index: usize, qubit: usize },
    #[error("instruction {index}: gate needs at least {min} qubits")]
    TooFewQubits { index: usize, min: usize },
    #[error("instruction {index}: condition reads classical bit {clbit} before any measurement writes it")]
    UnwrittenClassicalBit { index: usize, clbit: usize },
    #[error("instruction {index}: classical bit {clbit} is already written")]
    RewrittenClassicalBit { index: usize, clbit: usize },
    #[error("instruction {index} ({gate}) is not lowered to one- and two-qubit gates")]
    NotLowered { index: usize, gate: String },
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
}

/// One control of a multi-controlled gate. `on == true` fires on `|1>`
/// (filled circle), `on == false` fires on `|0>` (open circle).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Control {
    pub qubit: usize,
    pub on: bool,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Control { qubit, on: true }
    }

    pub fn off(qubit: usize) -> Self {
        Control { qubit, on: false }
    }

    pub fn new(qubit: usize, on: bool) -> Self {
        Control { qubit, on }
    }
}

/// Direction of a relative-phase Toffoli primitive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Inverse,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Inverse,
            Direction::Inverse => Direction::Forward,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum GateKind {
    PauliX(usize),
    PauliZ(usize),
    Hadamard(usize),
    /// `diag(1, e^{i angle})`.
    PhaseRz { qubit: usize, angle: f64 },
    ControlledX { controls: Vec<Control>, target: usize },
    /// Symmetric `C^{k-1}Z`: `-1` on the basis state satisfying every polarity.
    ControlledZ { qubits: Vec<Control> },
    /// Relative-phase Toffoli; the last index is the target.
    RelPhaseCCX { qubits: [usize; 3], direction: Direction },
    /// Relative-phase `C^3X`; the last index is the target.
    RelPhaseCCCX { qubits: [usize; 4], direction: Direction },
    Measure { qubit: usize, clbit: usize },
    Barrier,
}

impl GateKind {
    pub fn cx(control: usize, target: usize) -> Self {
        GateKind::ControlledX { controls: vec![Control::on(control)], target }
    }

    pub fn cz(a: usize, b: usize) -> Self {
        GateKind::ControlledZ { qubits: vec![Control::on(a), Control::on(b)] }
    }

    pub fn phase(qubit: usize, angle: f64) -> Self {
        GateKind::PhaseRz { qubit, angle }
    }

    /// Qubits touched, controls first, target last.
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            GateKind::PauliX(q) | GateKind::PauliZ(q) | GateKind::Hadamard(q) => vec![*q],
            GateKind::PhaseRz { qubit, .. } => vec![*qubit],
            GateKind::ControlledX { controls, target } => {
                controls.iter().map(|c| c.qubit).chain(std::iter::once(*target)).collect()
            }
            GateKind::ControlledZ { qubits } => qubits.iter().map(|c| c.qubit).collect(),
            GateKind::RelPhaseCCX { qubits, .. } => qubits.to_vec(),
            GateKind::RelPhaseCCCX { qubits, .. } => qubits.to_vec(),
            GateKind::Measure { qubit, .. } => vec![*qubit],
            GateKind::Barrier => Vec::new(),
        }
    }

    pub fn is_measure(&self) -> bool {
        matches!(self, GateKind::Measure { .. })
    }

    /// The exact inverse, or `None` for non-unitary instructions.
    pub fn inverse(&self) -> Option<GateKind> {
        match self {
            GateKind::PhaseRz { qubit, angle } => Some(GateKind::PhaseRz { qubit: *qubit, angle: -angle }),
            GateKind::RelPhaseCCX { qubits, direction } => {
                Some(GateKind::RelPhaseCCX { qubits: *qubits, direction: direction.flip() })
            }
            GateKind::RelPhaseCCCX { qubits, direction } => {
                Some(GateKind::RelPhaseCCCX { qubits: *qubits, direction: direction.flip() })
            }
            GateKind::Measure { .. } | GateKind::Barrier => None,
            other => Some(other.clone()),
        }
    }

    /// Structural inverse test. Symmetric gates compare their qubit sets
    /// irrespective of order; everything else compares operands exactly.
    pub fn is_inverse_of(&self, other: &GateKind) -> bool {
        match (self, other) {
            (GateKind::PhaseRz { qubit: a, angle: x }, GateKind::PhaseRz { qubit: b, angle: y }) => {
                a == b && (x + y).abs() < 1e-12
            }
            (GateKind::ControlledZ { qubits: a }, GateKind::ControlledZ { qubits: b }) => {
                let mut a = a.clone();
                let mut b = b.clone();
                a.sort();
                b.sort();
                a == b
            }
            (
                GateKind::ControlledX { controls: a, target: s },
                GateKind::ControlledX { controls: b, target: t },
            ) => {
                let mut a = a.clone();
                let mut b = b.clone();
                a.sort();
                b.sort();
                s == t && a == b
            }
            _ => match self.inverse() {
                Some(inv) => &inv == other,
                None => false,
            },
        }
    }

    /// Short lowercase name used by the census and text format.
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::PauliX(_) => "x",
            GateKind::PauliZ(_) => "z",
            GateKind::Hadamard(_) => "h",
            GateKind::PhaseRz { .. } => "rz",
            GateKind::ControlledX { controls, .. } => match controls.len() {
                1 => "cx",
                2 => "ccx",
                3 => "cccx",
                _ => "mcx",
            },
            GateKind::ControlledZ { qubits } => match qubits.len() {
                2 => "cz",
                _ => "mcz",
            },
            GateKind::RelPhaseCCX { direction: Direction::Forward, .. } => "rccx",
            GateKind::RelPhaseCCX { direction: Direction::Inverse, .. } => "rccxdg",
            GateKind::RelPhaseCCCX { direction: Direction::Forward, .. } => "rcccx",
            GateKind::RelPhaseCCCX { direction: Direction::Inverse, .. } => "rcccxdg",
            GateKind::Measure { .. } => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    fn min_qubits(&self) -> usize {
        match self {
            GateKind::ControlledX { .. } => 2,
            GateKind::ControlledZ { .. } => 1,
            _ => 0,
        }
    }
}

/// Classical guard: the instruction fires only if `clbit == value`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Condition {
    pub clbit: usize,
    pub value: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub kind: GateKind,
    pub condition: Option<Condition>,
}

impl Instruction {
    pub fn new(kind: GateKind) -> Self {
        Instruction { kind, condition: None }
    }

    pub fn when(kind: GateKind, clbit: usize, value: bool) -> Self {
        Instruction { kind, condition: Some(Condition { clbit, value }) }
    }

    pub fn with_condition(mut self, condition: Option<Condition>) -> Self {
        self.condition = condition;
        self
    }

    /// Classical bits read or written.
    pub fn clbits(&self) -> Vec<usize> {
        let mut out = Vec::new();
        if let Some(c) = self.condition {
            out.push(c.clbit);
        }
        if let GateKind::Measure { clbit, .. } = self.kind {
            out.push(clbit);
        }
        out
    }
}

impl From<GateKind> for Instruction {
    fn from(kind: GateKind) -> Self {
        Instruction::new(kind)
    }
}

/// An ordered gate program. Instructions are validated on insertion, so a
/// `Circuit` value always satisfies the index and write-once invariants.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    n_clbits: usize,
    instructions: Vec<Instruction>,
    written: Vec<bool>,
    metadata: BTreeMap<String, String>,
}

impl Circuit {
    pub fn new(n_qubits: usize, n_clbits: usize) -> Self {
        Circuit {
            n_qubits,
            n_clbits,
            instructions: Vec::new(),
            written: vec![false; n_clbits],
            metadata: BTreeMap::new(),
        }
    }

    /// Builds a circuit from a list of instructions, validating each one.
    pub fn from_instructions<I>(n_qubits: usize, n_clbits: usize, instrs: I) -> Result<Self, CircuitError>
    where
        I: IntoIterator<Item = Instruction>,
    {
        let mut c = Circuit::new(n_qubits, n_clbits);
        for i in instrs {
            c.push(i)?;
        }
        Ok(c)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn n_clbits(&self) -> usize {
        self.n_clbits
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(String::as_str)
    }

    pub fn set_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.insert(key.into(), value.to_string());
    }

    pub fn with_metadata(mut self, metadata: BTreeMap<String, String>) -> Self {
        self.metadata = metadata;
        self
    }

    pub fn has_measurements(&self) -> bool {
        self.instructions.iter().any(|i| i.kind.is_measure())
    }

    /// Validates and appends one instruction.
    pub fn push(&mut self, instr: impl Into<Instruction>) -> Result<(), CircuitError> {
        let instr = instr.into();
        let index = self.instructions.len();
        let qubits = instr.kind.qubits();
        if qubits.len() < instr.kind.min_qubits() {
            return Err(CircuitError::TooFewQubits { index, min: instr.kind.min_qubits() });
        }
        for (i, &q) in qubits.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(CircuitError::IndexOutOfRange { index, qubit: q, width: self.n_qubits });
            }
            if qubits[..i].contains(&q) {
                return Err(CircuitError::DuplicateQubit { index, qubit: q });
            }
        }
        if let Some(cond) = instr.condition {
            if cond.clbit >= self.n_clbits {
                return Err(CircuitError::ClbitOutOfRange { index, clbit: cond.clbit, n_clbits: self.n_clbits });
            }
            if !self.written[cond.clbit] {
                return Err(CircuitError::UnwrittenClassicalBit { index, clbit: cond.clbit });
            }
        }
        if let GateKind::Measure { clbit, .. } = instr.kind {
            if clbit >= self.n_clbits {
                return Err(CircuitError::ClbitOutOfRange { index, clbit, n_clbits: self.n_clbits });
            }
            if self.written[clbit] {
                return Err(CircuitError::RewrittenClassicalBit { index, clbit });
            }
            self.written[clbit] = true;
        }
        self.instructions.push(instr);
        Ok(())
    }

    /// Functional form of [`Circuit::push`].
    pub fn append(mut self, instr: impl Into<Instruction>) -> Result<Self, CircuitError> {
        self.push(instr)?;
        Ok(self)
    }

    pub fn extend<I>(&mut self, instrs: I) -> Result<(), CircuitError>
    where
        I: IntoIterator<Item = Instruction>,
    {
        for i in instrs {
            self.push(i)?;
        }
        Ok(())
    }

    /// Appends every instruction of `other` (metadata is not merged).
    pub fn compose(&mut self, other: &Circuit) -> Result<(), CircuitError> {
        self.extend(other.instructions.iter().cloned())
    }

    /// Same instructions on a wider register.
    pub fn widened(&self, n_qubits: usize, n_clbits: usize) -> Result<Circuit, CircuitError> {
        let mut c = Circuit::from_instructions(n_qubits, n_clbits, self.instructions.iter().cloned())?;
        c.metadata = self.metadata.clone();
        Ok(c)
    }

    pub fn census(&self) -> Result<GateCensus, CircuitError> {
        GateCensus::of(self)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize(self))
    }
}
