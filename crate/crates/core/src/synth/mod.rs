//! Gate synthesis: diffusers, phase oracles and multi-controlled Z.
//!
//! Builders here emit *high-level* instructions (multi-controlled gates with
//! polarity, relative-phase primitives). [`lower`] turns them into one- and
//! two-qubit gates; the gate census is only defined after lowering.

mod lower;
mod relphase;

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Control, Direction, GateKind, Instruction};
use crate::pattern::Pattern;

pub use lower::{lower, lower_and_cancel, lower_gate, phase_polynomial_mcz};
pub use relphase::{rccx_gates, rcccx_gates};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("bad arity: {0}")]
    BadArity(String),
    #[error("mask {mask} has width {got}, expected {expected}")]
    BadMask { mask: String, got: usize, expected: usize },
    #[error("method {method} cannot implement a {qubits}-qubit controlled Z")]
    MethodArityMismatch { method: DecompositionMethod, qubits: usize },
    #[error("method {method} needs {needed} ancilla qubit(s), {supplied} supplied")]
    MissingAncilla { method: DecompositionMethod, needed: usize, supplied: usize },
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

macro_rules! kebab_enum {
    ($(#[$m:meta])* $name:ident { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$m])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
        pub enum $name {
            $(#[serde(rename = $text)] $variant),+
        }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = String;

            fn from_str(s: &str) -> Result<Self, String> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(format!(
                        "unknown {} '{}' (expected one of: {})",
                        stringify!($name),
                        other,
                        [$($text),+].join(", ")
                    )),
                }
            }
        }
    };
}
pub(crate) use kebab_enum;

kebab_enum!(
    /// How a multi-controlled Z is realised.
    DecompositionMethod {
        ExactRecursive => "exact-recursive",
        ExactOneAncilla => "exact-one-ancilla",
        Margolus => "margolus",
        RelphaseMaslov => "relphase-maslov",
        RelphaseTree => "relphase-tree",
        MeasurementAssisted => "measurement-assisted",
    }
);

kebab_enum!(
    /// How an oracle's `C^{n-1}Z` is realised.
    OracleStyle {
        PlainMcz => "plain-mcz",
        AncillaRelphase => "ancilla-relphase",
        AncillaRelphasePartialUncompute => "ancilla-relphase-partial-uncompute",
        MeasurementAssisted => "measurement-assisted",
    }
);

impl OracleStyle {
    /// Decomposition used for every multi-controlled Z built under this style.
    pub fn method(&self) -> DecompositionMethod {
        match self {
            OracleStyle::PlainMcz => DecompositionMethod::ExactRecursive,
            OracleStyle::AncillaRelphase | OracleStyle::AncillaRelphasePartialUncompute => {
                DecompositionMethod::RelphaseTree
            }
            OracleStyle::MeasurementAssisted => DecompositionMethod::MeasurementAssisted,
        }
    }
}

impl DecompositionMethod {
    /// Ancillas needed for a `k`-qubit controlled Z (beyond which the method
    /// gains nothing).
    pub fn ancillas_for(&self, k: usize) -> usize {
        match self {
            DecompositionMethod::ExactRecursive => 0,
            DecompositionMethod::RelphaseTree => usize::from(k >= 4),
            _ => usize::from(k >= 3),
        }
    }

    /// Classical bits consumed by one `k`-qubit controlled Z.
    pub fn clbits_for(&self, k: usize) -> usize {
        match self {
            DecompositionMethod::MeasurementAssisted => usize::from(k >= 3),
            _ => 0,
        }
    }
}

/// The marked element and the oracle realisation. Exactly one element is
/// marked.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleSpec {
    pub mask: Pattern,
    pub style: OracleStyle,
}

impl OracleSpec {
    pub fn new(n: usize, mask: Pattern, style: OracleStyle) -> Result<Self, SynthError> {
        if mask.width() != n {
            return Err(SynthError::BadMask { mask: mask.to_string(), got: mask.width(), expected: n });
        }
        Ok(OracleSpec { mask, style })
    }

    pub fn n(&self) -> usize {
        self.mask.width()
    }

    /// Controls of the oracle's `C^{n-1}Z` on `search`, polarity from the mask.
    pub fn controls(&self, search: &[usize]) -> Vec<Control> {
        search.iter().zip(self.mask.bits()).map(|(&q, b)| Control::new(q, b)).collect()
    }
}

fn rel_cost(group: usize) -> usize {
    match group {
        2 => 3,
        3 => 6,
        _ => unreachable!(),
    }
}

/// Two-qubit cost of a `k`-qubit controlled Z built as a relative-phase
/// compute tree over `ancillas` clean ancillas, and the group size chosen at
/// the root (`None` for the exact phase polynomial).
fn tree_plan(k: usize, ancillas: usize) -> (usize, Option<usize>) {
    if k <= 1 {
        return (0, None);
    }
    if k == 2 {
        return (1, None);
    }
    let mut best = ((1usize << k) - 2, None);
    if ancillas > 0 {
        // larger groups first so ties prefer fewer ancillas
        for group in [3, 2] {
            if group < k {
                let cost = 2 * rel_cost(group) + tree_plan(k - group + 1, ancillas - 1).0;
                if cost < best.0 {
                    best = (cost, Some(group));
                }
            }
        }
    }
    best
}

/// Group sizes of the left-deep compute tree, root first (empty when the
/// exact phase polynomial is cheapest).
pub fn relphase_tree_groups(k: usize, ancillas: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let (mut k, mut a) = (k, ancillas);
    while let (_, Some(g)) = tree_plan(k, a) {
        out.push(g);
        k = k - g + 1;
        a -= 1;
    }
    out
}

fn tree_label(k: usize, ancillas: usize) -> String {
    let groups = relphase_tree_groups(k, ancillas);
    if groups.is_empty() {
        "exact".to_string()
    } else {
        groups.iter().map(|g| g.to_string()).collect::<Vec<_>>().join("+")
    }
}

/// Predicted two-qubit count of [`DecompositionMethod::RelphaseTree`].
pub fn relphase_tree_cost(k: usize, ancillas: usize) -> usize {
    tree_plan(k, ancillas).0
}

/// Accumulates instructions for a fragment, handing out classical bits for
/// measurement-assisted uncomputation.
#[derive(Clone, Debug, Default)]
pub struct Builder {
    instrs: Vec<Instruction>,
    next_clbit: usize,
}

impl Builder {
    /// `first_free_clbit` is the first classical bit the builder may write.
    pub fn new(first_free_clbit: usize) -> Self {
        Builder { instrs: Vec::new(), next_clbit: first_free_clbit }
    }

    pub fn push(&mut self, kind: GateKind) {
        self.instrs.push(Instruction::new(kind));
    }

    pub fn push_instr(&mut self, instr: Instruction) {
        self.instrs.push(instr);
    }

    pub fn extend(&mut self, instrs: impl IntoIterator<Item = Instruction>) {
        self.instrs.extend(instrs);
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instrs
    }

    pub fn len(&self) -> usize {
        self.instrs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instrs.is_empty()
    }

    /// Number of classical bits needed so far.
    pub fn clbits_used(&self) -> usize {
        self.next_clbit
    }

    pub fn alloc_clbit(&mut self) -> usize {
        self.next_clbit += 1;
        self.next_clbit - 1
    }

    pub fn hadamards(&mut self, qubits: &[usize]) {
        for &q in qubits {
            self.push(GateKind::Hadamard(q));
        }
    }

    fn flip_open(&mut self, controls: &[Control]) {
        for c in controls.iter().filter(|c| !c.on) {
            self.push(GateKind::PauliX(c.qubit));
        }
    }

    fn rel_compute(&mut self, group: &[Control], target: usize, direction: Direction) {
        self.flip_open(group);
        let q: Vec<usize> = group.iter().map(|c| c.qubit).collect();
        match q.len() {
            1 => self.push(GateKind::cx(q[0], target)),
            2 => self.push(GateKind::RelPhaseCCX { qubits: [q[0], q[1], target], direction }),
            3 => self.push(GateKind::RelPhaseCCCX { qubits: [q[0], q[1], q[2], target], direction }),
            _ => self.push(GateKind::ControlledX { controls: q.iter().map(|&q| Control::on(q)).collect(), target }),
        }
        self.flip_open(group);
    }

    /// Computes `AND(group)` into a clean ancilla with a relative-phase gate
    /// (exact `C^mX` when the group has more than three qubits). Its adjoint
    /// is [`Builder::uncompute_and`].
    pub fn compute_and(&mut self, group: &[Control], ancilla: usize) {
        self.rel_compute(group, ancilla, Direction::Forward);
    }

    pub fn uncompute_and(&mut self, group: &[Control], ancilla: usize) {
        self.rel_compute(group, ancilla, Direction::Inverse);
    }

    /// Phase-free `AND` of two controls into a clean ancilla: the relative
    /// phase of the three-CX Toffoli on a `|0>` target is `i` on the
    /// all-controls-set branch, removed by `S^dagger` on the target.
    pub fn compute_and_phase_free(&mut self, controls: [Control; 2], ancilla: usize) {
        self.flip_open(&controls);
        self.push(GateKind::RelPhaseCCX {
            qubits: [controls[0].qubit, controls[1].qubit, ancilla],
            direction: Direction::Forward,
        });
        self.push(GateKind::phase(ancilla, -FRAC_PI_2));
        self.flip_open(&controls);
    }

    /// Replaces the unitary uncompute of an `AND` ancilla by an X-basis
    /// measurement and a classically controlled phase fix-up, then resets the
    /// ancilla to `|0>`. Returns the classical bit written.
    pub fn measurement_assisted_uncompute(&mut self, ancilla: usize, controls: &[Control]) -> usize {
        let clbit = self.alloc_clbit();
        self.push(GateKind::Hadamard(ancilla));
        self.push(GateKind::Measure { qubit: ancilla, clbit });
        self.push_instr(Instruction::when(GateKind::ControlledZ { qubits: controls.to_vec() }, clbit, true));
        self.push_instr(Instruction::when(GateKind::PauliX(ancilla), clbit, true));
        clbit
    }

    /// `C^{k-1}Z` on `qubits` (with polarity) using `method`.
    pub fn mcz(&mut self, qubits: &[Control], method: DecompositionMethod, ancillas: &[usize]) -> Result<(), SynthError> {
        let k = qubits.len();
        if k == 0 {
            return Err(SynthError::BadArity("controlled Z needs at least one qubit".into()));
        }
        if k <= 2 {
            self.push(GateKind::ControlledZ { qubits: qubits.to_vec() });
            return Ok(());
        }
        let need = |n: usize| {
            if ancillas.len() < n {
                Err(SynthError::MissingAncilla { method, needed: n, supplied: ancillas.len() })
            } else {
                Ok(())
            }
        };
        match method {
            DecompositionMethod::ExactRecursive => self.push(GateKind::ControlledZ { qubits: qubits.to_vec() }),
            DecompositionMethod::ExactOneAncilla => {
                need(1)?;
                let a = ancillas[0];
                let (last, controls) = qubits.split_last().expect("k >= 3");
                let cx = GateKind::ControlledX { controls: controls.to_vec(), target: a };
                self.push(cx.clone());
                self.push(GateKind::ControlledZ { qubits: vec![Control::on(a), *last] });
                self.push(cx);
            }
            DecompositionMethod::Margolus | DecompositionMethod::RelphaseMaslov => {
                let ok = match method {
                    DecompositionMethod::Margolus => k == 3,
                    _ => k == 3 || k == 4,
                };
                if !ok {
                    return Err(SynthError::MethodArityMismatch { method, qubits: k });
                }
                need(1)?;
                let a = ancillas[0];
                let (last, group) = qubits.split_last().expect("k >= 3");
                self.compute_and(group, a);
                self.push(GateKind::ControlledZ { qubits: vec![Control::on(a), *last] });
                self.uncompute_and(group, a);
            }
            DecompositionMethod::RelphaseTree => self.relphase_tree(qubits, ancillas),
            DecompositionMethod::MeasurementAssisted => {
                need(1)?;
                let a = ancillas[0];
                let pair = [qubits[0], qubits[1]];
                self.compute_and_phase_free(pair, a);
                let mut payload = vec![Control::on(a)];
                payload.extend_from_slice(&qubits[2..]);
                self.push(GateKind::ControlledZ { qubits: payload });
                self.measurement_assisted_uncompute(a, &pair);
            }
        }
        Ok(())
    }

    fn relphase_tree(&mut self, qubits: &[Control], ancillas: &[usize]) {
        let k = qubits.len();
        match tree_plan(k, ancillas.len()).1 {
            None => self.push(GateKind::ControlledZ { qubits: qubits.to_vec() }),
            Some(group) => {
                let a = ancillas[0];
                let (head, rest) = qubits.split_at(group);
                self.compute_and(head, a);
                let mut inner = vec![Control::on(a)];
                inner.extend_from_slice(rest);
                self.relphase_tree(&inner, &ancillas[1..]);
                self.uncompute_and(head, a);
            }
        }
    }

    /// `-(2|s><s| - I)` on `targets`: `H X C^{k-1}Z X H`, with the `X`
    /// conjugation folded into open controls.
    pub fn diffuser(&mut self, targets: &[usize], method: DecompositionMethod, ancillas: &[usize]) -> Result<(), SynthError> {
        if targets.is_empty() {
            return Err(SynthError::BadArity("diffuser needs at least one qubit".into()));
        }
        self.hadamards(targets);
        let open: Vec<Control> = targets.iter().map(|&q| Control::off(q)).collect();
        self.mcz(&open, method, ancillas)?;
        self.hadamards(targets);
        Ok(())
    }

    /// Phase oracle for `spec` on the `search` register.
    pub fn oracle(&mut self, spec: &OracleSpec, search: &[usize], ancillas: &[usize]) -> Result<(), SynthError> {
        if search.len() != spec.n() {
            return Err(SynthError::BadMask { mask: spec.mask.to_string(), got: spec.n(), expected: search.len() });
        }
        self.mcz(&spec.controls(search), spec.style.method(), ancillas)
    }

    pub fn into_instructions(self) -> Vec<Instruction> {
        self.instrs
    }

    pub fn into_circuit(self, n_qubits: usize) -> Result<Circuit, CircuitError> {
        let n_clbits = self.next_clbit;
        Circuit::from_instructions(n_qubits, n_clbits, self.instrs)
    }
}

/// Diffuser fragment on qubits `0..k` (high level, exact; global phase `-1`).
pub fn diffuser(k: usize) -> Result<Circuit, SynthError> {
    let mut b = Builder::new(0);
    let targets: Vec<usize> = (0..k).collect();
    b.diffuser(&targets, DecompositionMethod::ExactRecursive, &[])?;
    let mut c = b.into_circuit(k)?;
    c.set_meta("global_phase", "-1");
    Ok(c)
}

/// Oracle fragment: search qubits `0..n`, then whatever ancillas the style
/// needs, ancillas starting and ending in `|0>`.
pub fn oracle(spec: &OracleSpec) -> Result<Circuit, SynthError> {
    let n = spec.n();
    let method = spec.style.method();
    let n_anc = method.ancillas_for(n);
    let search: Vec<usize> = (0..n).collect();
    let ancillas: Vec<usize> = (n..n + n_anc).collect();
    let mut b = Builder::new(0);
    b.oracle(spec, &search, &ancillas)?;
    let mut c = b.into_circuit(n + n_anc)?;
    c.set_meta("mask", spec.mask);
    c.set_meta("style", spec.style);
    c.set_meta("ancillas", n_anc);
    if method == DecompositionMethod::RelphaseTree {
        c.set_meta("tree", tree_label(n, n_anc));
    }
    if spec.style == OracleStyle::AncillaRelphasePartialUncompute {
        c = crate::circuit::peephole_cancel(&c);
    }
    Ok(c)
}

/// `C^{k-1}Z` fragment on qubits `0..k` with ancillas `k..k+ancillas`.
pub fn mcz(k: usize, method: DecompositionMethod, ancillas: usize) -> Result<Circuit, SynthError> {
    let qubits: Vec<Control> = (0..k).map(Control::on).collect();
    let anc: Vec<usize> = (k..k + ancillas).collect();
    let mut b = Builder::new(0);
    b.mcz(&qubits, method, &anc)?;
    let mut c = b.into_circuit(k + ancillas)?;
    c.set_meta("method", method);
    if method == DecompositionMethod::RelphaseTree {
        c.set_meta("tree", tree_label(k, ancillas));
    }
    Ok(c)
}

/// Lowered relative-phase Toffoli on qubits `[0, 1, 2]`.
pub fn relphase_ccx(direction: Direction) -> Circuit {
    Circuit::from_instructions(3, 0, rccx_gates([0, 1, 2], direction).into_iter().map(Instruction::new))
        .expect("fixed operands")
}

/// Lowered relative-phase `C^3X` on qubits `[0, 1, 2, 3]`.
pub fn relphase_cccx(direction: Direction) -> Circuit {
    Circuit::from_instructions(4, 0, rcccx_gates([0, 1, 2, 3], direction).into_iter().map(Instruction::new))
        .expect("fixed operands")
}

/// Measurement-assisted uncompute fragment for an `AND` ancilla.
pub fn measurement_assisted_uncompute(ancilla: usize, controls: &[Control], clbit: usize) -> Vec<Instruction> {
    let mut b = Builder::new(clbit);
    b.measurement_assisted_uncompute(ancilla, controls);
    b.into_instructions()
}
