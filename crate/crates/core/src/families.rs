//! Constructors for the search-circuit families.
//!
//! Every builder uses the same register layout: search qubits `0..n`, then
//! ancillas; classical bits `0..n` receive the final readout of the search
//! register (so `c_i` holds `q_i`), mid-circuit results follow at `n..`.
//!
//! Wojter and Drzewker circuits are described by a *schedule*: an ordered
//! list of [`Step`]s over a two-block [`Partition`]. A block oracle computes
//! `AND(block 1 == mask)` into the ancilla, applies `C^{k_2}Z` on block 2 and
//! the ancilla, and uncomputes. Partial uncompute then cancels the
//! uncompute/recompute pairs that meet across block-2 operations and drops
//! the final, unobservable uncompute.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{drop_trailing_uncompute, peephole_cancel, Circuit, CircuitError, Control, GateKind, Instruction};
use crate::synth::{kebab_enum, Builder, DecompositionMethod, OracleSpec, OracleStyle, SynthError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("diffuser size {k} is outside 1..={n}")]
    BadDiffuserSize { k: usize, n: usize },
    #[error("diffuser qubits {qubits:?} are not {k} distinct search qubits below {n}")]
    BadDiffuserQubits { qubits: Vec<usize>, k: usize, n: usize },
    #[error("partition {partition} sums to {sum}, search register has {n} qubits")]
    PartitionWidth { partition: Partition, sum: usize, n: usize },
    #[error("unsupported partition {0}: only one or two blocks can be expressed")]
    UnsupportedPartition(Partition),
    #[error("{family} needs a search register of {expected} qubits, got {got}")]
    BadWidth { family: Family, expected: usize, got: usize },
    #[error("iterations must be at least 1")]
    BadIterations,
    #[error("{family} requires parameter '{parameter}'")]
    MissingParameter { family: Family, parameter: &'static str },
    #[error("{family} does not support {what}")]
    Unsupported { family: Family, what: String },
    #[error("schedule step {step} refers to a block the partition does not have")]
    BadStep { step: Step },
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

kebab_enum!(
    /// Circuit family.
    Family {
        Grover => "grover",
        Partial => "partial",
        Wojter => "wojter",
        WojterAa => "wojter-aa",
        Drzewker => "drzewker",
        PartialDrzewker => "partial-drzewker",
        Wielomianer => "wielomianer",
    }
);

kebab_enum!(
    /// What happens to ancilla values between fragments.
    Uncompute {
        Full => "full",
        Partial => "partial",
        MeasurementAssisted => "measurement-assisted",
    }
);

/// Block sizes `(k_1, ..., k_m)` of the search register, leading block first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "PartitionRepr", into = "Vec<usize>")]
pub struct Partition(Vec<usize>);

#[derive(Deserialize)]
#[serde(untagged)]
enum PartitionRepr {
    List(Vec<usize>),
    Text(String),
}

impl TryFrom<PartitionRepr> for Partition {
    type Error = String;

    fn try_from(r: PartitionRepr) -> Result<Self, String> {
        match r {
            PartitionRepr::List(parts) => Partition::new(parts),
            PartitionRepr::Text(s) => s.parse(),
        }
    }
}

impl From<Partition> for Vec<usize> {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self, String> {
        if parts.is_empty() {
            return Err("partition needs at least one block".into());
        }
        if parts.contains(&0) {
            return Err("partition blocks must be positive".into());
        }
        Ok(Partition(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    /// Qubit ranges of each block on a search register starting at 0.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut start = 0;
        self.0
            .iter()
            .map(|&k| {
                let b: Vec<usize> = (start..start + k).collect();
                start += k;
                b
            })
            .collect()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|k| k.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for Partition {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(',')
            .map(|p| p.trim().parse::<usize>().map_err(|e| format!("bad partition block '{}': {e}", p.trim())))
            .collect::<Result<Vec<_>, _>>()?;
        Partition::new(parts)
    }
}

/// One element of a block schedule.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Step {
    /// A (block) oracle call.
    Oracle,
    /// Diffuser on block `i` (1-based).
    Block(usize),
    /// Diffuser on the whole search register.
    Full,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Step::Oracle => f.write_str("O"),
            Step::Block(i) => write!(f, "G{i}"),
            Step::Full => f.write_str("G"),
        }
    }
}

impl FromStr for Step {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "O" => Ok(Step::Oracle),
            "G" => Ok(Step::Full),
            t => t
                .strip_prefix('G')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(Step::Block)
                .ok_or_else(|| format!("unknown schedule step '{t}' (expected O, G or G<block>)")),
        }
    }
}

impl TryFrom<String> for Step {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Step> for String {
    fn from(s: Step) -> Self {
        s.to_string()
    }
}

pub fn format_schedule(steps: &[Step]) -> String {
    steps.iter().map(Step::to_string).collect::<Vec<_>>().join(" ")
}

pub fn parse_schedule(s: &str) -> Result<Vec<Step>, String> {
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(str::parse).collect()
}

/// Default schedule of a block family on a two-block partition.
pub fn default_schedule(family: Family) -> Option<Vec<Step>> {
    use Step::*;
    Some(match family {
        Family::Wojter => vec![Oracle, Block(2), Oracle, Block(2), Oracle, Block(1), Oracle, Block(2)],
        Family::WojterAa => {
            vec![Oracle, Block(2), Oracle, Block(2), Oracle, Block(1), Oracle, Block(2), Oracle, Full]
        }
        Family::Drzewker => vec![Oracle, Block(2), Oracle, Block(1), Oracle, Block(2)],
        Family::PartialDrzewker => vec![Oracle, Block(2), Oracle, Block(1)],
        _ => return None,
    })
}

/// Everything needed to build one circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyRequest {
    pub family: Family,
    pub oracle: OracleSpec,
    /// Grover iterations (grover only; default 1).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
    /// Block partition (wojter, wojter-aa, drzewker, partial-drzewker).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub partition: Option<Partition>,
    /// Diffuser width (partial only).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffuser_size: Option<usize>,
    /// Which search qubits the partial diffuser acts on (default: the first
    /// `diffuser_size`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub diffuser_qubits: Option<Vec<usize>>,
    #[serde(default = "default_uncompute")]
    pub uncompute: Uncompute,
    /// Explicit block schedule overriding the family default.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<Step>>,
}

fn default_uncompute() -> Uncompute {
    Uncompute::Full
}

impl FamilyRequest {
    pub fn new(family: Family, oracle: OracleSpec) -> Self {
        FamilyRequest {
            family,
            oracle,
            iterations: None,
            partition: None,
            diffuser_size: None,
            diffuser_qubits: None,
            uncompute: Uncompute::Full,
            schedule: None,
        }
    }

    pub fn iterations(mut self, iterations: usize) -> Self {
        self.iterations = Some(iterations);
        self
    }

    pub fn partition(mut self, partition: Partition) -> Self {
        self.partition = Some(partition);
        self
    }

    pub fn diffuser_size(mut self, k: usize) -> Self {
        self.diffuser_size = Some(k);
        self
    }

    pub fn uncompute(mut self, uncompute: Uncompute) -> Self {
        self.uncompute = uncompute;
        self
    }

    pub fn schedule(mut self, steps: Vec<Step>) -> Self {
        self.schedule = Some(steps);
        self
    }

    pub fn n(&self) -> usize {
        self.oracle.n()
    }

    /// Oracle with the style implied by the uncompute option.
    fn effective_oracle(&self) -> OracleSpec {
        let mut spec = self.oracle;
        if self.uncompute == Uncompute::MeasurementAssisted {
            spec.style = OracleStyle::MeasurementAssisted;
        }
        spec
    }

    fn partial_uncompute(&self) -> bool {
        self.uncompute == Uncompute::Partial || self.oracle.style == OracleStyle::AncillaRelphasePartialUncompute
    }
}

/// Builds the circuit described by `req`.
pub fn build(req: &FamilyRequest) -> Result<Circuit, FamilyError> {
    match req.family {
        Family::Grover => build_grover_request(req),
        Family::Partial => build_partial_request(req),
        Family::Wielomianer => build_wielomianer(req),
        Family::Wojter | Family::WojterAa | Family::Drzewker | Family::PartialDrzewker => build_block(req),
    }
}

/// `iterations` rounds of (oracle; full diffuser) after `H^n`.
pub fn build_grover(oracle: OracleSpec, iterations: usize) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::Grover, oracle).iterations(iterations))
}

/// One oracle call followed by a diffuser on the first `k` search qubits.
pub fn build_partial(oracle: OracleSpec, k: usize) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::Partial, oracle).diffuser_size(k))
}

pub fn build_wojter(oracle: OracleSpec, partition: Partition, uncompute: Uncompute) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::Wojter, oracle).partition(partition).uncompute(uncompute))
}

pub fn build_wojter_aa(oracle: OracleSpec, partition: Partition, uncompute: Uncompute) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::WojterAa, oracle).partition(partition).uncompute(uncompute))
}

pub fn build_drzewker(oracle: OracleSpec, partition: Partition, uncompute: Uncompute) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::Drzewker, oracle).partition(partition).uncompute(uncompute))
}

pub fn build_partial_drzewker(
    oracle: OracleSpec,
    partition: Partition,
    uncompute: Uncompute,
) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::PartialDrzewker, oracle).partition(partition).uncompute(uncompute))
}

pub fn build_wielomianer_p43(oracle: OracleSpec) -> Result<Circuit, FamilyError> {
    build(&FamilyRequest::new(Family::Wielomianer, oracle))
}

/// Ancillas the oracle style needs on an `n`-qubit search register.
fn ancilla_count(spec: &OracleSpec) -> usize {
    spec.style.method().ancillas_for(spec.n())
}

fn finish(
    mut b: Builder,
    req: &FamilyRequest,
    n_qubits: usize,
    oracle_calls: usize,
) -> Result<Circuit, FamilyError> {
    let n = req.n();
    let mid = b.clbits_used() - n;
    let instrs = {
        for q in 0..n {
            b.push(GateKind::Measure { qubit: q, clbit: q });
        }
        b.into_instructions()
    };
    let mut c = Circuit::from_instructions(n_qubits, n + mid, instrs)?;
    if req.partial_uncompute() {
        c = drop_trailing_uncompute(&peephole_cancel(&c));
    }
    c.set_meta("family", req.family);
    c.set_meta("n", n);
    c.set_meta("mask", req.oracle.mask);
    c.set_meta("style", req.effective_oracle().style);
    c.set_meta("uncompute", if req.partial_uncompute() { Uncompute::Partial } else { req.uncompute });
    c.set_meta("oracle_calls", oracle_calls);
    c.set_meta("search_width", n);
    c.set_meta("ancillas", n_qubits - n);
    Ok(c)
}

fn build_grover_request(req: &FamilyRequest) -> Result<Circuit, FamilyError> {
    let iterations = req.iterations.unwrap_or(1);
    if iterations == 0 {
        return Err(FamilyError::BadIterations);
    }
    let spec = req.effective_oracle();
    let n = spec.n();
    let search: Vec<usize> = (0..n).collect();
    let ancillas: Vec<usize> = (n..n + ancilla_count(&spec)).collect();
    let method = spec.style.method();
    let mut b = Builder::new(n);
    b.hadamards(&search);
    for _ in 0..iterations {
        b.oracle(&spec, &search, &ancillas)?;
        b.diffuser(&search, method, &ancillas)?;
    }
    let mut c = finish(b, req, n + ancillas.len(), iterations)?;
    c.set_meta("iterations", iterations);
    Ok(c)
}

fn build_partial_request(req: &FamilyRequest) -> Result<Circuit, FamilyError> {
    let spec = req.effective_oracle();
    let n = spec.n();
    let k = req
        .diffuser_size
        .or_else(|| req.diffuser_qubits.as_ref().map(Vec::len))
        .ok_or(FamilyError::MissingParameter { family: Family::Partial, parameter: "diffuser_size" })?;
    if k == 0 || k > n {
        return Err(FamilyError::BadDiffuserSize { k, n });
    }
    let targets = match &req.diffuser_qubits {
        None => (0..k).collect::<Vec<_>>(),
        Some(qs) => {
            let mut sorted = qs.clone();
            sorted.sort_unstable();
            sorted.dedup();
            if qs.len() != k || sorted.len() != k || sorted.iter().any(|&q| q >= n) {
                return Err(FamilyError::BadDiffuserQubits { qubits: qs.clone(), k, n });
            }
            qs.clone()
        }
    };
    let search: Vec<usize> = (0..n).collect();
    let n_anc = ancilla_count(&spec).max(spec.style.method().ancillas_for(k));
    let ancillas: Vec<usize> = (n..n + n_anc).collect();
    let mut b = Builder::new(n);
    b.hadamards(&search);
    b.oracle(&spec, &search, &ancillas)?;
    b.diffuser(&targets, spec.style.method(), &ancillas)?;
    let mut c = finish(b, req, n + n_anc, 1)?;
    c.set_meta("diffuser_size", k);
    c.set_meta(
        "diffuser_qubits",
        targets.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","),
    );
    Ok(c)
}

/// Three oracle calls around two tail diffusers. When the tail block has two
/// qubits, the oracle restricted to it is the reflection about the marked
/// tail pattern, at 60 degrees to the uniform state, so the window equals
/// `-G2` controlled by the head-block match, whatever the mask.
const FUSABLE_WINDOW: [Step; 5] = [Step::Oracle, Step::Block(2), Step::Oracle, Step::Block(2), Step::Oracle];

fn build_block(req: &FamilyRequest) -> Result<Circuit, FamilyError> {
    let family = req.family;
    let spec = req.oracle;
    let n = spec.n();
    if req.uncompute == Uncompute::MeasurementAssisted || spec.style == OracleStyle::MeasurementAssisted {
        return Err(FamilyError::Unsupported { family, what: "measurement-assisted uncompute".into() });
    }
    let partition = req
        .partition
        .clone()
        .ok_or(FamilyError::MissingParameter { family, parameter: "partition" })?;
    if partition.n() != n {
        return Err(FamilyError::PartitionWidth { sum: partition.n(), n, partition });
    }
    let blocks = partition.blocks();
    if blocks.len() > 2 {
        return Err(FamilyError::UnsupportedPartition(partition));
    }
    let degenerate = blocks.len() == 1;
    let schedule = match (&req.schedule, degenerate) {
        (Some(s), _) => s.clone(),
        (None, false) => default_schedule(family).expect("block family"),
        (None, true) => {
            // a single block leaves nothing to split: plain Grover rounds
            let rounds = if family == Family::WojterAa { 2 } else { 1 };
            [Step::Oracle, Step::Full].repeat(rounds)
        }
    };
    for &step in &schedule {
        if let Step::Block(i) = step {
            if i > blocks.len() {
                return Err(FamilyError::BadStep { step });
            }
        }
    }

    let search: Vec<usize> = (0..n).collect();
    let plain = spec.style == OracleStyle::PlainMcz;
    let method = spec.style.method();
    let n_anc = if plain { 0 } else { 1 };
    let ancillas: Vec<usize> = (n..n + n_anc).collect();
    let controls = spec.controls(&search);
    // optimised styles replace O G2 O G2 O on a two-qubit tail block by the
    // equal controlled(-G2); the plain style keeps the literal schedule
    let fusable = !plain && !degenerate && blocks[1].len() == 2;
    let mut fused = 0;
    let mut b = Builder::new(n);
    b.hadamards(&search);
    let mut i = 0;
    while i < schedule.len() {
        if fusable && schedule[i..].starts_with(&FUSABLE_WINDOW) {
            let a = ancillas[0];
            let head = &controls[..blocks[0].len()];
            let tail = &blocks[1];
            b.compute_and(head, a);
            b.hadamards(tail);
            b.mcz(&[Control::on(a), Control::off(tail[0]), Control::off(tail[1])], method, &[])?;
            b.hadamards(tail);
            b.uncompute_and(head, a);
            fused += 1;
            i += FUSABLE_WINDOW.len();
            continue;
        }
        match schedule[i] {
            Step::Oracle if plain || degenerate => b.oracle(&spec, &search, &ancillas)?,
            Step::Oracle => {
                let a = ancillas[0];
                let (head, tail) = controls.split_at(blocks[0].len());
                b.compute_and(head, a);
                let mut inner = vec![Control::on(a)];
                inner.extend_from_slice(tail);
                b.mcz(&inner, method, &[])?;
                b.uncompute_and(head, a);
            }
            Step::Block(k) => b.diffuser(&blocks[k - 1], method, &ancillas)?,
            Step::Full => b.diffuser(&search, method, &ancillas)?,
        }
        i += 1;
    }
    let oracle_calls = schedule.iter().filter(|s| **s == Step::Oracle).count();
    let mut c = finish(b, req, n + n_anc, oracle_calls)?;
    c.set_meta("partition", &partition);
    c.set_meta("schedule", format_schedule(&schedule));
    c.set_meta("fused_reflections", fused);
    let reference = partition.parts() == [3, 2] || degenerate;
    c.set_meta("experimental", !reference || req.schedule.is_some());
    Ok(c)
}

/// `P_{4,3}`: search `q0..q3`, ancilla `a = q4`, marker `q5`; `c4` holds
/// the mid-circuit marker readout and the second half runs only when it
/// reads 0.
fn build_wielomianer(req: &FamilyRequest) -> Result<Circuit, FamilyError> {
    let family = Family::Wielomianer;
    let n = req.n();
    if n != 4 {
        return Err(FamilyError::BadWidth { family, expected: 4, got: n });
    }
    if req.uncompute == Uncompute::MeasurementAssisted {
        return Err(FamilyError::Unsupported { family, what: "measurement-assisted uncompute".into() });
    }
    let (a, marker) = (4, 5);
    let m = req.oracle.controls(&[0, 1, 2, 3]);
    let and_low = GateKind::ControlledX { controls: vec![m[0], m[1]], target: a };
    let mark_high = GateKind::ControlledZ { qubits: vec![Control::on(a), m[2], m[3]] };
    let mut b = Builder::new(n);
    let c = b.alloc_clbit();
    let when0 = |kind: GateKind| Instruction::when(kind, c, false);
    let g2 = |b: &mut Builder, pair: [usize; 2], conditioned: bool| {
        b.hadamards(&pair);
        let z = GateKind::ControlledZ { qubits: vec![Control::off(pair[0]), Control::off(pair[1])] };
        if conditioned {
            b.push_instr(when0(z));
        } else {
            b.push(z);
        }
        b.hadamards(&pair);
    };
    b.hadamards(&[0, 1, 2, 3]);
    b.push(and_low.clone());
    b.push(mark_high.clone());
    g2(&mut b, [2, 3], false);
    b.push(GateKind::ControlledX { controls: vec![Control::on(a), m[2], m[3]], target: marker });
    b.push(GateKind::Measure { qubit: marker, clbit: c });
    g2(&mut b, [0, 1], true);
    b.push_instr(when0(and_low));
    b.push_instr(when0(mark_high));
    g2(&mut b, [2, 3], true);
    let mut circuit = finish(b, req, 6, 3)?;
    circuit.set_meta("mid_circuit_measurements", 1);
    Ok(circuit)
}

/// `DecompositionMethod` a family request ends up using for its controlled Zs.
pub fn decomposition_of(req: &FamilyRequest) -> DecompositionMethod {
    req.effective_oracle().style.method()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Pattern;

    fn spec(mask: &str, style: OracleStyle) -> OracleSpec {
        let p: Pattern = mask.parse().unwrap();
        OracleSpec::new(p.width(), p, style).unwrap()
    }

    #[test]
    fn partition_parsing() {
        let p: Partition = "3,2".parse().unwrap();
        assert_eq!(p.parts(), &[3, 2]);
        assert_eq!(p.to_string(), "(3,2)");
        assert_eq!("(3, 2)".parse::<Partition>().unwrap(), p);
        assert!("3,0".parse::<Partition>().is_err());
        let j: Partition = serde_json::from_str("\"3,2\"").unwrap();
        assert_eq!(j, p);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[3,2]");
    }

    #[test]
    fn schedule_text() {
        let s = parse_schedule("O G2 O,G1 G").unwrap();
        assert_eq!(s, vec![Step::Oracle, Step::Block(2), Step::Oracle, Step::Block(1), Step::Full]);
        assert_eq!(format_schedule(&s), "O G2 O G1 G");
        assert!(parse_schedule("X").is_err());
    }

    #[test]
    fn partition_must_cover_register() {
        let err = build_wojter(spec("10110", OracleStyle::AncillaRelphase), "3,1".parse().unwrap(), Uncompute::Full)
            .unwrap_err();
        assert!(err.to_string().contains("partition"));
        let err =
            build_drzewker(spec("10110", OracleStyle::AncillaRelphase), "2,2,1".parse().unwrap(), Uncompute::Full)
                .unwrap_err();
        assert!(matches!(err, FamilyError::UnsupportedPartition(_)));
    }

    #[test]
    fn oracle_call_metadata() {
        let s = spec("10110", OracleStyle::AncillaRelphase);
        let p: Partition = "3,2".parse().unwrap();
        assert_eq!(build_grover(s, 1).unwrap().meta("oracle_calls"), Some("1"));
        assert_eq!(build_partial(s, 3).unwrap().meta("oracle_calls"), Some("1"));
        let w = build_wojter(s, p.clone(), Uncompute::Partial).unwrap();
        let waa = build_wojter_aa(s, p, Uncompute::Partial).unwrap();
        let calls = |c: &Circuit| c.meta("oracle_calls").unwrap().parse::<usize>().unwrap();
        assert_eq!(calls(&waa), calls(&w) + 1);
    }

    #[test]
    fn wielomianer_has_one_mid_circuit_measurement() {
        let c = build_wielomianer_p43(spec("0110", OracleStyle::PlainMcz)).unwrap();
        let mids = c.instructions().iter().filter(|i| matches!(i.kind, GateKind::Measure { qubit: 5, .. })).count();
        assert_eq!(mids, 1);
        assert_eq!(c.n_clbits(), 5);
        assert!(build_wielomianer_p43(spec("011", OracleStyle::PlainMcz)).is_err());
    }

    #[test]
    fn bad_diffuser_size() {
        let s = spec("1011", OracleStyle::PlainMcz);
        assert_eq!(build_partial(s, 5).unwrap_err(), FamilyError::BadDiffuserSize { k: 5, n: 4 });
        assert_eq!(build_partial(s, 0).unwrap_err(), FamilyError::BadDiffuserSize { k: 0, n: 4 });
    }
}
