//! QASM-2-flavoured text format.
//!
//! ```text
//! #! family=grover
//! qreg q[3];
//! creg c[3];
//! h q[0];
//! ccx q[0],!q[1],q[2];      # '!' marks an open (condition-on-0) control
//! mcz(4) q[0],q[1],q[2],q[3];
//! measure q[0] -> c[0];
//! if (c[0]==0) x q[1];
//! ```
//!
//! `#!` lines carry circuit metadata; any other `#` starts a comment.

use std::fmt::Write as _;

use super::{Circuit, CircuitError, Condition, Control, Direction, GateKind, Instruction};

fn escape(v: &str) -> String {
    v.replace('\\', "\\\\").replace('\n', "\\n").replace('\r', "\\r")
}

fn unescape(v: &str) -> String {
    let mut out = String::with_capacity(v.len());
    let mut chars = v.chars();
    while let Some(c) = chars.next() {
        if c == '\\' {
            match chars.next() {
                Some('n') => out.push('\n'),
                Some('r') => out.push('\r'),
                Some(other) => out.push(other),
                None => out.push('\\'),
            }
        } else {
            out.push(c);
        }
    }
    out
}

fn operand(c: &Control) -> String {
    format!("{}q[{}]", if c.on { "" } else { "!" }, c.qubit)
}

fn gate_text(kind: &GateKind) -> String {
    let list = |qs: &[usize]| qs.iter().map(|q| format!("q[{q}]")).collect::<Vec<_>>().join(",");
    match kind {
        GateKind::PauliX(q) => format!("x q[{q}]"),
        GateKind::PauliZ(q) => format!("z q[{q}]"),
        GateKind::Hadamard(q) => format!("h q[{q}]"),
        GateKind::PhaseRz { qubit, angle } => format!("rz({angle}) q[{qubit}]"),
        GateKind::ControlledX { controls, target } => {
            let ops: Vec<String> =
                controls.iter().map(operand).chain(std::iter::once(format!("q[{target}]"))).collect();
            match controls.len() {
                1..=3 => format!("{} {}", kind.name(), ops.join(",")),
                k => format!("mcx({}) {}", k + 1, ops.join(",")),
            }
        }
        GateKind::ControlledZ { qubits } => {
            let ops: Vec<String> = qubits.iter().map(operand).collect();
            if qubits.len() == 2 {
                format!("cz {}", ops.join(","))
            } else {
                format!("mcz({}) {}", qubits.len(), ops.join(","))
            }
        }
        GateKind::RelPhaseCCX { qubits, .. } => format!("{} {}", kind.name(), list(qubits)),
        GateKind::RelPhaseCCCX { qubits, .. } => format!("{} {}", kind.name(), list(qubits)),
        GateKind::Measure { qubit, clbit } => format!("measure q[{qubit}] -> c[{clbit}]"),
        GateKind::Barrier => "barrier".to_string(),
    }
}

/// Renders a circuit in the text format. `parse(&serialize(c)) == c`.
pub fn serialize(circuit: &Circuit) -> String {
    let mut out = String::new();
    for (k, v) in circuit.metadata() {
        let _ = writeln!(out, "#! {}={}", k, escape(v));
    }
    let _ = writeln!(out, "qreg q[{}];", circuit.n_qubits());
    let _ = writeln!(out, "creg c[{}];", circuit.n_clbits());
    for instr in circuit.instructions() {
        if let Some(Condition { clbit, value }) = instr.condition {
            let _ = write!(out, "if (c[{}]=={}) ", clbit, u8::from(value));
        }
        let _ = writeln!(out, "{};", gate_text(&instr.kind));
    }
    out
}

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
}

impl<'a> Cursor<'a> {
    fn err(&self, message: impl Into<String>) -> CircuitError {
        CircuitError::Parse { line: self.line, column: self.src[..self.pos].chars().count() + 1, message: message.into() }
    }

    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), CircuitError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.err(format!("expected '{token}'")))
        }
    }

    fn ident(&mut self) -> Result<&'a str, CircuitError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !(c.is_ascii_alphanumeric() || c == '_')).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected identifier"));
        }
        let s = &self.rest()[..len];
        self.pos += len;
        Ok(s)
    }

    fn number(&mut self) -> Result<usize, CircuitError> {
        self.skip_ws();
        let len = self.rest().find(|c: char| !c.is_ascii_digit()).unwrap_or(self.rest().len());
        if len == 0 {
            return Err(self.err("expected integer"));
        }
        let v = self.rest()[..len].parse().map_err(|_| self.err("integer too large"))?;
        self.pos += len;
        Ok(v)
    }

    fn indexed(&mut self, reg: &str) -> Result<usize, CircuitError> {
        self.expect(reg)?;
        self.expect("[")?;
        let v = self.number()?;
        self.expect("]")?;
        Ok(v)
    }

    fn control(&mut self) -> Result<Control, CircuitError> {
        let on = !self.eat("!");
        Ok(Control { qubit: self.indexed("q")?, on })
    }

    fn operands(&mut self) -> Result<Vec<Control>, CircuitError> {
        let mut out = vec![self.control()?];
        while self.eat(",") {
            out.push(self.control()?);
        }
        Ok(out)
    }

    fn angle(&mut self) -> Result<f64, CircuitError> {
        self.skip_ws();
        let len = self.rest().find(')').ok_or_else(|| self.err("unterminated angle"))?;
        let text = self.rest()[..len].trim();
        let value = parse_angle(text).ok_or_else(|| self.err(format!("bad angle '{text}'")))?;
        self.pos += len;
        Ok(value)
    }

    fn done(&mut self) -> Result<(), CircuitError> {
        self.skip_ws();
        if self.rest().is_empty() {
            Ok(())
        } else {
            Err(self.err(format!("unexpected trailing input '{}'", self.rest())))
        }
    }
}

fn parse_angle(text: &str) -> Option<f64> {
    if let Ok(v) = text.parse::<f64>() {
        return Some(v);
    }
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, text),
    };
    let pi = std::f64::consts::PI;
    if body == "pi" {
        return Some(sign * pi);
    }
    if let Some(den) = body.strip_prefix("pi/") {
        return den.trim().parse::<f64>().ok().map(|d| sign * pi / d);
    }
    if let Some(num) = body.strip_suffix("*pi") {
        return num.trim().parse::<f64>().ok().map(|m| sign * m * pi);
    }
    None
}

fn all_on(cur: &Cursor, ops: &[Control]) -> Result<Vec<usize>, CircuitError> {
    ops.iter()
        .map(|c| if c.on { Ok(c.qubit) } else { Err(cur.err("open controls are not allowed here")) })
        .collect()
}

fn single(cur: &Cursor, ops: &[Control]) -> Result<usize, CircuitError> {
    match all_on(cur, ops)?.as_slice() {
        [q] => Ok(*q),
        _ => Err(cur.err("expected exactly one operand")),
    }
}

fn gate(cur: &mut Cursor) -> Result<GateKind, CircuitError> {
    let start = cur.pos;
    let name = cur.ident()?;
    if name == "barrier" {
        return Ok(GateKind::Barrier);
    }
    if name == "measure" {
        let qubit = cur.indexed("q")?;
        cur.expect("->")?;
        let clbit = cur.indexed("c")?;
        return Ok(GateKind::Measure { qubit, clbit });
    }
    let mut angle = None;
    let mut arity = None;
    if cur.eat("(") {
        if name == "rz" {
            angle = Some(cur.angle()?);
        } else {
            arity = Some(cur.number()?);
        }
        cur.expect(")")?;
    }
    let ops = cur.operands()?;
    let fixed = |n: usize, cur: &Cursor| {
        if ops.len() == n {
            Ok(())
        } else {
            Err(cur.err(format!("{name} takes {n} operands, got {}", ops.len())))
        }
    };
    let kind = match name {
        "x" => GateKind::PauliX(single(cur, &ops)?),
        "z" => GateKind::PauliZ(single(cur, &ops)?),
        "h" => GateKind::Hadamard(single(cur, &ops)?),
        "rz" => GateKind::PhaseRz {
            qubit: single(cur, &ops)?,
            angle: angle.ok_or_else(|| cur.err("rz needs an angle"))?,
        },
        "cx" | "ccx" | "cccx" | "mcx" => {
            let n = match name {
                "cx" => 2,
                "ccx" => 3,
                "cccx" => 4,
                _ => arity.ok_or_else(|| cur.err("mcx needs an arity"))?,
            };
            fixed(n, cur)?;
            let target = ops[n - 1];
            if !target.on {
                return Err(cur.err("target cannot be an open control"));
            }
            GateKind::ControlledX { controls: ops[..n - 1].to_vec(), target: target.qubit }
        }
        "cz" | "mcz" => {
            let n = if name == "cz" { 2 } else { arity.ok_or_else(|| cur.err("mcz needs an arity"))? };
            fixed(n, cur)?;
            GateKind::ControlledZ { qubits: ops }
        }
        "rccx" | "rccxdg" => {
            fixed(3, cur)?;
            let q = all_on(cur, &ops)?;
            let direction = if name == "rccx" { Direction::Forward } else { Direction::Inverse };
            GateKind::RelPhaseCCX { qubits: [q[0], q[1], q[2]], direction }
        }
        "rcccx" | "rcccxdg" => {
            fixed(4, cur)?;
            let q = all_on(cur, &ops)?;
            let direction = if name == "rcccx" { Direction::Forward } else { Direction::Inverse };
            GateKind::RelPhaseCCCX { qubits: [q[0], q[1], q[2], q[3]], direction }
        }
        other => {
            cur.pos = start;
            return Err(cur.err(format!("unknown gate '{other}'")));
        }
    };
    if arity.is_some() && !matches!(name, "mcx" | "mcz") {
        return Err(cur.err(format!("{name} does not take an arity")));
    }
    Ok(kind)
}

/// Parses the text format; errors carry 1-based line and column.
pub fn parse(text: &str) -> Result<Circuit, CircuitError> {
    let mut metadata = std::collections::BTreeMap::new();
    let mut n_qubits = None;
    let mut n_clbits = 0;
    let mut circuit: Option<Circuit> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        if let Some(meta) = raw.trim_start().strip_prefix("#!") {
            let (k, v) = meta.split_once('=').ok_or(CircuitError::Parse {
                line,
                column: 1,
                message: "metadata line needs key=value".into(),
            })?;
            metadata.insert(k.trim().to_string(), unescape(v));
            continue;
        }
        let code = raw.split('#').next().unwrap_or("");
        if code.trim().is_empty() {
            continue;
        }
        let mut cur = Cursor { src: code, pos: 0, line };
        let body = code.trim_end();
        if !body.ends_with(';') {
            cur.pos = body.len();
            return Err(cur.err("expected ';'"));
        }
        cur.src = &body[..body.len() - 1];
        if cur.eat("qreg") {
            if circuit.is_some() || n_qubits.is_some() {
                return Err(cur.err("qreg must appear once, before any gate"));
            }
            n_qubits = Some(cur.indexed("q")?);
            cur.done()?;
            continue;
        }
        if cur.eat("creg") {
            if circuit.is_some() {
                return Err(cur.err("creg must appear before any gate"));
            }
            n_clbits = cur.indexed("c")?;
            cur.done()?;
            continue;
        }
        let c = match circuit.as_mut() {
            Some(c) => c,
            None => {
                let n = n_qubits.ok_or_else(|| cur.err("missing qreg declaration"))?;
                circuit.insert(Circuit::new(n, n_clbits))
            }
        };
        let mut condition = None;
        if cur.eat("if") {
            cur.expect("(")?;
            let clbit = cur.indexed("c")?;
            cur.expect("==")?;
            let value = match cur.number()? {
                0 => false,
                1 => true,
                _ => return Err(cur.err("condition value must be 0 or 1")),
            };
            cur.expect(")")?;
            condition = Some(Condition { clbit, value });
        }
        let column = cur.src[..cur.pos].chars().count() + 1;
        let kind = gate(&mut cur)?;
        cur.done()?;
        c.push(Instruction { kind, condition }).map_err(|e| CircuitError::Parse {
            line,
            column,
            message: e.to_string(),
        })?;
    }
    let circuit = match circuit {
        Some(c) => c,
        None => Circuit::new(
            n_qubits.ok_or(CircuitError::Parse { line: 1, column: 1, message: "missing qreg declaration".into() })?,
            n_clbits,
        ),
    };
    Ok(circuit.with_metadata(metadata))
}
