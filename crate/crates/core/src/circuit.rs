//! Circuit intermediate representation shared by the compiler, the simulator
//! and the CLI, together with its line-oriented text format.
//!
//! The text format is one op per line, lowercase mnemonic followed by
//! space-separated decimal qubit indices:
//!
//! ```text
//! qubits 2
//! h 0
//! cx 0 1
//! measz 0
//! measz 1
//! ```
//!
//! `#` starts a comment and blank lines are ignored. The `qubits N` header is
//! optional on input and always emitted on output.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CircuitError;

/// Gate mnemonics understood by the IR.
///
/// `TransversalH` is a logical-level marker produced by the transversal-H
/// alignment pass: it stands for a Hadamard on every qubit and carries no
/// indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    CX,
    CZ,
    CCZ,
    Prep0,
    PrepPlus,
    MeasZ,
    TransversalH,
}

impl GateKind {
    pub const ALL: [GateKind; 12] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::CX,
        GateKind::CZ,
        GateKind::CCZ,
        GateKind::Prep0,
        GateKind::PrepPlus,
        GateKind::MeasZ,
        GateKind::TransversalH,
    ];

    pub fn arity(self) -> usize {
        match self {
            GateKind::TransversalH => 0,
            GateKind::CX | GateKind::CZ => 2,
            GateKind::CCZ => 3,
            _ => 1,
        }
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::CCZ => "ccz",
            GateKind::Prep0 => "prep0",
            GateKind::PrepPlus => "prepplus",
            GateKind::MeasZ => "measz",
            GateKind::TransversalH => "htrans",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<GateKind> {
        GateKind::ALL.iter().copied().find(|k| k.mnemonic() == s)
    }

    pub fn is_prep(self) -> bool {
        matches!(self, GateKind::Prep0 | GateKind::PrepPlus)
    }

    pub fn class(self) -> GateClass {
        match self {
            GateKind::Prep0 | GateKind::PrepPlus => GateClass::Prep,
            GateKind::MeasZ => GateClass::Measure,
            GateKind::CX | GateKind::CZ => GateClass::TwoQubit,
            GateKind::CCZ => GateClass::ThreeQubit,
            _ => GateClass::OneQubit,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// Coarse partition used by gate counting and the noise model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GateClass {
    OneQubit,
    TwoQubit,
    ThreeQubit,
    Prep,
    Measure,
}

/// A single gate application. Unused index slots are zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Op {
    pub kind: GateKind,
    qubits: [usize; 3],
}

impl Op {
    /// Builds an op, checking arity. Index distinctness is checked by
    /// [`Circuit::validate`].
    pub fn new(kind: GateKind, qubits: &[usize]) -> Result<Op, CircuitError> {
        if qubits.len() != kind.arity() {
            return Err(CircuitError::Arity {
                gate: kind,
                expected: kind.arity(),
                found: qubits.len(),
            });
        }
        let mut q = [0; 3];
        q[..qubits.len()].copy_from_slice(qubits);
        Ok(Op { kind, qubits: q })
    }

    pub fn h(q: usize) -> Op {
        Op { kind: GateKind::H, qubits: [q, 0, 0] }
    }
    pub fn x(q: usize) -> Op {
        Op { kind: GateKind::X, qubits: [q, 0, 0] }
    }
    pub fn y(q: usize) -> Op {
        Op { kind: GateKind::Y, qubits: [q, 0, 0] }
    }
    pub fn z(q: usize) -> Op {
        Op { kind: GateKind::Z, qubits: [q, 0, 0] }
    }
    pub fn s(q: usize) -> Op {
        Op { kind: GateKind::S, qubits: [q, 0, 0] }
    }
    pub fn cx(control: usize, target: usize) -> Op {
        Op { kind: GateKind::CX, qubits: [control, target, 0] }
    }
    pub fn cz(a: usize, b: usize) -> Op {
        Op { kind: GateKind::CZ, qubits: [a, b, 0] }
    }
    pub fn ccz(a: usize, b: usize, c: usize) -> Op {
        Op { kind: GateKind::CCZ, qubits: [a, b, c] }
    }
    pub fn prep0(q: usize) -> Op {
        Op { kind: GateKind::Prep0, qubits: [q, 0, 0] }
    }
    pub fn prep_plus(q: usize) -> Op {
        Op { kind: GateKind::PrepPlus, qubits: [q, 0, 0] }
    }
    pub fn measz(q: usize) -> Op {
        Op { kind: GateKind::MeasZ, qubits: [q, 0, 0] }
    }
    pub fn transversal_h() -> Op {
        Op { kind: GateKind::TransversalH, qubits: [0; 3] }
    }

    pub fn qubits(&self) -> &[usize] {
        &self.qubits[..self.kind.arity()]
    }

    /// Qubits the op acts on; the transversal marker touches all of them.
    pub fn support(&self, num_qubits: usize) -> Vec<usize> {
        if self.kind == GateKind::TransversalH {
            (0..num_qubits).collect()
        } else {
            self.qubits().to_vec()
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for q in self.qubits() {
            write!(f, " {q}")?;
        }
        Ok(())
    }
}

/// Role of a physical (or logical) register slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Data,
    Top,
    Bottom,
    Ancilla,
    Flag,
}

impl Role {
    pub fn is_block(self) -> bool {
        matches!(self, Role::Data | Role::Top | Role::Bottom)
    }
}

/// One circuit-rule violation, as reported by [`Circuit::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Arity { op: usize },
    OutOfRange { op: usize, qubit: usize },
    DuplicateIndex { op: usize, qubit: usize },
    GateAfterMeasure { op: usize, qubit: usize },
    PrepNotFirst { op: usize, qubit: usize },
    DoubleMeasure { op: usize, qubit: usize },
}

impl Violation {
    pub fn op_index(&self) -> usize {
        match *self {
            Violation::Arity { op }
            | Violation::OutOfRange { op, .. }
            | Violation::DuplicateIndex { op, .. }
            | Violation::GateAfterMeasure { op, .. }
            | Violation::PrepNotFirst { op, .. }
            | Violation::DoubleMeasure { op, .. } => op,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity { op } => write!(f, "arity mismatch at op {op}"),
            Violation::OutOfRange { op, qubit } => {
                write!(f, "out-of-range qubit {qubit} at op {op}")
            }
            Violation::DuplicateIndex { op, qubit } => {
                write!(f, "duplicate index {qubit} at op {op}")
            }
            Violation::GateAfterMeasure { op, qubit } => {
                write!(f, "gate-after-measure on qubit {qubit} at op {op}")
            }
            Violation::PrepNotFirst { op, qubit } => {
                write!(f, "preparation of qubit {qubit} is not its first op at op {op}")
            }
            Violation::DoubleMeasure { op, qubit } => {
                write!(f, "qubit {qubit} measured twice at op {op}")
            }
        }
    }
}

/// An ordered gate list over labelled registers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Circuit {
    num_qubits: usize,
    roles: Vec<Role>,
    ops: Vec<Op>,
}

impl Circuit {
    /// Empty circuit with every register labelled [`Role::Data`].
    pub fn new(num_qubits: usize) -> Circuit {
        Circuit { num_qubits, roles: vec![Role::Data; num_qubits], ops: Vec::new() }
    }

    /// Builds and validates a circuit in one step.
    pub fn from_ops(num_qubits: usize, ops: Vec<Op>) -> Result<Circuit, CircuitError> {
        let c = Circuit { num_qubits, roles: vec![Role::Data; num_qubits], ops };
        c.check()?;
        Ok(c)
    }

    pub(crate) fn from_parts_unchecked(roles: Vec<Role>, ops: Vec<Op>) -> Circuit {
        Circuit { num_qubits: roles.len(), roles, ops }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, q: usize) -> Role {
        self.roles[q]
    }

    pub fn with_roles(mut self, roles: Vec<Role>) -> Circuit {
        assert_eq!(roles.len(), self.num_qubits, "role table must cover every qubit");
        self.roles = roles;
        self
    }

    /// Appends an op and re-checks the invariants it could break.
    pub fn push(&mut self, op: Op) -> Result<(), CircuitError> {
        self.ops.push(op);
        if let Err(e) = self.check() {
            self.ops.pop();
            return Err(e);
        }
        Ok(())
    }

    /// Number of MEASZ ops, i.e. the length of every shot record.
    pub fn num_measurements(&self) -> usize {
        self.ops.iter().filter(|o| o.kind == GateKind::MeasZ).count()
    }

    /// Qubit read by each measured bit, in bit order.
    pub fn measured_qubits(&self) -> Vec<usize> {
        self.ops
            .iter()
            .filter(|o| o.kind == GateKind::MeasZ)
            .map(|o| o.qubits()[0])
            .collect()
    }

    /// Lists every invariant violation; empty iff the circuit is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut touched = vec![false; self.num_qubits];
        let mut measured = vec![false; self.num_qubits];
        for (i, op) in self.ops.iter().enumerate() {
            let qs = op.qubits();
            if qs.len() != op.kind.arity() {
                out.push(Violation::Arity { op: i });
                continue;
            }
            let mut ok = true;
            for (a, &q) in qs.iter().enumerate() {
                if q >= self.num_qubits {
                    out.push(Violation::OutOfRange { op: i, qubit: q });
                    ok = false;
                }
                if qs[..a].contains(&q) {
                    out.push(Violation::DuplicateIndex { op: i, qubit: q });
                    ok = false;
                }
            }
            if !ok {
                continue;
            }
            for q in op.support(self.num_qubits) {
                if measured[q] {
                    if op.kind == GateKind::MeasZ {
                        out.push(Violation::DoubleMeasure { op: i, qubit: q });
                    } else {
                        out.push(Violation::GateAfterMeasure { op: i, qubit: q });
                    }
                }
                if op.kind.is_prep() && touched[q] {
                    out.push(Violation::PrepNotFirst { op: i, qubit: q });
                }
                touched[q] = true;
                if op.kind == GateKind::MeasZ {
                    measured[q] = true;
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    fn check(&self) -> Result<(), CircuitError> {
        match self.validate().into_iter().next() {
            None => Ok(()),
            Some(v) => Err(CircuitError::Invalid(v)),
        }
    }

    /// Per-class gate tallies.
    pub fn gate_counts(&self) -> GateCounts {
        let mut counts = GateCounts::default();
        for op in &self.ops {
            match op.kind.class() {
                GateClass::OneQubit => {
                    counts.one_qubit += if op.kind == GateKind::TransversalH {
                        self.num_qubits
                    } else {
                        1
                    }
                }
                GateClass::TwoQubit => counts.two_qubit += 1,
                GateClass::ThreeQubit => counts.three_qubit += 1,
                GateClass::Prep => counts.prep += 1,
                GateClass::Measure => counts.measure += 1,
            }
        }
        counts
    }

    /// Per-mnemonic tallies.
    pub fn kind_counts(&self) -> BTreeMap<GateKind, usize> {
        let mut m = BTreeMap::new();
        for op in &self.ops {
            *m.entry(op.kind).or_insert(0) += 1;
        }
        m
    }

    /// Canonical text form; always starts with the `qubits N` header.
    pub fn to_text(&self) -> String {
        let mut s = format!("qubits {}\n", self.num_qubits);
        for op in &self.ops {
            s.push_str(&op.to_string());
            s.push('\n');
        }
        s
    }

    /// Parses the line-oriented text format.
    pub fn parse(source: &str) -> Result<Circuit, CircuitError> {
        let mut header: Option<usize> = None;
        let mut ops = Vec::new();
        for (lineno, raw) in source.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut words = line.split_whitespace();
            let head = words.next().unwrap_or_default();
            let args: Result<Vec<usize>, _> = words.map(str::parse::<usize>).collect();
            let args = args.map_err(|_| CircuitError::Syntax {
                line: lineno + 1,
                message: format!("expected decimal qubit indices in `{line}`"),
            })?;
            if head == "qubits" {
                if header.is_some() || !ops.is_empty() || args.len() != 1 {
                    return Err(CircuitError::Syntax {
                        line: lineno + 1,
                        message: "`qubits N` must be the first line and take one count".into(),
                    });
                }
                header = Some(args[0]);
                continue;
            }
            let kind = GateKind::from_mnemonic(head).ok_or_else(|| CircuitError::Syntax {
                line: lineno + 1,
                message: format!("unknown gate `{head}`"),
            })?;
            let op = Op::new(kind, &args).map_err(|e| match e {
                CircuitError::Arity { gate, expected, found } => {
                    CircuitError::ArityAt { line: lineno + 1, gate, expected, found }
                }
                other => other,
            })?;
            ops.push(op);
        }
        let referenced = ops.iter().flat_map(|o| o.qubits().iter().copied()).max().map_or(0, |m| m + 1);
        let num_qubits = header.unwrap_or(referenced);
        Circuit::from_ops(num_qubits, ops)
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Gate tallies partitioned by class. Sums to the op count, except that a
/// transversal-H marker counts once per qubit.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCounts {
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub three_qubit: usize,
    pub prep: usize,
    pub measure: usize,
}

impl GateCounts {
    pub fn total(&self) -> usize {
        self.one_qubit + self.two_qubit + self.three_qubit + self.prep + self.measure
    }
}
