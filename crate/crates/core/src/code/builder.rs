//! Physical gate sequences for the block: encoder, logical gates with and
//! without flags, and the terminal syndrome readout.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::encoded::EncodedCircuit;
use super::params::{CodeParams, GadgetMode};
use crate::circuit::{Circuit, GateKind, Op, Role};
use crate::error::CodeError;

/// Measurement (or preparation) basis of a check ancilla.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    Z,
    X,
}

/// The gadget an ancilla belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Gadget {
    Encode,
    TargetedH,
    LogicalCz,
    LogicalCcz,
    Readout,
}

/// An ancilla whose terminal readout must be 0 for the shot to be kept.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckAncilla {
    pub qubit: usize,
    pub prep: Basis,
    pub measure: Basis,
    pub gadget: Gadget,
}

/// Incremental builder for one encoded block.
///
/// Ancillas are appended after the `n` block qubits in allocation order and
/// are prepared where they are allocated. [`BlockBuilder::finish`] measures
/// the block first, then every ancilla, so measured bit `j < n` is physical
/// qubit `j` and bit `n + a` is the `a`-th ancilla.
#[derive(Clone, Debug)]
pub struct BlockBuilder {
    params: CodeParams,
    roles: Vec<Role>,
    ops: Vec<Op>,
    top: usize,
    bottom: usize,
    ancillas: Vec<CheckAncilla>,
    readout: bool,
    modes: BTreeSet<GadgetMode>,
}

impl BlockBuilder {
    /// A bare block in `|0…0⟩` (not yet encoded).
    pub fn new(params: CodeParams) -> BlockBuilder {
        let n = params.n();
        let mut roles = vec![Role::Data; n];
        roles[params.top_index()] = Role::Top;
        roles[params.bottom_index()] = Role::Bottom;
        BlockBuilder {
            params,
            roles,
            ops: Vec::new(),
            top: params.top_index(),
            bottom: params.bottom_index(),
            ancillas: Vec::new(),
            readout: false,
            modes: BTreeSet::new(),
        }
    }

    pub fn params(&self) -> CodeParams {
        self.params
    }

    pub fn ops(&self) -> &[Op] {
        &self.ops
    }

    pub fn ancillas(&self) -> &[CheckAncilla] {
        &self.ancillas
    }

    /// Physical index currently playing the top role.
    pub fn top(&self) -> usize {
        self.top
    }

    /// Physical index currently playing the bottom role.
    pub fn bottom(&self) -> usize {
        self.bottom
    }

    /// Gadget modes used so far.
    pub fn modes(&self) -> &BTreeSet<GadgetMode> {
        &self.modes
    }

    fn data(&self, i: usize) -> Result<usize, CodeError> {
        self.params.data_index(i)
    }

    fn alloc(&mut self, prep: Basis, measure: Basis, gadget: Gadget, role: Role) -> usize {
        let q = self.roles.len();
        self.roles.push(role);
        self.ops.push(match prep {
            Basis::Z => Op::prep0(q),
            Basis::X => Op::prep_plus(q),
        });
        self.ancillas.push(CheckAncilla { qubit: q, prep, measure, gadget });
        q
    }

    fn check_open(&self) -> Result<(), CodeError> {
        if self.readout {
            Err(CodeError::AlreadyMeasured)
        } else {
            Ok(())
        }
    }

    /// GHZ preparation of logical `|0…0⟩`: H on the top, then a CX chain down
    /// the block. In FT mode one ancilla checks `Z_{q1} Z_b`.
    pub fn encode(&mut self, mode: GadgetMode) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        let n = self.params.n();
        self.ops.push(Op::h(self.top));
        for q in 0..n - 1 {
            self.ops.push(Op::cx(q, q + 1));
        }
        if mode == GadgetMode::Ft {
            let a = self.alloc(Basis::Z, Basis::Z, Gadget::Encode, Role::Ancilla);
            self.ops.push(Op::cx(1, a));
            self.ops.push(Op::cx(n - 1, a));
        }
        Ok(self)
    }

    /// `X̄_i = X_t X_i`.
    pub fn logical_x(&mut self, i: usize) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        let q = self.data(i)?;
        self.ops.push(Op::x(self.top));
        self.ops.push(Op::x(q));
        Ok(self)
    }

    /// `Z̄_i = Z_i Z_b`.
    pub fn logical_z(&mut self, i: usize) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        let q = self.data(i)?;
        self.ops.push(Op::z(q));
        self.ops.push(Op::z(self.bottom));
        Ok(self)
    }

    /// H on every physical qubit: logical H on every logical qubit, with the
    /// top and bottom roles exchanged.
    pub fn transversal_h(&mut self) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        for q in 0..self.params.n() {
            self.ops.push(Op::h(q));
        }
        std::mem::swap(&mut self.top, &mut self.bottom);
        self.roles[self.top] = Role::Top;
        self.roles[self.bottom] = Role::Bottom;
        Ok(self)
    }

    /// Logical H on one logical qubit: the qubit is decoupled from the
    /// bottom and top, rotated, and re-encoded.
    ///
    /// The FT form adds five flags. `fa` (Z type) and `fb` (X type) couple to
    /// the target before the H and get an H of their own, so each watches the
    /// target in both bases across the bare stretch; `fc` watches the bottom
    /// over the whole gadget; `fd` and `fe` are Bell-paired with `fa` and
    /// `fb` and catch faults on those two flags, which would otherwise leak a
    /// weight-two error back onto the block.
    pub fn targeted_h(&mut self, i: usize, mode: GadgetMode) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        let q = self.data(i)?;
        let (t, b) = (self.top, self.bottom);
        self.modes.insert(mode);
        if mode == GadgetMode::NonFt {
            self.ops.extend([Op::cx(b, q), Op::cx(q, t), Op::h(q), Op::cx(q, t), Op::cx(b, q)]);
            return Ok(self);
        }
        let fa = self.alloc(Basis::Z, Basis::X, Gadget::TargetedH, Role::Flag);
        let fb = self.alloc(Basis::X, Basis::Z, Gadget::TargetedH, Role::Flag);
        let fc = self.alloc(Basis::Z, Basis::Z, Gadget::TargetedH, Role::Flag);
        let fd = self.alloc(Basis::X, Basis::Z, Gadget::TargetedH, Role::Flag);
        let fe = self.alloc(Basis::Z, Basis::X, Gadget::TargetedH, Role::Flag);
        self.ops.extend([
            Op::cx(fd, fa),
            Op::cx(fb, fe),
            Op::cx(q, fa),
            Op::cx(b, fa),
            Op::cx(fb, q),
            Op::cx(fb, t),
            Op::cx(b, fc),
            Op::cx(b, q),
            Op::cx(q, t),
            Op::h(q),
            Op::h(fa),
            Op::h(fb),
            Op::h(fd),
            Op::h(fe),
            Op::cx(q, t),
            Op::cx(b, q),
            Op::cx(fa, t),
            Op::cx(q, fb),
            Op::cx(fa, q),
            Op::cx(b, fb),
            Op::cx(b, fc),
            Op::cx(fe, fb),
            Op::cx(fa, fd),
        ]);
        Ok(self)
    }

    /// Logical CZ from the phase `(q_a ⊕ β)(q_b ⊕ β)`.
    pub fn logical_cz(&mut self, a: usize, b: usize, mode: GadgetMode) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        if a == b {
            return Err(CodeError::RepeatedIndex);
        }
        let (qa, qb, beta) = (self.data(a)?, self.data(b)?, self.bottom);
        self.modes.insert(mode);
        match mode {
            GadgetMode::NonFt => {
                self.ops.extend([Op::cz(qa, qb), Op::cz(qa, beta), Op::cz(qb, beta)]);
            }
            GadgetMode::Ft => {
                let f = self.alloc(Basis::X, Basis::X, Gadget::LogicalCz, Role::Flag);
                let g = self.alloc(Basis::Z, Basis::Z, Gadget::LogicalCz, Role::Flag);
                for (x, y) in [(qa, qb), (qa, beta), (qb, beta)] {
                    self.flagged_cz(x, y, f, g);
                }
            }
        }
        self.ops.push(Op::z(beta));
        Ok(self)
    }

    /// Logical CCZ from the phase `(q_a ⊕ β)(q_b ⊕ β)(q_c ⊕ β)`.
    pub fn logical_ccz(&mut self, a: usize, b: usize, c: usize, mode: GadgetMode) -> Result<&mut Self, CodeError> {
        self.check_open()?;
        if self.params.k() < 3 {
            return Err(CodeError::BlockTooSmallForCcz(self.params.k()));
        }
        if a == b || a == c || b == c {
            return Err(CodeError::RepeatedIndex);
        }
        let (qa, qb, qc, beta) = (self.data(a)?, self.data(b)?, self.data(c)?, self.bottom);
        let cczs = [(qa, qb, qc), (qa, qb, beta), (qa, qc, beta), (qb, qc, beta)];
        let czs = [(qa, beta), (qb, beta), (qc, beta)];
        self.modes.insert(mode);
        match mode {
            GadgetMode::NonFt => {
                self.ops.extend(cczs.iter().map(|&(x, y, z)| Op::ccz(x, y, z)));
                self.ops.extend(czs.iter().map(|&(x, y)| Op::cz(x, y)));
            }
            GadgetMode::Ft => {
                let f1 = self.alloc(Basis::X, Basis::X, Gadget::LogicalCcz, Role::Flag);
                let f2 = self.alloc(Basis::X, Basis::X, Gadget::LogicalCcz, Role::Flag);
                let g1 = self.alloc(Basis::Z, Basis::Z, Gadget::LogicalCcz, Role::Flag);
                let g2 = self.alloc(Basis::Z, Basis::Z, Gadget::LogicalCcz, Role::Flag);
                for (x, y, z) in cczs {
                    self.flagged_ccz([x, y, z], [f1, f2], [g1, g2]);
                }
                for (x, y) in czs {
                    self.flagged_cz(x, y, f1, g1);
                }
            }
        }
        self.ops.push(Op::z(beta));
        Ok(self)
    }

    /// CZ(x, y) with `x` watched by an X-type flag `f` and a Z-type flag `g`.
    ///
    /// Inside the `f` sandwich the CZ acts as CZ(x ⊕ f, y); the CZ(f, y)
    /// right after it cancels the extra term before the sandwich closes. The
    /// `g` window encloses the whole sandwich so an X on `f` that would be
    /// copied onto `x` by the closing CX is seen by `g`.
    fn flagged_cz(&mut self, x: usize, y: usize, f: usize, g: usize) {
        self.ops.extend([
            Op::cx(x, g),
            Op::cx(f, x),
            Op::cz(x, y),
            Op::cz(f, y),
            Op::cx(f, x),
            Op::cx(x, g),
        ]);
    }

    /// CCZ(x, y, z) with `x` and `y` watched by one X-type and one Z-type
    /// flag each. Inside the X sandwiches the phase polynomial picks up
    /// `f1·y·z`, `x·f2·z` and `f1·f2·z`; all three compensations sit inside
    /// the sandwiches, which sit inside the Z windows, as for the CZ.
    fn flagged_ccz(&mut self, [x, y, z]: [usize; 3], [f1, f2]: [usize; 2], [g1, g2]: [usize; 2]) {
        self.ops.extend([
            Op::cx(x, g1),
            Op::cx(y, g2),
            Op::cx(f1, x),
            Op::cx(f2, y),
            Op::ccz(x, y, z),
            Op::ccz(f1, y, z),
            Op::ccz(x, f2, z),
            Op::ccz(f1, f2, z),
            Op::cx(f1, x),
            Op::cx(f2, y),
            Op::cx(x, g1),
            Op::cx(y, g2),
        ]);
    }

    /// Appends the `S_x` measurement: ancilla in `|+⟩`, CX onto every block
    /// qubit, measured in the X basis. In FT mode a flag catches an ancilla X
    /// fault between the first and last CX. `S_z` is read from the parity of
    /// the terminal block readout.
    pub fn syndrome_readout(&mut self, mode: GadgetMode) -> Result<&mut Self, CodeError> {
        if self.readout {
            return Err(CodeError::ReadoutTwice);
        }
        let n = self.params.n();
        let a = self.alloc(Basis::X, Basis::X, Gadget::Readout, Role::Ancilla);
        let flag = (mode == GadgetMode::Ft).then(|| self.alloc(Basis::Z, Basis::Z, Gadget::Readout, Role::Flag));
        for q in 0..n {
            if q == n - 1 {
                if let Some(g) = flag {
                    self.ops.push(Op::cx(a, g));
                }
            }
            self.ops.push(Op::cx(a, q));
            if q == 0 {
                if let Some(g) = flag {
                    self.ops.push(Op::cx(a, g));
                }
            }
        }
        self.readout = true;
        Ok(self)
    }

    /// Unmeasured fragment: the ops so far over block plus ancilla qubits.
    pub fn fragment(&self) -> Fragment {
        Fragment {
            circuit: Circuit::from_parts_unchecked(self.roles.clone(), self.ops.clone()),
            ancillas: self.ancillas.clone(),
        }
    }

    /// Appends terminal measurements and builds the check registry.
    /// `outputs` lists the logical qubits reported, in output-bit order.
    pub fn finish(mut self, outputs: Vec<usize>) -> Result<EncodedCircuit, CodeError> {
        for &o in &outputs {
            self.data(o)?;
        }
        let n = self.params.n();
        // basis change right after each X-measured ancilla's last use, so it
        // stops being live there
        let mut last = vec![None; self.roles.len()];
        for (i, op) in self.ops.iter().enumerate() {
            for &q in op.qubits() {
                last[q] = Some(i);
            }
        }
        let mut after: Vec<Vec<Op>> = vec![Vec::new(); self.ops.len()];
        for a in self.ancillas.iter().filter(|a| a.measure == Basis::X) {
            if let Some(i) = last[a.qubit] {
                after[i].push(Op::h(a.qubit));
            }
        }
        let mut ops = Vec::with_capacity(self.ops.len() + self.ancillas.len() + n);
        for (op, extra) in self.ops.drain(..).zip(after) {
            ops.push(op);
            ops.extend(extra);
        }
        self.ops = ops;
        for q in 0..n {
            self.ops.push(Op::measz(q));
        }
        for a in &self.ancillas {
            self.ops.push(Op::measz(a.qubit));
        }
        let logical_pairs = (0..self.params.k()).map(|i| (i + 1, self.bottom)).collect();
        let mode = match self.modes.len() {
            0 => "none".to_string(),
            1 => self.modes.iter().next().unwrap().to_string(),
            _ => "mixed".to_string(),
        };
        Ok(EncodedCircuit {
            circuit: Circuit::from_parts_unchecked(self.roles, self.ops),
            params: self.params,
            mode,
            check_bits: (n..n + self.ancillas.len()).collect(),
            parity_set: (0..n).collect(),
            logical_pairs,
            outputs,
            ancillas: self.ancillas,
        })
    }
}

/// A gate sequence over the block and the ancillas it allocated.
#[derive(Clone, Debug)]
pub struct Fragment {
    pub circuit: Circuit,
    pub ancillas: Vec<CheckAncilla>,
}

impl Fragment {
    pub fn num_ancillas(&self) -> usize {
        self.ancillas.len()
    }

    /// Count of ops of one kind.
    pub fn count(&self, kind: GateKind) -> usize {
        self.circuit.ops().iter().filter(|o| o.kind == kind).count()
    }
}

/// Encoder alone, on a fresh block.
pub fn encode_block(params: CodeParams, mode: GadgetMode) -> Fragment {
    let mut b = BlockBuilder::new(params);
    b.encode(mode).expect("fresh block");
    b.fragment()
}

/// `X̄_i` (`x = true`) or `Z̄_i` as a two-gate fragment.
pub fn logical_pauli(params: CodeParams, x: bool, i: usize) -> Result<Fragment, CodeError> {
    let mut b = BlockBuilder::new(params);
    if x {
        b.logical_x(i)?;
    } else {
        b.logical_z(i)?;
    }
    Ok(b.fragment())
}

pub fn targeted_h(params: CodeParams, i: usize, mode: GadgetMode) -> Result<Fragment, CodeError> {
    let mut b = BlockBuilder::new(params);
    b.targeted_h(i, mode)?;
    Ok(b.fragment())
}

pub fn transversal_h(params: CodeParams) -> Fragment {
    let mut b = BlockBuilder::new(params);
    b.transversal_h().expect("fresh block");
    b.fragment()
}

pub fn logical_cz(params: CodeParams, a: usize, b: usize, mode: GadgetMode) -> Result<Fragment, CodeError> {
    let mut bb = BlockBuilder::new(params);
    bb.logical_cz(a, b, mode)?;
    Ok(bb.fragment())
}

pub fn logical_ccz(params: CodeParams, a: usize, b: usize, c: usize, mode: GadgetMode) -> Result<Fragment, CodeError> {
    let mut bb = BlockBuilder::new(params);
    bb.logical_ccz(a, b, c, mode)?;
    Ok(bb.fragment())
}
