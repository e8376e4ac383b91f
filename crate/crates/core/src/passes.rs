//! Code-aware rewrites and cost accounting on logical circuits.
//!
//! Targeted H is by far the most expensive logical gate, while H on every
//! logical qubit at once is one physical layer. [`align_transversal_h`]
//! merges H columns into the transversal marker; [`physical_cost`] shows
//! what that buys under each configuration.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::circuit::{Circuit, GateKind, Op};
use crate::code::{compile_with, CodeParams, CompileOptions, GadgetMode};
use crate::error::CodeError;

/// `cx c t` becomes `h t; cz c t; h t`; everything else is copied.
pub fn lower_cx(logical: &Circuit) -> Circuit {
    let mut ops = Vec::with_capacity(logical.ops().len());
    for op in logical.ops() {
        if op.kind == GateKind::CX {
            let (c, t) = (op.qubits()[0], op.qubits()[1]);
            ops.extend([Op::h(t), Op::cz(c, t), Op::h(t)]);
        } else {
            ops.push(*op);
        }
    }
    Circuit::from_parts_unchecked(logical.roles().to_vec(), ops)
}

fn check_supported(logical: &Circuit) -> Result<(), CodeError> {
    if let Some(op) = logical.ops().iter().find(|op| op.kind == GateKind::S) {
        return Err(CodeError::UnsupportedGate(op.kind));
    }
    if let Some(v) = logical.validate().first() {
        return Err(CodeError::InvalidLogical(v.to_string()));
    }
    Ok(())
}

/// For every qubit, the index of an H that can be slid to the cut just
/// before `ops[cut]`: the first op on the qubit at or after the cut, or the
/// last one before it, must be an H.
fn column_at(ops: &[Op], num_qubits: usize, cut: usize) -> Option<Vec<usize>> {
    let touches = |op: &Op, q: usize| op.support(num_qubits).contains(&q);
    (0..num_qubits)
        .map(|q| {
            let after = ops[cut..].iter().position(|op| touches(op, q)).map(|i| cut + i);
            let before = ops[..cut].iter().rposition(|op| touches(op, q));
            [after, before].into_iter().flatten().find(|&i| ops[i].kind == GateKind::H)
        })
        .collect()
}

/// Merges full columns of H gates into transversal-H markers.
///
/// CX is first lowered to H·CZ·H so the H gates it hides can join a column.
/// H only moves past ops on other qubits. The scan is greedy: the earliest
/// cut at which every qubit can supply an H gets a marker, then the scan
/// continues after it. With no column anywhere the input comes back as is.
pub fn align_transversal_h(logical: &Circuit) -> Result<Circuit, CodeError> {
    check_supported(logical)?;
    let n = logical.num_qubits();
    let mut ops = lower_cx(logical).ops().to_vec();
    let mut merged = false;
    let mut cut = 0;
    while n > 0 && cut <= ops.len() {
        match column_at(&ops, n, cut) {
            Some(mut picked) => {
                let before = picked.iter().filter(|&&i| i < cut).count();
                picked.sort_unstable();
                for &i in picked.iter().rev() {
                    ops.remove(i);
                }
                let at = cut - before;
                ops.insert(at, Op::transversal_h());
                merged = true;
                cut = at + 1;
            }
            None => cut += 1,
        }
    }
    if !merged {
        return Ok(logical.clone());
    }
    Ok(Circuit::from_parts_unchecked(logical.roles().to_vec(), ops))
}

/// Tallies for one configuration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostRow {
    pub one_qubit: usize,
    pub two_qubit: usize,
    pub three_qubit: usize,
    pub ancillas: usize,
    pub check_bits: usize,
}

impl CostRow {
    fn of(circuit: &Circuit, ancillas: usize, check_bits: usize) -> CostRow {
        let g = circuit.gate_counts();
        CostRow { one_qubit: g.one_qubit, two_qubit: g.two_qubit, three_qubit: g.three_qubit, ancillas, check_bits }
    }

    fn minus(self, other: CostRow) -> CostRow {
        CostRow {
            one_qubit: self.one_qubit - other.one_qubit,
            two_qubit: self.two_qubit - other.two_qubit,
            three_qubit: self.three_qubit - other.three_qubit,
            ancillas: self.ancillas - other.ancillas,
            check_bits: self.check_bits - other.check_bits,
        }
    }
}

/// Physical cost of one logical circuit.
///
/// Encoded rows count the logical gates only. The flagged encoder and
/// syndrome readout are the same in both modes and sit in `frame`; add it
/// for whole-circuit totals. Check bits of the frame include the `n` parity
/// bits of the terminal readout.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostReport {
    pub m: usize,
    pub unencoded: CostRow,
    pub nonft: CostRow,
    pub ft: CostRow,
    pub frame: CostRow,
}

impl CostReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("plain struct")
    }
}

impl fmt::Display for CostReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        writeln!(s, "{:<12} {:>6} {:>6} {:>6} {:>9} {:>11}", "config", "1q", "2q", "3q", "ancillas", "check_bits")?;
        for (name, r) in [("unencoded", self.unencoded), ("nonft", self.nonft), ("ft", self.ft), ("frame", self.frame)] {
            writeln!(
                s,
                "{:<12} {:>6} {:>6} {:>6} {:>9} {:>11}",
                name, r.one_qubit, r.two_qubit, r.three_qubit, r.ancillas, r.check_bits
            )?;
        }
        f.write_str(&s)
    }
}

/// Compiles `logical` in both modes on an `m`-block and counts gates.
pub fn physical_cost(logical: &Circuit, params: CodeParams) -> Result<CostReport, CodeError> {
    check_supported(logical)?;
    let compile = |c: &Circuit, mode| -> Result<CostRow, CodeError> {
        let mut options = CompileOptions::new(mode).with_m(params.m());
        options.cap = None;
        let ec = compile_with(c, &options)?;
        Ok(CostRow::of(&ec.circuit, ec.num_ancillas(), ec.check_bits.len() + ec.parity_set.len()))
    };
    let empty = Circuit::new(logical.num_qubits());
    let frame = compile(&empty, GadgetMode::Ft)?;
    Ok(CostReport {
        m: params.m(),
        unencoded: CostRow::of(logical, 0, 0),
        nonft: compile(logical, GadgetMode::NonFt)?.minus(frame),
        ft: compile(logical, GadgetMode::Ft)?.minus(frame),
        frame,
    })
}
