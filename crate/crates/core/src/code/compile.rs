use serde::{Deserialize, Serialize};

use super::builder::{BlockBuilder, Gadget};
use super::encoded::EncodedCircuit;
use super::params::{CodeParams, GadgetMode};
use crate::circuit::{Circuit, GateKind};
use crate::error::CodeError;
use crate::sim::{Program, QUBIT_CAP};

/// Forces the `ordinal`-th gadget of one kind (0-based, in emission order)
/// into a given mode.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeOverride {
    pub gadget: Gadget,
    pub ordinal: usize,
    pub mode: GadgetMode,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompileOptions {
    pub mode: GadgetMode,
    pub overrides: Vec<ModeOverride>,
    /// Block size; the smallest block that fits when `None`.
    pub m: Option<usize>,
    /// Live-width limit checked against the simulator; `None` skips the check.
    pub cap: Option<usize>,
}

impl CompileOptions {
    pub fn new(mode: GadgetMode) -> CompileOptions {
        CompileOptions { mode, overrides: Vec::new(), m: None, cap: Some(QUBIT_CAP) }
    }

    pub fn with_m(mut self, m: usize) -> CompileOptions {
        self.m = Some(m);
        self
    }

    pub fn with_override(mut self, gadget: Gadget, ordinal: usize, mode: GadgetMode) -> CompileOptions {
        self.overrides.push(ModeOverride { gadget, ordinal, mode });
        self
    }

    fn mode_for(&self, gadget: Gadget, ordinal: usize) -> GadgetMode {
        self.overrides
            .iter()
            .rev()
            .find(|o| o.gadget == gadget && o.ordinal == ordinal)
            .map_or(self.mode, |o| o.mode)
    }
}

/// Compiles with default options.
pub fn compile_logical_circuit(logical: &Circuit, mode: GadgetMode) -> Result<EncodedCircuit, CodeError> {
    compile_with(logical, &CompileOptions::new(mode))
}

/// Encodes `logical` into one block.
///
/// The encoder and the final syndrome readout always use their flagged
/// forms; `options` selects the mode of the targeted-H, CZ and CCZ gadgets.
/// CX is lowered to H·CZ·H on the target. Reported outputs are the logical
/// qubits in the order the logical circuit measures them.
pub fn compile_with(logical: &Circuit, options: &CompileOptions) -> Result<EncodedCircuit, CodeError> {
    let q = logical.num_qubits();
    let params = match options.m {
        Some(m) => {
            let p = CodeParams::new(m)?;
            if q > p.k() {
                return Err(CodeError::TooManyLogical { needed: q, k: p.k() });
            }
            p
        }
        None => CodeParams::for_logical(q),
    };
    if let Some(v) = logical.validate().first() {
        return Err(CodeError::InvalidLogical(v.to_string()));
    }

    let mut block = BlockBuilder::new(params);
    block.encode(GadgetMode::Ft)?;
    let mut emitted: Vec<Gadget> = Vec::new();
    let mut next = |gadget: Gadget| {
        let ordinal = emitted.iter().filter(|&&g| g == gadget).count();
        emitted.push(gadget);
        options.mode_for(gadget, ordinal)
    };
    let mut outputs = Vec::new();
    for op in logical.ops() {
        let qs = op.qubits();
        match op.kind {
            GateKind::Prep0 => {}
            GateKind::PrepPlus | GateKind::H => {
                let mode = next(Gadget::TargetedH);
                block.targeted_h(qs[0], mode)?;
            }
            GateKind::X => {
                block.logical_x(qs[0])?;
            }
            GateKind::Z => {
                block.logical_z(qs[0])?;
            }
            GateKind::Y => {
                block.logical_z(qs[0])?.logical_x(qs[0])?;
            }
            GateKind::TransversalH => {
                block.transversal_h()?;
            }
            GateKind::CZ => {
                let mode = next(Gadget::LogicalCz);
                block.logical_cz(qs[0], qs[1], mode)?;
            }
            GateKind::CX => {
                let h1 = next(Gadget::TargetedH);
                block.targeted_h(qs[1], h1)?;
                let mode = next(Gadget::LogicalCz);
                block.logical_cz(qs[0], qs[1], mode)?;
                let h2 = next(Gadget::TargetedH);
                block.targeted_h(qs[1], h2)?;
            }
            GateKind::CCZ => {
                let mode = next(Gadget::LogicalCcz);
                block.logical_ccz(qs[0], qs[1], qs[2], mode)?;
            }
            GateKind::MeasZ => outputs.push(qs[0]),
            GateKind::S => return Err(CodeError::UnsupportedGate(op.kind)),
        }
    }
    block.syndrome_readout(GadgetMode::Ft)?;
    let ec = block.finish(outputs)?;
    if let Some(cap) = options.cap {
        Program::compile_with_cap(&ec.circuit, cap)?;
    }
    Ok(ec)
}
