use serde::{Deserialize, Serialize};

use super::builder::CheckAncilla;
use super::params::CodeParams;
use crate::circuit::Circuit;
use crate::error::CodeError;
use crate::sim::{bits_from_str, Bits, OutcomeDistribution};

/// A fully measured encoded circuit plus everything needed to post-select
/// and decode its shots.
#[derive(Clone, Debug)]
pub struct EncodedCircuit {
    pub circuit: Circuit,
    pub params: CodeParams,
    /// `"ft"`, `"nonft"`, `"mixed"` or `"none"` (no mode-dependent gadget).
    pub mode: String,
    /// Measured bits that must read 0 on an accepted shot.
    pub check_bits: Vec<usize>,
    /// Measured bits whose XOR must be 0 on an accepted shot (`S_z`).
    pub parity_set: Vec<usize>,
    /// For each logical qubit, the (data bit, bottom bit) pair whose XOR is
    /// its value.
    pub logical_pairs: Vec<(usize, usize)>,
    /// Logical qubits reported by [`EncodedCircuit::decode_shot`], in order.
    pub outputs: Vec<usize>,
    pub ancillas: Vec<CheckAncilla>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RejectReason {
    Ok,
    FlagFired,
    ParityOdd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodedShot {
    pub accepted: bool,
    pub reason: RejectReason,
    /// Output logical bits, bit `j` for `outputs[j]`. Meaningful only when
    /// accepted.
    pub logical: Bits,
}

/// The on-disk sidecar written next to a compiled circuit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Manifest {
    pub m: usize,
    pub mode: String,
    pub check_bits: Vec<usize>,
    pub parity_set: Vec<usize>,
    pub logical_pairs: Vec<(usize, usize)>,
    pub outputs: Vec<usize>,
}

impl EncodedCircuit {
    pub fn num_bits(&self) -> usize {
        self.circuit.num_measurements()
    }

    pub fn num_ancillas(&self) -> usize {
        self.ancillas.len()
    }

    pub fn decode_shot(&self, bits: Bits) -> DecodedShot {
        let bit = |j: usize| (bits >> j & 1) as u8;
        let logical = self
            .outputs
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &o)| {
                let (d, b) = self.logical_pairs[o];
                acc | (((bit(d) ^ bit(b)) as Bits) << j)
            });
        let reason = if self.check_bits.iter().any(|&j| bit(j) == 1) {
            RejectReason::FlagFired
        } else if self.parity_set.iter().fold(0, |p, &j| p ^ bit(j)) == 1 {
            RejectReason::ParityOdd
        } else {
            RejectReason::Ok
        };
        DecodedShot { accepted: reason == RejectReason::Ok, reason, logical }
    }

    /// Decodes a shot in bit-0-first string form; the length must match.
    pub fn decode_str(&self, shot: &str) -> Result<DecodedShot, CodeError> {
        let expected = self.num_bits();
        if shot.chars().count() != expected {
            return Err(CodeError::ShotLength { expected, found: shot.chars().count() });
        }
        let bits = bits_from_str(shot).ok_or(CodeError::ShotLength { expected, found: shot.len() })?;
        Ok(self.decode_shot(bits))
    }

    /// Splits a raw distribution into the (unnormalized) accepted logical
    /// distribution and the rejected mass.
    pub fn accepted(&self, raw: &OutcomeDistribution) -> (OutcomeDistribution, f64) {
        let mut rejected = 0.0;
        let mut kept = Vec::new();
        for (bits, p) in raw.iter() {
            let d = self.decode_shot(bits);
            if d.accepted {
                kept.push((d.logical, p));
            } else {
                rejected += p;
            }
        }
        (OutcomeDistribution::from_weights(self.outputs.len(), kept), rejected)
    }

    pub fn manifest(&self) -> Manifest {
        Manifest {
            m: self.params.m(),
            mode: self.mode.clone(),
            check_bits: self.check_bits.clone(),
            parity_set: self.parity_set.clone(),
            logical_pairs: self.logical_pairs.clone(),
            outputs: self.outputs.clone(),
        }
    }

    /// Rebuilds the decoder side from a circuit and its manifest.
    pub fn from_manifest(circuit: Circuit, manifest: &Manifest) -> Result<EncodedCircuit, CodeError> {
        let params = CodeParams::new(manifest.m)?;
        let bits = circuit.num_measurements();
        let in_range = manifest.check_bits.iter().chain(&manifest.parity_set).all(|&j| j < bits)
            && manifest.logical_pairs.iter().all(|&(d, b)| d < bits && b < bits)
            && manifest.outputs.iter().all(|&o| o < manifest.logical_pairs.len());
        if !in_range {
            return Err(CodeError::Manifest(format!("index out of range for {bits} measured bits")));
        }
        Ok(EncodedCircuit {
            circuit,
            params,
            mode: manifest.mode.clone(),
            check_bits: manifest.check_bits.clone(),
            parity_set: manifest.parity_set.clone(),
            logical_pairs: manifest.logical_pairs.clone(),
            outputs: manifest.outputs.clone(),
            ancillas: Vec::new(),
        })
    }
}
