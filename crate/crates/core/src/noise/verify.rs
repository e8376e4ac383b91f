use serde::{Deserialize, Serialize};

use super::faults::{enumerate_fault_locations, FaultLocation};
use crate::code::EncodedCircuit;
use crate::error::FaultError;
use crate::sim::{OutcomeDistribution, Program, SUPPORT_THRESHOLD};

/// Accept-wrong mass below this counts as zero.
pub const WRONG_TOLERANCE: f64 = 1e-9;

/// Zero-noise acceptance must match the ideal within this.
const SANITY_TOLERANCE: f64 = 1e-9;

/// Outcome split for one injected fault.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaultVerdict {
    pub location: FaultLocation,
    pub p_reject: f64,
    pub p_accept_correct: f64,
    /// Accepted mass on logical outcomes outside the ideal support.
    pub p_accept_wrong: f64,
    /// Largest within-support deviation of the normalized accepted
    /// distribution from the ideal. Reported, never counted as wrong.
    pub distortion: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FtReport {
    pub locations: usize,
    pub max_p_accept_wrong: f64,
    /// Indices into `verdicts` with `p_accept_wrong >= WRONG_TOLERANCE`.
    pub offending: Vec<usize>,
    pub verdicts: Vec<FaultVerdict>,
}

impl FtReport {
    pub fn is_fault_tolerant(&self) -> bool {
        self.offending.is_empty()
    }

    /// Flat per-location export.
    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<_> = self
            .verdicts
            .iter()
            .map(|v| {
                serde_json::json!({
                    "op_index": v.location.op_index,
                    "qubits": v.location.qubits,
                    "pauli": v.location.label(),
                    "p_reject": v.p_reject,
                    "p_accept_correct": v.p_accept_correct,
                    "p_accept_wrong": v.p_accept_wrong,
                })
            })
            .collect();
        serde_json::json!({
            "locations": self.locations,
            "max_p_accept_wrong": self.max_p_accept_wrong,
            "offending": self.offending.iter().map(|&i| self.verdicts[i].location.to_string()).collect::<Vec<_>>(),
            "verdicts": rows,
        })
    }
}

/// Splits a raw distribution against the ideal logical distribution.
pub fn classify(ec: &EncodedCircuit, raw: &OutcomeDistribution, ideal: &OutcomeDistribution) -> (f64, f64, f64, f64) {
    let (accepted, p_reject) = ec.accepted(raw);
    let mut correct = 0.0;
    let mut wrong = 0.0;
    for (bits, p) in accepted.iter() {
        if ideal.get(bits) > SUPPORT_THRESHOLD {
            correct += p;
        } else {
            wrong += p;
        }
    }
    let distortion = if correct > 0.0 {
        ideal
            .iter()
            .map(|(bits, q)| (accepted.get(bits) / correct - q).abs())
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    (p_reject, correct, wrong, distortion)
}

/// Exhaustive single-fault check of `ec` against the ideal logical
/// distribution over its outputs.
pub fn verify_fault_tolerance(ec: &EncodedCircuit, ideal: &OutcomeDistribution) -> Result<FtReport, FaultError> {
    let program = Program::compile(&ec.circuit)?;
    let clean = program.run::<f64>(&[]);
    let (rejected, _, _, _) = classify(ec, &clean, ideal);
    if rejected > 1e-12 {
        return Err(FaultError::ZeroNoiseRejects(rejected));
    }
    let deviation = ec.accepted(&clean).0.max_abs_diff(ideal);
    if deviation > SANITY_TOLERANCE {
        return Err(FaultError::SanityGate { deviation });
    }

    let locations = enumerate_fault_locations(&ec.circuit);
    let sets: Vec<_> = locations.iter().map(FaultLocation::insertions).collect();
    let dists = program.run_each::<f64>(&sets);
    let verdicts: Vec<FaultVerdict> = locations
        .into_iter()
        .zip(&dists)
        .map(|(location, raw)| {
            let (p_reject, p_accept_correct, p_accept_wrong, distortion) = classify(ec, raw, ideal);
            FaultVerdict { location, p_reject, p_accept_correct, p_accept_wrong, distortion }
        })
        .collect();
    let offending: Vec<usize> = (0..verdicts.len()).filter(|&i| verdicts[i].p_accept_wrong >= WRONG_TOLERANCE).collect();
    Ok(FtReport {
        locations: verdicts.len(),
        max_p_accept_wrong: verdicts.iter().map(|v| v.p_accept_wrong).fold(0.0, f64::max),
        offending,
        verdicts,
    })
}
