use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::faults::{enumerate_fault_locations, FaultLocation};
use crate::circuit::{Circuit, GateClass};
use crate::error::FaultError;
use crate::sim::{shot_rng, Insertion};

/// Stochastic Pauli noise, one independent event per fault site.
///
/// A firing gate site gets a uniformly random non-identity Pauli on the
/// qubits the gate touched. CCZ sites fire with `p3`, which defaults to
/// `2 * p2` when parsed without an explicit value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub p3: f64,
    pub pmeas: f64,
    pub pprep: f64,
}

impl NoiseModel {
    pub fn zero() -> NoiseModel {
        NoiseModel { p1: 0.0, p2: 0.0, p3: 0.0, pmeas: 0.0, pprep: 0.0 }
    }

    pub fn new(p1: f64, p2: f64, pmeas: f64, pprep: f64) -> Result<NoiseModel, FaultError> {
        NoiseModel { p1, p2, p3: 2.0 * p2, pmeas, pprep }.validated()
    }

    /// Same model with every rate multiplied by `factor` (clamped to 1).
    pub fn scaled(&self, factor: f64) -> NoiseModel {
        let s = |p: f64| (p * factor).min(1.0);
        NoiseModel { p1: s(self.p1), p2: s(self.p2), p3: s(self.p3), pmeas: s(self.pmeas), pprep: s(self.pprep) }
    }

    /// Rates at which the encoded Toffoli benchmarks reject roughly as
    /// often as on hardware while the unencoded baselines stay near 97.5%.
    /// Preparation is noisier than readout so that ancilla-heavy circuits
    /// see the extra detection events that flag qubits bring.
    pub fn calibrated() -> NoiseModel {
        NoiseModel { p1: 1e-3, p2: 8e-3, p3: 1.6e-2, pmeas: 2e-3, pprep: 1.5e-2 }
    }

    pub fn validated(self) -> Result<NoiseModel, FaultError> {
        for (name, value) in [("p1", self.p1), ("p2", self.p2), ("p3", self.p3), ("pmeas", self.pmeas), ("pprep", self.pprep)] {
            if !(0.0..=1.0).contains(&value) {
                return Err(FaultError::InvalidNoise { name, value });
            }
        }
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        [self.p1, self.p2, self.p3, self.pmeas, self.pprep].iter().all(|&p| p == 0.0)
    }

    /// Firing probability of a site of the given class.
    pub fn rate(&self, class: GateClass) -> f64 {
        match class {
            GateClass::OneQubit => self.p1,
            GateClass::TwoQubit => self.p2,
            GateClass::ThreeQubit => self.p3,
            GateClass::Prep => self.pprep,
            GateClass::Measure => self.pmeas,
        }
    }
}

/// Trapped-ion-like rates: `p2 = 2e-3`, `p1 = p2 / 10`, SPAM `1e-3`.
impl Default for NoiseModel {
    fn default() -> NoiseModel {
        NoiseModel { p1: 2e-4, p2: 2e-3, p3: 4e-3, pmeas: 1e-3, pprep: 1e-3 }
    }
}

impl fmt::Display for NoiseModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p1={},p2={},p3={},pmeas={},pprep={}", self.p1, self.p2, self.p3, self.pmeas, self.pprep)
    }
}

/// Parses `p1=..,p2=..,pmeas=..,pprep=..` (any subset, missing keys are 0;
/// `p3` defaults to `2 * p2`).
impl FromStr for NoiseModel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut nm = NoiseModel::zero();
        let mut p3 = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part.split_once('=').ok_or_else(|| format!("expected key=value, got `{part}`"))?;
            let v: f64 = value.trim().parse().map_err(|_| format!("bad number `{value}` for {key}"))?;
            match key.trim() {
                "p1" => nm.p1 = v,
                "p2" => nm.p2 = v,
                "p3" => p3 = Some(v),
                "pmeas" => nm.pmeas = v,
                "pprep" => nm.pprep = v,
                other => return Err(format!("unknown noise parameter `{other}`")),
            }
        }
        nm.p3 = p3.unwrap_or(2.0 * nm.p2);
        nm.validated().map_err(|e| e.to_string())
    }
}

/// Groups of alternative faults at one site: the site fires with `rate` and
/// then picks one alternative uniformly.
#[derive(Clone, Debug)]
pub struct FaultSite {
    pub rate: f64,
    pub alternatives: Vec<FaultLocation>,
}

/// Every fault site of `circuit` with its firing rate, in circuit order.
pub fn fault_sites(circuit: &Circuit, nm: &NoiseModel) -> Vec<FaultSite> {
    let mut sites: Vec<FaultSite> = Vec::new();
    for loc in enumerate_fault_locations(circuit) {
        let op = &circuit.ops()[loc.op_index];
        let same_site = sites
            .last()
            .is_some_and(|s| s.alternatives[0].op_index == loc.op_index && s.alternatives[0].qubits == loc.qubits);
        if same_site {
            sites.last_mut().unwrap().alternatives.push(loc);
        } else {
            // a transversal-H marker is one 1q site per qubit, which its class already says
            sites.push(FaultSite { rate: nm.rate(op.kind.class()), alternatives: vec![loc] });
        }
    }
    sites
}

/// Draws one fault pattern; the result is sorted by op index.
pub fn sample_insertions<R: Rng>(sites: &[FaultSite], rng: &mut R) -> Vec<Insertion> {
    let mut out = Vec::new();
    for site in sites {
        if site.rate > 0.0 && rng.gen::<f64>() < site.rate {
            let pick = rng.gen_range(0..site.alternatives.len());
            out.extend(site.alternatives[pick].insertions());
        }
    }
    out
}

/// `circuit` with one sampled fault pattern written in as explicit Pauli
/// ops (readout flips become an X just before the measurement).
pub fn instrument_noise(circuit: &Circuit, nm: &NoiseModel, seed: u64) -> Circuit {
    let sites = fault_sites(circuit, nm);
    let mut rng = shot_rng(seed, 0);
    let mut chosen: Vec<&FaultLocation> = Vec::new();
    for site in &sites {
        if site.rate > 0.0 && rng.gen::<f64>() < site.rate {
            chosen.push(&site.alternatives[rng.gen_range(0..site.alternatives.len())]);
        }
    }
    super::faults::apply_locations(circuit, &chosen)
}
