//! Circuit-level Pauli noise, single-fault enumeration and the exhaustive
//! fault-tolerance verifier.
//!
//! Faults sit right after the op they belong to. A gadget is accepted as
//! fault tolerant when no single fault anywhere in the circuit leads to an
//! accepted shot with a logical outcome the ideal circuit never produces.

mod faults;
mod model;
mod verify;

pub use faults::{enumerate_fault_locations, inject_fault, FaultLocation};
pub use model::{fault_sites, instrument_noise, sample_insertions, FaultSite, NoiseModel};
pub use verify::{classify, verify_fault_tolerance, FaultVerdict, FtReport, WRONG_TOLERANCE};
