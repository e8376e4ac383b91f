//! Dense state-vector simulation and exact terminal-measurement distributions.

mod dist;
mod exec;
mod state;

pub use dist::{bits_from_str, bits_to_string, select_bits, shot_rng, Bits, OutcomeDistribution, Sampler, SUPPORT_THRESHOLD};
pub use exec::{run_distribution, run_distribution_with, sample_shots, Insertion, Program, QUBIT_CAP};
pub use state::{apply_gate, pauli_expectation, statevector_fidelity, StateVector};
