use thiserror::Error;

use crate::circuit::{GateKind, Violation};

#[derive(Debug, Error)]
pub enum CircuitError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("`{gate}` takes {expected} qubit indices, found {found}")]
    Arity { gate: GateKind, expected: usize, found: usize },
    #[error("line {line}: `{gate}` takes {expected} qubit indices, found {found}")]
    ArityAt { line: usize, gate: GateKind, expected: usize, found: usize },
    #[error("invalid circuit: {0}")]
    Invalid(Violation),
}

#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("circuit needs {needed} simultaneously live qubits, engine cap is {cap}")]
    QubitCap { needed: usize, cap: usize },
    #[error("circuit records {0} measurement bits, at most 128 are supported")]
    TooManyMeasurements(usize),
    #[error("qubit index {qubit} out of range for a {num_qubits}-qubit state")]
    IndexOutOfRange { qubit: usize, num_qubits: usize },
    #[error("`{0}` is not a unitary gate")]
    NotUnitary(GateKind),
    #[error("Pauli string has {found} letters, state has {expected} qubits")]
    LengthMismatch { expected: usize, found: usize },
    #[error("Pauli string with phase ±i is not Hermitian")]
    NonHermitian,
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
}

#[derive(Debug, Error)]
pub enum CodeError {
    #[error("Iceberg block needs m >= 2, got {0}")]
    BlockTooSmall(usize),
    #[error("logical qubit {index} out of range for k = {k}")]
    LogicalIndex { index: usize, k: usize },
    #[error("logical gate needs distinct logical qubits")]
    RepeatedIndex,
    #[error("logical CCZ needs k >= 3 (m >= 3), block has k = {0}")]
    BlockTooSmallForCcz(usize),
    #[error("gate `{0}` is not supported at the logical level")]
    UnsupportedGate(GateKind),
    #[error("logical circuit uses {needed} qubits but the block only holds {k}")]
    TooManyLogical { needed: usize, k: usize },
    #[error("syndrome readout already appended")]
    ReadoutTwice,
    #[error("data qubits are already measured")]
    AlreadyMeasured,
    #[error("shot has {found} bits, encoded circuit measures {expected}")]
    ShotLength { expected: usize, found: usize },
    #[error("invalid logical circuit: {0}")]
    InvalidLogical(String),
    #[error("manifest does not fit the circuit: {0}")]
    Manifest(String),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Error)]
pub enum FaultError {
    #[error("fault location at op {op_index} does not match the circuit")]
    StaleLocation { op_index: usize },
    #[error("zero-noise accepted distribution does not match the ideal one (max deviation {deviation:.3e})")]
    SanityGate { deviation: f64 },
    #[error("zero-noise circuit rejects with probability {0:.3e}")]
    ZeroNoiseRejects(f64),
    #[error("noise probability {name} = {value} is outside [0, 1]")]
    InvalidNoise { name: &'static str, value: f64 },
    #[error("shot count must be at least 1")]
    NoShots,
    #[error("noise grid is empty")]
    EmptyGrid,
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    Sim(#[from] SimError),
}
