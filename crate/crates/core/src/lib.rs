//! Compiler, simulator and fault-tolerance verifier for the Iceberg
//! `[[2m, 2m-2, 2]]` error-detecting code.
//!
//! Numeric code is generic over [`Scalar`]; [`State`] and [`StateF32`] are the
//! concrete state-vector types. Distributions and verdicts are always `f64`.

use std::fmt::Debug;

use num_traits::{Float, FromPrimitive};

pub mod circuit;
pub mod code;
pub mod error;
pub mod experiment;
pub mod noise;
pub mod passes;
pub mod pauli;
pub mod sim;

pub use circuit::{Circuit, GateClass, GateCounts, GateKind, Op, Role, Violation};
pub use code::{compile_logical_circuit, CodeParams, EncodedCircuit, GadgetMode};
pub use error::{CircuitError, CodeError, FaultError, SimError};
pub use pauli::{Pauli, PauliString, Phase};
pub use sim::{run_distribution, sample_shots, Bits, OutcomeDistribution, StateVector};

/// Floating-point type the simulator runs on.
pub trait Scalar: Float + FromPrimitive + Send + Sync + Debug + 'static {}

impl Scalar for f32 {}
impl Scalar for f64 {}

pub type State = StateVector<f64>;
pub type StateF32 = StateVector<f32>;
