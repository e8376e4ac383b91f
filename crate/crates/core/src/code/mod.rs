//! The `[[2m, 2m-2, 2]]` block: parameters, gadget catalog, compiler and
//! shot decoding.
//!
//! Stabilizers are `S_x = X^{⊗n}` and `S_z = Z^{⊗n}`. Logical operators on
//! qubit `i` are `X̄_i = X_t X_i` and `Z̄_i = Z_i Z_b`, so every weight-one
//! Pauli is detected and some weight-two ones are logical.

mod builder;
mod compile;
mod encoded;
mod params;

pub use builder::{
    encode_block, logical_ccz, logical_cz, logical_pauli, targeted_h, transversal_h, Basis, BlockBuilder,
    CheckAncilla, Fragment, Gadget,
};
pub use compile::{compile_logical_circuit, compile_with, CompileOptions, ModeOverride};
pub use encoded::{DecodedShot, EncodedCircuit, Manifest, RejectReason};
pub use params::{CodeParams, GadgetMode};
