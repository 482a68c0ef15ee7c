//! Variational eigensolver stack on a Clifford+T fault-tolerant backend.
//!
//! `circuit` holds the parameterized IR and its translation to exact
//! Clifford+T words, `engine` the dense statevector simulator (generic over
//! the working precision), `models` the spin Hamiltonians with their ansatz
//! builders and reference ground energies, and `vqe` the optimizer loop.

pub mod circuit;
pub mod engine;
pub mod models;
pub mod vqe;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum FtvqeError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("bad circuit: {0}")]
    BadCircuit(String),
    #[error("bad model: {0}")]
    BadModel(String),
    #[error("expectation has imaginary residue {imag:e} above threshold {threshold:e}")]
    NonHermitian { imag: f64, threshold: f64 },
    #[error("eigensolver stalled with residual {residual:e}")]
    EigensolverStalled { residual: f64 },
    #[error(transparent)]
    Synth(#[from] rssynth::SynthError),
}

pub use circuit::{
    CliffordTCircuit, CtGate, GateKind, ParamCircuit, ParamGate, RotationSite, Transpiled,
    lower_two_qubit, transpile,
};
pub use engine::{Pauli, PauliSum, StateVector};
pub use models::{ModelKind, ModelSpec, exact_ground_energy, tfim_free_fermion_energy};
pub use vqe::{DigitSchedule, GradientRule, Mode, VqeConfig, VqeStatus, VqeTrace, minimize};
