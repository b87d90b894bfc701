//! Dense state-vector and density-matrix layer.
//!
//! Registers are big-endian: wire 0 is the most significant bit of a
//! computational-basis index, so `|q0 q1 q2⟩` reads left to right. All
//! values are immutable once built; every operation returns a new value.

mod circuit;
mod gate;
mod matrix;
mod state;
mod wires;

pub use circuit::{circuit_unitary, embed_operator, Circuit, Instruction};
pub use gate::Gate;
pub use matrix::{c, equal_up_to_global_phase, kron, r, ComplexMatrix, C64, ONE, ZERO};
pub use state::{
    fidelity_pure, hermitian_eigen, partial_trace, Axis, DensityMatrix, PauliEigenstate, StateVector,
    NORM_TOL,
};
pub use wires::{check_wires, local_offsets, MAX_QUBITS};

use crate::error::Result;

/// Applies `u` on `targets` of `state`.
pub fn apply_unitary(state: &StateVector, u: &ComplexMatrix, targets: &[usize]) -> Result<StateVector> {
    let dev = u.unitarity_deviation();
    if dev > NORM_TOL {
        return Err(crate::Error::NotUnitary(dev));
    }
    state.apply_unitary(u, targets)
}

/// `(⟨onto|_targets ⊗ I)|state⟩` and its squared norm.
pub fn project(state: &StateVector, targets: &[usize], onto: &StateVector) -> Result<(StateVector, f64)> {
    state.project(targets, onto)
}
