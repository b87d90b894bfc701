//! Simulation of scrambled-information decoding through a postselected
//! teleportation loop.
//!
//! A single-qubit message is scrambled with a three-qubit unitary together
//! with a two-qubit bath, part of the output is teleported backwards through
//! a Bell pair that is later postselected, and the inverse scrambler recovers
//! the message on a qubit that was measured before the message existed.
//!
//! The crate provides
//! * [`qcore`]: dense states, gates, circuits and the linear algebra they use,
//! * [`scramblers`]: the two Clifford scramblers and Haar sampling,
//! * [`protocol`]: analytic engines, the exact shot pipeline and a
//!   shot-by-shot emulator with stochastic Pauli noise,
//! * [`otoc`]: out-of-time-order correlators and their averages,
//! * [`tomography`]: single-qubit Pauli tomography on postselected counts.

pub mod error;
pub mod otoc;
pub mod protocol;
pub mod qcore;
pub mod scramblers;
pub mod tomography;

pub use error::{Error, Result};
