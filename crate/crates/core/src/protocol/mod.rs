//! The decoding protocol.
//!
//! Two analytic engines evaluate the postselected state on a purified
//! seven-qubit register; an exact density-matrix pipeline reproduces the
//! four-qubit shot flow without sampling; [`run_shots`] emulates that flow
//! shot by shot, with optional stochastic Pauli and readout noise.

mod analytic;
mod exact;
mod noise;
mod shots;

use serde::{Deserialize, Serialize};

pub use analytic::{
    bound_check, decode_analytic_pctc, decode_analytic_yk, forward_state, inverse_state, purified_initial_state,
    OTOC_A, OTOC_B,
    success_probability, BoundCheck,
};
pub use exact::{exact_conditional_distribution, ConditionalDistribution};
pub use noise::{NoiseModel, ReadoutError};
pub use shots::{build_shot_circuit, run_shots, run_shots_ideal, state_label, ShotExecutor, ShotOutcome, ShotStreams};

use crate::qcore::DensityMatrix;
use crate::tomography::BasisCounts;

/// Postselection probabilities below this are treated as impossible.
pub const MIN_POSTSELECTION: f64 = 1e-14;

/// Single-qubit message dimension.
pub const D_A: usize = 2;

/// Wires assigned to each protocol role on a register.
///
/// The scrambler maps `A ⊗ H → H ⊗ E`: the message enters on its first
/// slot and the teleported fragment `E` leaves on its last. The decoder
/// `U†` maps `H ⊗ E → B ⊗ H`, so the receiver `B` appears on its first slot.
/// Each list holds the register wires that the matrix slots act on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubsystemLayout {
    pub n_wires: usize,
    /// `U†` slots: input `(H1, H2, E)`, output `(B, H1, H2)`.
    pub decoder: [usize; 3],
    /// `U` slots: input `(A, H1, H2)`, output `(H1, H2, E)`.
    pub encoder: [usize; 3],
    /// Partner of the decoder's `E` input in the Bell pair.
    pub e_prime: usize,
    /// Purifying partners of the decoder's bath inputs.
    pub h_prime: Option<[usize; 2]>,
}

impl SubsystemLayout {
    /// Analytic register `[A, H1, H2, E, E', H1', H2']`, with `B` produced
    /// on wire 1.
    pub const PURIFIED: SubsystemLayout =
        SubsystemLayout { n_wires: 7, decoder: [1, 2, 3], encoder: [0, 2, 3], e_prime: 4, h_prime: Some([5, 6]) };

    /// Four-qubit device register. Wire 0 carries B before the mid-circuit
    /// measurement and A after the reset; wire 2 carries E; wire 3 is E'.
    pub const SHOTS: SubsystemLayout =
        SubsystemLayout { n_wires: 4, decoder: [0, 1, 2], encoder: [0, 1, 2], e_prime: 3, h_prime: None };

    pub fn a(&self) -> usize {
        self.encoder[0]
    }

    pub fn b(&self) -> usize {
        self.decoder[0]
    }

    /// Wire holding the bath before decoding.
    pub fn bath(&self) -> [usize; 2] {
        [self.decoder[0], self.decoder[1]]
    }

    pub fn e_in(&self) -> usize {
        self.decoder[2]
    }

    pub fn e_out(&self) -> usize {
        self.encoder[2]
    }

    /// Decoder slots mirrored onto the purifying partners.
    pub fn decoder_partners(&self) -> Option<[usize; 3]> {
        self.h_prime.map(|hp| [hp[0], hp[1], self.e_prime])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Engine {
    AnalyticPctc,
    AnalyticYk,
    Shots,
}

/// Shot bookkeeping attached to a sampled result.
#[derive(Clone, Debug, PartialEq)]
pub struct ShotStats {
    pub total_shots: u64,
    pub postselected_shots: u64,
    pub per_basis: [BasisCounts; 3],
    /// Linear-inversion estimate before the physicality projection.
    pub rho_raw: DensityMatrix,
    pub fidelity_se: f64,
    pub probability_se: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolResult {
    pub rho: DensityMatrix,
    pub fidelity: f64,
    pub success_probability: f64,
    pub engine: Engine,
    pub shot_stats: Option<ShotStats>,
}
