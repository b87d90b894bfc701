use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Classical readout flip probability: one value for every wire, or one per wire.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReadoutError {
    Uniform(f64),
    PerWire(Vec<f64>),
}

impl ReadoutError {
    pub fn for_wire(&self, wire: usize) -> f64 {
        match self {
            ReadoutError::Uniform(p) => *p,
            ReadoutError::PerWire(v) => v.get(wire).copied().unwrap_or(0.0),
        }
    }

    fn values(&self) -> Vec<f64> {
        match self {
            ReadoutError::Uniform(p) => vec![*p],
            ReadoutError::PerWire(v) => v.clone(),
        }
    }
}

/// Stochastic Pauli noise after gates plus classical readout flips.
///
/// After a gate on `k` wires, with probability `p1` (`k = 1`) or `p2`
/// (`k ≥ 2`) a uniformly random non-identity Pauli string is applied to
/// those wires.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub p1: f64,
    pub p2: f64,
    pub readout_eps: ReadoutError,
}

impl Default for NoiseModel {
    fn default() -> Self {
        Self::zero()
    }
}

impl NoiseModel {
    pub fn zero() -> Self {
        Self { p1: 0.0, p2: 0.0, readout_eps: ReadoutError::Uniform(0.0) }
    }

    /// Every probability set to `p`.
    pub fn uniform(p: f64) -> Self {
        Self { p1: p, p2: p, readout_eps: ReadoutError::Uniform(p) }
    }

    /// Trapped-ion calibration magnitudes (register order E, H1, H2, E').
    pub fn trapped_ion() -> Self {
        Self { p1: 2.1e-5, p2: 8.8e-4, readout_eps: ReadoutError::Uniform(2.5e-3) }
    }

    /// Superconducting calibration magnitudes (register order E, H1, H2, E').
    pub fn superconducting() -> Self {
        Self {
            p1: 1.5e-4,
            p2: 1.62e-3,
            readout_eps: ReadoutError::PerWire(vec![1.07e-2, 6.30e-3, 2.54e-2, 2.86e-2]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let check = |name: &'static str, value: f64| {
            if (0.0..=1.0).contains(&value) {
                Ok(())
            } else {
                Err(Error::InvalidProbability { name, value })
            }
        };
        check("p1", self.p1)?;
        check("p2", self.p2)?;
        for v in self.readout_eps.values() {
            check("readout_eps", v)?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.p1 == 0.0 && self.p2 == 0.0 && self.readout_eps.values().iter().all(|&p| p == 0.0)
    }

    pub fn gate_error(&self, arity: usize) -> f64 {
        if arity <= 1 {
            self.p1
        } else {
            self.p2
        }
    }
}
