use std::f64::consts::FRAC_1_SQRT_2;

use super::matrix::{c, r, ComplexMatrix, C64, ONE, ZERO};

/// Gate library.
#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
    H,
    S,
    /// √X
    SX,
    /// `diag(e^{−iθ/2}, e^{iθ/2})`
    RZ(f64),
    CZ,
    /// Control on the first target.
    CNOT,
    /// Any unitary; its dimension fixes the arity.
    Unitary(ComplexMatrix),
}

impl Gate {
    pub fn arity(&self) -> usize {
        match self {
            Gate::I | Gate::X | Gate::Y | Gate::Z | Gate::H | Gate::S | Gate::SX | Gate::RZ(_) => 1,
            Gate::CZ | Gate::CNOT => 2,
            Gate::Unitary(m) => m.rows().trailing_zeros() as usize,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Gate::I => "I",
            Gate::X => "X",
            Gate::Y => "Y",
            Gate::Z => "Z",
            Gate::H => "H",
            Gate::S => "S",
            Gate::SX => "SX",
            Gate::RZ(_) => "RZ",
            Gate::CZ => "CZ",
            Gate::CNOT => "CNOT",
            Gate::Unitary(_) => "U",
        }
    }

    pub fn matrix(&self) -> ComplexMatrix {
        let s = FRAC_1_SQRT_2;
        match self {
            Gate::I => ComplexMatrix::identity(2),
            Gate::X => ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
            Gate::Y => ComplexMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
            Gate::Z => ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
            Gate::H => ComplexMatrix::from_real_rows(&[[s, s], [s, -s]]),
            Gate::S => ComplexMatrix::diagonal(&[ONE, c(0.0, 1.0)]),
            Gate::SX => ComplexMatrix::from_rows(&[
                [c(0.5, 0.5), c(0.5, -0.5)],
                [c(0.5, -0.5), c(0.5, 0.5)],
            ]),
            Gate::RZ(theta) => ComplexMatrix::diagonal(&[
                C64::from_polar(1.0, -theta / 2.0),
                C64::from_polar(1.0, theta / 2.0),
            ]),
            Gate::CZ => ComplexMatrix::diagonal(&[ONE, ONE, ONE, r(-1.0)]),
            Gate::CNOT => ComplexMatrix::from_real_rows(&[
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            Gate::Unitary(m) => m.clone(),
        }
    }

    /// Exact inverse. Self-inverse gates map to themselves, `RZ(θ)` to
    /// `RZ(−θ)`; `S` and `SX` become explicit adjoint matrices.
    pub fn inverse(&self) -> Gate {
        match self {
            Gate::I | Gate::X | Gate::Y | Gate::Z | Gate::H | Gate::CZ | Gate::CNOT => self.clone(),
            Gate::RZ(theta) => Gate::RZ(-theta),
            Gate::S | Gate::SX => Gate::Unitary(self.matrix().adjoint()),
            Gate::Unitary(m) => Gate::Unitary(m.adjoint()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_is_unitary() {
        for g in [Gate::I, Gate::X, Gate::Y, Gate::Z, Gate::H, Gate::S, Gate::SX, Gate::RZ(0.7), Gate::CZ, Gate::CNOT] {
            assert!(g.matrix().is_unitary(1e-14), "{}", g.name());
            let prod = &g.inverse().matrix() * &g.matrix();
            assert!(prod.max_abs_diff(&ComplexMatrix::identity(prod.rows())) < 1e-14, "{}", g.name());
        }
    }

    #[test]
    fn sx_squares_to_x() {
        let sx = Gate::SX.matrix();
        assert!((&sx * &sx).max_abs_diff(&Gate::X.matrix()) < 1e-15);
    }

    #[test]
    fn arity() {
        assert_eq!(Gate::Unitary(ComplexMatrix::identity(8)).arity(), 3);
        assert_eq!(Gate::CNOT.arity(), 2);
        assert_eq!(Gate::RZ(1.0).arity(), 1);
    }
}
