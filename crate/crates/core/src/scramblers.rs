//! Three-qubit scramblers and Haar-random sampling.
//!
//! Wire convention for every scrambler: wire 0 carries the message in and the
//! teleported fragment out; wires 1 and 2 are the bath.

use std::f64::consts::SQRT_2;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::qcore::{circuit_unitary, equal_up_to_global_phase, r, Circuit, ComplexMatrix, Gate, StateVector, C64};

/// A named three-qubit unitary, optionally with a gate-level circuit.
#[derive(Clone, Debug, PartialEq)]
pub struct ScramblerSpec {
    name: String,
    matrix: ComplexMatrix,
    circuit: Option<Circuit>,
}

impl ScramblerSpec {
    /// Validates unitarity and, when a circuit is given, circuit/matrix
    /// agreement up to global phase (both within 1e-10).
    pub fn new(name: impl Into<String>, matrix: ComplexMatrix, circuit: Option<Circuit>) -> Result<Self> {
        if matrix.rows() != 8 || matrix.cols() != 8 {
            return Err(Error::DimensionMismatch { expected: 8, found: matrix.rows() });
        }
        let dev = matrix.unitarity_deviation();
        if dev > 1e-10 {
            return Err(Error::NotUnitary(dev));
        }
        if let Some(c) = &circuit {
            if c.n_wires() != 3 {
                return Err(Error::DimensionMismatch { expected: 3, found: c.n_wires() });
            }
            let cu = circuit_unitary(c)?;
            if !equal_up_to_global_phase(&cu, &matrix, 1e-10) {
                return Err(Error::InvalidArgument("circuit does not implement the scrambler matrix".into()));
            }
        }
        Ok(Self { name: name.into(), matrix, circuit })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn circuit(&self) -> Option<&Circuit> {
        self.circuit.as_ref()
    }

    /// Identity on three qubits: the protocol reduces to plain postselected
    /// teleportation.
    pub fn identity() -> Self {
        let circuit = Circuit::new(3).expect("3 wires");
        Self { name: "identity".into(), matrix: ComplexMatrix::identity(8), circuit: Some(circuit) }
    }

    /// Haar-random scrambler drawn from a seeded stream; matrix form only.
    pub fn haar(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Self { name: format!("haar:{seed}"), matrix: haar_random_unitary(8, &mut rng), circuit: None }
    }

    /// Parses `uq`, `uc`, `identity` or `haar:<seed>`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name.trim() {
            "uq" => Ok(u_q()),
            "uc" => Ok(u_c()),
            "identity" => Ok(Self::identity()),
            other => {
                let seed = other
                    .strip_prefix("haar:")
                    .and_then(|s| s.parse::<u64>().ok())
                    .ok_or_else(|| Error::InvalidArgument(format!("unknown scrambler {other:?}")))?;
                Ok(Self::haar(seed))
            }
        }
    }
}

/// Sign pattern of the quantum-information scrambler, overall factor
/// `1/(2√2)` omitted.
pub const U_Q_SIGNS: [[i8; 8]; 8] = [
    [1, 1, 1, -1, 1, -1, -1, -1],
    [1, -1, 1, 1, 1, 1, -1, 1],
    [1, 1, -1, 1, 1, -1, 1, 1],
    [-1, 1, 1, 1, -1, -1, -1, 1],
    [1, 1, 1, -1, -1, 1, 1, 1],
    [-1, 1, -1, -1, 1, 1, -1, 1],
    [-1, -1, 1, -1, 1, -1, 1, 1],
    [-1, 1, 1, 1, 1, 1, 1, -1],
];

/// Diagonal of the classical-information scrambler.
pub const U_C_DIAGONAL: [i8; 8] = [1, 1, 1, -1, 1, -1, -1, -1];

pub fn u_q_matrix() -> ComplexMatrix {
    let scale = 1.0 / (2.0 * SQRT_2);
    let rows: Vec<Vec<C64>> =
        U_Q_SIGNS.iter().map(|row| row.iter().map(|&s| r(s as f64 * scale)).collect()).collect();
    ComplexMatrix::from_rows(&rows)
}

pub fn u_c_matrix() -> ComplexMatrix {
    let diag: Vec<C64> = U_C_DIAGONAL.iter().map(|&s| r(s as f64)).collect();
    ComplexMatrix::diagonal(&diag)
}

/// Scrambler that delocalizes arbitrary single-qubit information.
pub fn u_q() -> ScramblerSpec {
    ScramblerSpec::new("uq", u_q_matrix(), Some(u_q_circuit())).expect("hard-coded scrambler is valid")
}

/// Diagonal scrambler that only spreads computational-basis information.
pub fn u_c() -> ScramblerSpec {
    ScramblerSpec::new("uc", u_c_matrix(), Some(u_c_circuit())).expect("hard-coded scrambler is valid")
}

fn push_cz_triangle(c: &mut Circuit) {
    for pair in [[0, 1], [0, 2], [1, 2]] {
        c.gate(Gate::CZ, &pair).expect("valid wires");
    }
}

/// Six CZ and three H: CZ triangle, H on every wire, CZ triangle.
///
/// The matrix is `D·H⊗3·D` with `D` the CZ-triangle diagonal, whose entries
/// `d_i d_j (−1)^{i·j} / 2√2` reproduce the sign table above. This layout
/// is checked against the matrix, not taken from a published drawing.
pub fn u_q_circuit() -> Circuit {
    let mut c = Circuit::new(3).expect("3 wires");
    push_cz_triangle(&mut c);
    for w in 0..3 {
        c.gate(Gate::H, &[w]).expect("valid wire");
    }
    push_cz_triangle(&mut c);
    c
}

pub fn u_c_circuit() -> Circuit {
    let mut c = Circuit::new(3).expect("3 wires");
    push_cz_triangle(&mut c);
    c
}

/// `RZ(π/2)·√X·RZ(π/2)`, equal to H up to a global phase.
pub fn hadamard_from_native() -> ComplexMatrix {
    let rz = Gate::RZ(std::f64::consts::FRAC_PI_2).matrix();
    &(&rz * &Gate::SX.matrix()) * &rz
}

/// Haar-distributed unitary: QR of a complex Ginibre matrix with each column
/// of Q rotated by the phase of the matching diagonal entry of R. Without the
/// phase fix the distribution is not Haar.
pub fn haar_random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    assert!(dim >= 1, "dimension must be positive");
    let scale = std::f64::consts::FRAC_1_SQRT_2;
    let ginibre = nalgebra::DMatrix::<C64>::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        C64::new(re * scale, im * scale)
    });
    let qr = ginibre.qr();
    let (mut q, rmat) = (qr.q(), qr.r());
    for j in 0..dim {
        let d = rmat[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    ComplexMatrix::from_nalgebra(&q)
}

/// Uniformly random pure state: first column of a Haar unitary.
pub fn random_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> StateVector {
    let u = haar_random_unitary(dim, rng);
    let v = StateVector::new(u.column(0)).expect("dimension is a power of two");
    v.normalized().expect("unit column")
}
