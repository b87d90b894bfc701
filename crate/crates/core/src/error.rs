use crate::qcore::Axis;

/// Errors raised by the simulator.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length {0} is not a power of two")]
    NotPowerOfTwo(usize),

    #[error("register of {0} qubits exceeds the {max}-qubit cap", max = crate::qcore::MAX_QUBITS)]
    RegisterTooLarge(usize),

    #[error("wire {wire} out of range for a {n_wires}-wire register")]
    WireOutOfRange { wire: usize, n_wires: usize },

    #[error("wire {0} listed more than once")]
    DuplicateWire(usize),

    #[error("wire list is empty")]
    EmptyWireList,

    #[error("matrix is not unitary (max deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (max deviation {0:e})")]
    NotHermitian(f64),

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("value {0} lies outside [0, 1] beyond tolerance")]
    OutOfUnitInterval(f64),

    #[error("instruction {index} is not a gate")]
    NonGateInstruction { index: usize },

    #[error("postselection probability {0:e} is too small to condition on")]
    DegeneratePostselection(f64),

    #[error("no postselected shots in the {0} basis")]
    InsufficientStatistics(Axis),

    #[error("scrambler {0:?} has no circuit form; gate noise cannot be placed")]
    MissingCircuit(String),

    #[error("probability {name} = {value} is outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
