use std::collections::BTreeMap;

use super::gate::Gate;
use super::matrix::ComplexMatrix;
use super::state::{Axis, StateVector};
use super::wires::{check_wires, MAX_QUBITS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum Instruction {
    Gate { gate: Gate, targets: Vec<usize> },
    /// Projective Pauli measurement; the outcome bit is `0` for `+1`.
    MeasurePauli { axis: Axis, wire: usize, tag: String },
    /// Returns the wire to `|0⟩` irrespective of its state.
    Reset { wire: usize },
    /// Resets the wire, then rotates `|0⟩` to `state`.
    PrepareState { wire: usize, state: StateVector },
    /// Bell-basis readout of a wire pair; the recorded value is the two-bit
    /// outcome with `0` meaning `Φ⁺`.
    PostselectBell { wires: [usize; 2], tag: String },
}

impl Instruction {
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Instruction::Gate { targets, .. } => targets.clone(),
            Instruction::MeasurePauli { wire, .. }
            | Instruction::Reset { wire }
            | Instruction::PrepareState { wire, .. } => vec![*wire],
            Instruction::PostselectBell { wires, .. } => wires.to_vec(),
        }
    }
}

/// Static, ordered list of instructions on a fixed register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_wires: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(n_wires: usize) -> Result<Self> {
        if n_wires == 0 || n_wires > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n_wires));
        }
        Ok(Self { n_wires, instructions: Vec::new() })
    }

    pub fn n_wires(&self) -> usize {
        self.n_wires
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }

    pub fn push(&mut self, inst: Instruction) -> Result<&mut Self> {
        check_wires(&inst.wires(), self.n_wires)?;
        match &inst {
            Instruction::Gate { gate, targets } => {
                let m = gate.matrix();
                if m.rows() != 1 << targets.len() || !m.is_square() {
                    return Err(Error::DimensionMismatch { expected: 1 << targets.len(), found: m.rows() });
                }
                let dev = m.unitarity_deviation();
                if dev > 1e-10 {
                    return Err(Error::NotUnitary(dev));
                }
            }
            Instruction::PrepareState { state, .. } => {
                if state.n_qubits() != 1 {
                    return Err(Error::DimensionMismatch { expected: 2, found: state.dim() });
                }
                state.ensure_normalized()?;
            }
            _ => {}
        }
        self.instructions.push(inst);
        Ok(self)
    }

    pub fn gate(&mut self, gate: Gate, targets: &[usize]) -> Result<&mut Self> {
        self.push(Instruction::Gate { gate, targets: targets.to_vec() })
    }

    /// Appends every instruction of `other`, remapping its wire `k` to `wires[k]`.
    pub fn append_mapped(&mut self, other: &Circuit, wires: &[usize]) -> Result<&mut Self> {
        if wires.len() != other.n_wires {
            return Err(Error::DimensionMismatch { expected: other.n_wires, found: wires.len() });
        }
        for inst in &other.instructions {
            let mapped = match inst.clone() {
                Instruction::Gate { gate, targets } => {
                    Instruction::Gate { gate, targets: targets.iter().map(|&t| wires[t]).collect() }
                }
                Instruction::MeasurePauli { axis, wire, tag } => {
                    Instruction::MeasurePauli { axis, wire: wires[wire], tag }
                }
                Instruction::Reset { wire } => Instruction::Reset { wire: wires[wire] },
                Instruction::PrepareState { wire, state } => {
                    Instruction::PrepareState { wire: wires[wire], state }
                }
                Instruction::PostselectBell { wires: [a, b], tag } => {
                    Instruction::PostselectBell { wires: [wires[a], wires[b]], tag }
                }
            };
            self.push(mapped)?;
        }
        Ok(self)
    }

    /// Gate-only circuit implementing the inverse unitary: reversed order,
    /// each gate inverted.
    pub fn inverse(&self) -> Result<Circuit> {
        let mut out = Circuit::new(self.n_wires)?;
        for (index, inst) in self.instructions.iter().enumerate().rev() {
            match inst {
                Instruction::Gate { gate, targets } => {
                    out.instructions.push(Instruction::Gate { gate: gate.inverse(), targets: targets.clone() });
                }
                _ => return Err(Error::NonGateInstruction { index }),
            }
        }
        Ok(out)
    }

    /// Count of gates by name.
    pub fn gate_census(&self) -> BTreeMap<&'static str, usize> {
        let mut census = BTreeMap::new();
        for inst in &self.instructions {
            if let Instruction::Gate { gate, .. } = inst {
                *census.entry(gate.name()).or_insert(0) += 1;
            }
        }
        census
    }
}

/// Full-register matrix of `op` acting on `targets` (identity elsewhere).
pub fn embed_operator(op: &ComplexMatrix, targets: &[usize], n_wires: usize) -> ComplexMatrix {
    let dim = 1usize << n_wires;
    let offsets = super::wires::local_offsets(targets, n_wires);
    let target_mask = offsets[offsets.len() - 1];
    let mut full = ComplexMatrix::zeros(dim, dim);
    for base in 0..dim {
        if base & target_mask != 0 {
            continue;
        }
        for (i, &oi) in offsets.iter().enumerate() {
            for (j, &oj) in offsets.iter().enumerate() {
                full[(base | oi, base | oj)] = op[(i, j)];
            }
        }
    }
    full
}

/// Product of the embedded gate matrices, first instruction applied first.
pub fn circuit_unitary(c: &Circuit) -> Result<ComplexMatrix> {
    let mut u = ComplexMatrix::identity(1 << c.n_wires);
    for (index, inst) in c.instructions.iter().enumerate() {
        match inst {
            Instruction::Gate { gate, targets } => {
                let full = embed_operator(&gate.matrix(), targets, c.n_wires);
                u = &full * &u;
            }
            _ => return Err(Error::NonGateInstruction { index }),
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::matrix::{r, ONE};

    #[test]
    fn empty_circuit_is_identity() {
        let c = Circuit::new(3).unwrap();
        assert_eq!(circuit_unitary(&c).unwrap(), ComplexMatrix::identity(8));
    }

    #[test]
    fn cz_triangle_is_classical_scrambler() {
        let mut c = Circuit::new(3).unwrap();
        c.gate(Gate::CZ, &[0, 1]).unwrap().gate(Gate::CZ, &[0, 2]).unwrap().gate(Gate::CZ, &[1, 2]).unwrap();
        let m = -ONE;
        let expected = ComplexMatrix::diagonal(&[ONE, ONE, ONE, m, ONE, m, m, m]);
        assert_eq!(circuit_unitary(&c).unwrap(), expected);
    }

    #[test]
    fn hadamard_involution() {
        let mut c = Circuit::new(1).unwrap();
        c.gate(Gate::H, &[0]).unwrap().gate(Gate::H, &[0]).unwrap();
        assert!(circuit_unitary(&c).unwrap().max_abs_diff(&ComplexMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn non_gate_instruction_rejected() {
        let mut c = Circuit::new(2).unwrap();
        c.gate(Gate::H, &[0]).unwrap();
        c.push(Instruction::Reset { wire: 1 }).unwrap();
        assert_eq!(circuit_unitary(&c), Err(Error::NonGateInstruction { index: 1 }));
        assert_eq!(c.inverse(), Err(Error::NonGateInstruction { index: 1 }));
    }

    #[test]
    fn push_validates() {
        let mut c = Circuit::new(2).unwrap();
        assert_eq!(c.gate(Gate::CZ, &[1, 1]).unwrap_err(), Error::DuplicateWire(1));
        assert!(matches!(c.gate(Gate::CZ, &[0]).unwrap_err(), Error::DimensionMismatch { .. }));
        let bad = ComplexMatrix::diagonal(&[ONE, r(2.0)]);
        assert!(matches!(c.gate(Gate::Unitary(bad), &[0]).unwrap_err(), Error::NotUnitary(_)));
    }

    #[test]
    fn cnot_control_is_first_target() {
        let mut c = Circuit::new(2).unwrap();
        c.gate(Gate::CNOT, &[1, 0]).unwrap();
        let u = circuit_unitary(&c).unwrap();
        // |01⟩ (wire 1 set) -> |11⟩
        assert_eq!(u[(0b11, 0b01)], ONE);
    }
}
