use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::matrix::{c, r, ComplexMatrix, C64, ONE, ZERO};
use super::wires::{check_wires, complement, local_offsets, qubits_for_len, wire_mask};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;

/// Pure state (possibly unnormalized) on an `n`-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>) -> Result<Self> {
        let n_qubits = qubits_for_len(amplitudes.len())?;
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[index] = ONE;
        Self { n_qubits, amplitudes }
    }

    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn phi_plus() -> Self {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        Self { n_qubits: 2, amplitudes: vec![r(s), ZERO, ZERO, r(s)] }
    }

    /// Maximally entangled state `Σ_i |i⟩|i⟩/√d` of two `n`-qubit halves.
    pub fn epr(n_qubits_per_side: usize) -> Self {
        let d = 1usize << n_qubits_per_side;
        let mut amplitudes = vec![ZERO; d * d];
        let a = r(1.0 / (d as f64).sqrt());
        for i in 0..d {
            amplitudes[i * d + i] = a;
        }
        Self { n_qubits: 2 * n_qubits_per_side, amplitudes }
    }

    /// Single-qubit state at Bloch angles `(θ, φ)`.
    pub fn bloch(theta: f64, phi: f64) -> Self {
        let (s, co) = (theta / 2.0).sin_cos();
        Self { n_qubits: 1, amplitudes: vec![r(co), C64::from_polar(s, phi)] }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    #[inline]
    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= NORM_TOL
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        if self.is_normalized() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("state has norm² {} (expected 1)", self.norm_sqr())))
        }
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::InvalidArgument("cannot normalize the zero vector".into()));
        }
        Ok(self.scale(r(1.0 / n)))
    }

    pub fn scale(&self, s: C64) -> Self {
        Self { n_qubits: self.n_qubits, amplitudes: self.amplitudes.iter().map(|a| a * s).collect() }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`, with `self` on the leading wires.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        if n > super::MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n));
        }
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for &a in &self.amplitudes {
            amplitudes.extend(other.amplitudes.iter().map(|&b| a * b));
        }
        Ok(Self { n_qubits: n, amplitudes })
    }

    pub fn kron_all(parts: &[&StateVector]) -> Result<Self> {
        let mut acc = Self { n_qubits: 0, amplitudes: vec![ONE] };
        for p in parts {
            acc = acc.kron(p)?;
        }
        Ok(acc)
    }

    pub fn to_column(&self) -> ComplexMatrix {
        ComplexMatrix::new(self.dim(), 1, self.amplitudes.clone()).expect("non-empty state")
    }

    /// Applies `u` to `targets` (identity elsewhere).
    ///
    /// `targets[0]` is the most significant bit of `u`'s local index.
    pub fn apply_unitary(&self, u: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        let mut out = self.clone();
        out.apply_unitary_mut(u, targets)?;
        Ok(out)
    }

    pub fn apply_unitary_mut(&mut self, u: &ComplexMatrix, targets: &[usize]) -> Result<()> {
        check_wires(targets, self.n_qubits)?;
        let local = 1usize << targets.len();
        if u.rows() != local || u.cols() != local {
            return Err(Error::DimensionMismatch { expected: local, found: u.rows().max(u.cols()) });
        }
        self.apply_operator_unchecked(u, targets);
        Ok(())
    }

    /// Applies an arbitrary square operator; callers validate shapes.
    pub(crate) fn apply_operator_unchecked(&mut self, u: &ComplexMatrix, targets: &[usize]) {
        let offsets = local_offsets(targets, self.n_qubits);
        let target_mask = offsets[offsets.len() - 1];
        let local = offsets.len();
        let mut gathered = vec![ZERO; local];
        for base in 0..self.dim() {
            if base & target_mask != 0 {
                continue;
            }
            for (g, &off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amplitudes[base | off];
            }
            for (row, &off) in offsets.iter().enumerate() {
                self.amplitudes[base | off] =
                    u.row(row).iter().zip(&gathered).map(|(m, a)| m * a).sum();
            }
        }
    }

    /// Contracts `⟨onto|` on `targets`, returning the unnormalized remainder
    /// on the other wires (ascending order) and its squared norm.
    pub fn project(&self, targets: &[usize], onto: &StateVector) -> Result<(StateVector, f64)> {
        check_wires(targets, self.n_qubits)?;
        if onto.dim() != 1 << targets.len() {
            return Err(Error::DimensionMismatch { expected: 1 << targets.len(), found: onto.dim() });
        }
        onto.ensure_normalized()?;
        if targets.len() == self.n_qubits {
            let amp = onto.inner(self)?;
            let p = amp.norm_sqr();
            return Ok((StateVector { n_qubits: 0, amplitudes: vec![amp] }, p));
        }
        let offsets = local_offsets(targets, self.n_qubits);
        let target_mask = offsets[offsets.len() - 1];
        let rest = self.n_qubits - targets.len();
        let mut amplitudes = Vec::with_capacity(1 << rest);
        for base in 0..self.dim() {
            if base & target_mask != 0 {
                continue;
            }
            let amp: C64 = offsets
                .iter()
                .zip(&onto.amplitudes)
                .map(|(&off, o)| o.conj() * self.amplitudes[base | off])
                .sum();
            amplitudes.push(amp);
        }
        let out = StateVector { n_qubits: rest, amplitudes };
        let p = out.norm_sqr();
        Ok((out, p))
    }

    /// Probability that `wire` reads 1 in the computational basis.
    pub fn prob_one(&self, wire: usize) -> f64 {
        let m = wire_mask(wire, self.n_qubits);
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & m != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    /// Projects `wire` onto `|bit⟩` and renormalizes. Returns the branch probability.
    pub(crate) fn collapse(&mut self, wire: usize, bit: bool) -> f64 {
        let m = wire_mask(wire, self.n_qubits);
        let mut p = 0.0;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if (i & m != 0) != bit {
                *a = ZERO;
            } else {
                p += a.norm_sqr();
            }
        }
        if p > 0.0 {
            let s = 1.0 / p.sqrt();
            for a in &mut self.amplitudes {
                *a *= s;
            }
        }
        p
    }

    /// Reduced density matrix on `keep` (in the given order).
    pub fn reduced_density(&self, keep: &[usize]) -> Result<DensityMatrix> {
        check_wires(keep, self.n_qubits)?;
        let traced = complement(keep, self.n_qubits);
        let keep_off = local_offsets(keep, self.n_qubits);
        let trace_off = if traced.is_empty() { vec![0] } else { local_offsets(&traced, self.n_qubits) };
        let d = keep_off.len();
        let mut m = ComplexMatrix::zeros(d, d);
        for (a, &ka) in keep_off.iter().enumerate() {
            for (b, &kb) in keep_off.iter().enumerate() {
                m[(a, b)] = trace_off
                    .iter()
                    .map(|&t| self.amplitudes[ka | t] * self.amplitudes[kb | t].conj())
                    .sum();
            }
        }
        Ok(DensityMatrix { n_qubits: keep.len(), matrix: m })
    }
}

/// Mixed state on an `n`-qubit register. Always Hermitian within 1e-10.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::DimensionMismatch { expected: matrix.rows(), found: matrix.cols() });
        }
        let n_qubits = qubits_for_len(matrix.rows())?;
        let dev = matrix.hermiticity_deviation();
        if dev > NORM_TOL {
            return Err(Error::NotHermitian(dev));
        }
        Ok(Self { n_qubits, matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        let n_qubits = matrix.rows().trailing_zeros() as usize;
        Self { n_qubits, matrix }
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let m = ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes());
        Self { n_qubits: psi.n_qubits(), matrix: m }
    }

    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let d = 1 << n_qubits;
        Self { n_qubits, matrix: ComplexMatrix::identity(d).scale(r(1.0 / d as f64)) }
    }

    /// `½(I + x X + y Y + z Z)`.
    pub fn from_bloch(v: [f64; 3]) -> Self {
        let [x, y, z] = v;
        let m = ComplexMatrix::from_rows(&[
            [r(0.5 * (1.0 + z)), c(0.5 * x, -0.5 * y)],
            [c(0.5 * x, 0.5 * y), r(0.5 * (1.0 - z))],
        ]);
        Self { n_qubits: 1, matrix: m }
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn is_normalized(&self) -> bool {
        (self.trace() - 1.0).abs() <= NORM_TOL
    }

    /// Eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> Vec<f64> {
        let (vals, _) = hermitian_eigen(&self.matrix);
        vals
    }

    pub fn is_physical(&self) -> bool {
        self.is_normalized() && self.eigenvalues().first().is_none_or(|&l| l >= -NORM_TOL)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { n_qubits: self.n_qubits, matrix: self.matrix.scale(r(s)) }
    }

    /// `Tr(ρ O)`.
    pub fn expectation(&self, op: &ComplexMatrix) -> C64 {
        (&self.matrix * op).trace()
    }

    /// Bloch vector `(Tr ρX, Tr ρY, Tr ρZ)` of a single-qubit state.
    pub fn bloch_vector(&self) -> Result<[f64; 3]> {
        if self.n_qubits != 1 {
            return Err(Error::DimensionMismatch { expected: 2, found: self.dim() });
        }
        let m = &self.matrix;
        Ok([2.0 * m[(1, 0)].re, 2.0 * m[(1, 0)].im, (m[(0, 0)] - m[(1, 1)]).re])
    }

    /// `u ρ u†` with `u` acting on `targets`.
    pub fn apply_unitary(&self, u: &ComplexMatrix, targets: &[usize]) -> Result<Self> {
        check_wires(targets, self.n_qubits)?;
        if u.rows() != 1 << targets.len() || !u.is_square() {
            return Err(Error::DimensionMismatch { expected: 1 << targets.len(), found: u.rows() });
        }
        Ok(self.conjugate_unchecked(u, targets))
    }

    /// `k ρ k†` for any square `k` on `targets` (projectors, Kraus operators).
    pub(crate) fn conjugate_unchecked(&self, k: &ComplexMatrix, targets: &[usize]) -> Self {
        let full = super::embed_operator(k, targets, self.n_qubits);
        let m = &(&full * &self.matrix) * &full.adjoint();
        Self { n_qubits: self.n_qubits, matrix: m }
    }

    /// `self ⊗ other`.
    pub fn kron(&self, other: &Self) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        if n > super::MAX_QUBITS {
            return Err(Error::RegisterTooLarge(n));
        }
        Ok(Self { n_qubits: n, matrix: super::kron(&self.matrix, &other.matrix) })
    }
}

/// Reduced state on `keep`, in the given wire order.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    check_wires(keep, rho.n_qubits)?;
    let traced = complement(keep, rho.n_qubits);
    let keep_off = local_offsets(keep, rho.n_qubits);
    let trace_off = if traced.is_empty() { vec![0] } else { local_offsets(&traced, rho.n_qubits) };
    let d = keep_off.len();
    let mut m = ComplexMatrix::zeros(d, d);
    for (a, &ka) in keep_off.iter().enumerate() {
        for (b, &kb) in keep_off.iter().enumerate() {
            m[(a, b)] = trace_off.iter().map(|&t| rho.matrix[(ka | t, kb | t)]).sum();
        }
    }
    Ok(DensityMatrix { n_qubits: keep.len(), matrix: m })
}

/// `⟨ψ|ρ|ψ⟩`, clamped to `[0, 1]` after tolerance checks.
pub fn fidelity_pure(psi: &StateVector, rho: &DensityMatrix) -> Result<f64> {
    if psi.dim() != rho.dim() {
        return Err(Error::DimensionMismatch { expected: rho.dim(), found: psi.dim() });
    }
    let rho_psi = rho.matrix.matvec(psi.amplitudes());
    let f: C64 = psi.amplitudes().iter().zip(&rho_psi).map(|(a, b)| a.conj() * b).sum();
    if f.im.abs() > 1e-12 {
        return Err(Error::ImaginaryResidue(f.im));
    }
    if f.re < -NORM_TOL || f.re > 1.0 + NORM_TOL {
        return Err(Error::OutOfUnitInterval(f.re));
    }
    Ok(f.re.clamp(0.0, 1.0))
}

/// Eigen-decomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching eigenvectors as columns.
pub fn hermitian_eigen(m: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    let eig = m.to_nalgebra().symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let vals = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let n = m.rows();
    let mut vecs = ComplexMatrix::zeros(n, n);
    for (col, &k) in order.iter().enumerate() {
        for row in 0..n {
            vecs[(row, col)] = eig.eigenvectors[(row, k)];
        }
    }
    (vals, vecs)
}

/// Pauli measurement axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn pauli(self) -> ComplexMatrix {
        match self {
            Axis::X => ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
            Axis::Y => ComplexMatrix::from_rows(&[[ZERO, c(0.0, -1.0)], [c(0.0, 1.0), ZERO]]),
            Axis::Z => ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
        }
    }

    /// Eigenstate with eigenvalue `+1` (`positive`) or `−1`.
    pub fn eigenstate(self, positive: bool) -> StateVector {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let sign = if positive { 1.0 } else { -1.0 };
        let amps = match self {
            Axis::X => vec![r(s), r(sign * s)],
            Axis::Y => vec![r(s), c(0.0, sign * s)],
            Axis::Z if positive => vec![ONE, ZERO],
            Axis::Z => vec![ZERO, ONE],
        };
        StateVector { n_qubits: 1, amplitudes: amps }
    }

    /// Unitary taking the `+`/`−` eigenbasis to `|0⟩`/`|1⟩`.
    pub fn rotation_to_z(self) -> ComplexMatrix {
        let plus = self.eigenstate(true);
        let minus = self.eigenstate(false);
        ComplexMatrix::from_rows(&[
            plus.amplitudes().iter().map(|a| a.conj()).collect::<Vec<_>>(),
            minus.amplitudes().iter().map(|a| a.conj()).collect::<Vec<_>>(),
        ])
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Axis::X => "X",
            Axis::Y => "Y",
            Axis::Z => "Z",
        };
        f.write_str(s)
    }
}

/// One of the six single-qubit Pauli eigenstates, labelled `x-`, `x+`, … `z+`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PauliEigenstate {
    pub axis: Axis,
    pub positive: bool,
}

impl PauliEigenstate {
    /// Table order: x−, x+, y−, y+, z−, z+.
    pub const ALL: [PauliEigenstate; 6] = [
        PauliEigenstate { axis: Axis::X, positive: false },
        PauliEigenstate { axis: Axis::X, positive: true },
        PauliEigenstate { axis: Axis::Y, positive: false },
        PauliEigenstate { axis: Axis::Y, positive: true },
        PauliEigenstate { axis: Axis::Z, positive: false },
        PauliEigenstate { axis: Axis::Z, positive: true },
    ];

    pub fn state(self) -> StateVector {
        self.axis.eigenstate(self.positive)
    }

    pub fn label(self) -> String {
        format!("{}{}", self.axis.to_string().to_lowercase(), if self.positive { '+' } else { '-' })
    }
}

impl fmt::Display for PauliEigenstate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for PauliEigenstate {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.trim().chars();
        let axis = match chars.next().map(|ch| ch.to_ascii_lowercase()) {
            Some('x') => Axis::X,
            Some('y') => Axis::Y,
            Some('z') => Axis::Z,
            _ => return Err(Error::InvalidArgument(format!("unknown state label {s:?}"))),
        };
        let positive = match (chars.next(), chars.next()) {
            (Some('+'), None) => true,
            (Some('-'), None) => false,
            _ => return Err(Error::InvalidArgument(format!("unknown state label {s:?}"))),
        };
        Ok(Self { axis, positive })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::gate::Gate;

    #[test]
    fn x_on_wire_zero_is_big_endian() {
        let out = StateVector::zero(2).apply_unitary(&Gate::X.matrix(), &[0]).unwrap();
        assert_eq!(out, StateVector::basis(2, 0b10));
    }

    #[test]
    fn hadamard_on_zero() {
        let out = StateVector::zero(1).apply_unitary(&Gate::H.matrix(), &[0]).unwrap();
        assert!((out.amplitude(0) - out.amplitude(1)).norm() < 1e-15);
        assert!((out.amplitude(0).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let s = StateVector::zero(2);
        assert_eq!(s.apply_unitary(&Gate::CZ.matrix(), &[0, 0]), Err(Error::DuplicateWire(0)));
        assert!(matches!(s.apply_unitary(&Gate::CZ.matrix(), &[0]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn partial_traces_of_simple_states() {
        let bell = DensityMatrix::from_pure(&StateVector::phi_plus());
        let red = partial_trace(&bell, &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(DensityMatrix::maximally_mixed(1).matrix()) < 1e-15);

        let zz = DensityMatrix::from_pure(&StateVector::zero(2));
        let red = partial_trace(&zz, &[0]).unwrap();
        assert!(red.matrix().max_abs_diff(DensityMatrix::from_pure(&StateVector::zero(1)).matrix()) < 1e-15);

        assert_eq!(partial_trace(&zz, &[]), Err(Error::EmptyWireList));
        assert!(matches!(partial_trace(&zz, &[2]), Err(Error::WireOutOfRange { .. })));
    }

    #[test]
    fn projections() {
        let (rest, p) = StateVector::phi_plus().project(&[0], &StateVector::zero(1)).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!((rest.amplitude(0).re - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);
        assert_eq!(rest.amplitude(1), ZERO);

        let (rest, p) = StateVector::zero(2).project(&[1], &StateVector::basis(1, 1)).unwrap();
        assert_eq!(p, 0.0);
        assert_eq!(rest.norm_sqr(), 0.0);

        assert!(matches!(
            StateVector::zero(2).project(&[1], &StateVector::zero(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn teleportation_projection() {
        // |ψ⟩_A ⊗ |Φ+⟩_{BB'}, project ⟨Φ+| on (A, B') -> ψ/2 on B
        let psi = StateVector::bloch(1.1, 0.3);
        let full = psi.kron(&StateVector::phi_plus()).unwrap();
        let (rest, p) = full.project(&[0, 2], &StateVector::phi_plus()).unwrap();
        assert!((p - 0.25).abs() < 1e-15);
        for k in 0..2 {
            assert!((rest.amplitude(k) - psi.amplitude(k) * 0.5).norm() < 1e-15);
        }
    }

    #[test]
    fn fidelities() {
        let z0 = StateVector::zero(1);
        assert!((fidelity_pure(&z0, &DensityMatrix::from_pure(&z0)).unwrap() - 1.0).abs() < 1e-15);
        assert!((fidelity_pure(&z0, &DensityMatrix::maximally_mixed(1)).unwrap() - 0.5).abs() < 1e-15);
        let xp = Axis::X.eigenstate(true);
        let xm = Axis::X.eigenstate(false);
        let rho = DensityMatrix::from_pure(&xp).scale(0.75);
        let rho = DensityMatrix::new(rho.matrix().add(DensityMatrix::from_pure(&xm).scale(0.25).matrix())).unwrap();
        assert!((fidelity_pure(&xp, &rho).unwrap() - 0.75).abs() < 1e-15);
        assert!(matches!(
            fidelity_pure(&StateVector::zero(2), &rho),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn labels_round_trip() {
        for s in PauliEigenstate::ALL {
            assert_eq!(s.label().parse::<PauliEigenstate>().unwrap(), s);
        }
        assert!("w+".parse::<PauliEigenstate>().is_err());
        assert!("x".parse::<PauliEigenstate>().is_err());
    }

    #[test]
    fn rotation_to_z_maps_eigenbasis() {
        for axis in Axis::ALL {
            let rot = axis.rotation_to_z();
            let plus = axis.eigenstate(true).apply_unitary(&rot, &[0]).unwrap();
            assert!((plus.amplitude(0).norm() - 1.0).abs() < 1e-15);
            let minus = axis.eigenstate(false).apply_unitary(&rot, &[0]).unwrap();
            assert!((minus.amplitude(1).norm() - 1.0).abs() < 1e-15);
        }
    }
}
