use super::SubsystemLayout;
use crate::error::Result;
use crate::qcore::{embed_operator, r, Axis, ComplexMatrix, DensityMatrix, StateVector, ONE, ZERO};
use crate::scramblers::ScramblerSpec;

const L: SubsystemLayout = SubsystemLayout::SHOTS;

/// Exact outcome statistics of the four-qubit shot flow for one
/// tomography basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConditionalDistribution {
    pub basis: Axis,
    /// `p_joint[0]` is `P(B = +, Φ⁺)`, `p_joint[1]` is `P(B = −, Φ⁺)`.
    pub p_joint: [f64; 2],
    pub p_postselect: f64,
}

impl ConditionalDistribution {
    /// B-outcome distribution given the `Φ⁺` outcome.
    pub fn conditioned(&self) -> [f64; 2] {
        [self.p_joint[0] / self.p_postselect, self.p_joint[1] / self.p_postselect]
    }
}

fn projector(v: &StateVector) -> ComplexMatrix {
    ComplexMatrix::outer(v.amplitudes(), v.amplitudes())
}

/// Reset to `|0⟩` as the Kraus pair `{|0⟩⟨0|, |0⟩⟨1|}`.
fn reset(rho: &DensityMatrix, wire: usize) -> DensityMatrix {
    let k0 = ComplexMatrix::diagonal(&[ONE, ZERO]);
    let k1 = ComplexMatrix::from_rows(&[[ZERO, ONE], [ZERO, ZERO]]);
    let a = rho.conjugate_unchecked(&k0, &[wire]);
    let b = rho.conjugate_unchecked(&k1, &[wire]);
    DensityMatrix::from_matrix_unchecked(a.matrix().add(b.matrix()))
}

/// Unitary whose first column is `psi`.
pub(crate) fn preparation_unitary(psi: &StateVector) -> ComplexMatrix {
    let (a, b) = (psi.amplitude(0), psi.amplitude(1));
    ComplexMatrix::from_rows(&[[a, -b.conj()], [b, a.conj()]])
}

/// Propagates the density matrix through the shot flow: uniform classical
/// bath preparation, Bell pair on `(E, E')`, `U†`, a non-selective
/// measurement of B in `basis`, reset and preparation of `psi`, `U`, and the
/// `Φ⁺` projection on `(E, E')`.
pub fn exact_conditional_distribution(
    psi: &StateVector,
    u: &ScramblerSpec,
    basis: Axis,
) -> Result<ConditionalDistribution> {
    if psi.n_qubits() != 1 {
        return Err(crate::Error::DimensionMismatch { expected: 2, found: psi.dim() });
    }
    psi.ensure_normalized()?;
    let n = L.n_wires;
    let u_dag = u.matrix().adjoint();
    let prep = preparation_unitary(psi);
    let bell = embed_operator(&projector(&StateVector::phi_plus()), &[L.e_out(), L.e_prime], n);
    let outcome_projectors = [projector(&basis.eigenstate(true)), projector(&basis.eigenstate(false))];
    let bit = |w: usize, v: usize| v << (n - 1 - w);
    let [h1, h2] = L.bath();

    let mut p_joint = [0.0; 2];
    for bath_bits in 0..4usize {
        // |Φ⁺⟩ on (E, E') with the bath in |h1 h2⟩
        let bath = bit(h1, bath_bits >> 1) | bit(h2, bath_bits & 1);
        let mut amps = vec![ZERO; 1 << n];
        for e in 0..2usize {
            amps[bath | bit(L.e_in(), e) | bit(L.e_prime, e)] = r(std::f64::consts::FRAC_1_SQRT_2);
        }
        let start = DensityMatrix::from_pure(&StateVector::new(amps)?);
        let decoded = start.apply_unitary(&u_dag, &L.decoder)?;
        for (k, proj) in outcome_projectors.iter().enumerate() {
            let branch = decoded.conjugate_unchecked(proj, &[L.b()]);
            let prepared = reset(&branch, L.b()).apply_unitary(&prep, &[L.a()])?;
            let encoded = prepared.apply_unitary(u.matrix(), &L.encoder)?;
            p_joint[k] += 0.25 * encoded.expectation(&bell).re;
        }
    }
    Ok(ConditionalDistribution { basis, p_joint, p_postselect: p_joint[0] + p_joint[1] })
}
