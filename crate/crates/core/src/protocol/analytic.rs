use super::{Engine, ProtocolResult, SubsystemLayout, MIN_POSTSELECTION};
use crate::error::{Error, Result};
use crate::qcore::{fidelity_pure, r, ComplexMatrix, StateVector, ZERO};
use crate::scramblers::ScramblerSpec;

const L: SubsystemLayout = SubsystemLayout::PURIFIED;

fn require_single_qubit(psi: &StateVector) -> Result<()> {
    if psi.n_qubits() != 1 {
        return Err(Error::DimensionMismatch { expected: 2, found: psi.dim() });
    }
    psi.ensure_normalized()
}

fn require_unitary(m: &ComplexMatrix) -> Result<()> {
    let dev = m.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// `|φ⟩` on the message wire with every decoder input maximally entangled
/// with its purifying partner.
pub fn purified_initial_state(phi: &StateVector) -> Result<StateVector> {
    require_single_qubit(phi)?;
    let partners = L.decoder_partners().expect("purified layout");
    let pairs: Vec<(usize, usize)> = L.decoder.iter().copied().zip(partners).collect();
    let amp = r((0.125f64).sqrt());
    let n = L.n_wires;
    let bit = |idx: usize, w: usize| (idx >> (n - 1 - w)) & 1;
    let amplitudes = (0..1usize << n)
        .map(|idx| {
            if pairs.iter().all(|&(x, y)| bit(idx, x) == bit(idx, y)) {
                amp * phi.amplitude(bit(idx, L.a()))
            } else {
                ZERO
            }
        })
        .collect();
    StateVector::new(amplitudes)
}

/// Unnormalized `|f(ψ)⟩` on the wires left after the `Φ⁺` projection, with
/// the decoder applied either as `U†` (PCTC form) or as `U*` on the
/// purifying partners (Yoshida-Kitaev form).
fn final_state(psi: &StateVector, u: &ScramblerSpec, engine: Engine) -> Result<StateVector> {
    let mut state = purified_initial_state(psi)?;
    match engine {
        Engine::AnalyticYk => {
            let partners = L.decoder_partners().expect("purified layout");
            state.apply_unitary_mut(&u.matrix().conj(), &partners)?;
        }
        _ => state.apply_unitary_mut(&u.matrix().adjoint(), &L.decoder)?,
    }
    state.apply_unitary_mut(u.matrix(), &L.encoder)?;
    let (f, _) = state.project(&[L.e_out(), L.e_prime], &StateVector::phi_plus())?;
    Ok(f)
}

/// Position of B among the wires left after the projection.
fn b_after_projection() -> usize {
    let projected = [L.e_out(), L.e_prime];
    (0..L.b()).filter(|w| !projected.contains(w)).count()
}

fn decode(psi: &StateVector, u: &ScramblerSpec, engine: Engine) -> Result<ProtocolResult> {
    let f = final_state(psi, u, engine)?;
    let p = f.norm_sqr();
    if p < MIN_POSTSELECTION {
        return Err(Error::DegeneratePostselection(p));
    }
    let rho = f.reduced_density(&[b_after_projection()])?.scale(1.0 / p);
    let fidelity = fidelity_pure(psi, &rho)?;
    Ok(ProtocolResult { rho, fidelity, success_probability: p, engine, shot_stats: None })
}

/// Decoded state, fidelity and success probability with `U†` applied to the
/// receiver side before the scrambler acts on the message.
pub fn decode_analytic_pctc(psi: &StateVector, u: &ScramblerSpec) -> Result<ProtocolResult> {
    decode(psi, u, Engine::AnalyticPctc)
}

/// Same quantities with the decoder moved through the Bell pairs, `U*`
/// acting on the primed partners.
pub fn decode_analytic_yk(psi: &StateVector, u: &ScramblerSpec) -> Result<ProtocolResult> {
    decode(psi, u, Engine::AnalyticYk)
}

/// `⟨f(ψ)|f(ψ)⟩` without conditioning.
pub fn success_probability(psi: &StateVector, u: &ScramblerSpec) -> Result<f64> {
    Ok(final_state(psi, u, Engine::AnalyticPctc)?.norm_sqr())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundCheck {
    pub probability: f64,
    pub fidelity: f64,
    pub product: f64,
}

impl BoundCheck {
    /// `P·F ≥ 1/d_A² − 1e-9`.
    pub fn holds(&self) -> bool {
        self.product >= 1.0 / (super::D_A * super::D_A) as f64 - 1e-9
    }
}

pub fn bound_check(psi: &StateVector, u: &ScramblerSpec) -> Result<BoundCheck> {
    let res = decode_analytic_pctc(psi, u)?;
    Ok(BoundCheck {
        probability: res.success_probability,
        fidelity: res.fidelity,
        product: res.success_probability * res.fidelity,
    })
}

/// Scrambler wires for the Heisenberg-picture perturbations: `W_A(t)` acts
/// on `(A, H1, H2)`, `W_B(t)` on `(B, H1, H2)` where `B` is the partner-side
/// wire of the `BB'` pair. The perturbation sits on the scrambler's `E`
/// output slot.
pub const OTOC_A: [usize; 3] = [0, 1, 2];
pub const OTOC_B: [usize; 3] = [3, 1, 2];

fn perturb(s: &mut StateVector, u: &ScramblerSpec, w: &ComplexMatrix, on: [usize; 3]) -> Result<()> {
    s.apply_unitary_mut(u.matrix(), &on)?;
    s.apply_unitary_mut(w, &[on[2]])?;
    s.apply_unitary_mut(&u.matrix().adjoint(), &on)
}

/// `W_A(t) V_A |init⟩` with `W_A(t) = U†_{AH} W_E U_{AH}`: the standard
/// protocol run with a perturbation `w` on the teleported fragment.
pub fn forward_state(
    phi0: &StateVector,
    u: &ScramblerSpec,
    w: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<StateVector> {
    require_unitary(w)?;
    require_unitary(v)?;
    let mut s = purified_initial_state(phi0)?;
    s.apply_unitary_mut(v, &[OTOC_A[0]])?;
    perturb(&mut s, u, w, OTOC_A)?;
    Ok(s)
}

/// `V_A W_B(t) |init⟩`: the time-reversed run, encoding from the receiver
/// side and applying `v` last.
pub fn inverse_state(
    phi0: &StateVector,
    u: &ScramblerSpec,
    w: &ComplexMatrix,
    v: &ComplexMatrix,
) -> Result<StateVector> {
    require_unitary(w)?;
    require_unitary(v)?;
    let mut s = purified_initial_state(phi0)?;
    perturb(&mut s, u, w, OTOC_B)?;
    s.apply_unitary_mut(v, &[OTOC_A[0]])?;
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{Axis, DensityMatrix, PauliEigenstate};
    use crate::scramblers::{u_c, u_q};

    #[test]
    fn u_q_decodes_every_pauli_state() {
        for s in PauliEigenstate::ALL {
            let res = decode_analytic_pctc(&s.state(), &u_q()).unwrap();
            assert!((res.success_probability - 0.25).abs() < 1e-10, "{s}");
            assert!((res.fidelity - 1.0).abs() < 1e-10, "{s}");
        }
    }

    #[test]
    fn u_c_decodes_only_classical_states() {
        let z = decode_analytic_pctc(&Axis::Z.eigenstate(true), &u_c()).unwrap();
        assert!((z.fidelity - 1.0).abs() < 1e-10);
        let x = decode_analytic_pctc(&Axis::X.eigenstate(true), &u_c()).unwrap();
        assert!((x.fidelity - 0.5).abs() < 1e-10);
    }

    /// `|a h1 h2⟩ → |h1 h2 a⟩`: the message leaves on the `E` slot untouched.
    fn message_to_e() -> ScramblerSpec {
        let mut m = ComplexMatrix::zeros(8, 8);
        for i in 0..8 {
            m[(((i << 1) & 0b110) | (i >> 2), i)] = r(1.0);
        }
        ScramblerSpec::new("cycle", m, None).unwrap()
    }

    #[test]
    fn routing_message_to_e_is_plain_teleportation() {
        let psi = StateVector::bloch(0.9, -2.1);
        let res = decode_analytic_pctc(&psi, &message_to_e()).unwrap();
        assert!((res.success_probability - 0.25).abs() < 1e-12);
        assert!((res.fidelity - 1.0).abs() < 1e-12);
        let expected = DensityMatrix::from_pure(&psi);
        assert!(res.rho.matrix().max_abs_diff(expected.matrix()) < 1e-12);
    }

    #[test]
    fn identity_keeps_message_away_from_e() {
        let res = decode_analytic_pctc(&StateVector::bloch(0.4, 1.0), &ScramblerSpec::identity()).unwrap();
        assert!((res.success_probability - 1.0).abs() < 1e-12);
        assert!((res.fidelity - 0.5).abs() < 1e-12);
    }

    #[test]
    fn yk_matches_pctc_on_y_minus() {
        let psi = Axis::Y.eigenstate(false);
        let a = decode_analytic_pctc(&psi, &u_q()).unwrap();
        let b = decode_analytic_yk(&psi, &u_q()).unwrap();
        assert!(a.rho.matrix().max_abs_diff(b.rho.matrix()) < 1e-12);
        assert!((a.success_probability - b.success_probability).abs() < 1e-12);
        assert!((b.success_probability - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rejects_unnormalized_and_wide_inputs() {
        let bad = StateVector::zero(1).scale(r(2.0));
        assert!(decode_analytic_pctc(&bad, &u_q()).is_err());
        assert!(matches!(
            decode_analytic_pctc(&StateVector::zero(2), &u_q()),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn bound_saturates_for_u_q() {
        let b = bound_check(&Axis::X.eigenstate(true), &u_q()).unwrap();
        assert!((b.product - 0.25).abs() < 1e-10);
        assert!(b.holds());
    }

    #[test]
    fn trivial_forward_and_inverse_states() {
        let id2 = ComplexMatrix::identity(2);
        let phi0 = StateVector::zero(1);
        let init = purified_initial_state(&phi0).unwrap();
        let id = ScramblerSpec::identity();
        for s in [forward_state(&phi0, &id, &id2, &id2).unwrap(), inverse_state(&phi0, &id, &id2, &id2).unwrap()] {
            assert!(s.amplitudes().iter().zip(init.amplitudes()).all(|(a, b)| (a - b).norm() < 1e-15));
        }
        assert!(forward_state(&phi0, &id, &ComplexMatrix::identity(2).scale(r(2.0)), &id2).is_err());
    }
}
