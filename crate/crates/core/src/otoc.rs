//! Out-of-time-order correlators on the purified seven-qubit register.
//!
//! `O(W, V) = ⟨W_B(t)† V_A† W_A(t) V_A⟩` is evaluated in
//! `|φ₀⟩_A ⊗ |Φ⁺⟩_{BB'} ⊗ |Φ⁺⟩_{HH'}` with `W_X(t) = U†_{XH} W_X U_{XH}`.
//! Its double Haar average over one-qubit `W`, `V` equals the state-averaged
//! postselection probability of the decoding protocol.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::protocol::{
    forward_state, inverse_state, purified_initial_state, success_probability, SubsystemLayout, OTOC_A, OTOC_B,
};
use crate::qcore::{c, embed_operator, kron, r, ComplexMatrix, PauliEigenstate, StateVector, C64};
use crate::scramblers::{haar_random_unitary, ScramblerSpec};

const L: SubsystemLayout = SubsystemLayout::PURIFIED;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OtocMethod {
    ExactBasisAverage,
    HaarSampled,
    DesignAverage,
    OverlapForm,
    Direct,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OtocReport {
    /// Correlator value; for averages the imaginary part is the sample mean
    /// of the imaginary parts (zero for exact methods).
    pub value: C64,
    pub method: OtocMethod,
    pub sample_count: Option<usize>,
    pub standard_error: Option<f64>,
}

impl OtocReport {
    pub fn average(&self) -> f64 {
        self.value.re
    }
}

fn check_one_qubit_unitary(m: &ComplexMatrix) -> Result<()> {
    if m.rows() != 2 || !m.is_square() {
        return Err(Error::DimensionMismatch { expected: 2, found: m.rows() });
    }
    let dev = m.unitarity_deviation();
    if dev > 1e-10 {
        return Err(Error::NotUnitary(dev));
    }
    Ok(())
}

/// `U† (I ⊗ I ⊗ W) U`, the perturbation on the `E` output slot.
fn heisenberg(u: &ScramblerSpec, w: &ComplexMatrix) -> ComplexMatrix {
    let lifted = kron(&ComplexMatrix::identity(4), w);
    &(&u.matrix().adjoint() * &lifted) * u.matrix()
}

/// `O(W, V)` with `φ₀ = |0⟩`.
pub fn otoc_value(u: &ScramblerSpec, w: &ComplexMatrix, v: &ComplexMatrix) -> Result<C64> {
    otoc_value_with(u, w, v, &StateVector::zero(1))
}

pub fn otoc_value_with(u: &ScramblerSpec, w: &ComplexMatrix, v: &ComplexMatrix, phi0: &StateVector) -> Result<C64> {
    check_one_qubit_unitary(w)?;
    check_one_qubit_unitary(v)?;
    let init = purified_initial_state(phi0)?;
    let wt = heisenberg(u, w);

    let mut ket = init.apply_unitary(v, &[OTOC_A[0]])?;
    ket.apply_unitary_mut(&wt, &OTOC_A)?;
    ket.apply_unitary_mut(&v.adjoint(), &[OTOC_A[0]])?;
    let bra = init.apply_unitary(&wt, &OTOC_B)?;
    bra.inner(&ket)
}

/// `⟨inverse|forward⟩` from the two protocol runs.
pub fn otoc_overlap(u: &ScramblerSpec, w: &ComplexMatrix, v: &ComplexMatrix) -> Result<C64> {
    let phi0 = StateVector::zero(1);
    let fwd = forward_state(&phi0, u, w, v)?;
    let inv = inverse_state(&phi0, u, w, v)?;
    inv.inner(&fwd)
}

/// Exact `O_avg`. `P(ψ) = ⟨ψ|M|ψ⟩` for a fixed operator `M`, so its Haar
/// average is `Tr M / 2`, which any orthonormal basis gives.
pub fn otoc_average_exact(u: &ScramblerSpec) -> Result<f64> {
    let p0 = success_probability(&StateVector::basis(1, 0), u)?;
    let p1 = success_probability(&StateVector::basis(1, 1), u)?;
    Ok(0.5 * (p0 + p1))
}

/// Mean success probability over the six Pauli eigenstates.
pub fn state_design_average(u: &ScramblerSpec) -> Result<f64> {
    let mut total = 0.0;
    for s in PauliEigenstate::ALL {
        total += success_probability(&s.state(), u)?;
    }
    Ok(total / 6.0)
}

/// Monte Carlo estimate of `O_avg` from `n` independent Haar pairs `(W, V)`.
///
/// A base seed is drawn from `rng`; draw `k` uses its own ChaCha stream, so
/// the result does not depend on the thread count.
pub fn otoc_average_sampled<R: Rng + ?Sized>(u: &ScramblerSpec, n: usize, rng: &mut R) -> Result<OtocReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("at least two samples are needed".into()));
    }
    let base: u64 = rng.random();
    let values: Vec<C64> = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut draw = ChaCha8Rng::seed_from_u64(base);
            draw.set_stream(k as u64);
            let w = haar_random_unitary(2, &mut draw);
            let v = haar_random_unitary(2, &mut draw);
            otoc_value(u, &w, &v)
        })
        .collect::<Result<_>>()?;
    let nf = n as f64;
    let mean: C64 = values.iter().sum::<C64>() / nf;
    let var = values.iter().map(|x| (x.re - mean.re).powi(2)).sum::<f64>() / (nf - 1.0);
    Ok(OtocReport {
        value: mean,
        method: OtocMethod::HaarSampled,
        sample_count: Some(n),
        standard_error: Some((var / nf).sqrt()),
    })
}

/// Exact average packaged as a report.
pub fn otoc_exact_report(u: &ScramblerSpec) -> Result<OtocReport> {
    Ok(OtocReport {
        value: r(otoc_average_exact(u)?),
        method: OtocMethod::ExactBasisAverage,
        sample_count: None,
        standard_error: None,
    })
}

/// Averaging ensemble for [`twirl_projector`].
#[derive(Clone, Debug, PartialEq)]
pub enum Ensemble {
    /// `{I, X, Y, Z}`, qubits only.
    PauliGroup,
    HaarSampled { n: usize, seed: u64 },
    Explicit(Vec<ComplexMatrix>),
}

/// Average of `W ⊗ W*` over the ensemble.
pub fn twirl_projector(dim: usize, ensemble: &Ensemble) -> Result<ComplexMatrix> {
    let term = |w: &ComplexMatrix| kron(w, &w.conj());
    let mut acc = ComplexMatrix::zeros(dim * dim, dim * dim);
    let count = match ensemble {
        Ensemble::PauliGroup => {
            if dim != 2 {
                return Err(Error::DimensionMismatch { expected: 2, found: dim });
            }
            let paulis = [
                ComplexMatrix::identity(2),
                ComplexMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]),
                ComplexMatrix::from_rows(&[[r(0.0), c(0.0, -1.0)], [c(0.0, 1.0), r(0.0)]]),
                ComplexMatrix::from_real_rows(&[[1.0, 0.0], [0.0, -1.0]]),
            ];
            for p in &paulis {
                acc = acc.add(&term(p));
            }
            paulis.len()
        }
        Ensemble::HaarSampled { n, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            for _ in 0..*n {
                acc = acc.add(&term(&haar_random_unitary(dim, &mut rng)));
            }
            *n
        }
        Ensemble::Explicit(ms) => {
            for m in ms {
                if m.rows() != dim || !m.is_square() {
                    return Err(Error::DimensionMismatch { expected: dim, found: m.rows() });
                }
                acc = acc.add(&term(m));
            }
            ms.len()
        }
    };
    if count == 0 {
        return Err(Error::InvalidArgument("empty ensemble".into()));
    }
    Ok(acc.scale(r(1.0 / count as f64)))
}

/// `|Φ⁺⟩⟨Φ⁺|` on `dim ⊗ dim`.
pub fn epr_projector(dim: usize) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(dim * dim, dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            m[(i * dim + i, j * dim + j)] = r(1.0 / dim as f64);
        }
    }
    m
}

/// Full-register operator `W_X(t)`; exposed for cross-checks.
pub fn heisenberg_operator(u: &ScramblerSpec, w: &ComplexMatrix, on_receiver: bool) -> ComplexMatrix {
    let targets = if on_receiver { OTOC_B } else { OTOC_A };
    embed_operator(&heisenberg(u, w), &targets, L.n_wires)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::Gate;
    use crate::scramblers::{u_c, u_q};

    /// Independent dense evaluation: every factor is a 128×128 matrix built
    /// by Kronecker products and explicit wire permutation.
    fn brute_force(u: &ScramblerSpec, w: &ComplexMatrix, v: &ComplexMatrix) -> C64 {
        let n = 7;
        let dim = 1 << n;
        // permutation matrix taking wire order [A,H1,H2,B,B',H1',H2'] to
        // [B,H1,H2,A,B',H1',H2'] (swap of wires 0 and 3)
        let mut swap = ComplexMatrix::zeros(dim, dim);
        for i in 0..dim {
            let a = (i >> 6) & 1;
            let b = (i >> 3) & 1;
            let j = (i & !(1 << 6) & !(1 << 3)) | (b << 6) | (a << 3);
            swap[(j, i)] = r(1.0);
        }
        let id16 = ComplexMatrix::identity(16);
        let u_full = kron(u.matrix(), &id16);
        let w_a = kron(&kron(&ComplexMatrix::identity(4), w), &id16);
        let v_a = kron(v, &ComplexMatrix::identity(64));
        let wt_a = &(&u_full.adjoint() * &w_a) * &u_full;
        let wt_b = &(&swap * &wt_a) * &swap;
        let op = &(&(&wt_b.adjoint() * &v_a.adjoint()) * &wt_a) * &v_a;

        let init: Vec<C64> = (0..dim)
            .map(|idx| {
                let bit = |w: usize| (idx >> (n - 1 - w)) & 1;
                let paired = bit(0) == 0 && bit(3) == bit(4) && bit(1) == bit(5) && bit(2) == bit(6);
                r(if paired { 0.125f64.sqrt() } else { 0.0 })
            })
            .collect();
        let op_init = op.matvec(&init);
        init.iter().zip(&op_init).map(|(a, b)| a.conj() * b).sum()
    }

    /// Oracle output for `(U_q, Z, Z)` frozen from [`brute_force`].
    const U_Q_ZZ: C64 = C64::new(0.0, 0.0);

    #[test]
    fn brute_force_oracle_matches_engine() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..5 {
            let u = ScramblerSpec::new("h", haar_random_unitary(8, &mut rng), None).unwrap();
            let w = haar_random_unitary(2, &mut rng);
            let v = haar_random_unitary(2, &mut rng);
            let got = otoc_value(&u, &w, &v).unwrap();
            assert!((got - brute_force(&u, &w, &v)).norm() < 1e-12);
        }
    }

    #[test]
    fn u_q_z_z_regression() {
        let z = Gate::Z.matrix();
        let oracle = brute_force(&u_q(), &z, &z);
        assert!((oracle - U_Q_ZZ).norm() < 1e-12, "{oracle}");
        assert!((otoc_value(&u_q(), &z, &z).unwrap() - U_Q_ZZ).norm() < 1e-12);
    }

    #[test]
    fn identity_perturbation_gives_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let v = haar_random_unitary(2, &mut rng);
        for u in [u_q(), u_c(), ScramblerSpec::haar(4)] {
            let o = otoc_value(&u, &ComplexMatrix::identity(2), &v).unwrap();
            assert!((o - r(1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn perturbation_hidden_in_bath_commutes() {
        // with u = I the E slot is a bath wire, so W(t) never meets V
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let w = haar_random_unitary(2, &mut rng);
        let v = haar_random_unitary(2, &mut rng);
        let got = otoc_value(&ScramblerSpec::identity(), &w, &v).unwrap();
        assert!((got - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn overlap_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        for _ in 0..10 {
            let u = ScramblerSpec::new("h", haar_random_unitary(8, &mut rng), None).unwrap();
            let w = haar_random_unitary(2, &mut rng);
            let v = haar_random_unitary(2, &mut rng);
            assert!((otoc_overlap(&u, &w, &v).unwrap() - otoc_value(&u, &w, &v).unwrap()).norm() < 1e-12);
        }
        let id = ComplexMatrix::identity(2);
        assert!((otoc_overlap(&u_q(), &id, &id).unwrap() - r(1.0)).norm() < 1e-12);
    }

    #[test]
    fn exact_averages() {
        assert!((otoc_average_exact(&u_q()).unwrap() - 0.25).abs() < 1e-12);
        assert!((otoc_average_exact(&u_c()).unwrap() - 0.5).abs() < 1e-12);
        assert!((state_design_average(&u_q()).unwrap() - 0.25).abs() < 1e-12);
        assert!((otoc_average_exact(&ScramblerSpec::identity()).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampled_average_is_thread_independent() {
        let run = |threads| {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            pool.install(|| otoc_average_sampled(&u_c(), 300, &mut ChaCha8Rng::seed_from_u64(1)).unwrap())
        };
        assert_eq!(run(1), run(4));
        assert!(otoc_average_sampled(&u_c(), 1, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn pauli_twirl_is_epr_projector() {
        let t = twirl_projector(2, &Ensemble::PauliGroup).unwrap();
        assert!(t.max_abs_diff(&epr_projector(2)) < 1e-15);
        let phi = StateVector::phi_plus();
        assert!(t.max_abs_diff(&ComplexMatrix::outer(phi.amplitudes(), phi.amplitudes())) < 1e-15);
        assert!(twirl_projector(3, &Ensemble::PauliGroup).is_err());
    }

    #[test]
    fn identity_ensemble_is_not_a_projector() {
        let t = twirl_projector(2, &Ensemble::Explicit(vec![ComplexMatrix::identity(2)])).unwrap();
        assert!(t.max_abs_diff(&ComplexMatrix::identity(4)) < 1e-15);
        assert!(t.max_abs_diff(&epr_projector(2)) > 0.1);
    }

    #[test]
    fn heisenberg_operator_is_unitary() {
        let op = heisenberg_operator(&u_q(), &Gate::X.matrix(), true);
        assert!(op.is_unitary(1e-12));
    }
}
