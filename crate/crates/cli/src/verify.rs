use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use pctc_core::otoc::{otoc_average_exact, otoc_value};
use pctc_core::protocol::{
    bound_check, decode_analytic_pctc, decode_analytic_yk, exact_conditional_distribution, run_shots_ideal,
};
use pctc_core::qcore::{circuit_unitary, equal_up_to_global_phase, kron, Axis, ComplexMatrix, PauliEigenstate, StateVector};
use pctc_core::scramblers::{haar_random_unitary, random_state, u_c, u_q_circuit, u_q_matrix, ScramblerSpec};
use pctc_core::tomography::{reconstruct_linear, BasisCounts, DatasetMetadata, TomographyDataset};

use crate::CliError;

const TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

type Outcome = Result<(bool, String), String>;

fn check(name: &'static str, f: impl FnOnce() -> Outcome) -> Check {
    match f() {
        Ok((pass, detail)) => Check { name, pass, detail },
        Err(e) => Check { name, pass: false, detail: format!("error: {e}") },
    }
}

fn max_dev(values: impl IntoIterator<Item = f64>, want: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().zip(want).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

fn six_state<T>(f: impl Fn(&StateVector) -> Result<T, String>) -> Result<Vec<T>, String> {
    PauliEigenstate::ALL.iter().map(|s| f(&s.state())).collect()
}

/// Runs the battery with `uq` replaced by `u_q`, so a corrupted matrix can
/// serve as a negative control.
pub fn verify_with(u_q: &ComplexMatrix) -> Vec<Check> {
    let spec = ScramblerSpec::new("uq", u_q.clone(), None).map_err(|e| e.to_string());
    let spec = || spec.clone();
    let e = |x: pctc_core::Error| x.to_string();
    let mut out = Vec::new();

    out.push(check("uq is unitary", || {
        let dev = u_q.unitarity_deviation();
        Ok((dev < TOL, format!("deviation {dev:.2e}")))
    }));

    out.push(check("uq circuit matches matrix", || {
        let cu = circuit_unitary(&u_q_circuit()).map_err(e)?;
        Ok((equal_up_to_global_phase(&cu, u_q, TOL), "up to global phase".into()))
    }));

    out.push(check("uq fidelity is 1 on six states", || {
        let u = spec()?;
        let f = six_state(|p| decode_analytic_pctc(p, &u).map(|r| r.fidelity).map_err(e))?;
        let dev = max_dev(f, [1.0; 6]);
        Ok((dev < TOL, format!("max deviation {dev:.2e}")))
    }));

    out.push(check("uq success probability is 1/4 on six states", || {
        let u = spec()?;
        let p = six_state(|s| decode_analytic_pctc(s, &u).map(|r| r.success_probability).map_err(e))?;
        let dev = max_dev(p, [0.25; 6]);
        Ok((dev < TOL, format!("max deviation {dev:.2e}")))
    }));

    out.push(check("uc fidelities and probabilities", || {
        let u = u_c();
        let r = six_state(|s| decode_analytic_pctc(s, &u).map_err(e))?;
        let df = max_dev(r.iter().map(|x| x.fidelity), [0.5, 0.5, 0.5, 0.5, 1.0, 1.0]);
        let dp = max_dev(r.iter().map(|x| x.success_probability), [0.5; 6]);
        Ok((df < TOL && dp < TOL, format!("F deviation {df:.2e}, P deviation {dp:.2e}")))
    }));

    out.push(check("two decoder forms agree", || {
        let u = spec()?;
        let psi = StateVector::bloch(0.7, 2.1);
        let a = decode_analytic_pctc(&psi, &u).map_err(e)?;
        let b = decode_analytic_yk(&psi, &u).map_err(e)?;
        let dev = a.rho.matrix().max_abs_diff(b.rho.matrix()).max((a.success_probability - b.success_probability).abs());
        Ok((dev < TOL, format!("max deviation {dev:.2e}")))
    }));

    out.push(check("exact OTOC average of uq is 1/4", || {
        let avg = otoc_average_exact(&spec()?).map_err(e)?;
        Ok(((avg - 0.25).abs() < TOL, format!("average {avg:.12}")))
    }));

    out.push(check("OTOC of uq with Pauli Z is 0", || {
        let z = Axis::Z.pauli();
        let o = otoc_value(&spec()?, &z, &z).map_err(e)?;
        Ok((o.norm() < TOL, format!("|O| = {:.2e}", o.norm())))
    }));

    out.push(check("fidelity bound holds", || {
        let u = spec()?;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let psi = random_state(2, &mut rng);
            let b = bound_check(&psi, &u).map_err(e)?;
            if !b.holds() {
                return Ok((false, format!("violated: {b:?}")));
            }
        }
        Ok((true, "20 random states".into()))
    }));

    out.push(check("postselection is basis independent", || {
        let u = spec()?;
        let psi = StateVector::bloch(1.3, 0.4);
        let ps: Vec<f64> = Axis::ALL
            .iter()
            .map(|&b| exact_conditional_distribution(&psi, &u, b).map(|d| d.p_postselect).map_err(e))
            .collect::<Result<_, _>>()?;
        let dev = max_dev(ps.iter().copied(), [ps[0]; 3]);
        Ok((dev < TOL, format!("spread {dev:.2e}")))
    }));

    out.push(check("local unitary moves through an EPR pair", || {
        let mut rng = ChaCha8Rng::seed_from_u64(200);
        let phi = StateVector::phi_plus();
        let id = ComplexMatrix::identity(2);
        let mut worst: f64 = 0.0;
        for _ in 0..200 {
            let g = haar_random_unitary(2, &mut rng);
            let lhs = kron(&g, &id).matvec(phi.amplitudes());
            let rhs = kron(&id, &g.transpose()).matvec(phi.amplitudes());
            worst = lhs.iter().zip(&rhs).map(|(a, b)| (a - b).norm()).fold(worst, f64::max);
        }
        Ok((worst < 1e-12, format!("200 unitaries, max deviation {worst:.2e}")))
    }));

    out.push(check("linear inversion recovers exact counts", || {
        let u = spec()?;
        let psi = PauliEigenstate::ALL[3].state();
        let n = 8000u64;
        let counts = Axis::ALL
            .iter()
            .map(|&b| {
                let d = exact_conditional_distribution(&psi, &u, b).map_err(e)?;
                let plus = (d.p_joint[0] * n as f64).round() as u64;
                let minus = (d.p_joint[1] * n as f64).round() as u64;
                Ok(BasisCounts { issued: n, kept: plus + minus, plus, minus })
            })
            .collect::<Result<Vec<_>, String>>()?;
        let data = TomographyDataset::new([counts[0], counts[1], counts[2]], DatasetMetadata::default()).map_err(e)?;
        let rho = reconstruct_linear(&data).map_err(e)?;
        let dev = rho.matrix().max_abs_diff(&ComplexMatrix::outer(psi.amplitudes(), psi.amplitudes()));
        Ok((dev < 1e-9, format!("max deviation {dev:.2e}")))
    }));

    out.push(check("ideal shots agree with analytic values", || {
        let u = spec()?;
        let psi = PauliEigenstate::ALL[5].state();
        let (_, res) = run_shots_ideal(&psi, &u, 4000, 5).map_err(e)?;
        let stats = res.shot_stats.as_ref().ok_or("missing shot statistics")?;
        let exact = decode_analytic_pctc(&psi, &u).map_err(e)?;
        let zf = (res.fidelity - exact.fidelity).abs() / stats.fidelity_se.max(1e-3);
        let zp = (res.success_probability - exact.success_probability).abs() / stats.probability_se;
        Ok((zf < 5.0 && zp < 5.0, format!("F z-score {zf:.2}, P z-score {zp:.2}")))
    }));

    out
}

pub fn verify() -> Vec<Check> {
    verify_with(&u_q_matrix())
}

pub fn cmd_verify(out: &mut dyn Write) -> Result<(), CliError> {
    let checks = verify();
    for c in &checks {
        writeln!(out, "[{}] {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail)?;
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    writeln!(out, "{} of {} checks passed", checks.len() - failed, checks.len())?;
    if failed > 0 {
        return Err(CliError::Failure(format!("{failed} check(s) failed")));
    }
    Ok(())
}
