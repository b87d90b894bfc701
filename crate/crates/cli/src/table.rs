use std::fmt::Write;

use pctc_core::protocol::decode_analytic_pctc;
use pctc_core::qcore::PauliEigenstate;
use pctc_core::scramblers::{u_c, u_q, ScramblerSpec};

use crate::Which;

/// Hardware numbers as published; state order x−, x+, y−, y+, z−, z+, then the average.
struct Reported {
    title: &'static str,
    fidelity: [f64; 7],
    probability: [f64; 7],
}

const MAIN: &[(&str, Reported)] = &[(
    "uq",
    Reported {
        title: "trapped-ion device",
        fidelity: [0.976, 0.986, 0.990, 0.988, 0.983, 0.987, 0.985],
        probability: [0.258, 0.249, 0.243, 0.256, 0.253, 0.252, 0.252],
    },
)];

const SUPP: &[(&str, Reported)] = &[
    (
        "uq",
        Reported {
            title: "superconducting device",
            fidelity: [0.8320, 0.8219, 0.8681, 0.8506, 0.8479, 0.8512, 0.8453],
            probability: [0.2519, 0.2619, 0.2592, 0.2578, 0.2566, 0.2564, 0.2573],
        },
    ),
    (
        "uc",
        Reported {
            title: "superconducting device",
            fidelity: [0.5021, 0.5014, 0.4949, 0.5082, 0.9092, 0.9130, 0.6381],
            probability: [0.4430, 0.4440, 0.4454, 0.4406, 0.4405, 0.4461, 0.4433],
        },
    ),
];

fn ideal(u: &ScramblerSpec) -> ([f64; 7], [f64; 7]) {
    let mut f = [0.0; 7];
    let mut p = [0.0; 7];
    for (k, s) in PauliEigenstate::ALL.iter().enumerate() {
        let r = decode_analytic_pctc(&s.state(), u).expect("fixed scrambler decodes");
        f[k] = r.fidelity;
        p[k] = r.success_probability;
    }
    f[6] = f[..6].iter().sum::<f64>() / 6.0;
    p[6] = p[..6].iter().sum::<f64>() / 6.0;
    (f, p)
}

pub fn render(which: Which) -> String {
    let blocks = match which {
        Which::Main => MAIN,
        Which::Supp => SUPP,
    };
    let mut s = String::new();
    for (name, rep) in blocks {
        let u = if *name == "uq" { u_q() } else { u_c() };
        let (f, p) = ideal(&u);
        writeln!(s, "{name}: ideal simulation vs {} (reported, not reproduced)", rep.title).unwrap();
        writeln!(s, "{:<8}{:>10}{:>12}{:>10}{:>12}", "state", "F ideal", "F reported", "P ideal", "P reported").unwrap();
        let labels = PauliEigenstate::ALL.iter().map(|s| s.label()).chain(["avg".to_string()]);
        for (k, label) in labels.enumerate() {
            writeln!(
                s,
                "{label:<8}{:>10.4}{:>12.4}{:>10.4}{:>12.4}",
                f[k], rep.fidelity[k], p[k], rep.probability[k]
            )
            .unwrap();
        }
        s.push('\n');
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reported_averages_match_their_rows() {
        for (_, rep) in MAIN.iter().chain(SUPP) {
            let f = rep.fidelity[..6].iter().sum::<f64>() / 6.0;
            let p = rep.probability[..6].iter().sum::<f64>() / 6.0;
            assert!((f - rep.fidelity[6]).abs() < 1.5e-3, "{f}");
            assert!((p - rep.probability[6]).abs() < 1.5e-3, "{p}");
        }
    }

    #[test]
    fn main_table_lists_ideal_and_reported() {
        let t = render(Which::Main);
        assert!(t.contains("reported, not reproduced"));
        assert!(t.contains("avg         1.0000      0.9850    0.2500      0.2520"), "{t}");
    }
}
