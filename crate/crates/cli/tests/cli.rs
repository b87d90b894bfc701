use assert_cmd::Command;
use pctc_cli::verify::verify_with;
use pctc_core::qcore::r;
use pctc_core::scramblers::u_q_matrix;

fn pctc() -> Command {
    Command::cargo_bin("pctc").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = pctc().args(args).assert().success().get_output().stdout.clone();
    String::from_utf8(out).unwrap()
}

/// Column `k` of each data row, excluding the header.
fn column(csv: &str, k: usize) -> Vec<String> {
    csv.lines().skip(1).map(|l| l.split(',').nth(k).unwrap().to_string()).collect()
}

#[test]
fn u_q_analytic_run() {
    let csv = stdout_of(&["run", "--scrambler", "uq", "--mode", "analytic"]);
    assert_eq!(csv.lines().count(), 8);
    assert!(column(&csv, 3).iter().all(|f| f == "1.000000000"));
    assert!(column(&csv, 4).iter().all(|p| p == "0.2500000000"));
}

#[test]
fn u_c_analytic_run() {
    let csv = stdout_of(&["run", "--scrambler", "uc"]);
    let f = column(&csv, 3);
    assert_eq!(&f[..6], ["0.5000000000", "0.5000000000", "0.5000000000", "0.5000000000", "1.000000000", "1.000000000"]);
    assert_eq!(f[6], "0.6666666667");
    assert_eq!(column(&csv, 1)[6], "Average");
}

#[test]
fn otoc_exact_averages() {
    assert!(stdout_of(&["otoc", "--scrambler", "uq"]).contains("O_avg (exact): 0.2500000000"));
    assert!(stdout_of(&["otoc", "--scrambler", "uc"]).contains("O_avg (exact): 0.5000000000"));
}

#[test]
fn verify_passes_and_negative_control_fails() {
    let out = stdout_of(&["verify"]);
    assert!(!out.contains("[FAIL]"));

    let mut rows: Vec<Vec<_>> = (0..8).map(|i| u_q_matrix().row(i).to_vec()).collect();
    rows[0][0] = -rows[0][0];
    let broken = pctc_core::qcore::ComplexMatrix::from_rows(&rows);
    let failed: Vec<_> = verify_with(&broken).into_iter().filter(|c| !c.pass).map(|c| c.name).collect();
    assert!(failed.contains(&"uq is unitary"), "{failed:?}");
    assert!(failed.contains(&"uq circuit matches matrix"), "{failed:?}");

    // a unitary but wrong scrambler: swap the sign of a whole column
    let mut rows: Vec<Vec<_>> = (0..8).map(|i| u_q_matrix().row(i).to_vec()).collect();
    for row in rows.iter_mut() {
        row[3] *= r(-1.0);
    }
    let wrong = pctc_core::qcore::ComplexMatrix::from_rows(&rows);
    let checks = verify_with(&wrong);
    assert!(checks.iter().find(|c| c.name == "uq is unitary").unwrap().pass);
    assert!(checks.iter().any(|c| !c.pass));
}

#[test]
fn csv_is_byte_stable_and_sidecar_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let args = ["run", "--scrambler", "uq", "--mode", "both", "--shots", "600", "--seed", "9"];
    pctc().args(args).arg("--out").arg(&a).assert().success();
    pctc().args(args).arg("--out").arg(&b).assert().success();
    let first = std::fs::read(&a).unwrap();
    assert_eq!(first, std::fs::read(&b).unwrap());
    assert!(!first.contains(&b'\r'));

    let sidecar: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("a.json")).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["seed"], 9);
    assert_eq!(sidecar["datasets"].as_array().unwrap().len(), 6);

    let c = dir.path().join("c.csv");
    pctc().arg("run").arg("--config").arg(dir.path().join("a.json")).arg("--out").arg(&c).assert().success();
    assert_eq!(first, std::fs::read(&c).unwrap());
}

#[test]
fn noise_file_lowers_fidelity() {
    let dir = tempfile::tempdir().unwrap();
    let noise = dir.path().join("noise.json");
    std::fs::write(&noise, r#"{"p1": 0.002, "p2": 0.02, "readout_eps": 0.01}"#).unwrap();
    let zero = dir.path().join("zero.json");
    std::fs::write(&zero, r#"{"p1": 0.0, "p2": 0.0, "readout_eps": 0.0}"#).unwrap();
    let avg_f = |file: &std::path::Path| {
        let csv = stdout_of(&[
            "run", "--scrambler", "uq", "--mode", "shots", "--shots", "2000", "--seed", "4",
            "--noise", file.to_str().unwrap(),
        ]);
        column(&csv, 3)[6].parse::<f64>().unwrap()
    };
    let (noisy, clean) = (avg_f(&noise), avg_f(&zero));
    assert!(noisy < clean, "{noisy} vs {clean}");
}

#[test]
fn bad_arguments_exit_with_usage_code() {
    pctc().args(["run", "--states", "w+"]).assert().code(2);
    pctc().args(["run", "--scrambler", "nope"]).assert().code(2);
    pctc().args(["run", "--mode", "shots", "--shots", "0"]).assert().code(2);
    pctc().args(["run", "--bogus"]).assert().code(2);
}

#[test]
fn table_output() {
    let main = stdout_of(&["table"]);
    assert!(main.contains("reported, not reproduced"));
    assert!(main.contains("0.9850"));
    let supp = stdout_of(&["table", "--which", "supp"]);
    assert!(supp.contains("uc: ideal simulation"));
    assert!(supp.contains("0.6381"));
}
