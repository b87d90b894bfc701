use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use pctc_core::protocol::{decode_analytic_pctc, run_shots, NoiseModel};
use pctc_core::qcore::{PauliEigenstate, StateVector};
use pctc_core::tomography::TomographyDataset;

use crate::format::sig;
use crate::{scrambler, CliError, RunArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Analytic,
    Shots,
    Both,
}

impl Mode {
    fn analytic(self) -> bool {
        self != Mode::Shots
    }

    fn shots(self) -> bool {
        self != Mode::Analytic
    }
}

/// Everything that determines a run's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub scrambler: String,
    pub states: Vec<String>,
    pub mode: Mode,
    pub shots_per_basis: u64,
    pub seed: u64,
    pub noise: Option<NoiseModel>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub scrambler: String,
    pub state: String,
    pub mode: String,
    pub fidelity: f64,
    pub probability: f64,
    pub fidelity_se: Option<f64>,
    pub probability_se: Option<f64>,
    pub shots_issued: Option<u64>,
    pub shots_kept: Option<u64>,
    pub seed: Option<u64>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct Sidecar {
    pub config: RunConfig,
    pub rows: Vec<Row>,
    pub datasets: Vec<TomographyDataset>,
}

pub const CSV_HEADER: [&str; 10] =
    ["scrambler", "state", "mode", "F", "P", "F_se", "P_se", "shots_issued", "shots_kept", "seed"];

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

/// `x+`-style label or `theta:phi` Bloch angles in radians.
pub fn parse_state(label: &str) -> Result<StateVector, CliError> {
    if let Ok(s) = PauliEigenstate::from_str(label) {
        return Ok(s.state());
    }
    let (t, p) = label.split_once(':').ok_or_else(|| usage(format!("invalid state {label:?}")))?;
    let theta: f64 = t.trim().parse().map_err(|_| usage(format!("invalid theta in {label:?}")))?;
    let phi: f64 = p.trim().parse().map_err(|_| usage(format!("invalid phi in {label:?}")))?;
    if !theta.is_finite() || !phi.is_finite() {
        return Err(usage(format!("non-finite angle in {label:?}")));
    }
    Ok(StateVector::bloch(theta, phi))
}

fn parse_state_list(spec: &str) -> Vec<String> {
    if spec.trim() == "all" {
        return PauliEigenstate::ALL.iter().map(|s| s.label()).collect();
    }
    spec.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect()
}

pub fn read_noise(path: &Path) -> Result<NoiseModel, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let noise: NoiseModel =
        serde_json::from_str(&text).map_err(|e| usage(format!("invalid noise file {}: {e}", path.display())))?;
    noise.validate().map_err(usage)?;
    Ok(noise)
}

impl RunConfig {
    pub fn from_args(args: &RunArgs) -> Result<Self, CliError> {
        if let Some(path) = &args.config {
            let text =
                std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
            let sidecar: Sidecar =
                serde_json::from_str(&text).map_err(|e| usage(format!("invalid sidecar {}: {e}", path.display())))?;
            return Ok(sidecar.config);
        }
        Ok(RunConfig {
            scrambler: args.scrambler.clone(),
            states: parse_state_list(&args.states),
            mode: args.mode,
            shots_per_basis: args.shots,
            seed: args.seed,
            noise: args.noise.as_deref().map(read_noise).transpose()?,
        })
    }

    pub fn validate(&self) -> Result<(), CliError> {
        scrambler(&self.scrambler)?;
        if self.states.is_empty() {
            return Err(usage("no states given"));
        }
        for s in &self.states {
            parse_state(s)?;
        }
        if self.mode.shots() && self.shots_per_basis == 0 {
            return Err(usage("--shots must be at least 1"));
        }
        if let Some(n) = &self.noise {
            n.validate().map_err(usage)?;
        }
        Ok(())
    }
}

fn core_error(e: pctc_core::Error) -> CliError {
    use pctc_core::Error as E;
    match e {
        E::InsufficientStatistics(_) | E::DegeneratePostselection(_) => CliError::Failure(e.to_string()),
        other => CliError::Usage(other.to_string()),
    }
}

fn average_row(rows: &[Row]) -> Row {
    let n = rows.len() as f64;
    let mean = |f: fn(&Row) -> f64| rows.iter().map(f).sum::<f64>() / n;
    let pooled_se = |f: fn(&Row) -> Option<f64>| {
        rows.iter().map(f).collect::<Option<Vec<f64>>>().map(|v| v.iter().map(|s| s * s).sum::<f64>().sqrt() / n)
    };
    let total = |f: fn(&Row) -> Option<u64>| rows.iter().map(f).sum::<Option<u64>>();
    Row {
        scrambler: rows[0].scrambler.clone(),
        state: "Average".into(),
        mode: rows[0].mode.clone(),
        fidelity: mean(|r| r.fidelity),
        probability: mean(|r| r.probability),
        fidelity_se: pooled_se(|r| r.fidelity_se),
        probability_se: pooled_se(|r| r.probability_se),
        shots_issued: total(|r| r.shots_issued),
        shots_kept: total(|r| r.shots_kept),
        seed: rows[0].seed,
    }
}

/// Computes every row of a run. Analytic rows come first when both modes
/// are requested, each block closed by its average.
pub fn execute_config(cfg: &RunConfig) -> Result<Sidecar, CliError> {
    cfg.validate()?;
    let u = scrambler(&cfg.scrambler)?;
    let states: Vec<(String, StateVector)> =
        cfg.states.iter().map(|s| parse_state(s).map(|v| (s.clone(), v))).collect::<Result<_, _>>()?;
    let mut rows = Vec::new();
    let mut datasets = Vec::new();

    if cfg.mode.analytic() {
        let mut block = Vec::new();
        for (label, psi) in &states {
            let res = decode_analytic_pctc(psi, &u).map_err(core_error)?;
            block.push(Row {
                scrambler: u.name().into(),
                state: label.clone(),
                mode: "analytic".into(),
                fidelity: res.fidelity,
                probability: res.success_probability,
                fidelity_se: None,
                probability_se: None,
                shots_issued: None,
                shots_kept: None,
                seed: None,
            });
        }
        let avg = average_row(&block);
        rows.extend(block);
        rows.push(avg);
    }

    if cfg.mode.shots() {
        let noise = cfg.noise.clone().unwrap_or_default();
        let mut block = Vec::new();
        for (label, psi) in &states {
            let (mut data, res) = run_shots(psi, &u, cfg.shots_per_basis, &noise, cfg.seed).map_err(core_error)?;
            data.metadata.state_label = label.clone();
            let stats = res.shot_stats.as_ref().expect("shot results carry statistics");
            block.push(Row {
                scrambler: u.name().into(),
                state: label.clone(),
                mode: "shots".into(),
                fidelity: res.fidelity,
                probability: res.success_probability,
                fidelity_se: Some(stats.fidelity_se),
                probability_se: Some(stats.probability_se),
                shots_issued: Some(stats.total_shots),
                shots_kept: Some(stats.postselected_shots),
                seed: Some(cfg.seed),
            });
            datasets.push(data);
        }
        let avg = average_row(&block);
        rows.extend(block);
        rows.push(avg);
    }
    Ok(Sidecar { config: cfg.clone(), rows, datasets })
}

pub fn render_csv(rows: &[Row]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(CSV_HEADER).expect("in-memory write");
    let opt_f = |x: Option<f64>| x.map(sig).unwrap_or_default();
    let opt_u = |x: Option<u64>| x.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.scrambler.clone(),
            r.state.clone(),
            r.mode.clone(),
            sig(r.fidelity),
            sig(r.probability),
            opt_f(r.fidelity_se),
            opt_f(r.probability_se),
            opt_u(r.shots_issued),
            opt_u(r.shots_kept),
            opt_u(r.seed),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn sidecar_path(csv_path: &Path) -> PathBuf {
    let p = csv_path.with_extension("json");
    if p == csv_path {
        csv_path.with_extension("sidecar.json")
    } else {
        p
    }
}

pub fn cmd_run(args: &RunArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = RunConfig::from_args(args)?;
    let result = execute_config(&cfg)?;
    let csv = render_csv(&result.rows);
    match &args.out {
        None => out.write_all(csv.as_bytes())?,
        Some(path) => {
            std::fs::write(path, &csv)?;
            let side = sidecar_path(path);
            let json = serde_json::to_string_pretty(&result).expect("serializable sidecar");
            std::fs::write(&side, json + "\n")?;
            writeln!(out, "wrote {} and {}", path.display(), side.display())?;
        }
    }
    Ok(())
}
