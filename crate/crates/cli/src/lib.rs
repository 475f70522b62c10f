//! Scenario runner for the cat-state displacement sensor.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod dynamics;
pub mod optimum;
pub mod output;
pub mod phase_space;
pub mod plot;
pub mod presets;
pub mod scenario;
pub mod sweep;
pub mod validate;

use config::{ConfigError, RawConfig};
use output::{sibling, stem_of, Artifact};
use scenario::{Kind, Scenario, SweepAxis};
use std::path::{Path, PathBuf};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(#[from] ConfigError),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("validation failure: {0}")]
    Validation(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Validation(_) => 4,
            CliError::Io(_) => 1,
        }
    }
}

/// Environment, then the file, then `--set` flags.
pub fn layered_config(
    env: impl IntoIterator<Item = (String, String)>,
    file: Option<&Path>,
    flags: &[String],
) -> Result<RawConfig, ConfigError> {
    let mut raw = RawConfig::from_env(env)?;
    if let Some(path) = file {
        raw = raw.overlay(RawConfig::from_file(path)?);
    }
    Ok(raw.overlay(RawConfig::from_flags(flags)?))
}

/// Runs `pool.install(f)` on a pool with `threads` workers, or the global pool.
pub fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        Some(k) => {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build().map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok(pool.install(f))
        }
        None => Ok(f()),
    }
}

fn default_name(kind: Kind) -> &'static str {
    match kind {
        Kind::Sensitivity => "sensitivity.csv",
        Kind::Qfi => "qfi.csv",
        Kind::Wigner => "wigner.dat",
        Kind::Optimize => "optimize.txt",
        Kind::Dynamics => "dynamics.csv",
    }
}

fn axis_label(axis: Option<SweepAxis>) -> (&'static str, bool) {
    match axis {
        Some(SweepAxis::Time) | None => ("interaction time", true),
        Some(SweepAxis::KappaRatio) => ("chi alpha sqrt(N) / kappa", true),
        Some(SweepAxis::Phi) => ("measurement angle phi", false),
        Some(SweepAxis::Tau2) => ("reversal time tau2", false),
        Some(SweepAxis::SigmaDet) => ("detection noise sigma_det", false),
    }
}

/// Output path: `out` if given, else the scenario's `output`, else a default name.
/// A directory `out` receives the scenario's file name.
pub fn output_path(s: &Scenario, out: Option<&Path>) -> PathBuf {
    let name = s.output.clone().unwrap_or_else(|| PathBuf::from(default_name(s.kind)));
    match out {
        Some(o) if o.is_dir() => o.join(name.file_name().unwrap_or(name.as_os_str())),
        Some(o) => o.to_path_buf(),
        None => name,
    }
}

/// Computes a scenario and returns the files it produces.
pub fn run_scenario(s: &Scenario, out: Option<&Path>) -> Result<Vec<Artifact>, CliError> {
    let path = output_path(s, out);
    let stem = stem_of(&path);
    let csv_name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let (xlabel, log_x) = axis_label(s.sweep);
    let log_x = log_x && s.grid.is_some_and(|g| g.spacing == scenario::Spacing::Log);
    Ok(match s.kind {
        Kind::Sensitivity => {
            let table = sweep::run_sensitivity(s)?;
            vec![
                Artifact::new(&path, table.render()),
                Artifact::new(sibling(&stem, ".plot.py"), plot::sensitivity_script(&csv_name, xlabel, log_x)),
            ]
        }
        Kind::Qfi => {
            let table = sweep::run_qfi(s)?;
            vec![
                Artifact::new(&path, table.render()),
                Artifact::new(sibling(&stem, ".plot.py"), plot::qfi_script(&csv_name, xlabel, log_x)),
            ]
        }
        Kind::Wigner => {
            let results = phase_space::evaluate(s)?;
            phase_space::artifacts(s, &results, &path)
        }
        Kind::Optimize => vec![Artifact::new(&path, optimum::run_optimize(s)?.render(&s.header()))],
        Kind::Dynamics => {
            let table = dynamics::run_dynamics(s)?;
            vec![Artifact::new(&path, table.render()), Artifact::new(sibling(&stem, ".plot.py"), plot::dynamics_script(&csv_name))]
        }
    })
}
