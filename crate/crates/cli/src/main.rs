use cavity_sense_cli::config::ENV_PREFIX;
use cavity_sense_cli::output::write_artifacts;
use cavity_sense_cli::scenario::{Kind, Scenario};
use cavity_sense_cli::validate::{self, Level};
use cavity_sense_cli::{layered_config, presets, run_scenario, with_threads, CliError};
use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "cavity-sense", version, about = "Cat-state displacement sensing: sweeps, QFI, Wigner panels and validation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args)]
struct Common {
    /// Scenario file (flat `key = value` lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file, or directory for `figure`.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Unit of rate values in the config.
    #[arg(long, global = true, value_enum)]
    freq_convention: Option<FreqArg>,
    /// Override a config key, `key=value`; repeatable.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    sets: Vec<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FreqArg {
    Rad,
    Hz2pi,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

#[derive(Subcommand)]
enum Command {
    /// Sensitivity and gain along a sweep.
    Sensitivity,
    /// Quantum Fisher information along a sweep.
    Qfi,
    /// Wigner panels of the bosonic cat.
    Wigner,
    /// Optimal interaction time with closed-form comparison.
    Optimize,
    /// Tavis-Cummings versus effective-model dynamics.
    Dynamics,
    /// Oracle and property checks.
    Validate {
        #[arg(long, value_enum, default_value = "fast")]
        level: LevelArg,
        /// Shorthand for `--level fast`.
        #[arg(long, conflicts_with_all = ["level", "full"])]
        fast: bool,
        /// Shorthand for `--level full`.
        #[arg(long)]
        full: bool,
    },
    /// Regenerate a figure's data from its committed presets.
    Figure { name: String },
}

fn scenario_for(kind: Kind, common: &Common) -> Result<Scenario, CliError> {
    let mut flags = common.sets.clone();
    if let Some(f) = common.freq_convention {
        flags.push(format!("freq_convention={}", if matches!(f, FreqArg::Rad) { "rad" } else { "hz2pi" }));
    }
    let env = std::env::vars().filter(|(k, _)| k.starts_with(ENV_PREFIX));
    let raw = layered_config(env, common.config.as_deref(), &flags)?;
    Ok(Scenario::from_raw(&raw, Some(kind))?)
}

fn run(cli: Cli) -> Result<(), CliError> {
    let common = &cli.common;
    let kind = match &cli.command {
        Command::Sensitivity => Kind::Sensitivity,
        Command::Qfi => Kind::Qfi,
        Command::Wigner => Kind::Wigner,
        Command::Optimize => Kind::Optimize,
        Command::Dynamics => Kind::Dynamics,
        Command::Validate { level, full, .. } => {
            let level = if *full || matches!(level, LevelArg::Full) { Level::Full } else { Level::Fast };
            let report = with_threads(common.threads, || validate::run(level))?;
            let text = report.render();
            match &common.out {
                Some(p) => std::fs::write(p, &text)?,
                None => print!("{text}"),
            }
            eprintln!("validate: {} checks in {:.1} s", report.checks.len(), report.seconds);
            return if report.all_pass() {
                Ok(())
            } else {
                let failed: Vec<&str> = report.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
                Err(CliError::Validation(format!("failed: {}", failed.join(", "))))
            };
        }
        Command::Figure { name } => {
            let dir = common.out.clone().unwrap_or_else(|| PathBuf::from("."));
            let files = with_threads(common.threads, || presets::run_figure(name, &dir))??;
            write_artifacts(&files)?;
            for f in &files {
                eprintln!("wrote {}", f.path.display());
            }
            return Ok(());
        }
    };
    let s = scenario_for(kind, common)?;
    let files = with_threads(common.threads, || run_scenario(&s, common.out.as_deref()))??;
    write_artifacts(&files)?;
    for f in &files {
        eprintln!("wrote {}", f.path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
