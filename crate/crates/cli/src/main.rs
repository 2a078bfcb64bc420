//! `fairmab`: run the bundled experiments or ad-hoc simulations from a TOML
//! config and/or flags. Flags override config values.
//!
//! Exit status: 0 on success, 1 when an audit fails, 2 on config or
//! validation errors, 3 on I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use fair_mab::experiment::{bounds_csv, run_experiment, CheckpointField, RawConfig};
use fair_mab::Error;

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Experiment {
    A,
    B,
    C,
    Run,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Profile {
    Ci,
    Full,
}

#[derive(Debug, Parser)]
#[command(
    name = "fairmab",
    version,
    about = "Fairness-constrained bandit experiments"
)]
struct Cli {
    /// TOML config file
    #[arg(long)]
    config: Option<PathBuf>,
    /// Named instance: paper-instance-1 | paper-instance-2
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated arm means (inline instance)
    #[arg(long, value_delimiter = ',')]
    means: Option<Vec<f64>>,
    /// Comma-separated fairness quotas (inline instance)
    #[arg(long, value_delimiter = ',')]
    fairness: Option<Vec<f64>>,
    /// fair-learn | t-fair-ucb | bare-learner
    #[arg(long)]
    algo: Option<String>,
    /// ucb1 | uniform | fixed:<arm> (arms numbered from 1)
    #[arg(long)]
    learner: Option<String>,
    #[arg(long)]
    horizon: Option<u64>,
    /// Unfairness tolerance
    #[arg(long)]
    alpha: Option<f64>,
    /// Comma-separated α grid for experiment a
    #[arg(long, value_delimiter = ',')]
    alpha_sweep: Option<Vec<f64>>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    reps: Option<usize>,
    /// auto | every | log:<n>
    #[arg(long)]
    checkpoints: Option<String>,
    /// Output directory; without it the main CSV goes to stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Audit every replication and fail on any violation
    #[arg(long)]
    audit: bool,
    /// Write one event file per replication (needs --out)
    #[arg(long)]
    events: bool,
    #[arg(long, value_enum)]
    profile: Option<Profile>,
    #[arg(long, value_enum)]
    experiment: Option<Experiment>,
    /// Print the closed-form bounds and exit without simulating
    #[arg(long)]
    bounds: bool,
}

impl Cli {
    fn overrides(&self) -> RawConfig {
        RawConfig {
            preset: self.preset.clone(),
            means: self.means.clone(),
            fairness: self.fairness.clone(),
            alpha: self.alpha,
            alpha_sweep: self.alpha_sweep.clone(),
            algo: self.algo.clone(),
            learner: self.learner.clone(),
            horizon: self.horizon,
            seed: self.seed,
            reps: self.reps,
            checkpoints: self.checkpoints.clone().map(CheckpointField::Named),
            out: self.out.clone(),
            audit: self.audit.then_some(true),
            events: self.events.then_some(true),
            experiment: self.experiment.map(|e| format!("{e:?}").to_lowercase()),
            profile: self.profile.map(|p| format!("{p:?}").to_lowercase()),
        }
    }
}

fn exit_code(err: &Error) -> ExitCode {
    match err {
        Error::AuditFailed(_) => ExitCode::from(1),
        Error::Io(_) => ExitCode::from(3),
        _ => ExitCode::from(2),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let base = match &cli.config {
        Some(path) => RawConfig::from_toml(&std::fs::read_to_string(path)?)?,
        None => RawConfig::default(),
    };
    let config = base.merge(cli.overrides()).resolve()?;

    if cli.bounds {
        let csv = bounds_csv(&config.instance, config.horizon)?;
        match &config.out {
            Some(dir) => {
                std::fs::create_dir_all(dir)?;
                std::fs::write(dir.join("bounds.csv"), &csv)?;
            }
            None => print!("{}", String::from_utf8_lossy(&csv)),
        }
        return Ok(ExitCode::SUCCESS);
    }

    let output = run_experiment(&config)?;
    match &config.out {
        Some(dir) => output.write_to(dir)?,
        None => {
            let main = ["metrics.csv", "sweep.csv"]
                .iter()
                .find_map(|name| output.files.get(*name));
            if let Some(bytes) = main {
                print!("{}", String::from_utf8_lossy(bytes));
            }
        }
    }
    eprintln!("{}", output.summary);
    for (rep, audit) in output.audits.iter().enumerate() {
        if !audit.passed {
            eprintln!("rep={rep} {audit}");
        }
    }
    Ok(if output.audits_passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("fairmab: {err}");
            exit_code(&err)
        }
    }
}
