//! Config-driven experiments: the α sweep, r-Regret over time, per-round
//! fairness with auditing, and ad-hoc runs.
//!
//! Configs are flat TOML documents:
//!
//! ```toml
//! preset = "paper-instance-2"   # or give means/fairness inline
//! # means = [0.7, 0.5, 0.4]
//! # fairness = [0.2, 0.3, 0.25]
//! alpha = 0.0
//! # alpha_sweep = [0, 10, 100]
//! algo = "fair-learn"           # fair-learn | t-fair-ucb | bare-learner
//! learner = "ucb1"              # ucb1 | uniform | fixed:<arm>
//! horizon = 200
//! seed = 1
//! reps = 100
//! checkpoints = "auto"          # auto | every | log:<n> | [1, 10, 100]
//! experiment = "c"              # a | b | c | run
//! profile = "ci"                # ci | full
//! audit = true
//! events = false
//! out = "results"
//! ```
//!
//! Replication `j` uses seed `mix_seed(seed, j)`. Replications run on the rayon
//! pool and are reduced in replication order, so outputs do not depend on
//! scheduling.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::env::mix_seed;
use crate::error::{Error, Result};
use crate::instance::{presets, validate_instance, FairMabInstance, InstanceParams};
use crate::learners::LearnerSpec;
use crate::metrics::{
    alpha_knee, alpha_threshold, max_violation_over_trace, r_regret_of_state, regret_of_state,
    BoundReport, MetricSeries, ViolationMode,
};
use crate::oracle::{audit_trace, AuditReport};
use crate::sim::Algorithm;
use crate::trace::CheckpointPlan;

/// Horizon used for presets under the `ci` profile when no horizon is given.
pub const CI_HORIZON_CAP: u64 = 100_000;
pub const DEFAULT_REPS: usize = 50;
pub const DEFAULT_FAIRNESS_REPS: usize = 100;
pub const VERSION: &str = concat!("fair-mab ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Profile {
    #[default]
    Ci,
    Full,
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ci" => Ok(Profile::Ci),
            "full" => Ok(Profile::Full),
            other => Err(Error::Validation {
                field: "profile".into(),
                message: format!("{other:?}; expected \"ci\" or \"full\""),
            }),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    /// Final regret and violation against α.
    A,
    /// Metric series at checkpoints.
    B,
    /// Per-round violations, every replication audited.
    C,
    #[default]
    Run,
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" => Ok(ExperimentKind::A),
            "b" => Ok(ExperimentKind::B),
            "c" => Ok(ExperimentKind::C),
            "run" => Ok(ExperimentKind::Run),
            other => Err(Error::Validation {
                field: "experiment".into(),
                message: format!("{other:?}; expected a, b, c or run"),
            }),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExperimentKind::A => "a",
            ExperimentKind::B => "b",
            ExperimentKind::C => "c",
            ExperimentKind::Run => "run",
        })
    }
}

/// Config fields as written, before defaults and validation. Every field is optional
/// so that a file and command-line flags can be layered with [`RawConfig::merge`].
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub preset: Option<String>,
    pub means: Option<Vec<f64>>,
    pub fairness: Option<Vec<f64>>,
    pub alpha: Option<f64>,
    pub alpha_sweep: Option<Vec<f64>>,
    pub algo: Option<String>,
    pub learner: Option<String>,
    pub horizon: Option<u64>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    pub checkpoints: Option<CheckpointField>,
    pub out: Option<PathBuf>,
    pub audit: Option<bool>,
    pub events: Option<bool>,
    pub experiment: Option<String>,
    pub profile: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum CheckpointField {
    Named(String),
    Rounds(Vec<u64>),
}

impl RawConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Parse {
            line: e.span().map(|s| text[..s.start].matches('\n').count() + 1),
            message: e.message().to_string(),
        })
    }

    /// Fields set in `over` replace those in `self`.
    pub fn merge(self, over: RawConfig) -> RawConfig {
        RawConfig {
            preset: over.preset.or(self.preset),
            means: over.means.or(self.means),
            fairness: over.fairness.or(self.fairness),
            alpha: over.alpha.or(self.alpha),
            alpha_sweep: over.alpha_sweep.or(self.alpha_sweep),
            algo: over.algo.or(self.algo),
            learner: over.learner.or(self.learner),
            horizon: over.horizon.or(self.horizon),
            seed: over.seed.or(self.seed),
            reps: over.reps.or(self.reps),
            checkpoints: over.checkpoints.or(self.checkpoints),
            out: over.out.or(self.out),
            audit: over.audit.or(self.audit),
            events: over.events.or(self.events),
            experiment: over.experiment.or(self.experiment),
            profile: over.profile.or(self.profile),
        }
    }

    /// Applies presets and defaults, then validates.
    pub fn resolve(self) -> Result<ExperimentConfig> {
        let experiment: ExperimentKind = self.experiment.as_deref().unwrap_or("run").parse()?;
        let profile: Profile = self.profile.as_deref().unwrap_or("ci").parse()?;

        let base = match &self.preset {
            Some(name) => Some(
                presets::by_name(name.trim()).ok_or_else(|| Error::UnknownPreset(name.clone()))?,
            ),
            None => None,
        };
        let missing = |field: &str| Error::Validation {
            field: field.into(),
            message: "required when no preset is given".into(),
        };
        let means = match (self.means, &base) {
            (Some(m), _) => m,
            (None, Some(b)) => b.means.clone(),
            (None, None) => return Err(missing("means")),
        };
        let fairness = match (self.fairness, &base) {
            (Some(r), _) => r,
            (None, Some(b)) => b.fairness.clone(),
            (None, None) => return Err(missing("fairness")),
        };
        let alpha = self.alpha.or(base.as_ref().map(|b| b.alpha)).unwrap_or(0.0);
        let preset_horizon = base.as_ref().and_then(|b| b.horizon);
        let instance = validate_instance(InstanceParams {
            means,
            fairness,
            alpha,
            horizon: preset_horizon,
        })?;

        let horizon = match (self.horizon, preset_horizon) {
            (Some(t), _) => t,
            (None, Some(t)) if profile == Profile::Ci => t.min(CI_HORIZON_CAP),
            (None, Some(t)) => t,
            (None, None) => return Err(missing("horizon")),
        };
        if horizon == 0 {
            return Err(Error::Validation {
                field: "horizon".into(),
                message: "must be at least 1".into(),
            });
        }

        let learner: LearnerSpec = self.learner.as_deref().unwrap_or("ucb1").parse()?;
        if let LearnerSpec::Fixed(arm) = learner {
            if arm >= instance.k() {
                return Err(Error::Validation {
                    field: "learner".into(),
                    message: format!("fixed:{} names an arm beyond k = {}", arm + 1, instance.k()),
                });
            }
        }
        let algo = Algorithm::from_names(self.algo.as_deref().unwrap_or("fair-learn"), learner)?;

        if let Some(sweep) = &self.alpha_sweep {
            if sweep.is_empty() {
                return Err(Error::Validation {
                    field: "alpha_sweep".into(),
                    message: "must not be empty".into(),
                });
            }
            if let Some(&bad) = sweep.iter().find(|a| !a.is_finite() || **a < 0.0) {
                return Err(Error::NegativeAlpha(bad));
            }
        }

        let reps = self.reps.unwrap_or(match experiment {
            ExperimentKind::C => DEFAULT_FAIRNESS_REPS,
            _ => DEFAULT_REPS,
        });
        if reps == 0 {
            return Err(Error::Validation {
                field: "reps".into(),
                message: "must be at least 1".into(),
            });
        }
        let checkpoints = match self.checkpoints {
            None => CheckpointPlan::Auto,
            Some(CheckpointField::Named(s)) => s.parse()?,
            Some(CheckpointField::Rounds(r)) => CheckpointPlan::Rounds(r),
        };

        Ok(ExperimentConfig {
            preset: self.preset,
            instance,
            algo,
            horizon,
            alpha_sweep: self.alpha_sweep,
            seed: self.seed.unwrap_or(0),
            reps,
            checkpoints,
            out: self.out,
            audit: self.audit.unwrap_or(experiment == ExperimentKind::C),
            events: self.events.unwrap_or(false),
            experiment,
            profile,
        })
    }
}

/// A validated experiment description.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub preset: Option<String>,
    /// Carries α; for a sweep, each grid point replaces it.
    pub instance: FairMabInstance,
    pub algo: Algorithm,
    pub horizon: u64,
    pub alpha_sweep: Option<Vec<f64>>,
    pub seed: u64,
    pub reps: usize,
    pub checkpoints: CheckpointPlan,
    pub out: Option<PathBuf>,
    pub audit: bool,
    pub events: bool,
    pub experiment: ExperimentKind,
    pub profile: Profile,
}

/// Parses and validates a TOML config.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    RawConfig::from_toml(text)?.resolve()
}

impl ExperimentConfig {
    pub fn replication_seeds(&self) -> Vec<u64> {
        (0..self.reps as u64)
            .map(|j| mix_seed(self.seed, j))
            .collect()
    }

    /// The sweep as configured, or `{0} ∪ {10^j <= T}` plus the knee when it is positive.
    pub fn alpha_grid(&self) -> Vec<f64> {
        if let Some(sweep) = &self.alpha_sweep {
            return sweep.clone();
        }
        default_alpha_grid(&self.instance, self.horizon)
    }
}

pub fn default_alpha_grid(instance: &FairMabInstance, horizon: u64) -> Vec<f64> {
    let mut grid = vec![0.0];
    let mut p = 1u64;
    while p <= horizon {
        grid.push(p as f64);
        p = match p.checked_mul(10) {
            Some(next) => next,
            None => break,
        };
    }
    if let Ok(knee) = alpha_knee(instance, horizon) {
        if knee > 0.0 && !grid.contains(&knee) {
            grid.push(knee);
        }
    }
    grid.sort_by(f64::total_cmp);
    grid
}

/// Formats with 9 significant digits, trailing zeros trimmed, exponent outside `[1e-5, 1e9)`.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// One α of the sweep, summarized over replications.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub alpha: f64,
    pub reps: usize,
    pub mean_regret: f64,
    pub std_regret: f64,
    pub mean_r_regret: f64,
    pub std_r_regret: f64,
    /// Per replication: max over rounds and arms of `r_i t − N_{i,t}`; then averaged.
    pub mean_max_violation_real: f64,
    pub std_max_violation_real: f64,
    pub max_max_violation_real: f64,
    pub mean_max_violation_floor: f64,
}

/// Everything an experiment produced. File names are relative to the output directory.
#[derive(Debug, Clone, Default)]
pub struct ExperimentOutput {
    pub files: BTreeMap<String, Vec<u8>>,
    pub sweep: Vec<SweepRow>,
    /// Mean over replications, with standard deviations.
    pub series: Option<MetricSeries>,
    pub audits: Vec<AuditReport>,
    pub summary: String,
}

impl ExperimentOutput {
    pub fn audits_passed(&self) -> bool {
        self.audits.iter().all(|a| a.passed)
    }

    pub fn write_to(&self, dir: &Path) -> Result<()> {
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                std::fs::create_dir_all(parent)?;
            }
            std::fs::write(path, bytes)?;
        }
        Ok(())
    }
}

fn csv_bytes(header: &[&str], rows: Vec<Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let ss: f64 = values.iter().map(|v| (v - mean).powi(2)).sum();
    (mean, (ss / (n - 1.0)).sqrt())
}

/// `name,arm,value` rows for every closed-form bound; arms are one-based.
pub fn bounds_csv(instance: &FairMabInstance, horizon: u64) -> Result<Vec<u8>> {
    let report = BoundReport::compute(instance, horizon)?;
    let scalar = |name: &str, v: f64| vec![name.to_string(), String::new(), format_number(v)];
    let mut rows = vec![
        scalar("horizon", horizon as f64),
        scalar("alpha", instance.alpha()),
        scalar("fair_ucb_rregret_bound", report.fair_ucb_rregret_bound),
        scalar("t_fair_ucb_rregret_bound", report.t_fair_ucb_rregret_bound),
        scalar("ucb_regret_bound", report.ucb_regret_bound),
        scalar("alpha_regret_bound", report.alpha_regret_bound),
        scalar("distribution_free_bound", report.distribution_free_bound),
        scalar("alpha_knee", alpha_knee(instance, horizon)?),
    ];
    for &arm in &report.s_set {
        rows.push(vec!["s_set".into(), (arm + 1).to_string(), "1".into()]);
    }
    for (arm, &v) in report.alpha_threshold.iter().enumerate() {
        rows.push(vec![
            "alpha_threshold".into(),
            (arm + 1).to_string(),
            format_number(v),
        ]);
    }
    Ok(csv_bytes(&["name", "arm", "value"], rows))
}

fn thresholds_csv(instance: &FairMabInstance, horizon: u64) -> Result<Vec<u8>> {
    let thresholds = alpha_threshold(instance, horizon)?;
    let gaps = instance.gaps();
    let rows = thresholds
        .iter()
        .enumerate()
        .map(|(arm, &v)| {
            vec![
                (arm + 1).to_string(),
                format_number(instance.means()[arm]),
                format_number(gaps.get(arm)),
                format_number(instance.fairness()[arm]),
                format_number(v),
            ]
        })
        .collect();
    Ok(csv_bytes(
        &["arm", "mean", "gap", "fairness", "alpha_threshold"],
        rows,
    ))
}

fn manifest(config: &ExperimentConfig, files: &[String], alphas: &[f64]) -> Vec<u8> {
    let params = config.instance.params();
    let checkpoints = config.checkpoints.to_string();
    let value = serde_json::json!({
        "version": VERSION,
        "experiment": config.experiment,
        "profile": config.profile,
        "preset": config.preset,
        "means": params.means,
        "fairness": params.fairness,
        "alpha": params.alpha,
        "alphas": alphas,
        "algo": config.algo.to_string(),
        "horizon": config.horizon,
        "seed": config.seed,
        "reps": config.reps,
        "replication_seeds": config.replication_seeds(),
        "checkpoints": checkpoints,
        "audit": config.audit,
        "events": config.events,
        "files": files,
    });
    let mut bytes = serde_json::to_vec_pretty(&value).expect("manifest serializes");
    bytes.push(b'\n');
    bytes
}

fn finish(
    config: &ExperimentConfig,
    mut output: ExperimentOutput,
    alphas: &[f64],
) -> ExperimentOutput {
    let mut names: Vec<String> = output.files.keys().cloned().collect();
    names.push("manifest.json".into());
    names.sort();
    output
        .files
        .insert("manifest.json".into(), manifest(config, &names, alphas));
    output
}

/// Dispatches on `config.experiment`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    match config.experiment {
        ExperimentKind::A => run_experiment_a(config),
        ExperimentKind::B => run_experiment_b(config),
        ExperimentKind::C => run_experiment_c(config),
        ExperimentKind::Run => run_series(config, config.checkpoints.clone(), config.audit),
    }
}

/// Cost of fairness: for each α, final regret and the worst violation over the run.
pub fn run_experiment_a(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let alphas = config.alpha_grid();
    let seeds = config.replication_seeds();
    let horizon = config.horizon;
    let final_only = CheckpointPlan::Rounds(Vec::new());
    let mut sweep = Vec::with_capacity(alphas.len());
    for &alpha in &alphas {
        let instance = config.instance.with_alpha(alpha)?;
        let per_rep: Vec<[f64; 4]> = seeds
            .par_iter()
            .map(|&seed| {
                let trace = config.algo.run(&instance, seed, horizon, &final_only)?;
                let end = trace.final_state()?;
                Ok([
                    regret_of_state(&end, &instance),
                    r_regret_of_state(&end, &instance).value,
                    max_violation_over_trace(&trace, ViolationMode::Real),
                    max_violation_over_trace(&trace, ViolationMode::Floor),
                ])
            })
            .collect::<Result<_>>()?;
        let column = |i: usize| -> Vec<f64> { per_rep.iter().map(|r| r[i]).collect() };
        let (mean_regret, std_regret) = mean_std(&column(0));
        let (mean_r_regret, std_r_regret) = mean_std(&column(1));
        let real = column(2);
        let (mean_real, std_real) = mean_std(&real);
        let (mean_floor, _) = mean_std(&column(3));
        sweep.push(SweepRow {
            alpha,
            reps: seeds.len(),
            mean_regret,
            std_regret,
            mean_r_regret,
            std_r_regret,
            mean_max_violation_real: mean_real,
            std_max_violation_real: std_real,
            max_max_violation_real: real.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            mean_max_violation_floor: mean_floor,
        });
    }

    let rows = sweep
        .iter()
        .map(|r| {
            vec![
                format_number(r.alpha),
                r.reps.to_string(),
                format_number(r.mean_regret),
                format_number(r.std_regret),
                format_number(r.mean_r_regret),
                format_number(r.std_r_regret),
                format_number(r.mean_max_violation_real),
                format_number(r.std_max_violation_real),
                format_number(r.max_max_violation_real),
                format_number(r.mean_max_violation_floor),
            ]
        })
        .collect();
    let mut output = ExperimentOutput::default();
    output.files.insert(
        "sweep.csv".into(),
        csv_bytes(
            &[
                "alpha",
                "reps",
                "mean_regret",
                "std_regret",
                "mean_r_regret",
                "std_r_regret",
                "mean_max_viol_real",
                "std_max_viol_real",
                "max_max_viol_real",
                "mean_max_viol_floor",
            ],
            rows,
        ),
    );
    if let Ok(csv) = thresholds_csv(&config.instance, horizon) {
        output.files.insert("alpha_thresholds.csv".into(), csv);
    }
    if let Ok(csv) = bounds_csv(&config.instance, horizon) {
        output.files.insert("bounds.csv".into(), csv);
    }
    output.summary = format!(
        "experiment a: {} alphas x {} reps at T={}, algo {}",
        alphas.len(),
        seeds.len(),
        horizon,
        config.algo
    );
    output.sweep = sweep;
    Ok(finish(config, output, &alphas))
}

/// r-Regret (and the other metrics) at the configured checkpoints.
pub fn run_experiment_b(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    run_series(config, config.checkpoints.clone(), config.audit)
}

/// Per-round violations with every replication audited; any audit failure is an error.
pub fn run_experiment_c(config: &ExperimentConfig) -> Result<ExperimentOutput> {
    let output = run_series(config, CheckpointPlan::EveryRound, true)?;
    if let Some(bad) = output.audits.iter().find(|a| !a.passed) {
        return Err(Error::AuditFailed(bad.to_string()));
    }
    Ok(output)
}

fn run_series(
    config: &ExperimentConfig,
    plan: CheckpointPlan,
    audit: bool,
) -> Result<ExperimentOutput> {
    let instance = &config.instance;
    let seeds = config.replication_seeds();
    let results: Vec<(MetricSeries, Option<AuditReport>, Option<Vec<u8>>)> = seeds
        .par_iter()
        .map(|&seed| {
            let trace = config.algo.run(instance, seed, config.horizon, &plan)?;
            let report = if audit {
                Some(audit_trace(&trace, instance)?)
            } else {
                None
            };
            let events = if config.events {
                let mut buf = Vec::new();
                trace.write_events(&mut buf)?;
                Some(buf)
            } else {
                None
            };
            Ok((MetricSeries::from_trace(&trace), report, events))
        })
        .collect::<Result<_>>()?;

    let runs: Vec<MetricSeries> = results.iter().map(|r| r.0.clone()).collect();
    let mean = MetricSeries::aggregate(&runs, true)?;
    let algo = config.algo.to_string();
    let alpha = format_number(instance.alpha());
    let mut rows = Vec::new();
    let mut push = |rep: String, s: &MetricSeries, i: usize, values: [f64; 4]| {
        rows.push(vec![
            s.checkpoints[i].to_string(),
            rep,
            algo.clone(),
            alpha.clone(),
            format_number(values[0]),
            format_number(values[1]),
            format_number(values[2]),
            format_number(values[3]),
        ]);
    };
    for (rep, s) in runs.iter().enumerate() {
        for i in 0..s.len() {
            let v = [
                s.regret[i],
                s.r_regret[i],
                s.max_violation_real[i],
                s.max_violation_floor[i],
            ];
            push(rep.to_string(), s, i, v);
        }
    }
    for i in 0..mean.len() {
        let v = [
            mean.regret[i],
            mean.r_regret[i],
            mean.max_violation_real[i],
            mean.max_violation_floor[i],
        ];
        push("mean".into(), &mean, i, v);
    }
    if let Some(sd) = &mean.std {
        for i in 0..mean.len() {
            let v = [
                sd.regret[i],
                sd.r_regret[i],
                sd.max_violation_real[i],
                sd.max_violation_floor[i],
            ];
            push("std".into(), &mean, i, v);
        }
    }

    let mut output = ExperimentOutput::default();
    output.files.insert(
        "metrics.csv".into(),
        csv_bytes(
            &[
                "t",
                "rep",
                "algo",
                "alpha",
                "regret",
                "r_regret",
                "viol_real",
                "viol_floor",
            ],
            rows,
        ),
    );
    if let Ok(csv) = bounds_csv(instance, config.horizon) {
        output.files.insert("bounds.csv".into(), csv);
    }
    let mut audits = Vec::new();
    for (rep, (_, report, events)) in results.into_iter().enumerate() {
        if let Some(r) = report {
            audits.push(r);
        }
        if let Some(bytes) = events {
            output
                .files
                .insert(format!("events/rep-{rep:04}.csv"), bytes);
        }
    }
    if audit {
        let mut text = String::new();
        let mut jsonl = String::new();
        for (rep, a) in audits.iter().enumerate() {
            text.push_str(&format!("rep={rep} {a}\n"));
            jsonl.push_str(&a.to_json());
            jsonl.push('\n');
        }
        output.files.insert("audit.txt".into(), text.into_bytes());
        output
            .files
            .insert("audit.jsonl".into(), jsonl.into_bytes());
    }

    let passed = audits.iter().filter(|a| a.passed).count();
    output.summary = format!(
        "experiment {}: {} reps at T={}, algo {}, alpha {}; final mean regret {}, r-regret {}, max real violation {}{}",
        config.experiment,
        seeds.len(),
        config.horizon,
        algo,
        alpha,
        format_number(*mean.regret.last().unwrap_or(&0.0)),
        format_number(*mean.r_regret.last().unwrap_or(&0.0)),
        format_number(mean.max_violation_real.iter().copied().fold(f64::NEG_INFINITY, f64::max)),
        if audit {
            format!("; audits passed {passed}/{}", audits.len())
        } else {
            String::new()
        }
    );
    output.series = Some(mean);
    output.audits = audits;
    Ok(finish(config, output, &[instance.alpha()]))
}
