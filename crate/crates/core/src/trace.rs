//! Run traces, checkpoint plans and the line-oriented event file.
//!
//! Event file layout (arms are one-based, floats use Rust's shortest round-trip form):
//!
//! ```text
//! # fair-mab event trace
//! # means=0.7;0.5;0.4
//! # fairness=0.2;0.3;0.25
//! # alpha=0
//! # seed=42
//! # algo=fair-learn/ucb1
//! t,arm,reward
//! 1,1,1
//! 2,2,0
//! ```

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::instance::{FairMabInstance, InstanceParams};
use crate::state::BanditState;

/// One round: which arm was pulled and what it paid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Event {
    pub t: u64,
    /// Zero-based arm.
    pub arm: usize,
    pub reward: u8,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub t: u64,
    pub state: BanditState,
}

/// Rounds at which a run stores a full [`BanditState`] snapshot.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum CheckpointPlan {
    /// Every round up to `10^4`, otherwise 1000 log-spaced rounds plus the horizon.
    #[default]
    Auto,
    EveryRound,
    /// `n` rounds spaced evenly in `log t` between 1 and the horizon.
    LogSpaced(usize),
    Rounds(Vec<u64>),
}

pub const AUTO_DENSE_LIMIT: u64 = 10_000;
pub const AUTO_LOG_POINTS: usize = 1000;

impl CheckpointPlan {
    /// Sorted, deduplicated checkpoint rounds in `1..=horizon`; always includes `horizon`.
    pub fn rounds(&self, horizon: u64) -> Vec<u64> {
        let mut rounds = match self {
            CheckpointPlan::Auto if horizon <= AUTO_DENSE_LIMIT => (1..=horizon).collect(),
            CheckpointPlan::Auto => log_spaced(horizon, AUTO_LOG_POINTS),
            CheckpointPlan::EveryRound => (1..=horizon).collect(),
            CheckpointPlan::LogSpaced(n) => log_spaced(horizon, *n),
            CheckpointPlan::Rounds(r) => r
                .iter()
                .copied()
                .filter(|&t| t >= 1 && t <= horizon)
                .collect(),
        };
        if horizon >= 1 {
            rounds.push(horizon);
        }
        rounds.sort_unstable();
        rounds.dedup();
        rounds
    }
}

fn log_spaced(horizon: u64, n: usize) -> Vec<u64> {
    if horizon == 0 || n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![horizon];
    }
    let log_h = (horizon as f64).ln();
    (0..n)
        .map(|i| {
            let t = (log_h * i as f64 / (n - 1) as f64).exp().round() as u64;
            t.clamp(1, horizon)
        })
        .collect()
}

impl std::str::FromStr for CheckpointPlan {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Validation {
            field: "checkpoints".into(),
            message: format!(
                "{s:?}; expected \"auto\", \"every\", \"log:<n>\" or a list of rounds"
            ),
        };
        match s.trim() {
            "auto" => Ok(CheckpointPlan::Auto),
            "every" => Ok(CheckpointPlan::EveryRound),
            other => other
                .strip_prefix("log:")
                .and_then(|n| n.parse().ok())
                .filter(|&n: &usize| n >= 1)
                .map(CheckpointPlan::LogSpaced)
                .ok_or_else(bad),
        }
    }
}

impl std::fmt::Display for CheckpointPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CheckpointPlan::Auto => f.write_str("auto"),
            CheckpointPlan::EveryRound => f.write_str("every"),
            CheckpointPlan::LogSpaced(n) => write!(f, "log:{n}"),
            CheckpointPlan::Rounds(r) => {
                let parts: Vec<String> = r.iter().map(u64::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
        }
    }
}

/// Full seeded history of one run plus state snapshots.
///
/// Events are contiguous from round 1 and replaying them reproduces every checkpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct RunTrace {
    pub instance: FairMabInstance,
    pub seed: u64,
    pub algo: String,
    pub events: Vec<Event>,
    pub checkpoints: Vec<Checkpoint>,
}

impl RunTrace {
    pub fn horizon(&self) -> u64 {
        self.events.len() as u64
    }

    pub fn checkpoint_rounds(&self) -> Vec<u64> {
        self.checkpoints.iter().map(|c| c.t).collect()
    }

    /// State after `t` rounds, from a stored checkpoint or by replaying events.
    pub fn state_at(&self, t: u64) -> Result<BanditState> {
        if t > self.horizon() {
            return Err(Error::CheckpointMissing { t });
        }
        let idx = self.checkpoints.partition_point(|c| c.t <= t);
        let (mut state, from) = match idx.checked_sub(1).map(|i| &self.checkpoints[i]) {
            Some(c) if c.t == t => return Ok(c.state.clone()),
            Some(c) => (c.state.clone(), c.t),
            None => (BanditState::new(self.instance.k()), 0),
        };
        for e in &self.events[from as usize..t as usize] {
            state.record(e.arm, e.reward);
        }
        Ok(state)
    }

    /// Final pull counts.
    pub fn final_state(&self) -> Result<BanditState> {
        self.state_at(self.horizon())
    }

    /// Replays every event, checking contiguity and every stored checkpoint.
    pub fn verify_replay(&self) -> Result<()> {
        let k = self.instance.k();
        let mut state = BanditState::new(k);
        let mut next_checkpoint = self.checkpoints.iter().peekable();
        for (i, e) in self.events.iter().enumerate() {
            if e.t != i as u64 + 1 {
                return Err(Error::TraceCorrupt(format!(
                    "event {} carries round {}",
                    i + 1,
                    e.t
                )));
            }
            if e.arm >= k || e.reward > 1 {
                return Err(Error::TraceCorrupt(format!(
                    "malformed event at round {}",
                    e.t
                )));
            }
            state.record(e.arm, e.reward);
            while let Some(c) = next_checkpoint.next_if(|c| c.t <= e.t) {
                if c.t < e.t || c.state != state {
                    return Err(Error::TraceCorrupt(format!(
                        "checkpoint at round {} disagrees with replay",
                        c.t
                    )));
                }
            }
        }
        if let Some(c) = next_checkpoint.next() {
            return Err(Error::TraceCorrupt(format!(
                "checkpoint at round {} is beyond the last event",
                c.t
            )));
        }
        Ok(())
    }

    pub fn write_events<W: Write>(&self, mut out: W) -> Result<()> {
        let join = |xs: &[f64]| xs.iter().map(f64::to_string).collect::<Vec<_>>().join(";");
        writeln!(out, "# fair-mab event trace")?;
        writeln!(out, "# means={}", join(self.instance.means()))?;
        writeln!(out, "# fairness={}", join(self.instance.fairness()))?;
        writeln!(out, "# alpha={}", self.instance.alpha())?;
        writeln!(out, "# seed={}", self.seed)?;
        writeln!(out, "# algo={}", self.algo)?;
        writeln!(out, "t,arm,reward")?;
        for e in &self.events {
            writeln!(out, "{},{},{}", e.t, e.arm + 1, e.reward)?;
        }
        Ok(())
    }

    /// Parses an event file; checkpoints are rebuilt by replay under `plan`.
    pub fn read_events<R: BufRead>(input: R, plan: &CheckpointPlan) -> Result<Self> {
        let corrupt = |line: usize, msg: &str| Error::TraceCorrupt(format!("line {line}: {msg}"));
        let mut means = None;
        let mut fairness = None;
        let mut alpha = None;
        let mut seed = None;
        let mut algo = None;
        let mut events = Vec::new();
        let mut seen_columns = false;
        for (idx, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = idx + 1;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(meta) = line.strip_prefix('#') {
                if let Some((key, value)) = meta.trim().split_once('=') {
                    let floats = |v: &str| -> Result<Vec<f64>> {
                        v.split(';')
                            .map(|x| {
                                x.trim()
                                    .parse::<f64>()
                                    .map_err(|_| corrupt(lineno, "bad number"))
                            })
                            .collect()
                    };
                    match key.trim() {
                        "means" => means = Some(floats(value)?),
                        "fairness" => fairness = Some(floats(value)?),
                        "alpha" => {
                            alpha = Some(
                                value
                                    .trim()
                                    .parse::<f64>()
                                    .map_err(|_| corrupt(lineno, "bad alpha"))?,
                            )
                        }
                        "seed" => {
                            seed = Some(
                                value
                                    .trim()
                                    .parse::<u64>()
                                    .map_err(|_| corrupt(lineno, "bad seed"))?,
                            )
                        }
                        "algo" => algo = Some(value.trim().to_string()),
                        _ => {}
                    }
                }
                continue;
            }
            if !seen_columns {
                if line != "t,arm,reward" {
                    return Err(corrupt(lineno, "expected column header `t,arm,reward`"));
                }
                seen_columns = true;
                continue;
            }
            let mut fields = line.split(',').map(str::trim);
            let mut next = |name: &str| -> Result<u64> {
                fields
                    .next()
                    .and_then(|f| f.parse::<u64>().ok())
                    .ok_or_else(|| corrupt(lineno, &format!("bad {name}")))
            };
            let t = next("round")?;
            let arm = next("arm")?;
            let reward = next("reward")?;
            if arm == 0 || reward > 1 {
                return Err(corrupt(lineno, "arm must be one-based and reward 0 or 1"));
            }
            events.push(Event {
                t,
                arm: arm as usize - 1,
                reward: reward as u8,
            });
        }
        let missing = |what: &str| Error::TraceCorrupt(format!("missing `{what}` header"));
        let instance = InstanceParams::new(
            means.ok_or_else(|| missing("means"))?,
            fairness.ok_or_else(|| missing("fairness"))?,
            alpha.ok_or_else(|| missing("alpha"))?,
        )
        .validate()?;
        let k = instance.k();
        let horizon = events.len() as u64;
        let wanted = plan.rounds(horizon);
        let mut checkpoints = Vec::with_capacity(wanted.len());
        let mut state = BanditState::new(k);
        let mut wanted_iter = wanted.iter().peekable();
        for (i, e) in events.iter().enumerate() {
            if e.t != i as u64 + 1 || e.arm >= k {
                return Err(Error::TraceCorrupt(format!(
                    "bad event at position {}",
                    i + 1
                )));
            }
            state.record(e.arm, e.reward);
            if wanted_iter.next_if(|&&t| t == e.t).is_some() {
                checkpoints.push(Checkpoint {
                    t: e.t,
                    state: state.clone(),
                });
            }
        }
        Ok(RunTrace {
            instance,
            seed: seed.ok_or_else(|| missing("seed"))?,
            algo: algo.ok_or_else(|| missing("algo"))?,
            events,
            checkpoints,
        })
    }
}
