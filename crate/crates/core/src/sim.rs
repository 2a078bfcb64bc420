//! The shared round loop and algorithm dispatch.

use std::fmt;

use crate::env::{mix_seed, rng_from_seed, BernoulliEnvironment, SimRng, LEARNER_STREAM};
use crate::error::{Error, Result};
use crate::fairlearn::{run_bare_learner, run_fair_learn};
use crate::horizon::run_t_fair_ucb;
use crate::instance::FairMabInstance;
use crate::learners::LearnerSpec;
use crate::state::BanditState;
use crate::trace::{Checkpoint, CheckpointPlan, Event, RunTrace};

/// Runs `horizon` rounds, asking `choose` for each arm given the pre-round state.
///
/// Rewards come from an environment seeded with `seed`; `choose` receives a
/// separate generator derived from the same seed.
pub(crate) fn simulate<F>(
    instance: &FairMabInstance,
    seed: u64,
    horizon: u64,
    plan: &CheckpointPlan,
    algo: String,
    mut choose: F,
) -> Result<RunTrace>
where
    F: FnMut(&BanditState, &mut SimRng) -> usize,
{
    if horizon == 0 {
        return Err(Error::InvalidHorizon { min: 1, got: 0 });
    }
    let k = instance.k();
    let mut env = BernoulliEnvironment::new(instance.means().to_vec(), seed)?;
    let mut learner_rng = rng_from_seed(mix_seed(seed, LEARNER_STREAM));
    let mut state = BanditState::new(k);
    let wanted = plan.rounds(horizon);
    let mut wanted = wanted.iter().peekable();
    let mut events = Vec::with_capacity(horizon as usize);
    let mut checkpoints = Vec::new();

    for t in 1..=horizon {
        let arm = choose(&state, &mut learner_rng);
        let reward = env.draw_reward(arm)?;
        state.record(arm, reward);
        events.push(Event { t, arm, reward });
        if wanted.next_if(|&&c| c == t).is_some() {
            checkpoints.push(Checkpoint {
                t,
                state: state.clone(),
            });
        }
    }

    Ok(RunTrace {
        instance: instance.clone(),
        seed,
        algo,
        events,
        checkpoints,
    })
}

/// Which policy drives a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algorithm {
    FairLearn(LearnerSpec),
    TFairUcb,
    /// The learner alone, without fairness pre-emption.
    Bare(LearnerSpec),
}

impl Algorithm {
    /// Resolves the config/CLI names: `"fair-learn" | "t-fair-ucb" | "bare-learner"`.
    pub fn from_names(algo: &str, learner: LearnerSpec) -> Result<Self> {
        match algo.trim() {
            "fair-learn" => Ok(Algorithm::FairLearn(learner)),
            "t-fair-ucb" => Ok(Algorithm::TFairUcb),
            "bare-learner" => Ok(Algorithm::Bare(learner)),
            other => Err(Error::UnknownAlgorithm(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Algorithm::FairLearn(_) => "fair-learn",
            Algorithm::TFairUcb => "t-fair-ucb",
            Algorithm::Bare(_) => "bare-learner",
        }
    }

    pub fn run(
        &self,
        instance: &FairMabInstance,
        seed: u64,
        horizon: u64,
        plan: &CheckpointPlan,
    ) -> Result<RunTrace> {
        match *self {
            Algorithm::FairLearn(learner) => run_fair_learn(instance, learner, seed, horizon, plan),
            Algorithm::TFairUcb => run_t_fair_ucb(instance, seed, horizon, plan),
            Algorithm::Bare(learner) => run_bare_learner(instance, learner, seed, horizon, plan),
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algorithm::FairLearn(l) => write!(f, "fair-learn/{l}"),
            Algorithm::TFairUcb => f.write_str("t-fair-ucb"),
            Algorithm::Bare(l) => write!(f, "bare/{l}"),
        }
    }
}
