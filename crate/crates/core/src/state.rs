//! Running pull/reward counters and the two fairness-accounting quantities.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::instance::FairMabInstance;
use crate::numeric::guarded_floor;

/// Counters after `t` rounds: pulls `N_{i,t}` and reward sums `S_{i,t}` per arm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BanditState {
    t: u64,
    pulls: Vec<u64>,
    rewards: Vec<f64>,
}

impl BanditState {
    pub fn new(k: usize) -> Self {
        Self {
            t: 0,
            pulls: vec![0; k],
            rewards: vec![0.0; k],
        }
    }

    /// Builds a state from raw counters, checking `Σ N = t` and `0 <= S_i <= N_i`.
    pub fn from_counts(t: u64, pulls: Vec<u64>, rewards: Vec<f64>) -> Result<Self> {
        if pulls.len() != rewards.len() {
            return Err(Error::LengthMismatch {
                what: "reward sums",
                expected: pulls.len(),
                got: rewards.len(),
            });
        }
        let total: u64 = pulls.iter().sum();
        if total != t {
            return Err(Error::TraceCorrupt(format!(
                "pull counts sum to {total} after {t} rounds"
            )));
        }
        if let Some(arm) =
            (0..pulls.len()).find(|&i| !(0.0..=pulls[i] as f64).contains(&rewards[i]))
        {
            return Err(Error::TraceCorrupt(format!(
                "arm {arm} has reward sum {} with {} pulls",
                rewards[arm], pulls[arm]
            )));
        }
        Ok(Self { t, pulls, rewards })
    }

    /// Applies one round: `arm` was pulled and paid `reward`.
    #[inline]
    pub fn record(&mut self, arm: usize, reward: u8) {
        self.t += 1;
        self.pulls[arm] += 1;
        self.rewards[arm] += f64::from(reward);
    }

    pub fn k(&self) -> usize {
        self.pulls.len()
    }

    pub fn t(&self) -> u64 {
        self.t
    }

    pub fn pulls(&self) -> &[u64] {
        &self.pulls
    }

    pub fn rewards(&self) -> &[f64] {
        &self.rewards
    }

    /// `S_i / N_i`, or `None` for an arm never pulled.
    pub fn empirical_mean(&self, arm: usize) -> Option<f64> {
        match self.pulls[arm] {
            0 => None,
            n => Some(self.rewards[arm] / n as f64),
        }
    }
}

fn check_index(state: &BanditState, instance: &FairMabInstance, arm: usize) -> Result<()> {
    instance.check_arm(arm)?;
    if state.k() != instance.k() {
        return Err(Error::LengthMismatch {
            what: "state arms",
            expected: instance.k(),
            got: state.k(),
        });
    }
    Ok(())
}

/// Real-valued fairness debt `r_i · t − N_{i,t}` at the state's current round.
///
/// Callers deciding round `t` pass the state after `t − 1` rounds.
pub fn debt(state: &BanditState, instance: &FairMabInstance, arm: usize) -> Result<f64> {
    check_index(state, instance, arm)?;
    Ok(debt_unchecked(state, instance, arm))
}

#[inline]
pub(crate) fn debt_unchecked(state: &BanditState, instance: &FairMabInstance, arm: usize) -> f64 {
    instance.fairness()[arm] * state.t as f64 - state.pulls[arm] as f64
}

/// Floor-based violation `⌊r_i · t⌋ − N_{i,t}`, the quantity an α-fair algorithm keeps `<= α`.
pub fn floor_violation(state: &BanditState, instance: &FairMabInstance, arm: usize) -> Result<f64> {
    check_index(state, instance, arm)?;
    Ok(floor_violation_unchecked(state, instance, arm))
}

#[inline]
pub(crate) fn floor_violation_unchecked(
    state: &BanditState,
    instance: &FairMabInstance,
    arm: usize,
) -> f64 {
    guarded_floor(instance.fairness()[arm] * state.t as f64) - state.pulls[arm] as f64
}
