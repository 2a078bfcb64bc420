//! The Fair-MAB problem instance and its gap vector.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Unvalidated instance parameters, as read from a config file or built by hand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstanceParams {
    /// Bernoulli mean of each arm.
    pub means: Vec<f64>,
    /// Minimum fraction of pulls guaranteed to each arm.
    pub fairness: Vec<f64>,
    /// Unfairness tolerance.
    #[serde(default)]
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<u64>,
}

impl InstanceParams {
    pub fn new(means: Vec<f64>, fairness: Vec<f64>, alpha: f64) -> Self {
        Self {
            means,
            fairness,
            alpha,
            horizon: None,
        }
    }

    pub fn with_horizon(mut self, horizon: u64) -> Self {
        self.horizon = Some(horizon);
        self
    }

    pub fn validate(self) -> Result<FairMabInstance> {
        validate_instance(self)
    }
}

/// A validated Fair-MAB instance: `k` Bernoulli arms with means, fairness quotas
/// and an unfairness tolerance.
///
/// Invariants: `k >= 2`, every mean in `[0, 1]`, every quota in `[0, 1/k)`,
/// quotas sum below one and `alpha >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct FairMabInstance {
    params: InstanceParams,
    best_arm: usize,
}

/// Checks every instance invariant and records the best arm (lowest index on ties).
pub fn validate_instance(candidate: InstanceParams) -> Result<FairMabInstance> {
    let k = candidate.means.len();
    if k < 2 {
        return Err(Error::TooFewArms(k));
    }
    if candidate.fairness.len() != k {
        return Err(Error::LengthMismatch {
            what: "fairness quotas",
            expected: k,
            got: candidate.fairness.len(),
        });
    }
    for (arm, &mean) in candidate.means.iter().enumerate() {
        if !(0.0..=1.0).contains(&mean) {
            return Err(Error::MeanOutOfRange { arm, mean });
        }
    }
    let limit = 1.0 / k as f64;
    for (arm, &quota) in candidate.fairness.iter().enumerate() {
        if !(quota >= 0.0 && quota < limit) {
            return Err(Error::QuotaOutOfRange { arm, quota, limit });
        }
    }
    let sum: f64 = candidate.fairness.iter().sum();
    if sum >= 1.0 {
        return Err(Error::QuotaSumExceeded { sum });
    }
    if !(candidate.alpha >= 0.0 && candidate.alpha.is_finite()) {
        return Err(Error::NegativeAlpha(candidate.alpha));
    }
    if candidate.horizon == Some(0) {
        return Err(Error::InvalidHorizon { min: 1, got: 0 });
    }
    let best_arm = argmax_first(&candidate.means);
    Ok(FairMabInstance {
        params: candidate,
        best_arm,
    })
}

fn argmax_first(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

impl FairMabInstance {
    pub fn k(&self) -> usize {
        self.params.means.len()
    }

    pub fn means(&self) -> &[f64] {
        &self.params.means
    }

    pub fn fairness(&self) -> &[f64] {
        &self.params.fairness
    }

    pub fn alpha(&self) -> f64 {
        self.params.alpha
    }

    pub fn horizon(&self) -> Option<u64> {
        self.params.horizon
    }

    /// Index of the arm with the largest mean.
    pub fn best_arm(&self) -> usize {
        self.best_arm
    }

    pub fn best_mean(&self) -> f64 {
        self.params.means[self.best_arm]
    }

    pub fn params(&self) -> &InstanceParams {
        &self.params
    }

    pub fn gaps(&self) -> GapVector {
        let best = self.best_mean();
        GapVector {
            deltas: self.params.means.iter().map(|m| best - m).collect(),
        }
    }

    /// Same instance with a different tolerance.
    pub fn with_alpha(&self, alpha: f64) -> Result<Self> {
        let mut params = self.params.clone();
        params.alpha = alpha;
        validate_instance(params)
    }

    pub fn with_horizon(&self, horizon: u64) -> Result<Self> {
        let mut params = self.params.clone();
        params.horizon = Some(horizon);
        validate_instance(params)
    }

    pub(crate) fn check_arm(&self, arm: usize) -> Result<()> {
        if arm < self.k() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: arm,
                k: self.k(),
            })
        }
    }
}

/// Per-arm gaps `Δ_i = μ* − μ_i` to the best mean.
#[derive(Debug, Clone, PartialEq)]
pub struct GapVector {
    pub deltas: Vec<f64>,
}

impl GapVector {
    pub fn get(&self, arm: usize) -> f64 {
        self.deltas[arm]
    }

    pub fn sum(&self) -> f64 {
        self.deltas.iter().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = f64> + '_ {
        self.deltas.iter().copied()
    }

    /// Fails with [`Error::DegenerateGaps`] when a non-best arm ties the best mean.
    pub fn require_distinct(&self, best_arm: usize) -> Result<()> {
        match self
            .deltas
            .iter()
            .enumerate()
            .find(|&(i, &d)| i != best_arm && d <= 0.0)
        {
            Some((arm, _)) => Err(Error::DegenerateGaps { arm }),
            None => Ok(()),
        }
    }
}

/// Named instances used by the bundled experiments.
pub mod presets {
    use super::InstanceParams;

    /// Ten arms with means `0.8, 0.79, ..., 0.71` and a 5% quota each; horizon `10^6`.
    pub fn paper_instance_1() -> InstanceParams {
        let means = (0..10).map(|i| f64::from(80 - i) / 100.0).collect();
        InstanceParams::new(means, vec![0.05; 10], 0.0).with_horizon(1_000_000)
    }

    /// Three arms, means `(0.7, 0.5, 0.4)`, quotas `(0.2, 0.3, 0.25)`; horizon 200.
    pub fn paper_instance_2() -> InstanceParams {
        InstanceParams::new(vec![0.7, 0.5, 0.4], vec![0.2, 0.3, 0.25], 0.0).with_horizon(200)
    }

    pub fn by_name(name: &str) -> Option<InstanceParams> {
        match name {
            "paper-instance-1" => Some(paper_instance_1()),
            "paper-instance-2" => Some(paper_instance_2()),
            _ => None,
        }
    }
}
