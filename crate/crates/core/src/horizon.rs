//! T-Fair-UCB: a horizon-aware algorithm that serves every quota up front in
//! contiguous blocks, then runs plain UCB1 on the accumulated statistics.
//!
//! It meets the quotas at the horizon but not at every round; the block
//! schedule starves later arms early on.

use crate::env::SimRng;
use crate::error::{Error, Result};
use crate::instance::FairMabInstance;
use crate::learners::ucb1_select;
use crate::numeric::{guarded_floor, UCB_CONSTANT};
use crate::sim::{simulate, Algorithm};
use crate::state::BanditState;
use crate::trace::{CheckpointPlan, RunTrace};

/// Per-arm quota pulls `n_i = max(1, ⌊r_i T⌋)` and the phase length `T′ = Σ n_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotaPlan {
    pub quotas: Vec<u64>,
    pub phase_length: u64,
}

impl QuotaPlan {
    /// Arm pulled at 1-based round `t` of the quota phase.
    pub fn arm_at(&self, t: u64) -> Option<usize> {
        let mut end = 0;
        for (arm, &n) in self.quotas.iter().enumerate() {
            end += n;
            if t <= end {
                return Some(arm);
            }
        }
        None
    }
}

pub fn quota_plan(instance: &FairMabInstance, horizon: u64) -> Result<QuotaPlan> {
    let quotas: Vec<u64> = instance
        .fairness()
        .iter()
        .map(|&r| (guarded_floor(r * horizon as f64) as u64).max(1))
        .collect();
    let phase_length = quotas.iter().sum();
    if phase_length > horizon {
        return Err(Error::HorizonTooShort {
            required: phase_length,
            horizon,
        });
    }
    Ok(QuotaPlan {
        quotas,
        phase_length,
    })
}

/// Runs T-Fair-UCB for exactly `horizon` rounds.
pub fn run_t_fair_ucb(
    instance: &FairMabInstance,
    seed: u64,
    horizon: u64,
    plan: &CheckpointPlan,
) -> Result<RunTrace> {
    let quotas = quota_plan(instance, horizon)?;
    simulate(
        instance,
        seed,
        horizon,
        plan,
        Algorithm::TFairUcb.to_string(),
        |state: &BanditState, _rng: &mut SimRng| {
            let round = state.t() + 1;
            quotas
                .arm_at(round)
                .unwrap_or_else(|| ucb1_select(state, round))
        },
    )
}

/// r-Regret bound of T-Fair-UCB:
/// `(1 + π²/3) Σ Δ_i + Σ_{i ∈ S(T), i ≠ best} Δ_i (8 ln T / Δ_i² − r_i T)`
/// with `S(T) = { i : r_i T < 8 ln T / Δ_i² }`.
pub fn t_fair_ucb_rregret_bound(instance: &FairMabInstance, horizon: u64) -> Result<f64> {
    if horizon < 2 {
        return Err(Error::InvalidHorizon {
            min: 2,
            got: horizon,
        });
    }
    let gaps = instance.gaps();
    gaps.require_distinct(instance.best_arm())?;
    let t = horizon as f64;
    let log_t = t.ln();
    let correction: f64 = (0..instance.k())
        .filter(|&i| i != instance.best_arm())
        .map(|i| {
            let delta = gaps.get(i);
            let explore = 8.0 * log_t / (delta * delta);
            let quota = instance.fairness()[i] * t;
            if quota < explore {
                delta * (explore - quota)
            } else {
                0.0
            }
        })
        .sum();
    Ok(UCB_CONSTANT * gaps.sum() + correction)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::{presets, InstanceParams};

    #[test]
    fn quota_examples() {
        let inst = presets::paper_instance_2().validate().unwrap();
        let plan = quota_plan(&inst, 200).unwrap();
        assert_eq!(plan.quotas, vec![40, 60, 50]);
        assert_eq!(plan.phase_length, 150);

        let zero = InstanceParams::new(vec![0.1, 0.2, 0.3], vec![0.0; 3], 0.0)
            .validate()
            .unwrap();
        let plan = quota_plan(&zero, 100).unwrap();
        assert_eq!(plan.quotas, vec![1, 1, 1]);
        assert_eq!(plan.phase_length, 3);

        let inst = presets::paper_instance_1().validate().unwrap();
        let plan = quota_plan(&inst, 1_000_000).unwrap();
        assert!(plan.quotas.iter().all(|&n| n == 50_000));
        assert_eq!(plan.phase_length, 500_000);
    }

    #[test]
    fn horizon_too_short() {
        let zero = InstanceParams::new(vec![0.1, 0.2, 0.3], vec![0.0; 3], 0.0)
            .validate()
            .unwrap();
        assert_eq!(
            quota_plan(&zero, 2),
            Err(Error::HorizonTooShort {
                required: 3,
                horizon: 2
            })
        );
        assert!(run_t_fair_ucb(&zero, 0, 2, &CheckpointPlan::Auto).is_err());
    }

    #[test]
    fn block_schedule_then_ucb() {
        let inst = presets::paper_instance_2().validate().unwrap();
        for seed in 0..10 {
            let trace = run_t_fair_ucb(&inst, seed, 200, &CheckpointPlan::EveryRound).unwrap();
            let arms: Vec<usize> = trace.events.iter().map(|e| e.arm).collect();
            assert!(arms[..40].iter().all(|&a| a == 0));
            assert!(arms[40..100].iter().all(|&a| a == 1));
            assert!(arms[100..150].iter().all(|&a| a == 2));
            assert_eq!(trace.state_at(150).unwrap().pulls(), &[40, 60, 50]);
            let end = trace.final_state().unwrap();
            assert!(end.pulls().iter().zip([40, 60, 50]).all(|(&n, q)| n >= q));
        }
    }

    #[test]
    fn phase_two_may_be_empty() {
        let inst = InstanceParams::new(vec![0.7, 0.5, 0.4], vec![0.2, 0.3, 0.25], 0.0)
            .validate()
            .unwrap();
        // T = 4: quotas (max(1,0), max(1,1), max(1,1)) = (1,1,1), T' = 3 < 4
        let plan = quota_plan(&inst, 4).unwrap();
        assert_eq!(plan.quotas, vec![1, 1, 1]);
        // T = 3: the whole run is the quota schedule
        let trace = run_t_fair_ucb(&inst, 5, 3, &CheckpointPlan::Auto).unwrap();
        let arms: Vec<usize> = trace.events.iter().map(|e| e.arm).collect();
        assert_eq!(arms, vec![0, 1, 2]);
    }

    #[test]
    fn bound_examples() {
        let inst = InstanceParams::new(vec![0.9, 0.1], vec![0.2, 0.2], 0.0)
            .validate()
            .unwrap();
        let b = t_fair_ucb_rregret_bound(&inst, 10_000).unwrap();
        assert!((b - 3.431_894_5).abs() < 1e-6, "{b}");

        // zero quotas: S(T) is every sub-optimal arm, the UCB1 shape
        let zero = InstanceParams::new(vec![0.9, 0.5, 0.3], vec![0.0; 3], 0.0)
            .validate()
            .unwrap();
        let t = 5_000f64;
        let expected = UCB_CONSTANT * (0.4 + 0.6) + 8.0 * t.ln() / 0.4 + 8.0 * t.ln() / 0.6;
        assert!((t_fair_ucb_rregret_bound(&zero, 5_000).unwrap() - expected).abs() < 1e-6);

        let tie = InstanceParams::new(vec![0.9, 0.9], vec![0.0; 2], 0.0)
            .validate()
            .unwrap();
        assert_eq!(
            t_fair_ucb_rregret_bound(&tie, 100),
            Err(Error::DegenerateGaps { arm: 1 })
        );
    }
}
