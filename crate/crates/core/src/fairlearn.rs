//! Fair-Learn: pull the most indebted arm whenever some arm's debt exceeds α,
//! otherwise defer to the learner.

use crate::env::SimRng;
use crate::error::Result;
use crate::instance::FairMabInstance;
use crate::learners::{Learner, LearnerDecisionContext, LearnerSpec};
use crate::numeric::exceeds;
use crate::sim::{simulate, Algorithm};
use crate::state::{debt_unchecked, BanditState};
use crate::trace::{CheckpointPlan, RunTrace};

/// Arms whose debt `r_i · (t−1) − N_{i,t−1}` strictly exceeds α, given the pre-round state.
pub fn active_set(state: &BanditState, instance: &FairMabInstance) -> Vec<usize> {
    let alpha = instance.alpha();
    (0..instance.k())
        .filter(|&arm| exceeds(debt_unchecked(state, instance, arm), alpha))
        .collect()
}

/// The arm fairness forces this round, if any: the largest debt among the active set.
///
/// Debts equal up to representation error count as ties and go to the lowest index.
pub fn forced_arm(state: &BanditState, instance: &FairMabInstance) -> Option<usize> {
    let alpha = instance.alpha();
    let mut forced: Option<(usize, f64)> = None;
    let mut overall = f64::NEG_INFINITY;
    for arm in 0..instance.k() {
        let d = debt_unchecked(state, instance, arm);
        overall = overall.max(d);
        if exceeds(d, alpha) && forced.is_none_or(|(_, best)| exceeds(d, best)) {
            forced = Some((arm, d));
        }
    }
    // A nonempty active set holds the global maximizer, so restricting the argmax to it is lossless.
    if let Some((_, best)) = forced {
        assert!(
            !exceeds(overall, best),
            "an arm outside the active set carries more debt than the forced arm"
        );
    }
    forced.map(|(arm, _)| arm)
}

/// One Fair-Learn decision for round `ctx.round`.
pub fn fair_learn_step(
    instance: &FairMabInstance,
    learner: &mut dyn Learner,
    ctx: &mut LearnerDecisionContext<'_>,
) -> usize {
    forced_arm(ctx.state, instance).unwrap_or_else(|| learner.select(ctx))
}

/// Runs Fair-Learn with the given learner for `horizon` rounds.
///
/// Every prefix of the resulting trace satisfies `⌊r_i t⌋ − N_{i,t} <= α` for all arms.
pub fn run_fair_learn(
    instance: &FairMabInstance,
    learner: LearnerSpec,
    seed: u64,
    horizon: u64,
    plan: &CheckpointPlan,
) -> Result<RunTrace> {
    let mut policy = learner.build(instance.k())?;
    simulate(
        instance,
        seed,
        horizon,
        plan,
        Algorithm::FairLearn(learner).to_string(),
        |state: &BanditState, rng: &mut SimRng| {
            let mut ctx = LearnerDecisionContext::new(state, rng);
            fair_learn_step(instance, policy.as_mut(), &mut ctx)
        },
    )
}

/// Runs the learner alone, ignoring the fairness quotas.
pub fn run_bare_learner(
    instance: &FairMabInstance,
    learner: LearnerSpec,
    seed: u64,
    horizon: u64,
    plan: &CheckpointPlan,
) -> Result<RunTrace> {
    let mut policy = learner.build(instance.k())?;
    simulate(
        instance,
        seed,
        horizon,
        plan,
        Algorithm::Bare(learner).to_string(),
        |state: &BanditState, rng: &mut SimRng| {
            let mut ctx = LearnerDecisionContext::new(state, rng);
            policy.select(&mut ctx)
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::rng_from_seed;
    use crate::instance::{presets, InstanceParams};
    use crate::learners::FixedArm;
    use crate::numeric::guarded_floor;

    fn hand_instance() -> FairMabInstance {
        InstanceParams::new(vec![0.6, 0.4], vec![0.4, 0.3], 0.0)
            .validate()
            .unwrap()
    }

    /// Independent step oracle: recomputes the rule from raw counts with exact
    /// rational arithmetic (quotas given as integer percentages).
    fn oracle_trace(quota_pct: &[u64], alpha_pct: u64, fixed: usize, rounds: u64) -> Vec<usize> {
        let k = quota_pct.len();
        let mut n = vec![0u64; k];
        let mut arms = Vec::new();
        for t in 1..=rounds {
            // debt in hundredths: r_i% * (t-1) - 100 * N_i
            let debts: Vec<i64> = (0..k)
                .map(|i| (quota_pct[i] * (t - 1)) as i64 - 100 * n[i] as i64)
                .collect();
            let max = *debts.iter().max().unwrap();
            let arm = if max > alpha_pct as i64 {
                debts.iter().position(|&d| d == max).unwrap()
            } else {
                fixed
            };
            n[arm] += 1;
            arms.push(arm);
        }
        arms
    }

    #[test]
    fn first_round_delegates() {
        let inst = hand_instance();
        assert!(active_set(&BanditState::new(2), &inst).is_empty());
        let big = inst.with_alpha(10.0).unwrap();
        let s = BanditState::from_counts(10, vec![10, 0], vec![5.0, 0.0]).unwrap();
        assert!(active_set(&s, &big).is_empty());
    }

    #[test]
    fn active_set_after_one_pull() {
        let inst = hand_instance();
        let s = BanditState::from_counts(1, vec![1, 0], vec![1.0, 0.0]).unwrap();
        assert_eq!(active_set(&s, &inst), vec![1]);
    }

    #[test]
    fn hand_trace_with_fixed_learner() {
        let inst = hand_instance();
        let mut learner = FixedArm(0);
        let mut rng = rng_from_seed(0);
        let mut state = BanditState::new(2);
        let mut arms = Vec::new();
        for _ in 0..5 {
            let mut ctx = LearnerDecisionContext::new(&state, &mut rng);
            let arm = fair_learn_step(&inst, &mut learner, &mut ctx);
            arms.push(arm);
            state.record(arm, 0);
        }
        assert_eq!(arms, vec![0, 1, 0, 0, 1]);
        assert_eq!(arms, oracle_trace(&[40, 30], 0, 0, 5));
    }

    #[test]
    fn engine_matches_exact_oracle() {
        let inst = presets::paper_instance_2().validate().unwrap();
        for fixed in 0..3 {
            let trace = run_fair_learn(
                &inst,
                LearnerSpec::Fixed(fixed),
                11,
                200,
                &CheckpointPlan::EveryRound,
            )
            .unwrap();
            let arms: Vec<usize> = trace.events.iter().map(|e| e.arm).collect();
            assert_eq!(arms, oracle_trace(&[20, 30, 25], 0, fixed, 200));
        }
    }

    #[test]
    fn fixed_learner_stays_fair_on_three_arms() {
        let inst = presets::paper_instance_2().validate().unwrap();
        let trace = run_fair_learn(
            &inst,
            LearnerSpec::Fixed(0),
            3,
            200,
            &CheckpointPlan::EveryRound,
        )
        .unwrap();
        for c in &trace.checkpoints {
            for arm in 0..3 {
                let v =
                    guarded_floor(inst.fairness()[arm] * c.t as f64) - c.state.pulls()[arm] as f64;
                assert!(v <= 0.0, "t={} arm={} violation={v}", c.t, arm);
            }
        }
    }

    #[test]
    fn single_round_run() {
        let inst = hand_instance();
        let trace = run_fair_learn(&inst, LearnerSpec::Ucb1, 1, 1, &CheckpointPlan::Auto).unwrap();
        assert_eq!(trace.events.len(), 1);
        let s = trace.final_state().unwrap();
        assert_eq!(s.pulls()[trace.events[0].arm], 1);
        assert!(run_fair_learn(&inst, LearnerSpec::Ucb1, 1, 0, &CheckpointPlan::Auto).is_err());
    }

    #[test]
    fn reruns_are_identical() {
        let inst = presets::paper_instance_2().validate().unwrap();
        let a =
            run_fair_learn(&inst, LearnerSpec::Uniform, 77, 500, &CheckpointPlan::Auto).unwrap();
        let b =
            run_fair_learn(&inst, LearnerSpec::Uniform, 77, 500, &CheckpointPlan::Auto).unwrap();
        assert_eq!(a, b);
        a.verify_replay().unwrap();
    }

    #[test]
    fn zero_quotas_match_bare_learner() {
        let inst = InstanceParams::new(vec![0.3, 0.5, 0.45], vec![0.0; 3], 0.0)
            .validate()
            .unwrap();
        for seed in 0..5 {
            for learner in [LearnerSpec::Ucb1, LearnerSpec::Uniform] {
                let fair =
                    run_fair_learn(&inst, learner, seed, 300, &CheckpointPlan::Auto).unwrap();
                let bare =
                    run_bare_learner(&inst, learner, seed, 300, &CheckpointPlan::Auto).unwrap();
                assert_eq!(fair.events, bare.events);
            }
        }
    }
}
