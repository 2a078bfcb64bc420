//! Learners that Fair-Learn delegates to when no arm is owed pulls.
//!
//! `ucb1` is the real learner. `uniform` and `fixed:<arm>` exist to show that the
//! fairness guarantee does not depend on what the learner proposes; `fixed` in
//! particular starves every other arm when left unconstrained.

use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::env::SimRng;
use crate::error::{Error, Result};
use crate::state::BanditState;

/// Inputs to one learner decision: the pre-round counters and the round being decided.
pub struct LearnerDecisionContext<'a> {
    pub state: &'a BanditState,
    /// Always `state.t() + 1`.
    pub round: u64,
    pub rng: &'a mut SimRng,
}

impl<'a> LearnerDecisionContext<'a> {
    pub fn new(state: &'a BanditState, rng: &'a mut SimRng) -> Self {
        Self {
            state,
            round: state.t() + 1,
            rng,
        }
    }
}

/// A black-box arm-selection rule.
pub trait Learner: Send {
    fn select(&mut self, ctx: &mut LearnerDecisionContext<'_>) -> usize;
}

/// UCB1 confidence index `μ̂ + √(2 ln t / n)`.
///
/// `t` is taken as a real so that fractional log arguments can be evaluated.
pub fn ucb_index(empirical_mean: f64, n: u64, t: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidCount);
    }
    Ok(empirical_mean + (2.0 * t.ln() / n as f64).sqrt())
}

/// UCB1 indices for every arm at `round`, with `+∞` for arms never pulled.
#[derive(Debug, Clone, PartialEq)]
pub struct UcbIndexTable {
    pub indices: Vec<f64>,
}

impl UcbIndexTable {
    pub fn compute(state: &BanditState, round: u64) -> Self {
        let log_t = (round as f64).ln();
        let indices = state
            .pulls()
            .iter()
            .zip(state.rewards())
            .map(|(&n, &s)| {
                if n == 0 {
                    f64::INFINITY
                } else {
                    let n = n as f64;
                    s / n + (2.0 * log_t / n).sqrt()
                }
            })
            .collect();
        Self { indices }
    }

    /// Largest index, lowest arm on ties.
    pub fn argmax(&self) -> usize {
        let mut best = 0;
        for (i, &v) in self.indices.iter().enumerate().skip(1) {
            if v > self.indices[best] {
                best = i;
            }
        }
        best
    }
}

/// Lowest unpulled arm if any, otherwise the UCB1 argmax (lowest index on ties).
pub fn ucb1_select(state: &BanditState, round: u64) -> usize {
    if let Some(arm) = state.pulls().iter().position(|&n| n == 0) {
        return arm;
    }
    let log_t = (round as f64).ln();
    let mut best = 0;
    let mut best_index = f64::NEG_INFINITY;
    for (arm, (&n, &s)) in state.pulls().iter().zip(state.rewards()).enumerate() {
        let n = n as f64;
        let index = s / n + (2.0 * log_t / n).sqrt();
        if index > best_index {
            best = arm;
            best_index = index;
        }
    }
    best
}

pub fn uniform_random_select(k: usize, rng: &mut SimRng) -> usize {
    rng.random_range(0..k)
}

pub fn fixed_arm_select(k: usize, arm: usize) -> Result<usize> {
    if arm < k {
        Ok(arm)
    } else {
        Err(Error::IndexOutOfRange { index: arm, k })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct Ucb1;

impl Learner for Ucb1 {
    fn select(&mut self, ctx: &mut LearnerDecisionContext<'_>) -> usize {
        ucb1_select(ctx.state, ctx.round)
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct UniformRandom;

impl Learner for UniformRandom {
    fn select(&mut self, ctx: &mut LearnerDecisionContext<'_>) -> usize {
        uniform_random_select(ctx.state.k(), ctx.rng)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct FixedArm(pub usize);

impl Learner for FixedArm {
    fn select(&mut self, _ctx: &mut LearnerDecisionContext<'_>) -> usize {
        self.0
    }
}

/// Learner choice by name: `"ucb1"`, `"uniform"` or `"fixed:<j>"` with `j` one-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LearnerSpec {
    Ucb1,
    Uniform,
    /// Zero-based arm.
    Fixed(usize),
}

impl LearnerSpec {
    pub fn build(self, k: usize) -> Result<Box<dyn Learner>> {
        Ok(match self {
            LearnerSpec::Ucb1 => Box::new(Ucb1),
            LearnerSpec::Uniform => Box::new(UniformRandom),
            LearnerSpec::Fixed(arm) => Box::new(FixedArm(fixed_arm_select(k, arm)?)),
        })
    }

    pub fn uses_rng(self) -> bool {
        matches!(self, LearnerSpec::Uniform)
    }
}

impl FromStr for LearnerSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "ucb1" => Ok(LearnerSpec::Ucb1),
            "uniform" => Ok(LearnerSpec::Uniform),
            other => {
                let arm = other
                    .strip_prefix("fixed:")
                    .and_then(|j| j.trim().parse::<usize>().ok())
                    .filter(|&j| j >= 1)
                    .ok_or_else(|| Error::UnknownLearner(s.to_string()))?;
                Ok(LearnerSpec::Fixed(arm - 1))
            }
        }
    }
}

impl fmt::Display for LearnerSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LearnerSpec::Ucb1 => f.write_str("ucb1"),
            LearnerSpec::Uniform => f.write_str("uniform"),
            LearnerSpec::Fixed(arm) => write!(f, "fixed:{}", arm + 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::rng_from_seed;
    use proptest::prelude::*;

    fn state(pulls: Vec<u64>, rewards: Vec<f64>) -> BanditState {
        let t = pulls.iter().sum();
        BanditState::from_counts(t, pulls, rewards).unwrap()
    }

    #[test]
    fn index_values() {
        let v = ucb_index(0.5, 4, 100.0).unwrap();
        assert!((v - 2.017_427).abs() < 1e-5, "{v}");
        assert_eq!(ucb_index(0.37, 3, 1.0).unwrap(), 0.37);
        let e2 = std::f64::consts::E.powi(2);
        assert!((ucb_index(0.0, 1, e2).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(ucb_index(0.5, 0, 10.0), Err(Error::InvalidCount));
    }

    #[test]
    fn sentinel_then_argmax() {
        assert_eq!(ucb1_select(&BanditState::new(4), 1), 0);
        assert_eq!(
            ucb1_select(&state(vec![1, 0, 3], vec![1.0, 0.0, 3.0]), 5),
            1
        );
        assert_eq!(ucb1_select(&state(vec![1, 1], vec![1.0, 0.0]), 3), 0);
        assert_eq!(ucb1_select(&state(vec![100, 1], vec![60.0, 1.0]), 101), 1);
        // equal indices: lowest arm
        assert_eq!(ucb1_select(&state(vec![2, 2], vec![1.0, 1.0]), 5), 0);
    }

    #[test]
    fn table_matches_select() {
        let s = state(vec![100, 1], vec![60.0, 1.0]);
        let table = UcbIndexTable::compute(&s, 101);
        assert!((table.indices[0] - 0.903_8).abs() < 1e-3);
        assert!((table.indices[1] - 4.038).abs() < 1e-3);
        assert_eq!(table.argmax(), ucb1_select(&s, 101));
        let table = UcbIndexTable::compute(&state(vec![3, 0], vec![1.0, 0.0]), 4);
        assert_eq!(table.indices[1], f64::INFINITY);
    }

    #[test]
    fn uniform_frequencies() {
        let mut rng = rng_from_seed(99);
        assert_eq!(uniform_random_select(1, &mut rng), 0);
        let mut counts = [0u32; 3];
        for _ in 0..30_000 {
            counts[uniform_random_select(3, &mut rng)] += 1;
        }
        for c in counts {
            assert!((f64::from(c) / 30_000.0 - 1.0 / 3.0).abs() < 0.02);
        }
        let a: Vec<usize> = {
            let mut rng = rng_from_seed(5);
            (0..100)
                .map(|_| uniform_random_select(7, &mut rng))
                .collect()
        };
        let b: Vec<usize> = {
            let mut rng = rng_from_seed(5);
            (0..100)
                .map(|_| uniform_random_select(7, &mut rng))
                .collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn fixed_arm() {
        assert_eq!(fixed_arm_select(4, 0), Ok(0));
        assert_eq!(fixed_arm_select(4, 3), Ok(3));
        assert_eq!(
            fixed_arm_select(4, 4),
            Err(Error::IndexOutOfRange { index: 4, k: 4 })
        );
        assert!(LearnerSpec::Fixed(9).build(3).is_err());
    }

    #[test]
    fn spec_names() {
        assert_eq!("ucb1".parse::<LearnerSpec>(), Ok(LearnerSpec::Ucb1));
        assert_eq!("uniform".parse::<LearnerSpec>(), Ok(LearnerSpec::Uniform));
        assert_eq!("fixed:1".parse::<LearnerSpec>(), Ok(LearnerSpec::Fixed(0)));
        assert_eq!("fixed:10".parse::<LearnerSpec>(), Ok(LearnerSpec::Fixed(9)));
        assert!("fixed:0".parse::<LearnerSpec>().is_err());
        assert!("thompson".parse::<LearnerSpec>().is_err());
        assert_eq!(LearnerSpec::Fixed(2).to_string(), "fixed:3");
    }

    proptest! {
        #[test]
        fn index_monotone(mean in 0.0f64..1.0, n in 1u64..10_000, t in 2u64..1_000_000) {
            let here = ucb_index(mean, n, t as f64).unwrap();
            prop_assert!(ucb_index(mean, n + 1, t as f64).unwrap() < here);
            prop_assert!(ucb_index(mean, n, (t + 1) as f64).unwrap() > here);
        }

        #[test]
        fn shift_invariance(
            sums in prop::collection::vec(0u64..=50, 2..8),
            shift in 0.0f64..0.5,
            extra in 0u64..100,
        ) {
            // equal pull counts => equal radii; shifting every mean keeps the argmax
            let n = 50u64;
            let k = sums.len();
            let round = n * k as u64 + 1 + extra;
            let plain: Vec<f64> = sums.iter().map(|&s| s as f64 / n as f64).collect();
            let radius = (2.0 * (round as f64).ln() / n as f64).sqrt();
            let pick = |means: &[f64]| {
                let mut best = 0;
                for i in 1..means.len() {
                    if means[i] + radius > means[best] + radius {
                        best = i;
                    }
                }
                best
            };
            let s = BanditState::from_counts(n * k as u64, vec![n; k], sums.iter().map(|&s| s as f64).collect()).unwrap();
            let chosen = ucb1_select(&s, round);
            prop_assert_eq!(chosen, pick(&plain));
            let shifted: Vec<f64> = plain.iter().map(|m| m + shift).collect();
            prop_assert_eq!(pick(&shifted), pick(&plain));
        }
    }
}
