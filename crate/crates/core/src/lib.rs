//! Stochastic multi-armed bandits with minimum-share fairness quotas.
//!
//! The engine runs Fair-Learn (fairness pre-emption around any learner),
//! T-Fair-UCB and bare learners over seeded Bernoulli arms, records event
//! traces, and computes regret, r-Regret and fairness-violation series.
//! [`oracle`] re-derives the anytime fairness argument from raw events.
//!
//! Arms are 0-based throughout the Rust API; text formats (event files, CSV,
//! `fixed:<j>`) use 1-based arm numbers.

pub mod env;
pub mod error;
pub mod experiment;
pub mod fairlearn;
pub mod horizon;
pub mod instance;
pub mod learners;
pub mod metrics;
pub mod numeric;
pub mod oracle;
pub mod sim;
pub mod state;
pub mod trace;

pub use env::{make_env, mix_seed, BernoulliEnvironment};
pub use error::{Error, Result};
pub use experiment::{
    parse_config, run_experiment, ExperimentConfig, ExperimentKind, ExperimentOutput, RawConfig,
};
pub use fairlearn::{active_set, fair_learn_step, forced_arm, run_bare_learner, run_fair_learn};
pub use horizon::{quota_plan, run_t_fair_ucb, t_fair_ucb_rregret_bound, QuotaPlan};
pub use instance::{presets, validate_instance, FairMabInstance, GapVector, InstanceParams};
pub use learners::{Learner, LearnerDecisionContext, LearnerSpec};
pub use metrics::{
    alpha_regret_bound, alpha_threshold, fair_ucb_rregret_bound, max_violation, r_regret_of_state,
    regret_of_state, ucb_regret_bound, BoundReport, MetricSeries, ViolationMode,
};
pub use oracle::{audit_trace, check_partition, classify, AuditReport, PartitionSnapshot};
pub use sim::Algorithm;
pub use state::BanditState;
pub use trace::{CheckpointPlan, Event, RunTrace};
