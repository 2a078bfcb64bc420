//! Independent checks of the anytime fairness argument.
//!
//! After round `t` every arm is placed by its debt `d = r_i t − N_{i,t}`:
//! `S_t` when `d < α`, band `M_{j,t}` when `α + (k−j)/k <= d < α + (k−j+1)/k`,
//! and unclassifiable when `d >= α + 1`. Writing `V_{j,t}` for the union of
//! bands `1..=j`, a fair trace keeps every arm classifiable and `|V_{j,t}| <= j`.
//! Between rounds a pulled arm lands in `S ⊎ M_k` (staying in `S` if it was
//! there), and an unpulled arm in band `j >= 2` moves at most one band up.
//!
//! The auditor rebuilds counts from raw events and recomputes debts itself; it
//! only shares the floor/boundary guard with the engine.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::instance::FairMabInstance;
use crate::numeric::guarded_floor;
use crate::state::BanditState;
use crate::trace::RunTrace;

/// Where one arm sits in the debt partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Membership {
    /// `S_t`: debt below α.
    Safe,
    /// `M_{j,t}` with `1 <= j <= k`; band 1 is the most indebted.
    Band(usize),
    /// Debt at or above `α + 1`.
    Unclassifiable,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartitionSnapshot {
    pub t: u64,
    pub membership: Vec<Membership>,
    pub s_members: Vec<usize>,
    /// `m_members[j - 1]` lists the arms in band `M_j`.
    pub m_members: Vec<Vec<usize>>,
    pub unclassifiable: Vec<usize>,
}

fn classify_debt(debt: f64, alpha: f64, k: usize) -> Membership {
    let level = guarded_floor((debt - alpha) * k as f64);
    if level < 0.0 {
        Membership::Safe
    } else if level >= k as f64 {
        Membership::Unclassifiable
    } else {
        Membership::Band(k - level as usize)
    }
}

fn snapshot(t: u64, pulls: &[u64], instance: &FairMabInstance) -> PartitionSnapshot {
    let k = instance.k();
    let membership: Vec<Membership> = (0..k)
        .map(|arm| {
            let debt = instance.fairness()[arm] * t as f64 - pulls[arm] as f64;
            classify_debt(debt, instance.alpha(), k)
        })
        .collect();
    let mut s_members = Vec::new();
    let mut m_members = vec![Vec::new(); k];
    let mut unclassifiable = Vec::new();
    for (arm, m) in membership.iter().enumerate() {
        match *m {
            Membership::Safe => s_members.push(arm),
            Membership::Band(j) => m_members[j - 1].push(arm),
            Membership::Unclassifiable => unclassifiable.push(arm),
        }
    }
    PartitionSnapshot {
        t,
        membership,
        s_members,
        m_members,
        unclassifiable,
    }
}

/// Places every arm of `state` into `S_t`, a band `M_{j,t}`, or unclassifiable.
pub fn classify(state: &BanditState, instance: &FairMabInstance) -> PartitionSnapshot {
    snapshot(state.t(), state.pulls(), instance)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PartitionCheck {
    Pass,
    /// Some arms are in no set, so `V_k ⊎ S ≠ [k]`.
    Uncovered {
        arms: Vec<usize>,
    },
    /// `|V_j| > j` for the reported `j`; `members` lists `V_j`.
    Crowded {
        j: usize,
        members: Vec<usize>,
    },
}

impl PartitionCheck {
    pub fn passed(&self) -> bool {
        matches!(self, PartitionCheck::Pass)
    }
}

/// Checks both partition conditions, reporting the first one that fails.
pub fn check_partition(snapshot: &PartitionSnapshot) -> PartitionCheck {
    if !snapshot.unclassifiable.is_empty() {
        return PartitionCheck::Uncovered {
            arms: snapshot.unclassifiable.clone(),
        };
    }
    let mut cumulative = Vec::new();
    for (idx, band) in snapshot.m_members.iter().enumerate() {
        cumulative.extend_from_slice(band);
        let j = idx + 1;
        if cumulative.len() > j {
            let mut members = cumulative.clone();
            members.sort_unstable();
            return PartitionCheck::Crowded { j, members };
        }
    }
    PartitionCheck::Pass
}

/// Rule that a trace broke.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AuditRule {
    /// `⌊r_i t⌋ − N_{i,t} > α`
    FairnessBound,
    /// An arm left the partition.
    PartitionCover,
    /// `|V_{j,t}| > j`
    PartitionCardinality,
    /// A pulled arm did not land in `S ⊎ M_k` (or left `S`).
    PulledTransition,
    /// An unpulled arm jumped more than one band, or a band-1 arm went unpulled.
    UnpulledTransition,
}

impl fmt::Display for AuditRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AuditRule::FairnessBound => "fairness-bound",
            AuditRule::PartitionCover => "partition-cover",
            AuditRule::PartitionCardinality => "partition-cardinality",
            AuditRule::PulledTransition => "pulled-transition",
            AuditRule::UnpulledTransition => "unpulled-transition",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AuditFailure {
    pub t: u64,
    /// Zero-based arm, when the rule concerns one arm.
    pub arm: Option<usize>,
    pub rule: AuditRule,
    /// Offending quantity: the floor violation, or `|V_j|` for cardinality failures.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AuditReport {
    pub algo: String,
    pub seed: u64,
    pub rounds: u64,
    pub passed: bool,
    pub first_failure: Option<AuditFailure>,
    /// Earliest round where the fairness bound fails, even if another rule failed first.
    pub first_fairness_violation: Option<AuditFailure>,
    /// Number of `(t, arm)` pairs breaking the fairness bound.
    pub fairness_violations: u64,
    /// Every failure counted by rule, so a later rule is visible behind an earlier failure.
    pub rule_counts: BTreeMap<AuditRule, u64>,
    pub max_floor_violation: f64,
}

impl AuditReport {
    /// Failures of `rule` anywhere in the trace.
    pub fn count(&self, rule: AuditRule) -> u64 {
        self.rule_counts.get(&rule).copied().unwrap_or(0)
    }

    /// True when only the fairness bound failed, or nothing did.
    pub fn partition_rules_hold(&self) -> bool {
        self.rule_counts
            .keys()
            .all(|&r| r == AuditRule::FairnessBound)
    }

    /// One machine-readable JSON line.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("audit report serializes")
    }
}

impl fmt::Display for AuditReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {} seed={} rounds={} max_floor_violation={} fairness_violations={}",
            self.algo, self.seed, self.rounds, self.max_floor_violation, self.fairness_violations
        )?;
        if let Some(fail) = &self.first_failure {
            write!(f, " first_failure=t:{},rule:{}", fail.t, fail.rule)?;
            if let Some(arm) = fail.arm {
                write!(f, ",arm:{}", arm + 1)?;
            }
        }
        Ok(())
    }
}

fn transition_ok(before: Membership, after: Membership, pulled: bool, k: usize) -> bool {
    use Membership::*;
    match (before, pulled) {
        (Unclassifiable, _) => true,
        (Safe, true) => after == Safe,
        (Band(_), true) => matches!(after, Safe) || after == Band(k),
        (Safe, false) => matches!(after, Safe) || after == Band(k),
        (Band(1), false) => false,
        (Band(j), false) => after == Band(j - 1) || after == Band(j),
    }
}

/// Replays `trace` round by round against `instance`, checking the fairness
/// bound, both partition conditions and the transition rules at every round.
///
/// Malformed traces (gaps in rounds, bad arms or rewards, checkpoints that
/// disagree with the events) are reported as [`Error::TraceCorrupt`].
pub fn audit_trace(trace: &RunTrace, instance: &FairMabInstance) -> Result<AuditReport> {
    let k = instance.k();
    if trace.instance.k() != k {
        return Err(Error::TraceCorrupt(format!(
            "trace has {} arms, instance has {k}",
            trace.instance.k()
        )));
    }
    let alpha = instance.alpha();
    let mut pulls = vec![0u64; k];
    let mut rewards = vec![0u64; k];
    let mut checkpoints = trace.checkpoints.iter().peekable();
    let mut previous = snapshot(0, &pulls, instance);

    let mut report = AuditReport {
        algo: trace.algo.clone(),
        seed: trace.seed,
        rounds: 0,
        passed: true,
        first_failure: None,
        first_fairness_violation: None,
        fairness_violations: 0,
        rule_counts: BTreeMap::new(),
        max_floor_violation: 0.0,
    };
    let fail = |report: &mut AuditReport, failure: AuditFailure| {
        *report.rule_counts.entry(failure.rule).or_insert(0) += 1;
        if report.first_failure.is_none() {
            report.first_failure = Some(failure);
            report.passed = false;
        }
    };

    for (idx, event) in trace.events.iter().enumerate() {
        let t = idx as u64 + 1;
        if event.t != t {
            return Err(Error::TraceCorrupt(format!(
                "expected round {t}, found {}",
                event.t
            )));
        }
        if event.arm >= k || event.reward > 1 {
            return Err(Error::TraceCorrupt(format!("malformed event at round {t}")));
        }
        pulls[event.arm] += 1;
        rewards[event.arm] += u64::from(event.reward);

        while let Some(c) = checkpoints.next_if(|c| c.t <= t) {
            let same = c.t == t
                && c.state.pulls() == pulls.as_slice()
                && c.state
                    .rewards()
                    .iter()
                    .zip(&rewards)
                    .all(|(&a, &b)| a == b as f64);
            if !same {
                return Err(Error::TraceCorrupt(format!(
                    "checkpoint at round {} disagrees with the events",
                    c.t
                )));
            }
        }

        for arm in 0..k {
            let v = guarded_floor(instance.fairness()[arm] * t as f64) - pulls[arm] as f64;
            report.max_floor_violation = report.max_floor_violation.max(v);
            if v > alpha {
                report.fairness_violations += 1;
                let failure = AuditFailure {
                    t,
                    arm: Some(arm),
                    rule: AuditRule::FairnessBound,
                    value: v,
                };
                report.first_fairness_violation.get_or_insert(failure);
                fail(&mut report, failure);
            }
        }

        let current = snapshot(t, &pulls, instance);
        match check_partition(&current) {
            PartitionCheck::Pass => {}
            PartitionCheck::Uncovered { arms } => fail(
                &mut report,
                AuditFailure {
                    t,
                    arm: arms.first().copied(),
                    rule: AuditRule::PartitionCover,
                    value: arms.len() as f64,
                },
            ),
            PartitionCheck::Crowded { members, .. } => fail(
                &mut report,
                AuditFailure {
                    t,
                    arm: None,
                    rule: AuditRule::PartitionCardinality,
                    value: members.len() as f64,
                },
            ),
        }

        for arm in 0..k {
            let pulled = arm == event.arm;
            if !transition_ok(previous.membership[arm], current.membership[arm], pulled, k) {
                let rule = if pulled {
                    AuditRule::PulledTransition
                } else {
                    AuditRule::UnpulledTransition
                };
                fail(
                    &mut report,
                    AuditFailure {
                        t,
                        arm: Some(arm),
                        rule,
                        value: instance.fairness()[arm] * t as f64 - pulls[arm] as f64,
                    },
                );
            }
        }
        previous = current;
        report.rounds = t;
    }
    if let Some(c) = checkpoints.next() {
        return Err(Error::TraceCorrupt(format!(
            "checkpoint at round {} is beyond the last event",
            c.t
        )));
    }
    Ok(report)
}
