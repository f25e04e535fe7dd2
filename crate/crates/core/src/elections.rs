//! Elections: the alternatives are the agents themselves.
//!
//! Each agent either votes or nominates a candidate (possibly itself).
//! Nominating costs the nominator its vote; a candidate nominated by someone
//! else keeps voting unless it nominated too. Repeated nominations of the same
//! candidate count once.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::engine::{expected_utility, pairwise_lottery};
use crate::equilibrium::{best_improvement, Certificate, Deviation};
use crate::error::{Error, Result};
use crate::lottery::{Lottery, OutcomeLottery};
use crate::model::Polity;
use crate::rational::Rational;

/// Largest polity [`enumerate_election_equilibria`] scans.
pub const MAX_ELECTION_AGENTS: usize = 7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ElectionAction {
    Vote,
    Nominate(usize),
}

impl ElectionAction {
    pub fn is_vote(&self) -> bool {
        matches!(self, ElectionAction::Vote)
    }
}

impl fmt::Display for ElectionAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElectionAction::Vote => f.write_str("V"),
            ElectionAction::Nominate(c) => write!(f, "N({c})"),
        }
    }
}

pub type ElectionCertificate = Certificate<ElectionAction>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElectionProfile {
    actions: Vec<ElectionAction>,
}

impl ElectionProfile {
    pub fn new(polity: &Polity, actions: Vec<ElectionAction>) -> Result<Self> {
        if actions.len() != polity.len() {
            return Err(Error::ProfileLength { expected: polity.len(), found: actions.len() });
        }
        for (agent, action) in actions.iter().enumerate() {
            if let ElectionAction::Nominate(candidate) = *action {
                if candidate >= polity.len() {
                    return Err(Error::UnknownCandidate { agent, candidate });
                }
            }
        }
        Ok(ElectionProfile { actions })
    }

    pub fn actions(&self) -> &[ElectionAction] {
        &self.actions
    }

    pub fn action(&self, agent: usize) -> ElectionAction {
        self.actions[agent]
    }

    pub fn with_action(&self, agent: usize, action: ElectionAction) -> ElectionProfile {
        let mut actions = self.actions.clone();
        actions[agent] = action;
        ElectionProfile { actions }
    }

    /// Agents who kept their vote.
    pub fn voters(&self) -> Vec<usize> {
        (0..self.actions.len()).filter(|&i| self.actions[i].is_vote()).collect()
    }

    pub fn nominators(&self) -> Vec<usize> {
        (0..self.actions.len()).filter(|&i| !self.actions[i].is_vote()).collect()
    }

    /// Distinct nominated agents in index order.
    pub fn candidates(&self) -> Vec<usize> {
        let set: BTreeSet<usize> = self
            .actions
            .iter()
            .filter_map(|a| match a {
                ElectionAction::Nominate(c) => Some(*c),
                ElectionAction::Vote => None,
            })
            .collect();
        set.into_iter().collect()
    }

    pub fn mirrored(&self) -> ElectionProfile {
        let n = self.actions.len();
        let actions = self
            .actions
            .iter()
            .rev()
            .map(|a| match *a {
                ElectionAction::Vote => ElectionAction::Vote,
                ElectionAction::Nominate(c) => ElectionAction::Nominate(n - 1 - c),
            })
            .collect();
        ElectionProfile { actions }
    }
}

impl fmt::Display for ElectionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, a) in self.actions.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{a}")?;
        }
        f.write_str("]")
    }
}

/// Distribution over the elected candidate's peak.
pub fn election_outcome(polity: &Polity, profile: &ElectionProfile) -> OutcomeLottery {
    assert_eq!(profile.actions.len(), polity.len(), "profile does not match polity");
    let alternatives: Vec<Rational> = profile.candidates().into_iter().map(|c| polity.peak(c)).collect();
    let voter_peaks: Vec<Rational> = profile.voters().into_iter().map(|v| polity.peak(v)).collect();
    pairwise_lottery(&alternatives, &voter_peaks).unwrap_or_else(|| Lottery::uniform(polity.peaks().iter().copied()))
}

/// Checks every one of the `N + 1` actions for every agent.
pub fn certify_election(polity: &Polity, profile: &ElectionProfile) -> ElectionCertificate {
    let n = polity.len();
    let lottery = election_outcome(polity, profile);
    for agent in 0..n {
        let peak = polity.peak(agent);
        let current = profile.action(agent);
        let before = expected_utility(peak, &lottery);
        let actions =
            std::iter::once(ElectionAction::Vote).chain((0..n).map(ElectionAction::Nominate)).filter(|a| *a != current);
        let best = best_improvement(current.is_vote(), before, actions, ElectionAction::is_vote, |a| {
            expected_utility(peak, &election_outcome(polity, &profile.with_action(agent, *a)))
        });
        if let Some((action, after)) = best {
            return Certificate::refuted(Deviation { agent, action, utility_before: before, utility_after: after });
        }
    }
    Certificate::equilibrium()
}

/// Exhaustive pure-strategy equilibrium scan, sorted by profile.
pub fn enumerate_election_equilibria(polity: &Polity) -> Result<Vec<(ElectionProfile, ElectionCertificate)>> {
    let n = polity.len();
    if n > MAX_ELECTION_AGENTS {
        return Err(Error::TooLarge(format!("{n} agents exceeds the election limit of {MAX_ELECTION_AGENTS}")));
    }
    let base = n + 1;
    let total = base.pow(n as u32);
    let mut rows: Vec<(ElectionProfile, ElectionCertificate)> = (0..total)
        .into_par_iter()
        .filter_map(|code| {
            let profile = decode(code, n);
            let cert = certify_election(polity, &profile);
            cert.is_equilibrium().then_some((profile, cert))
        })
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(rows)
}

/// Digit `0` is a vote, digit `d > 0` nominates agent `d - 1`.
fn decode(mut code: usize, n: usize) -> ElectionProfile {
    let mut actions = Vec::with_capacity(n);
    for _ in 0..n {
        let digit = code % (n + 1);
        code /= n + 1;
        actions.push(if digit == 0 { ElectionAction::Vote } else { ElectionAction::Nominate(digit - 1) });
    }
    ElectionProfile { actions }
}
