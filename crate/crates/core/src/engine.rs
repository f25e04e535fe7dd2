//! Exact evaluation of the baseline propose-or-vote procedure.
//!
//! Stage 1 assigns every agent a [`Role`]; stage 2 fixes each proposer's
//! policy. Stage 3 is mechanical: two proposals are drawn uniformly, the
//! voters vote sincerely (abstaining when indifferent) and a draw is settled
//! by a fair coin. [`outcome_lottery`] integrates that randomness out exactly.

use std::fmt;

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lottery::{Lottery, OutcomeLottery};
use crate::model::{utility, Policy, Polity};
use crate::rational::Rational;

/// Stage-1 choice of an agent, carrying the stage-2 proposal for proposers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Vote,
    Propose(Policy),
}

impl Role {
    pub fn is_vote(&self) -> bool {
        matches!(self, Role::Vote)
    }

    pub fn proposal(&self) -> Option<Policy> {
        match *self {
            Role::Vote => None,
            Role::Propose(x) => Some(x),
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Role::Vote => f.write_str("V"),
            Role::Propose(x) => write!(f, "P({x})"),
        }
    }
}

/// One role per agent, indexed like the polity's peaks.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RoleProfile {
    roles: Vec<Role>,
}

impl RoleProfile {
    pub fn new(polity: &Polity, roles: Vec<Role>) -> Result<Self> {
        if roles.len() != polity.len() {
            return Err(Error::ProfileLength { expected: polity.len(), found: roles.len() });
        }
        for (agent, role) in roles.iter().enumerate() {
            if let Role::Propose(value) = *role {
                if !polity.contains(value) {
                    return Err(Error::ProposalOutOfBounds { agent, value, bound: polity.bound() });
                }
            }
        }
        Ok(RoleProfile { roles })
    }

    pub(crate) fn from_roles_unchecked(roles: Vec<Role>) -> Self {
        RoleProfile { roles }
    }

    /// Everyone votes.
    pub fn all_vote(n: usize) -> Self {
        RoleProfile { roles: vec![Role::Vote; n] }
    }

    /// Listed agents propose the given values, everyone else votes.
    pub fn with_proposals(polity: &Polity, proposals: &[(usize, Policy)]) -> Result<Self> {
        let mut roles = vec![Role::Vote; polity.len()];
        for &(agent, x) in proposals {
            if agent >= polity.len() {
                return Err(Error::ProfileLength { expected: polity.len(), found: agent + 1 });
            }
            roles[agent] = Role::Propose(x);
        }
        RoleProfile::new(polity, roles)
    }

    pub fn roles(&self) -> &[Role] {
        &self.roles
    }

    pub fn role(&self, agent: usize) -> Role {
        self.roles[agent]
    }

    pub fn len(&self) -> usize {
        self.roles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.roles.is_empty()
    }

    /// `(agent, proposal)` for every proposer, in agent order.
    pub fn proposals(&self) -> impl Iterator<Item = (usize, Policy)> + '_ {
        self.roles.iter().enumerate().filter_map(|(i, r)| r.proposal().map(|x| (i, x)))
    }

    pub fn proposer_count(&self) -> usize {
        self.roles.iter().filter(|r| !r.is_vote()).count()
    }

    pub fn voters(&self) -> Vec<usize> {
        self.roles.iter().enumerate().filter(|(_, r)| r.is_vote()).map(|(i, _)| i).collect()
    }

    /// Copy with one agent's role replaced. The caller keeps proposals in bounds.
    pub fn with_role(&self, agent: usize, role: Role) -> RoleProfile {
        let mut roles = self.roles.clone();
        roles[agent] = role;
        RoleProfile { roles }
    }

    /// Image under `x -> -x`, matching [`Polity::mirrored`].
    pub fn mirrored(&self) -> RoleProfile {
        let roles = self
            .roles
            .iter()
            .rev()
            .map(|r| match *r {
                Role::Vote => Role::Vote,
                Role::Propose(x) => Role::Propose(-x),
            })
            .collect();
        RoleProfile { roles }
    }

    /// Image under `x -> scale * x + shift`, matching [`Polity::affine`].
    pub fn affine(&self, scale: Rational, shift: Rational) -> RoleProfile {
        let roles = self
            .roles
            .iter()
            .map(|r| match *r {
                Role::Vote => Role::Vote,
                Role::Propose(x) => Role::Propose(scale * x + shift),
            })
            .collect();
        RoleProfile { roles }
    }
}

impl fmt::Display for RoleProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.roles.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VoteVerdict {
    FirstWins,
    SecondWins,
    Draw,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct VoteResult {
    pub for_first: usize,
    pub for_second: usize,
    pub abstentions: usize,
    pub verdict: VoteVerdict,
}

/// Sincere pairwise vote: each voter backs the strictly closer policy and
/// abstains when equidistant. A strict majority of cast votes wins.
pub fn majority_vote(first: Policy, second: Policy, voter_peaks: &[Rational]) -> VoteResult {
    let mut for_first = 0;
    let mut for_second = 0;
    let mut abstentions = 0;
    for &peak in voter_peaks {
        let d1 = (first - peak).abs();
        let d2 = (second - peak).abs();
        match d1.cmp(&d2) {
            std::cmp::Ordering::Less => for_first += 1,
            std::cmp::Ordering::Greater => for_second += 1,
            std::cmp::Ordering::Equal => abstentions += 1,
        }
    }
    let verdict = match for_first.cmp(&for_second) {
        std::cmp::Ordering::Greater => VoteVerdict::FirstWins,
        std::cmp::Ordering::Less => VoteVerdict::SecondWins,
        std::cmp::Ordering::Equal => VoteVerdict::Draw,
    };
    VoteResult { for_first, for_second, abstentions, verdict }
}

/// How a role profile turns into a distribution over implemented policies.
///
/// The baseline procedure and the elimination variant share the certification
/// machinery through this trait.
pub trait OutcomeRule: Sync {
    fn lottery(&self, polity: &Polity, profile: &RoleProfile) -> OutcomeLottery;

    /// Voting peaks beyond the polity's own agents that can swing a vote.
    fn extra_pivots(&self) -> Vec<Rational> {
        Vec::new()
    }
}

/// The three-stage procedure with a single vote between two random proposals.
#[derive(Debug, Clone, Copy, Default)]
pub struct Baseline;

impl OutcomeRule for Baseline {
    fn lottery(&self, polity: &Polity, profile: &RoleProfile) -> OutcomeLottery {
        outcome_lottery(polity, profile)
    }
}

/// Exact outcome distribution of the baseline procedure.
///
/// No proposers: uniform over the agents' peaks. One proposer: that proposal.
/// Otherwise every unordered pair of proposers is equally likely and decided
/// by [`majority_vote`] among the voters, draws split evenly. With no voters
/// every pair draws, which is the same as a uniform pick among the proposals.
pub fn outcome_lottery(polity: &Polity, profile: &RoleProfile) -> OutcomeLottery {
    assert_eq!(profile.len(), polity.len(), "profile does not match polity");
    let proposals: Vec<Policy> = profile.proposals().map(|(_, x)| x).collect();
    let voter_peaks: Vec<Rational> = profile.voters().into_iter().map(|v| polity.peak(v)).collect();
    pairwise_lottery(&proposals, &voter_peaks).unwrap_or_else(|| Lottery::uniform(polity.peaks().iter().copied()))
}

/// Lottery from a random pair of `alternatives` put to a sincere vote.
/// `None` when there are no alternatives at all.
pub(crate) fn pairwise_lottery(alternatives: &[Policy], voter_peaks: &[Rational]) -> Option<OutcomeLottery> {
    let k = alternatives.len();
    match k {
        0 => None,
        1 => Some(Lottery::point(alternatives[0])),
        _ => {
            let pairs = (k * (k - 1) / 2) as i128;
            let whole = Rational::new(1, pairs);
            let half = Rational::new(1, 2 * pairs);
            let mut weights = Vec::with_capacity(2 * pairs as usize);
            for i in 0..k {
                for j in (i + 1)..k {
                    let (a, b) = (alternatives[i], alternatives[j]);
                    match majority_vote(a, b, voter_peaks).verdict {
                        VoteVerdict::FirstWins => weights.push((a, whole)),
                        VoteVerdict::SecondWins => weights.push((b, whole)),
                        VoteVerdict::Draw => {
                            weights.push((a, half));
                            weights.push((b, half));
                        }
                    }
                }
            }
            Some(Lottery::from_weights(weights))
        }
    }
}

pub fn expected_utility(peak: Rational, lottery: &OutcomeLottery) -> Rational {
    lottery.atoms().iter().map(|&(x, p)| p * utility(peak, x)).sum()
}

/// One realisation of the procedure, drawn from a ChaCha stream seeded by `seed`.
pub fn sample_outcome(polity: &Polity, profile: &RoleProfile, seed: u64) -> Policy {
    sample_with(polity, profile, &mut ChaCha8Rng::seed_from_u64(seed))
}

/// One realisation of the procedure using the caller's random source.
pub fn sample_with<R: Rng + ?Sized>(polity: &Polity, profile: &RoleProfile, rng: &mut R) -> Policy {
    let proposals: Vec<Policy> = profile.proposals().map(|(_, x)| x).collect();
    match proposals.len() {
        0 => polity.peak(rng.random_range(0..polity.len())),
        1 => proposals[0],
        k => {
            let pair = index::sample(rng, k, 2);
            let (a, b) = (proposals[pair.index(0)], proposals[pair.index(1)]);
            let voter_peaks: Vec<Rational> = profile.voters().into_iter().map(|v| polity.peak(v)).collect();
            match majority_vote(a, b, &voter_peaks).verdict {
                VoteVerdict::FirstWins => a,
                VoteVerdict::SecondWins => b,
                VoteVerdict::Draw => {
                    if rng.random_bool(0.5) {
                        a
                    } else {
                        b
                    }
                }
            }
        }
    }
}
