//! Sequential-elimination variant with an artificial tie-breaking voter.
//!
//! When the polity has an even number of agents an artificial voter with a
//! caller-chosen peak is added, so the participant count is always odd. The
//! artificial voter never proposes. Proposals then meet in a chain of sincere
//! pairwise votes: a random first pair, after which the survivor faces a
//! uniformly drawn remaining proposal until one is left.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::engine::{majority_vote, OutcomeRule, RoleProfile, VoteVerdict};
use crate::equilibrium::{
    canonical_profile, certify_with, enumerate_with, EquilibriumCertificate, EquilibriumRow, SearchParams,
};
use crate::error::{Error, Result};
use crate::lottery::{Lottery, OutcomeLottery};
use crate::model::{Policy, Polity};
use crate::rational::Rational;

/// Largest proposal set [`elimination_winner_distribution`] accepts.
pub const MAX_ELIMINATION_PROPOSALS: usize = 8;

/// When the artificial voter casts its vote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArtificialVoting {
    /// Votes only when the real voters are drawn.
    #[default]
    TieBreakOnly,
    /// Votes in every duel like any other voter.
    AlwaysVotes,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AugmentedPolity {
    base: Polity,
    artificial_peak: Option<Rational>,
    voting: ArtificialVoting,
}

/// Attaches an artificial voter at `artificial_peak` when the polity is even.
/// The peak must lie in the policy interval either way.
pub fn augment(polity: &Polity, artificial_peak: Rational) -> Result<AugmentedPolity> {
    if !polity.contains(artificial_peak) {
        return Err(Error::ArtificialPeakOutOfBounds { value: artificial_peak, bound: polity.bound() });
    }
    let artificial_peak = polity.len().is_multiple_of(2).then_some(artificial_peak);
    Ok(AugmentedPolity { base: polity.clone(), artificial_peak, voting: ArtificialVoting::default() })
}

impl AugmentedPolity {
    pub fn with_voting(mut self, voting: ArtificialVoting) -> Self {
        self.voting = voting;
        self
    }

    pub fn base(&self) -> &Polity {
        &self.base
    }

    pub fn artificial_peak(&self) -> Option<Rational> {
        self.artificial_peak
    }

    pub fn voting(&self) -> ArtificialVoting {
        self.voting
    }

    /// Real agents plus the artificial voter, if any. Always odd.
    pub fn participant_count(&self) -> usize {
        self.base.len() + usize::from(self.artificial_peak.is_some())
    }

    pub fn rule(&self) -> Elimination {
        Elimination { artificial_peak: self.artificial_peak, voting: self.voting }
    }

    /// The real agent holding the median participant peak, or `None` when
    /// that median is the artificial voter.
    pub fn median_participant(&self) -> Option<usize> {
        match self.artificial_peak {
            None => Some(self.base.medians().mid),
            Some(ai) => {
                let mut peaks: Vec<Rational> = self.base.peaks().to_vec();
                peaks.push(ai);
                peaks.sort();
                let median = peaks[peaks.len() / 2];
                self.base.peaks().iter().position(|&p| p == median)
            }
        }
    }
}

/// Resolution of a single pairwise vote, including the artificial voter.
#[derive(Debug, Clone, Copy)]
pub struct Duel<'a> {
    pub voter_peaks: &'a [Rational],
    pub artificial_peak: Option<Rational>,
    pub voting: ArtificialVoting,
}

impl<'a> Duel<'a> {
    pub fn plain(voter_peaks: &'a [Rational]) -> Self {
        Duel { voter_peaks, artificial_peak: None, voting: ArtificialVoting::TieBreakOnly }
    }

    pub fn resolve(&self, first: Policy, second: Policy) -> VoteVerdict {
        let real = majority_vote(first, second, self.voter_peaks);
        let Some(ai) = self.artificial_peak else {
            return real.verdict;
        };
        match self.voting {
            ArtificialVoting::TieBreakOnly if real.verdict != VoteVerdict::Draw => real.verdict,
            ArtificialVoting::TieBreakOnly => majority_vote(first, second, &[ai]).verdict,
            ArtificialVoting::AlwaysVotes => {
                let extra = majority_vote(first, second, &[ai]);
                let a = real.for_first + extra.for_first;
                let b = real.for_second + extra.for_second;
                match a.cmp(&b) {
                    std::cmp::Ordering::Greater => VoteVerdict::FirstWins,
                    std::cmp::Ordering::Less => VoteVerdict::SecondWins,
                    std::cmp::Ordering::Equal => VoteVerdict::Draw,
                }
            }
        }
    }

    /// Winner(s) of a duel with their probabilities; a draw is a fair coin.
    fn outcomes(&self, first: (usize, Policy), second: (usize, Policy)) -> Vec<(usize, Rational)> {
        match self.resolve(first.1, second.1) {
            VoteVerdict::FirstWins => vec![(first.0, Rational::ONE)],
            VoteVerdict::SecondWins => vec![(second.0, Rational::ONE)],
            VoteVerdict::Draw => {
                let half = Rational::new(1, 2);
                vec![(first.0, half), (second.0, half)]
            }
        }
    }
}

/// The proposer whose policy strictly beats every other proposal in a
/// sincere majority vote among `voter_peaks`.
pub fn condorcet_winner(proposals: &BTreeMap<usize, Policy>, voter_peaks: &[Rational]) -> Option<usize> {
    condorcet_winner_under(proposals, &Duel::plain(voter_peaks))
}

/// [`condorcet_winner`] under an arbitrary duel rule.
pub fn condorcet_winner_under(proposals: &BTreeMap<usize, Policy>, duel: &Duel<'_>) -> Option<usize> {
    proposals.iter().find_map(|(&p, &x)| {
        proposals
            .iter()
            .filter(|(&q, _)| q != p)
            .all(|(_, &y)| duel.resolve(x, y) == VoteVerdict::FirstWins)
            .then_some(p)
    })
}

/// Position in the elimination sequence. Proposer indices, not positions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EliminationState {
    pub surviving: usize,
    pub discarded: Vec<usize>,
    pub remaining: Vec<usize>,
}

impl EliminationState {
    pub fn is_final(&self) -> bool {
        self.remaining.is_empty()
    }

    /// States after the first duel, each with its probability.
    pub fn openings(proposals: &BTreeMap<usize, Policy>, duel: &Duel<'_>) -> Vec<(Rational, EliminationState)> {
        let entries: Vec<(usize, Policy)> = proposals.iter().map(|(&p, &x)| (p, x)).collect();
        if entries.len() == 1 {
            let only = EliminationState { surviving: entries[0].0, discarded: vec![], remaining: vec![] };
            return vec![(Rational::ONE, only)];
        }
        let k = entries.len() as i128;
        let pair_weight = Rational::new(2, k * (k - 1));
        let mut out = Vec::new();
        for i in 0..entries.len() {
            for j in (i + 1)..entries.len() {
                let rest: Vec<usize> =
                    entries.iter().map(|e| e.0).filter(|&p| p != entries[i].0 && p != entries[j].0).collect();
                for (winner, p) in duel.outcomes(entries[i], entries[j]) {
                    let loser = if winner == entries[i].0 { entries[j].0 } else { entries[i].0 };
                    out.push((
                        pair_weight * p,
                        EliminationState { surviving: winner, discarded: vec![loser], remaining: rest.clone() },
                    ));
                }
            }
        }
        out
    }

    /// States after the survivor meets a uniformly drawn remaining proposal.
    pub fn challenges(
        &self,
        proposals: &BTreeMap<usize, Policy>,
        duel: &Duel<'_>,
    ) -> Vec<(Rational, EliminationState)> {
        let draw = Rational::new(1, self.remaining.len() as i128);
        let mut out = Vec::new();
        for &c in &self.remaining {
            let rest: Vec<usize> = self.remaining.iter().copied().filter(|&r| r != c).collect();
            for (winner, p) in duel.outcomes((self.surviving, proposals[&self.surviving]), (c, proposals[&c])) {
                let loser = if winner == c { self.surviving } else { c };
                let mut discarded = self.discarded.clone();
                discarded.push(loser);
                discarded.sort_unstable();
                out.push((draw * p, EliminationState { surviving: winner, discarded, remaining: rest.clone() }));
            }
        }
        out
    }
}

/// Exact distribution of the final survivor over proposer indices.
pub fn elimination_winner_distribution(
    proposals: &BTreeMap<usize, Policy>,
    voter_peaks: &[Rational],
    artificial_peak: Option<Rational>,
) -> Result<Lottery<usize>> {
    if proposals.len() > MAX_ELIMINATION_PROPOSALS {
        return Err(Error::TooLarge(format!(
            "{} proposals exceeds the elimination limit of {MAX_ELIMINATION_PROPOSALS}",
            proposals.len()
        )));
    }
    let duel = Duel { voter_peaks, artificial_peak, voting: ArtificialVoting::TieBreakOnly };
    Ok(elimination_distribution_under(proposals, &duel))
}

/// Survivor distribution under an arbitrary duel rule. Panics on an empty
/// proposal set.
pub fn elimination_distribution_under(proposals: &BTreeMap<usize, Policy>, duel: &Duel<'_>) -> Lottery<usize> {
    assert!(!proposals.is_empty(), "elimination needs at least one proposal");
    let mut memo = Memo::new();
    let mut weights = Vec::new();
    for (p, state) in EliminationState::openings(proposals, duel) {
        for (winner, q) in survivor(&state, proposals, duel, &mut memo) {
            weights.push((winner, p * q));
        }
    }
    Lottery::from_weights(weights)
}

/// Survivor distributions keyed by (current survivor, undrawn proposals).
type Memo = HashMap<(usize, Vec<usize>), Vec<(usize, Rational)>>;

fn survivor(
    state: &EliminationState,
    proposals: &BTreeMap<usize, Policy>,
    duel: &Duel<'_>,
    memo: &mut Memo,
) -> Vec<(usize, Rational)> {
    if state.is_final() {
        return vec![(state.surviving, Rational::ONE)];
    }
    // The future only depends on the survivor and the undrawn proposals.
    let key = (state.surviving, state.remaining.clone());
    if let Some(hit) = memo.get(&key) {
        return hit.clone();
    }
    let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
    for (p, next) in state.challenges(proposals, duel) {
        for (winner, q) in survivor(&next, proposals, duel, memo) {
            *acc.entry(winner).or_default() += p * q;
        }
    }
    let result: Vec<(usize, Rational)> = acc.into_iter().collect();
    memo.insert(key, result.clone());
    result
}

/// Outcome rule of the elimination variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Elimination {
    pub artificial_peak: Option<Rational>,
    pub voting: ArtificialVoting,
}

impl OutcomeRule for Elimination {
    fn lottery(&self, polity: &Polity, profile: &RoleProfile) -> OutcomeLottery {
        assert_eq!(profile.len(), polity.len(), "profile does not match polity");
        let proposals: BTreeMap<usize, Policy> = profile.proposals().collect();
        if proposals.is_empty() {
            return Lottery::uniform(polity.peaks().iter().copied());
        }
        let voter_peaks: Vec<Rational> = profile.voters().into_iter().map(|v| polity.peak(v)).collect();
        let duel = Duel { voter_peaks: &voter_peaks, artificial_peak: self.artificial_peak, voting: self.voting };
        elimination_distribution_under(&proposals, &duel).map(|p| proposals[p])
    }

    fn extra_pivots(&self) -> Vec<Rational> {
        self.artificial_peak.into_iter().collect()
    }
}

/// Certification with outcomes evaluated by the elimination procedure.
pub fn certify_tournament(
    augmented: &AugmentedPolity,
    profile: &RoleProfile,
    params: &SearchParams,
) -> EquilibriumCertificate {
    certify_with(&augmented.rule(), augmented.base(), profile, params)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub equilibria: Vec<EquilibriumRow>,
    /// Median participant proposing its own peak, when that participant is a real agent.
    pub expected: Option<RoleProfile>,
}

impl UniquenessReport {
    /// True when the only certified equilibrium is the expected one.
    pub fn is_unique_expected(&self) -> bool {
        match (&self.expected, self.equilibria.as_slice()) {
            (Some(expected), [only]) => &only.profile == expected,
            _ => false,
        }
    }
}

/// Enumerates equilibria of the elimination variant with at most
/// `max_proposers` proposers.
pub fn uniqueness_report(
    augmented: &AugmentedPolity,
    params: &SearchParams,
    max_proposers: usize,
) -> Result<UniquenessReport> {
    let base = augmented.base();
    let equilibria = enumerate_with(&augmented.rule(), base, 0..=max_proposers, params)?;
    let expected = augmented.median_participant().map(|agent| {
        if augmented.artificial_peak().is_none() {
            canonical_profile(base)
        } else {
            RoleProfile::with_proposals(base, &[(agent, base.peak(agent))]).expect("peak in bounds")
        }
    });
    Ok(UniquenessReport { equilibria, expected })
}
