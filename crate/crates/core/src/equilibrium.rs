//! Subgame-perfect equilibrium certification for the propose-or-vote game.
//!
//! Stage-3 behaviour is fixed to sincere voting, so an equilibrium is a role
//! profile from which no agent gains by changing its stage-1 role or its
//! stage-2 proposal. Proposals live on a continuum; certification checks a
//! finite set of deviation values instead:
//!
//! * every agent peak and both interval ends,
//! * every reflection `2 * pivot - x` of a standing proposal `x` about a voter
//!   peak (the points where some voter flips between two proposals),
//! * each of those shifted by a small `epsilon` in both directions,
//! * a uniform grid of width `grid_step`.
//!
//! Between two consecutive reflection points the vote outcomes are constant,
//! so the best value in such a stretch is either the deviator's own peak or
//! the stretch endpoint nearest to it (or a point `epsilon` inside it when the
//! endpoint itself flips the vote). Verdicts are therefore exact up to that
//! `epsilon`; a refutation is always exact because the witness is re-evaluated
//! through the engine.
//!
//! Exact utility ties follow the propose/vote tie-break: an agent indifferent
//! between proposing and voting votes, so a proposer whose switch to voting
//! leaves its utility unchanged refutes the profile.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{expected_utility, Baseline, OutcomeRule, Role, RoleProfile};
use crate::error::{Error, Result};
use crate::lottery::OutcomeLottery;
use crate::model::{Policy, Polity};
use crate::rational::Rational;

/// Largest polity accepted by the enumerators.
pub const MAX_ENUMERATION_AGENTS: usize = 10;
/// Largest per-proposer proposal grid accepted by [`enumerate_equilibria`].
pub const MAX_GRID_POINTS_PER_PROPOSER: usize = 200;
/// Largest number of role profiles a single enumeration will certify.
pub const MAX_ENUMERATED_PROFILES: usize = 2_000_000;

/// Resolution of the deviation search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SearchParams {
    epsilon: Rational,
    grid_step: Rational,
}

impl SearchParams {
    pub fn new(epsilon: Rational, grid_step: Rational) -> Result<Self> {
        if !epsilon.is_positive() {
            return Err(Error::NonPositiveParameter { name: "epsilon", value: epsilon });
        }
        if !grid_step.is_positive() {
            return Err(Error::NonPositiveParameter { name: "grid_step", value: grid_step });
        }
        Ok(SearchParams { epsilon, grid_step })
    }

    /// `epsilon = bound / 1000`, `grid_step = bound / 50`.
    pub fn for_bound(bound: Rational) -> Self {
        SearchParams { epsilon: bound / Rational::from(1000), grid_step: bound / Rational::from(50) }
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn grid_step(&self) -> Rational {
        self.grid_step
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Equilibrium,
    Refuted,
}

/// A unilateral deviation and the deviator's expected utility before and after.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Deviation<A> {
    pub agent: usize,
    pub action: A,
    pub utility_before: Rational,
    pub utility_after: Rational,
}

impl<A> Deviation<A> {
    pub fn gain(&self) -> Rational {
        self.utility_after - self.utility_before
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Certificate<A> {
    pub verdict: Verdict,
    pub witness: Option<Deviation<A>>,
}

impl<A> Certificate<A> {
    pub fn equilibrium() -> Self {
        Certificate { verdict: Verdict::Equilibrium, witness: None }
    }

    pub fn refuted(witness: Deviation<A>) -> Self {
        Certificate { verdict: Verdict::Refuted, witness: Some(witness) }
    }

    pub fn is_equilibrium(&self) -> bool {
        self.verdict == Verdict::Equilibrium
    }
}

pub type EquilibriumCertificate = Certificate<Role>;

/// A certified profile together with the outcome it implements.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumRow {
    pub profile: RoleProfile,
    pub certificate: EquilibriumCertificate,
    pub lottery: OutcomeLottery,
}

/// Whether moving from an action to another with the given utilities is a
/// profitable deviation. Exact ties count only for a proposer switching to vote.
pub(crate) fn improves(current_is_vote: bool, action_is_vote: bool, before: Rational, after: Rational) -> bool {
    after > before || (after == before && !current_is_vote && action_is_vote)
}

/// Among `actions`, the improving one with the highest utility; earlier
/// actions win exact ties.
pub(crate) fn best_improvement<A, I, F>(
    current_is_vote: bool,
    before: Rational,
    actions: I,
    is_vote: impl Fn(&A) -> bool,
    mut eval: F,
) -> Option<(A, Rational)>
where
    I: IntoIterator<Item = A>,
    F: FnMut(&A) -> Rational,
{
    let mut best: Option<(A, Rational)> = None;
    for action in actions {
        let after = eval(&action);
        if !improves(current_is_vote, is_vote(&action), before, after) {
            continue;
        }
        if best.as_ref().is_none_or(|(_, u)| after > *u) {
            best = Some((action, after));
        }
    }
    best
}

/// The median profile: the median proposes its peak
/// (odd `N`), or both medians propose their peaks (even `N`); all others vote.
pub fn canonical_profile(polity: &Polity) -> RoleProfile {
    let m = polity.medians();
    let mut proposals = vec![(m.left, polity.peak(m.left))];
    if m.right != m.left {
        proposals.push((m.right, polity.peak(m.right)));
    }
    RoleProfile::with_proposals(polity, &proposals).expect("peaks are in bounds")
}

/// Finite deviation values for `deviator` under the baseline procedure.
pub fn candidate_values(polity: &Polity, profile: &RoleProfile, deviator: usize, params: &SearchParams) -> Vec<Policy> {
    candidate_values_with(polity, profile, deviator, params, &[])
}

pub(crate) fn candidate_values_with(
    polity: &Polity,
    profile: &RoleProfile,
    deviator: usize,
    params: &SearchParams,
    extra_pivots: &[Rational],
) -> Vec<Policy> {
    assert!(deviator < polity.len(), "deviator out of range");
    let bound = polity.bound();
    let pivots: Vec<Rational> = polity.peaks().iter().chain(extra_pivots).copied().collect();
    let anchors: Vec<Policy> = profile.proposals().map(|(_, x)| x).collect();

    let mut critical: BTreeSet<Policy> = BTreeSet::new();
    for &x in &anchors {
        critical.insert(x);
        for &pivot in &pivots {
            critical.insert(Rational::from(2) * pivot - x);
        }
    }

    let mut values: BTreeSet<Policy> = BTreeSet::new();
    values.extend(polity.peaks().iter().copied());
    values.insert(-bound);
    values.insert(bound);

    // Shrink epsilon below half the tightest gap so a shifted point stays in
    // the stretch adjacent to its critical point.
    let mut landmarks: BTreeSet<Policy> = critical.iter().copied().filter(|x| polity.contains(*x)).collect();
    landmarks.extend(values.iter().copied());
    let min_gap = landmarks.iter().zip(landmarks.iter().skip(1)).map(|(a, b)| *b - *a).min();
    let epsilon = match min_gap {
        Some(gap) => params.epsilon().min(gap / Rational::from(2)),
        None => params.epsilon(),
    };

    for &c in &critical {
        for v in [c - epsilon, c, c + epsilon] {
            values.insert(polity.clamp(v));
        }
    }

    let steps = ((Rational::from(2) * bound) / params.grid_step()).floor();
    for k in 0..=steps {
        values.insert(-bound + Rational::from(k) * params.grid_step());
    }

    values.into_iter().collect()
}

/// Best strictly improving action of `agent` under the baseline procedure.
pub fn best_response(
    polity: &Polity,
    profile: &RoleProfile,
    agent: usize,
    candidates: &[Policy],
) -> Option<Deviation<Role>> {
    best_response_with(&Baseline, polity, profile, agent, candidates)
}

pub fn best_response_with<R: OutcomeRule + ?Sized>(
    rule: &R,
    polity: &Polity,
    profile: &RoleProfile,
    agent: usize,
    candidates: &[Policy],
) -> Option<Deviation<Role>> {
    let peak = polity.peak(agent);
    let before = expected_utility(peak, &rule.lottery(polity, profile));
    best_response_from(rule, polity, profile, agent, before, candidate_actions(profile.role(agent), candidates))
}

fn candidate_actions(current: Role, candidates: &[Policy]) -> impl Iterator<Item = Role> + '_ {
    let vote = (!current.is_vote()).then_some(Role::Vote);
    vote.into_iter().chain(candidates.iter().map(|&v| Role::Propose(v))).filter(move |a| *a != current)
}

fn best_response_from<R: OutcomeRule + ?Sized>(
    rule: &R,
    polity: &Polity,
    profile: &RoleProfile,
    agent: usize,
    before: Rational,
    actions: impl IntoIterator<Item = Role>,
) -> Option<Deviation<Role>> {
    let peak = polity.peak(agent);
    let current = profile.role(agent);
    best_improvement(current.is_vote(), before, actions, Role::is_vote, |action| {
        expected_utility(peak, &rule.lottery(polity, &profile.with_role(agent, *action)))
    })
    .map(|(action, after)| Deviation { agent, action, utility_before: before, utility_after: after })
}

/// Certifies `profile` against every candidate deviation of every agent.
pub fn certify(polity: &Polity, profile: &RoleProfile, params: &SearchParams) -> EquilibriumCertificate {
    certify_with(&Baseline, polity, profile, params)
}

pub fn certify_with<R: OutcomeRule + ?Sized>(
    rule: &R,
    polity: &Polity,
    profile: &RoleProfile,
    params: &SearchParams,
) -> EquilibriumCertificate {
    let lottery = rule.lottery(polity, profile);
    let before: Vec<Rational> = polity.peaks().iter().map(|&p| expected_utility(p, &lottery)).collect();

    // Cheap moves first: switching to vote and proposing one's own peak
    // refute most profiles without the full scan.
    for (agent, &utility) in before.iter().enumerate() {
        let current = profile.role(agent);
        let quick = [Role::Vote, Role::Propose(polity.peak(agent))].into_iter().filter(|a| *a != current);
        if let Some(dev) = best_response_from(rule, polity, profile, agent, utility, quick) {
            return Certificate::refuted(dev);
        }
    }

    // Anchors cover every standing proposal, so one set serves all agents.
    let extra = rule.extra_pivots();
    let candidates = candidate_values_with(polity, profile, 0, params, &extra);
    for (agent, &utility) in before.iter().enumerate() {
        let actions = candidate_actions(profile.role(agent), &candidates);
        if let Some(dev) = best_response_from(rule, polity, profile, agent, utility, actions) {
            return Certificate::refuted(dev);
        }
    }
    Certificate::equilibrium()
}

/// All certified profiles with at most `max_proposers` proposers, with
/// proposals drawn from the grid restricted to each proposer's interval
/// between its own peak and the median voter(s).
pub fn enumerate_equilibria(
    polity: &Polity,
    max_proposers: usize,
    params: &SearchParams,
) -> Result<Vec<EquilibriumRow>> {
    enumerate_with(&Baseline, polity, 0..=max_proposers, params)
}

/// Enumeration under an arbitrary outcome rule and proposer-count range.
/// Rows come back sorted by role profile.
pub fn enumerate_with<R: OutcomeRule + ?Sized>(
    rule: &R,
    polity: &Polity,
    proposer_counts: RangeInclusive<usize>,
    params: &SearchParams,
) -> Result<Vec<EquilibriumRow>> {
    let profiles = proposal_profiles(polity, proposer_counts, params, &rule.extra_pivots())?;
    let mut rows: Vec<EquilibriumRow> = profiles
        .into_par_iter()
        .filter_map(|profile| {
            let certificate = certify_with(rule, polity, &profile, params);
            certificate.is_equilibrium().then(|| EquilibriumRow {
                lottery: rule.lottery(polity, &profile),
                profile,
                certificate,
            })
        })
        .collect();
    rows.sort_by(|a, b| a.profile.cmp(&b.profile));
    Ok(rows)
}

/// Every profile the enumerator will certify.
pub(crate) fn proposal_profiles(
    polity: &Polity,
    proposer_counts: RangeInclusive<usize>,
    params: &SearchParams,
    extra_voters: &[Rational],
) -> Result<Vec<RoleProfile>> {
    let n = polity.len();
    if n > MAX_ENUMERATION_AGENTS {
        return Err(Error::TooLarge(format!("{n} agents exceeds the limit of {MAX_ENUMERATION_AGENTS}")));
    }
    let mut profiles = Vec::new();
    for mask in 0u32..(1 << n) {
        let count = mask.count_ones() as usize;
        if !proposer_counts.contains(&count) {
            continue;
        }
        let proposers: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let mut voter_peaks: Vec<Rational> = (0..n)
            .filter(|i| mask & (1 << i) == 0)
            .map(|i| polity.peak(i))
            .chain(extra_voters.iter().copied())
            .collect();
        voter_peaks.sort();

        let mut grids = Vec::with_capacity(proposers.len());
        let mut total: usize = 1;
        for &p in &proposers {
            let grid = proposal_grid(polity, p, &voter_peaks, params);
            if grid.len() > MAX_GRID_POINTS_PER_PROPOSER {
                return Err(Error::TooLarge(format!(
                    "proposer {p} has {} grid points (limit {MAX_GRID_POINTS_PER_PROPOSER})",
                    grid.len()
                )));
            }
            total = total.saturating_mul(grid.len());
            grids.push(grid);
        }
        if profiles.len().saturating_add(total) > MAX_ENUMERATED_PROFILES {
            return Err(Error::TooLarge(format!("more than {MAX_ENUMERATED_PROFILES} profiles to certify")));
        }
        push_products(&proposers, &grids, &mut vec![Role::Vote; n], 0, &mut profiles);
    }
    Ok(profiles)
}

fn push_products(
    proposers: &[usize],
    grids: &[Vec<Policy>],
    roles: &mut Vec<Role>,
    depth: usize,
    out: &mut Vec<RoleProfile>,
) {
    if depth == proposers.len() {
        out.push(RoleProfile::from_roles_unchecked(roles.clone()));
        return;
    }
    for &x in &grids[depth] {
        roles[proposers[depth]] = Role::Propose(x);
        push_products(proposers, grids, roles, depth + 1, out);
    }
    roles[proposers[depth]] = Role::Vote;
}

/// Grid points, peaks and endpoints inside `[min(peak, left median voter), max(peak, right median voter)]`.
/// Without voters the whole policy interval is used.
fn proposal_grid(
    polity: &Polity,
    proposer: usize,
    sorted_voter_peaks: &[Rational],
    params: &SearchParams,
) -> Vec<Policy> {
    let bound = polity.bound();
    let peak = polity.peak(proposer);
    let (lo, hi) = match sorted_voter_peaks.len() {
        0 => (-bound, bound),
        k => {
            let left = sorted_voter_peaks[(k - 1) / 2];
            let right = sorted_voter_peaks[k / 2];
            (peak.min(left), peak.max(right))
        }
    };
    let step = params.grid_step();
    let first = -((-(lo + bound) / step).floor());
    let last = ((hi + bound) / step).floor();
    let mut grid: BTreeSet<Policy> = (first..=last).map(|k| -bound + Rational::from(k) * step).collect();
    grid.insert(lo);
    grid.insert(hi);
    grid.extend(polity.peaks().iter().copied().filter(|&p| lo <= p && p <= hi));
    grid.into_iter().collect()
}
