//! Exact simulation and equilibrium verification for the propose-or-vote
//! collective-choice procedure.
//!
//! Each agent of a [`Polity`] either proposes a policy on `[-A, A]` or keeps
//! its vote. Two random proposals go to a sincere majority vote among the
//! voters. The crate computes the resulting outcome lottery exactly, certifies
//! or refutes candidate equilibria, and enumerates equilibria on small
//! polities. Two variants are covered as well: sequential elimination with an
//! artificial tie-breaking voter ([`tournament`]) and elections where agents
//! nominate each other ([`elections`]).
//!
//! All arithmetic is exact ([`Rational`]); agents are 0-based indices in peak
//! order.

pub mod elections;
pub mod engine;
pub mod equilibrium;
pub mod error;
pub mod lottery;
pub mod model;
pub mod rational;
pub mod tournament;

pub use elections::{
    certify_election, election_outcome, enumerate_election_equilibria, ElectionAction, ElectionCertificate,
    ElectionProfile,
};
pub use engine::{
    expected_utility, majority_vote, outcome_lottery, sample_outcome, sample_with, Baseline, OutcomeRule, Role,
    RoleProfile, VoteResult, VoteVerdict,
};
pub use equilibrium::{
    best_response, candidate_values, canonical_profile, certify, certify_with, enumerate_equilibria, enumerate_with,
    Certificate, Deviation, EquilibriumCertificate, EquilibriumRow, SearchParams, Verdict,
};
pub use error::{Error, Result};
pub use lottery::{Lottery, OutcomeLottery};
pub use model::{median_of_voters, medians, utility, MedianTriple, Policy, Polity};
pub use rational::{q, Rational};
pub use tournament::{
    augment, certify_tournament, condorcet_winner, elimination_winner_distribution, uniqueness_report,
    ArtificialVoting, AugmentedPolity, Elimination, EliminationState, UniquenessReport,
};
