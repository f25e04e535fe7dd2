use crate::rational::Rational;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("polity needs at least one agent")]
    EmptyPolity,
    #[error("bound must be positive, got {0}")]
    NonPositiveBound(Rational),
    #[error("peaks must be strictly increasing: peak {index} ({value}) does not exceed its predecessor")]
    PeaksNotIncreasing { index: usize, value: Rational },
    #[error("peak {index} ({value}) lies outside [-{bound}, {bound}]")]
    PeakOutOfBounds { index: usize, value: Rational, bound: Rational },
    #[error("profile has {found} entries but the polity has {expected} agents")]
    ProfileLength { expected: usize, found: usize },
    #[error("proposal {value} of agent {agent} lies outside [-{bound}, {bound}]")]
    ProposalOutOfBounds { agent: usize, value: Rational, bound: Rational },
    #[error("agent {agent} nominates unknown candidate {candidate}")]
    UnknownCandidate { agent: usize, candidate: usize },
    #[error("artificial peak {value} lies outside [-{bound}, {bound}]")]
    ArtificialPeakOutOfBounds { value: Rational, bound: Rational },
    #[error("median of an empty voter set is undefined")]
    EmptyVoterSet,
    #[error("voter index {0} is not an agent of the polity")]
    UnknownVoter(usize),
    #[error("{name} must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: Rational },
    #[error("instance too large: {0}")]
    TooLarge(String),
}
