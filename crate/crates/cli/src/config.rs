use std::fmt;
use std::path::Path;

use pov_core::{
    canonical_profile, ArtificialVoting, AugmentedPolity, ElectionAction, ElectionProfile, Error, Polity, Rational,
    Role, RoleProfile, SearchParams,
};
use serde::{Deserialize, Serialize};

/// Which procedure the scenario runs under.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    #[default]
    Baseline,
    Tournament,
    Election,
}

/// One entry of an explicit profile: `"vote"`, `{"propose": x}` or `{"nominate": j}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Action {
    Vote,
    Propose(Rational),
    Nominate(usize),
}

impl From<Role> for Action {
    fn from(role: Role) -> Self {
        match role {
            Role::Vote => Action::Vote,
            Role::Propose(x) => Action::Propose(x),
        }
    }
}

impl From<ElectionAction> for Action {
    fn from(action: ElectionAction) -> Self {
        match action {
            ElectionAction::Vote => Action::Vote,
            ElectionAction::Nominate(j) => Action::Nominate(j),
        }
    }
}

/// A scenario file. Reports embed the resolved config, so a report can be
/// loaded back as a config.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioConfig {
    pub bound: Rational,
    pub peaks: Vec<Rational>,
    #[serde(default)]
    pub variant: Variant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artificial_peak: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub artificial_voting: Option<ArtificialVoting>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_step: Option<Rational>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_proposers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub profile: Option<Vec<Action>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub grid_step: Option<Rational>,
    pub epsilon: Option<Rational>,
    pub max_proposers: Option<usize>,
}

#[derive(Debug)]
pub enum CliError {
    Invalid(String),
    TooLarge(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Invalid(_) => 2,
            CliError::TooLarge(_) => 3,
        }
    }

    fn field(field: &str, err: impl fmt::Display) -> Self {
        CliError::Invalid(format!("{field}: {err}"))
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Invalid(msg) => write!(f, "invalid input: {msg}"),
            CliError::TooLarge(msg) => write!(f, "instance too large: {msg}"),
            CliError::Io(msg) => write!(f, "{msg}"),
        }
    }
}

/// Attributes a library error to the config field that caused it.
pub fn from_core(err: Error) -> CliError {
    let field = match &err {
        Error::TooLarge(msg) => return CliError::TooLarge(msg.clone()),
        Error::EmptyPolity | Error::PeaksNotIncreasing { .. } | Error::PeakOutOfBounds { .. } => "peaks",
        Error::NonPositiveBound(_) => "bound",
        Error::ProfileLength { .. } | Error::ProposalOutOfBounds { .. } | Error::UnknownCandidate { .. } => "profile",
        Error::ArtificialPeakOutOfBounds { .. } => "artificial_peak",
        Error::NonPositiveParameter { name, .. } => name,
        Error::EmptyVoterSet | Error::UnknownVoter(_) => "profile",
    };
    CliError::field(field, err)
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Invalid(format!("config: cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let field = if path == "." { "config".to_string() } else { path };
            CliError::field(&field, e.into_inner())
        })
    }
}

/// A validated scenario with every default filled in.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub polity: Polity,
    pub params: SearchParams,
    pub max_proposers: usize,
    pub seed: u64,
}

impl Scenario {
    pub fn resolve(mut config: ScenarioConfig, overrides: &Overrides) -> Result<Self, CliError> {
        let polity = Polity::new(config.bound, config.peaks.clone()).map_err(from_core)?;
        let defaults = SearchParams::for_bound(polity.bound());
        let epsilon = overrides.epsilon.or(config.epsilon).unwrap_or(defaults.epsilon());
        let grid_step = overrides.grid_step.or(config.grid_step).unwrap_or(defaults.grid_step());
        let params = SearchParams::new(epsilon, grid_step).map_err(from_core)?;
        let max_proposers = overrides.max_proposers.or(config.max_proposers).unwrap_or(2);
        let seed = overrides.seed.or(config.seed).unwrap_or(0);
        config.epsilon = Some(epsilon);
        config.grid_step = Some(grid_step);
        config.max_proposers = Some(max_proposers);
        config.seed = Some(seed);
        if config.variant == Variant::Tournament && config.artificial_peak.is_none() {
            config.artificial_peak = Some(Rational::ZERO);
        }
        let scenario = Scenario { config, polity, params, max_proposers, seed };
        // Surface profile and artificial-peak errors before any work starts.
        match scenario.config.variant {
            Variant::Election => {
                scenario.election_profile()?;
            }
            Variant::Tournament => {
                scenario.augmented()?;
                scenario.role_profile()?;
            }
            Variant::Baseline => {
                scenario.role_profile()?;
            }
        }
        Ok(scenario)
    }

    pub fn augmented(&self) -> Result<AugmentedPolity, CliError> {
        let peak = self.config.artificial_peak.unwrap_or(Rational::ZERO);
        let voting = self.config.artificial_voting.unwrap_or_default();
        Ok(pov_core::augment(&self.polity, peak).map_err(from_core)?.with_voting(voting))
    }

    /// The configured profile, or `None` when the config has none.
    pub fn role_profile(&self) -> Result<Option<RoleProfile>, CliError> {
        let Some(actions) = &self.config.profile else { return Ok(None) };
        let roles = actions
            .iter()
            .enumerate()
            .map(|(i, a)| match *a {
                Action::Vote => Ok(Role::Vote),
                Action::Propose(x) => Ok(Role::Propose(x)),
                Action::Nominate(_) => {
                    Err(CliError::Invalid(format!("profile[{i}]: nominations need the election variant")))
                }
            })
            .collect::<Result<Vec<_>, _>>()?;
        RoleProfile::new(&self.polity, roles).map(Some).map_err(from_core)
    }

    pub fn election_profile(&self) -> Result<Option<ElectionProfile>, CliError> {
        let Some(actions) = &self.config.profile else { return Ok(None) };
        let actions = actions
            .iter()
            .enumerate()
            .map(|(i, a)| match *a {
                Action::Vote => Ok(ElectionAction::Vote),
                Action::Nominate(j) => Ok(ElectionAction::Nominate(j)),
                Action::Propose(_) => Err(CliError::Invalid(format!(
                    "profile[{i}]: the election variant takes nominations, not proposals"
                ))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        ElectionProfile::new(&self.polity, actions).map(Some).map_err(from_core)
    }

    /// Configured profile, else the median profile of the variant.
    pub fn role_profile_or_default(&self) -> Result<RoleProfile, CliError> {
        if let Some(profile) = self.role_profile()? {
            return Ok(profile);
        }
        if self.config.variant == Variant::Tournament {
            let aug = self.augmented()?;
            if aug.artificial_peak().is_some() {
                if let Some(m) = aug.median_participant() {
                    return RoleProfile::with_proposals(&self.polity, &[(m, self.polity.peak(m))]).map_err(from_core);
                }
            }
        }
        Ok(canonical_profile(&self.polity))
    }

    /// Configured profile, else the median(s) nominating themselves.
    pub fn election_profile_or_default(&self) -> Result<ElectionProfile, CliError> {
        if let Some(profile) = self.election_profile()? {
            return Ok(profile);
        }
        let actions = canonical_profile(&self.polity)
            .roles()
            .iter()
            .enumerate()
            .map(|(i, r)| if r.is_vote() { ElectionAction::Vote } else { ElectionAction::Nominate(i) })
            .collect();
        ElectionProfile::new(&self.polity, actions).map_err(from_core)
    }
}
