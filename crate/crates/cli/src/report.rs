use std::collections::HashMap;
use std::fmt;

use pov_core::{
    certify_election, certify_tournament, election_outcome, enumerate_election_equilibria, enumerate_with,
    expected_utility, outcome_lottery, sample_with, uniqueness_report, Baseline, Certificate, OutcomeLottery,
    OutcomeRule, Rational, Verdict,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::{from_core, Action, CliError, Scenario, ScenarioConfig, Variant};

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Action::Vote => f.write_str("vote"),
            Action::Propose(x) => write!(f, "propose:{x}"),
            Action::Nominate(j) => write!(f, "nominate:{j}"),
        }
    }
}

/// A report that renders as JSON, and as CSV when it has a tabular part.
pub trait Report: Serialize {
    fn csv_header(&self) -> Vec<&'static str>;
    fn csv_rows(&self) -> Vec<Vec<String>>;
}

pub fn render_json<R: Report>(report: &R) -> Result<String, CliError> {
    let mut text = serde_json::to_string_pretty(report).map_err(|e| CliError::Io(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

pub fn render_csv<R: Report>(report: &R) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Io(e.to_string());
    w.write_record(report.csv_header()).map_err(io)?;
    for row in report.csv_rows() {
        w.write_record(&row).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
}

fn lottery_cell(l: &OutcomeLottery) -> String {
    l.atoms().iter().map(|(x, p)| format!("{x}:{p}")).collect::<Vec<_>>().join(";")
}

#[derive(Debug, Serialize)]
pub struct Witness {
    pub agent: usize,
    pub action: Action,
    pub utility_before: Rational,
    pub utility_after: Rational,
}

fn witness<A: Copy + Into<Action>>(cert: &Certificate<A>) -> Option<Witness> {
    cert.witness.as_ref().map(|w| Witness {
        agent: w.agent,
        action: w.action.into(),
        utility_before: w.utility_before,
        utility_after: w.utility_after,
    })
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    #[serde(flatten)]
    pub config: ScenarioConfig,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub lottery: OutcomeLottery,
    pub expected_utilities: Vec<Rational>,
}

impl Report for VerifyReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["agent", "peak", "action", "expected_utility", "verdict"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        let verdict = verdict_name(self.verdict);
        let actions = self.config.profile.as_deref().unwrap_or_default();
        self.config
            .peaks
            .iter()
            .zip(actions)
            .zip(&self.expected_utilities)
            .enumerate()
            .map(|(i, ((peak, action), eu))| {
                vec![i.to_string(), peak.to_string(), action.to_string(), eu.to_string(), verdict.to_string()]
            })
            .collect()
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Equilibrium => "equilibrium",
        Verdict::Refuted => "refuted",
    }
}

pub fn verify(scenario: &Scenario) -> Result<VerifyReport, CliError> {
    let polity = &scenario.polity;
    let mut config = scenario.config.clone();
    let (lottery, verdict, witness, actions) = match config.variant {
        Variant::Election => {
            let profile = scenario.election_profile_or_default()?;
            let cert = certify_election(polity, &profile);
            let actions = profile.actions().iter().map(|&a| a.into()).collect();
            (election_outcome(polity, &profile), cert.verdict, witness(&cert), actions)
        }
        Variant::Baseline | Variant::Tournament => {
            let profile = scenario.role_profile_or_default()?;
            let (cert, lottery) = if config.variant == Variant::Tournament {
                let aug = scenario.augmented()?;
                (certify_tournament(&aug, &profile, &scenario.params), aug.rule().lottery(polity, &profile))
            } else {
                (pov_core::certify(polity, &profile, &scenario.params), outcome_lottery(polity, &profile))
            };
            let actions = profile.roles().iter().map(|&r| r.into()).collect();
            (lottery, cert.verdict, witness(&cert), actions)
        }
    };
    config.profile = Some(actions);
    let expected_utilities = polity.peaks().iter().map(|&t| expected_utility(t, &lottery)).collect();
    Ok(VerifyReport { config, verdict, witness, lottery, expected_utilities })
}

#[derive(Debug, Serialize)]
pub struct Row {
    pub profile: Vec<Action>,
    pub lottery: OutcomeLottery,
    /// Rows implementing the same lottery share a class, numbered in row order.
    pub outcome_class: usize,
}

impl Row {
    fn pattern(&self) -> String {
        let letters: Vec<&str> = self
            .profile
            .iter()
            .map(|a| match a {
                Action::Vote => "V",
                Action::Propose(_) => "P",
                Action::Nominate(_) => "N",
            })
            .collect();
        letters.join(" ")
    }

    fn proposals(&self) -> String {
        let parts: Vec<String> = self
            .profile
            .iter()
            .enumerate()
            .filter_map(|(i, a)| match a {
                Action::Vote => None,
                Action::Propose(x) => Some(format!("{i}={x}")),
                Action::Nominate(j) => Some(format!("{i}->{j}")),
            })
            .collect();
        parts.join(";")
    }
}

fn rows(found: impl IntoIterator<Item = (Vec<Action>, OutcomeLottery)>) -> Vec<Row> {
    let mut classes: HashMap<OutcomeLottery, usize> = HashMap::new();
    found
        .into_iter()
        .map(|(profile, lottery)| {
            let next = classes.len();
            let outcome_class = *classes.entry(lottery.clone()).or_insert(next);
            Row { profile, lottery, outcome_class }
        })
        .collect()
}

const ROW_HEADER: [&str; 4] = ["roles", "proposals", "lottery", "outcome_class"];

fn row_cells(rows: &[Row]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| vec![r.pattern(), r.proposals(), lottery_cell(&r.lottery), r.outcome_class.to_string()])
        .collect()
}

#[derive(Debug, Serialize)]
pub struct EnumerateReport {
    #[serde(flatten)]
    pub config: ScenarioConfig,
    pub count: usize,
    pub rows: Vec<Row>,
}

impl Report for EnumerateReport {
    fn csv_header(&self) -> Vec<&'static str> {
        ROW_HEADER.to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        row_cells(&self.rows)
    }
}

pub fn enumerate(scenario: &Scenario) -> Result<EnumerateReport, CliError> {
    let polity = &scenario.polity;
    let found: Vec<(Vec<Action>, OutcomeLottery)> = match scenario.config.variant {
        Variant::Election => enumerate_election_equilibria(polity)
            .map_err(from_core)?
            .into_iter()
            .map(|(p, _)| {
                let lottery = election_outcome(polity, &p);
                (p.actions().iter().map(|&a| a.into()).collect(), lottery)
            })
            .collect(),
        variant => {
            let range = 0..=scenario.max_proposers;
            let found = if variant == Variant::Tournament {
                enumerate_with(&scenario.augmented()?.rule(), polity, range, &scenario.params)
            } else {
                enumerate_with(&Baseline, polity, range, &scenario.params)
            };
            found
                .map_err(from_core)?
                .into_iter()
                .map(|r| (r.profile.roles().iter().map(|&a| a.into()).collect(), r.lottery))
                .collect()
        }
    };
    let mut config = scenario.config.clone();
    config.profile = None;
    let rows = rows(found);
    Ok(EnumerateReport { config, count: rows.len(), rows })
}

#[derive(Debug, Serialize)]
pub struct UniquenessOut {
    #[serde(flatten)]
    pub config: ScenarioConfig,
    /// The median participant proposing its own peak, when it is a real agent.
    pub expected: Option<Vec<Action>>,
    pub unique: bool,
    pub count: usize,
    pub rows: Vec<Row>,
}

impl Report for UniquenessOut {
    fn csv_header(&self) -> Vec<&'static str> {
        ROW_HEADER.to_vec()
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        row_cells(&self.rows)
    }
}

pub fn tournament(scenario: &Scenario) -> Result<UniquenessOut, CliError> {
    let aug = scenario.augmented()?;
    let report = uniqueness_report(&aug, &scenario.params, scenario.max_proposers).map_err(from_core)?;
    let unique = report.is_unique_expected();
    let expected = report.expected.map(|p| p.roles().iter().map(|&a| a.into()).collect());
    let rows =
        rows(report.equilibria.into_iter().map(|r| (r.profile.roles().iter().map(|&a| a.into()).collect(), r.lottery)));
    let mut config = scenario.config.clone();
    config.profile = None;
    Ok(UniquenessOut { config, expected, unique, count: rows.len(), rows })
}

#[derive(Debug, Serialize)]
pub struct Frequency {
    pub value: Rational,
    pub count: usize,
    pub probability: Rational,
}

#[derive(Debug, Serialize)]
pub struct SampleReport {
    #[serde(flatten)]
    pub config: ScenarioConfig,
    pub samples: usize,
    pub lottery: OutcomeLottery,
    pub frequencies: Vec<Frequency>,
}

impl Report for SampleReport {
    fn csv_header(&self) -> Vec<&'static str> {
        vec!["value", "count", "frequency", "probability"]
    }

    fn csv_rows(&self) -> Vec<Vec<String>> {
        self.frequencies
            .iter()
            .map(|f| {
                let freq = f.count as f64 / self.samples as f64;
                vec![f.value.to_string(), f.count.to_string(), format!("{freq:.6}"), f.probability.to_string()]
            })
            .collect()
    }
}

pub fn sample(scenario: &Scenario, samples: usize) -> Result<SampleReport, CliError> {
    if scenario.config.variant != Variant::Baseline {
        return Err(CliError::Invalid("variant: sampling runs the baseline procedure only".into()));
    }
    let polity = &scenario.polity;
    let profile = scenario.role_profile_or_default()?;
    let lottery = outcome_lottery(polity, &profile);
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    let mut counts: HashMap<Rational, usize> = HashMap::new();
    for _ in 0..samples {
        *counts.entry(sample_with(polity, &profile, &mut rng)).or_default() += 1;
    }
    let frequencies = lottery
        .atoms()
        .iter()
        .map(|&(value, probability)| Frequency { value, count: counts.get(&value).copied().unwrap_or(0), probability })
        .collect();
    let mut config = scenario.config.clone();
    config.profile = Some(profile.roles().iter().map(|&r| r.into()).collect());
    Ok(SampleReport { config, samples, lottery, frequencies })
}
