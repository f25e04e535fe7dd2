mod common;

use common::*;
use pov_core::{
    certify_election, election_outcome, enumerate_election_equilibria, expected_utility, outcome_lottery,
    ElectionAction, ElectionProfile, Lottery, Polity, Role, RoleProfile,
};
use proptest::prelude::*;
use ElectionAction::{Nominate, Vote};

fn polity_and_actions() -> impl Strategy<Value = (Polity, Vec<ElectionAction>)> {
    proptest::collection::btree_set(-20i128..=20, 1..=6).prop_flat_map(|peaks| {
        let n = peaks.len();
        let p = Polity::new(5.into(), peaks.into_iter().map(|k| pov_core::q(k, 4)).collect()).unwrap();
        let action = prop_oneof![Just(Vote), (0..n).prop_map(Nominate)];
        (Just(p), proptest::collection::vec(action, n))
    })
}

proptest! {
    #[test]
    fn self_nomination_is_the_baseline_game((p, actions) in polity_and_actions()) {
        let actions: Vec<_> = actions.into_iter().enumerate().map(|(i, a)| if a.is_vote() { Vote } else { Nominate(i) }).collect();
        let roles: Vec<_> = actions.iter().enumerate().map(|(i, a)| if a.is_vote() { Role::Vote } else { Role::Propose(p.peak(i)) }).collect();
        let election = ElectionProfile::new(&p, actions).unwrap();
        let baseline = RoleProfile::new(&p, roles).unwrap();
        prop_assert_eq!(election_outcome(&p, &election), outcome_lottery(&p, &baseline));
    }

    #[test]
    fn outcomes_are_peaks_and_voters_partition((p, actions) in polity_and_actions()) {
        let profile = ElectionProfile::new(&p, actions).unwrap();
        let l = election_outcome(&p, &profile);
        for x in l.support() {
            prop_assert!(p.peaks().contains(x));
        }
        prop_assert_eq!(profile.voters().len() + profile.nominators().len(), p.len());
    }

    #[test]
    fn mirrored_outcome((p, actions) in polity_and_actions()) {
        let profile = ElectionProfile::new(&p, actions).unwrap();
        let l = election_outcome(&p, &profile).map(|x| -*x);
        prop_assert_eq!(l, election_outcome(&p.mirrored(), &profile.mirrored()));
    }

    #[test]
    fn witnesses_reevaluate((p, actions) in polity_and_actions()) {
        let profile = ElectionProfile::new(&p, actions).unwrap();
        if let Some(w) = certify_election(&p, &profile).witness {
            let peak = p.peak(w.agent);
            prop_assert_eq!(expected_utility(peak, &election_outcome(&p, &profile)), w.utility_before);
            prop_assert_eq!(expected_utility(peak, &election_outcome(&p, &profile.with_action(w.agent, w.action))), w.utility_after);
        }
    }
}

#[test]
fn three_agent_scan_contains_median_self_nomination() {
    let p = polity(5, &[-1, 0, 1]);
    let rows = enumerate_election_equilibria(&p).unwrap();
    let median = ElectionProfile::new(&p, vec![Vote, Nominate(1), Vote]).unwrap();
    assert!(rows.iter().any(|(prof, _)| *prof == median));
    for (prof, _) in &rows {
        assert!(certify_election(&p, prof).is_equilibrium());
    }
}

#[test]
fn single_agent_votes() {
    let p = polity(5, &[5]);
    let none = ElectionProfile::new(&p, vec![Vote]).unwrap();
    assert_eq!(election_outcome(&p, &none), Lottery::point(pov_core::q(5, 1)));
    let rows = enumerate_election_equilibria(&p).unwrap();
    let profiles: Vec<_> = rows.into_iter().map(|(prof, _)| prof).collect();
    assert_eq!(profiles, vec![none]);
}

#[test]
fn equilibrium_set_mirrors() {
    for peaks in [&[-3, 1, 2][..], &[-4, -3, 3, 4], &[-2, 0, 1, 4, 5]] {
        let p = polity(5, peaks);
        let mut a: Vec<_> =
            enumerate_election_equilibria(&p).unwrap().into_iter().map(|(prof, _)| prof.mirrored()).collect();
        a.sort();
        let b: Vec<_> =
            enumerate_election_equilibria(&p.mirrored()).unwrap().into_iter().map(|(prof, _)| prof).collect();
        assert_eq!(a, b, "{peaks:?}");
    }
}
