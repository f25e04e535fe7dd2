mod common;

use common::*;
use pov_core::{
    expected_utility, majority_vote, outcome_lottery, q, sample_outcome, utility, Polity, Rational, Role, RoleProfile,
    VoteVerdict,
};
use proptest::collection::btree_set;
use proptest::prelude::*;

fn extreme_pair() -> (Polity, RoleProfile) {
    let p = polity(5, &[-4, -3, 3, 4]);
    let profile = RoleProfile::with_proposals(&p, &[(0, q(-4, 1)), (3, q(4, 1))]).unwrap();
    (p, profile)
}

/// Peaks as distinct quarter-grid points in [-10, 10], plus a role profile.
fn polity_and_profile() -> impl Strategy<Value = (Polity, RoleProfile)> {
    (1usize..=7)
        .prop_flat_map(|n| btree_set(-40i128..=40, n))
        .prop_flat_map(|peaks| {
            let n = peaks.len();
            let roles = proptest::collection::vec(prop_oneof![Just(None), (-40i128..=40).prop_map(Some)], n);
            (Just(peaks), roles)
        })
        .prop_map(|(peaks, roles)| {
            let polity = Polity::new(10.into(), peaks.into_iter().map(|k| q(k, 4)).collect()).unwrap();
            let roles = roles.into_iter().map(|r| r.map_or(Role::Vote, |k| Role::Propose(q(k, 4)))).collect();
            let profile = RoleProfile::new(&polity, roles).unwrap();
            (polity, profile)
        })
}

#[test]
fn three_proposers_single_voter_matches_enumeration() {
    let p = polity(5, &[-4, -3, 3, 4]);
    let profile = RoleProfile::with_proposals(&p, &[(1, q(-3, 1)), (0, q(-4, 1)), (3, q(4, 1))]).unwrap();
    let l = outcome_lottery(&p, &profile);
    // Frozen from the ordered-pair oracle: the voter at 3 prefers 4 to -3.
    assert_eq!(l.atoms(), &[(q(-3, 1), q(1, 3)), (q(4, 1), q(2, 3))]);
    let oracle: Vec<_> = oracle_lottery(&p, &profile).into_iter().collect();
    assert_eq!(l.atoms(), &oracle[..]);
    assert_eq!(expected_utility(p.peak(1), &l), q(-98, 3));
}

#[test]
fn sampled_frequencies_track_exact_lottery() {
    let (p, profile) = extreme_pair();
    let n = 100_000;
    let left = (0..n).filter(|&s| sample_outcome(&p, &profile, s) == q(-4, 1)).count();
    let freq = left as f64 / n as f64;
    assert!((freq - 0.5).abs() < 0.01, "freq = {freq}");

    let p3 = polity(5, &[-1, 0, 1]);
    let none = RoleProfile::all_vote(3);
    let n = 90_000;
    for peak in [-1, 0, 1] {
        let hits = (0..n).filter(|&s| sample_outcome(&p3, &none, s) == Rational::from(peak)).count();
        let freq = hits as f64 / n as f64;
        assert!((freq - 1.0 / 3.0).abs() < 0.01, "peak {peak}: {freq}");
    }
}

#[test]
fn sampling_is_reproducible() {
    let (p, profile) = extreme_pair();
    let a: Vec<_> = (0..200).map(|s| sample_outcome(&p, &profile, s)).collect();
    let b: Vec<_> = (0..200).map(|s| sample_outcome(&p, &profile, s)).collect();
    assert_eq!(a, b);
}

proptest! {
    #[test]
    fn lottery_matches_oracle((p, profile) in polity_and_profile()) {
        let l = outcome_lottery(&p, &profile);
        let oracle: Vec<_> = oracle_lottery(&p, &profile).into_iter().collect();
        prop_assert_eq!(l.atoms(), &oracle[..]);
        prop_assert_eq!(l.total(), Rational::ONE);
    }

    #[test]
    fn support_is_proposals_or_peaks((p, profile) in polity_and_profile()) {
        let l = outcome_lottery(&p, &profile);
        let proposals: Vec<Rational> = profile.proposals().map(|(_, x)| x).collect();
        for x in l.support() {
            if proposals.is_empty() {
                prop_assert!(p.peaks().contains(x));
            } else {
                prop_assert!(proposals.contains(x));
            }
        }
    }

    #[test]
    fn mirror_symmetry((p, profile) in polity_and_profile()) {
        let l = outcome_lottery(&p, &profile);
        let m = outcome_lottery(&p.mirrored(), &profile.mirrored());
        prop_assert_eq!(l.map(|x| -*x), m);
    }

    #[test]
    fn affine_equivariance((p, profile) in polity_and_profile(), a in 1i128..5, d in 1i128..4, b in -6i128..6) {
        let scale = q(a, d);
        let shift = q(b, 3);
        let l = outcome_lottery(&p, &profile);
        let t = outcome_lottery(&p.affine(scale, shift), &profile.affine(scale, shift));
        prop_assert_eq!(l.map(|x| scale * *x + shift), t);
    }

    #[test]
    fn two_proposers_reduce_to_one_vote((p, _) in polity_and_profile(), x in -40i128..=40, y in -40i128..=40) {
        prop_assume!(p.len() >= 2);
        let (x, y) = (q(x, 4), q(y, 4));
        let n = p.len();
        let profile = RoleProfile::with_proposals(&p, &[(0, x), (n - 1, y)]).unwrap();
        let voters: Vec<Rational> = p.peaks()[1..n - 1].to_vec();
        let l = outcome_lottery(&p, &profile);
        match majority_vote(x, y, &voters).verdict {
            VoteVerdict::FirstWins => prop_assert_eq!(l.probability(&x), Rational::ONE),
            VoteVerdict::SecondWins => prop_assert_eq!(l.probability(&y), Rational::ONE),
            VoteVerdict::Draw if x == y => prop_assert!(l.is_point()),
            VoteVerdict::Draw => {
                prop_assert_eq!(l.probability(&x), q(1, 2));
                prop_assert_eq!(l.probability(&y), q(1, 2));
            }
        }
    }

    #[test]
    fn utility_symmetric_and_scaled(t in -50i128..50, d in -50i128..50, a in 1i128..6, b in -9i128..9) {
        let (t, d, a, b) = (q(t, 4), q(d, 4), Rational::from(a), Rational::from(b));
        prop_assert_eq!(utility(t, t + d), utility(t, t - d));
        prop_assert!(utility(t, t + d) <= Rational::ZERO);
        prop_assert_eq!(utility(a * t + b, a * (t + d) + b), a * a * utility(t, t + d));
    }
}
