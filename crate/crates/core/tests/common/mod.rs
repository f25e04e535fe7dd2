//! Independent oracles and generators shared by the integration tests.
//!
//! The oracles deliberately avoid the library's evaluation paths: they work
//! on ordered pairs and full permutations, recomputing votes from squared
//! distances.

#![allow(dead_code)]

use std::collections::BTreeMap;

use pov_core::{Polity, Rational, Role, RoleProfile};
use rand::seq::index;
use rand::Rng;

pub fn ints(v: &[i128]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from(x)).collect()
}

pub fn polity(bound: i128, peaks: &[i128]) -> Polity {
    Polity::new(bound.into(), ints(peaks)).unwrap()
}

/// `n` distinct peaks on the quarter grid of `[-bound, bound]`.
pub fn random_polity<R: Rng>(rng: &mut R, n: usize, bound: i128) -> Polity {
    let slots = (8 * bound + 1) as usize;
    let mut quarters: Vec<i128> = index::sample(rng, slots, n).into_iter().map(|i| i as i128 - 4 * bound).collect();
    quarters.sort_unstable();
    Polity::new(bound.into(), quarters.into_iter().map(|k| Rational::new(k, 4)).collect()).unwrap()
}

/// Sign of the preference of a voter at `peak` for `a` over `b`: 1, -1 or 0.
fn prefers(peak: Rational, a: Rational, b: Rational) -> i32 {
    let da = (a - peak) * (a - peak);
    let db = (b - peak) * (b - peak);
    if da < db {
        1
    } else if db < da {
        -1
    } else {
        0
    }
}

/// Winner weights of one vote between `a` and `b`: `(weight on a, weight on b)`.
fn vote_split(a: Rational, b: Rational, voters: &[Rational]) -> (Rational, Rational) {
    let margin: i32 = voters.iter().map(|&v| prefers(v, a, b)).sum();
    let half = Rational::new(1, 2);
    match margin.signum() {
        1 => (Rational::ONE, Rational::ZERO),
        -1 => (Rational::ZERO, Rational::ONE),
        _ => (half, half),
    }
}

/// Baseline outcome distribution from ordered pairs of distinct proposers.
pub fn oracle_lottery(polity: &Polity, profile: &RoleProfile) -> BTreeMap<Rational, Rational> {
    let props: Vec<Rational> = profile.roles().iter().filter_map(Role::proposal).collect();
    let voters: Vec<Rational> =
        profile.roles().iter().zip(polity.peaks()).filter(|(r, _)| r.is_vote()).map(|(_, &p)| p).collect();
    let mut out: BTreeMap<Rational, Rational> = BTreeMap::new();
    let k = props.len();
    if k == 0 {
        for &p in polity.peaks() {
            *out.entry(p).or_default() += Rational::new(1, polity.len() as i128);
        }
        return out;
    }
    if k == 1 {
        out.insert(props[0], Rational::ONE);
        return out;
    }
    let w = Rational::new(1, (k * (k - 1)) as i128);
    for i in 0..k {
        for j in 0..k {
            if i == j {
                continue;
            }
            let (wa, wb) = vote_split(props[i], props[j], &voters);
            *out.entry(props[i]).or_default() += w * wa;
            *out.entry(props[j]).or_default() += w * wb;
        }
    }
    out.retain(|_, p| !p.is_zero());
    out
}

/// Elimination survivor distribution by brute force over all permutations
/// of the proposals. A uniform permutation read left to right is a uniform
/// first pair followed by uniform challengers.
pub fn oracle_elimination(
    proposals: &[(usize, Rational)],
    voters: &[Rational],
    artificial_tie_break: Option<Rational>,
) -> BTreeMap<usize, Rational> {
    let k = proposals.len();
    let mut perms = Vec::new();
    permute(&mut (0..k).collect::<Vec<_>>(), 0, &mut perms);
    let each = Rational::new(1, perms.len() as i128);
    let mut out: BTreeMap<usize, Rational> = BTreeMap::new();
    for perm in perms {
        walk(proposals, voters, artificial_tie_break, perm[0], &perm[1..], each, &mut out);
    }
    out.retain(|_, p| !p.is_zero());
    out
}

fn walk(
    proposals: &[(usize, Rational)],
    voters: &[Rational],
    ai: Option<Rational>,
    holder: usize,
    rest: &[usize],
    weight: Rational,
    out: &mut BTreeMap<usize, Rational>,
) {
    let Some((&next, tail)) = rest.split_first() else {
        *out.entry(proposals[holder].0).or_default() += weight;
        return;
    };
    let (a, b) = (proposals[holder].1, proposals[next].1);
    let (mut wa, mut wb) = vote_split(a, b, voters);
    if wa == wb {
        if let Some(ai) = ai {
            (wa, wb) = vote_split(a, b, &[ai]);
        }
    }
    if !wa.is_zero() {
        walk(proposals, voters, ai, holder, tail, weight * wa, out);
    }
    if !wb.is_zero() {
        walk(proposals, voters, ai, next, tail, weight * wb, out);
    }
}

fn permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, out);
        items.swap(k, i);
    }
}

/// Random role profile with proposals on the quarter grid.
pub fn random_profile<R: Rng>(rng: &mut R, polity: &Polity, propose_prob: f64) -> RoleProfile {
    let bound = polity.bound().floor();
    let roles = (0..polity.len())
        .map(|_| {
            if rng.random_bool(propose_prob) {
                Role::Propose(Rational::new(rng.random_range(-4 * bound..=4 * bound), 4))
            } else {
                Role::Vote
            }
        })
        .collect();
    RoleProfile::new(polity, roles).unwrap()
}
