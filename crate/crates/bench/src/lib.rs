//! Fixed instances shared by the benchmarks.

use pov_core::{Polity, Rational, RoleProfile};

/// `n` evenly spaced peaks in `[-n, n]`.
pub fn spaced_polity(n: usize) -> Polity {
    let n = n as i128;
    let peaks = (0..n).map(|i| Rational::from(2 * i - n + 1)).collect();
    Polity::new(Rational::from(n), peaks).expect("spaced peaks are valid")
}

/// Every agent proposes its own peak except every third, which votes.
pub fn mixed_profile(polity: &Polity) -> RoleProfile {
    let proposals: Vec<_> = (0..polity.len()).filter(|i| i % 3 != 0).map(|i| (i, polity.peak(i))).collect();
    RoleProfile::with_proposals(polity, &proposals).expect("peaks are in bounds")
}
