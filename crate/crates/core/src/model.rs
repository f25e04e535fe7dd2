//! Polities, quadratic utility and median bookkeeping.
//!
//! Agents are addressed by 0-based index into the peak list. Because peaks
//! are strictly increasing, index order is peak order.

use crate::error::{Error, Result};
use crate::rational::Rational;

/// A point of the policy interval `[-bound, bound]`.
pub type Policy = Rational;

/// Quadratic single-peaked utility `-(policy - peak)^2`.
pub fn utility(peak: Rational, policy: Policy) -> Rational {
    -(policy - peak).square()
}

/// A set of agents with distinct ideal points on `[-bound, bound]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polity {
    bound: Rational,
    peaks: Vec<Rational>,
}

impl Polity {
    pub fn new(bound: Rational, peaks: Vec<Rational>) -> Result<Self> {
        if !bound.is_positive() {
            return Err(Error::NonPositiveBound(bound));
        }
        if peaks.is_empty() {
            return Err(Error::EmptyPolity);
        }
        for (index, &value) in peaks.iter().enumerate() {
            if value.abs() > bound {
                return Err(Error::PeakOutOfBounds { index, value, bound });
            }
            if index > 0 && value <= peaks[index - 1] {
                return Err(Error::PeaksNotIncreasing { index, value });
            }
        }
        Ok(Polity { bound, peaks })
    }

    pub fn bound(&self) -> Rational {
        self.bound
    }

    pub fn peaks(&self) -> &[Rational] {
        &self.peaks
    }

    pub fn peak(&self, agent: usize) -> Rational {
        self.peaks[agent]
    }

    pub fn len(&self) -> usize {
        self.peaks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.peaks.is_empty()
    }

    pub fn contains(&self, policy: Policy) -> bool {
        policy.abs() <= self.bound
    }

    pub fn clamp(&self, policy: Policy) -> Policy {
        policy.clamp(-self.bound, self.bound)
    }

    pub fn medians(&self) -> MedianTriple {
        medians(self)
    }

    /// The reflected polity `x -> -x`. Agent `i` becomes agent `len - 1 - i`.
    pub fn mirrored(&self) -> Polity {
        Polity { bound: self.bound, peaks: self.peaks.iter().rev().map(|&p| -p).collect() }
    }

    /// Applies `x -> scale * x + shift` to every peak and `bound -> scale * bound + |shift|`,
    /// which keeps every mapped point inside the new interval. Panics unless `scale > 0`.
    pub fn affine(&self, scale: Rational, shift: Rational) -> Polity {
        assert!(scale.is_positive(), "affine scale must be positive");
        Polity {
            bound: scale * self.bound + shift.abs(),
            peaks: self.peaks.iter().map(|&p| scale * p + shift).collect(),
        }
    }
}

/// Left, middle and right median agents. Odd `N`: all three coincide.
/// Even `N`: `right = left + 1` and `mid` is reported as `left`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MedianTriple {
    pub left: usize,
    pub mid: usize,
    pub right: usize,
}

impl MedianTriple {
    pub fn is_single(&self) -> bool {
        self.left == self.right
    }
}

pub fn medians(polity: &Polity) -> MedianTriple {
    let n = polity.len();
    if n % 2 == 1 {
        let m = n / 2;
        MedianTriple { left: m, mid: m, right: m }
    } else {
        MedianTriple { left: n / 2 - 1, mid: n / 2 - 1, right: n / 2 }
    }
}

/// Left and right median of a voter subset (equal when the subset has odd size).
pub fn median_of_voters(polity: &Polity, voters: &[usize]) -> Result<(usize, usize)> {
    if voters.is_empty() {
        return Err(Error::EmptyVoterSet);
    }
    if let Some(&bad) = voters.iter().find(|&&v| v >= polity.len()) {
        return Err(Error::UnknownVoter(bad));
    }
    let mut sorted = voters.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let k = sorted.len();
    Ok(if k % 2 == 1 { (sorted[k / 2], sorted[k / 2]) } else { (sorted[k / 2 - 1], sorted[k / 2]) })
}
