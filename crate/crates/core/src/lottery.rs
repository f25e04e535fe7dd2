use std::collections::BTreeMap;
use std::fmt;

use serde::ser::SerializeSeq;
use serde::{Serialize, Serializer};

use crate::rational::Rational;

/// A finite probability distribution with exact weights.
///
/// Atoms are kept sorted by outcome, pairwise distinct, with strictly
/// positive probabilities summing to one.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Lottery<T> {
    atoms: Vec<(T, Rational)>,
}

/// Distribution over implemented policies.
pub type OutcomeLottery = Lottery<Rational>;

impl<T: Ord + Clone> Lottery<T> {
    /// Merges equal outcomes and drops zero weights. Panics if the weights do
    /// not sum to one or any weight is negative.
    pub fn from_weights<I>(weights: I) -> Self
    where
        I: IntoIterator<Item = (T, Rational)>,
    {
        let mut merged: BTreeMap<T, Rational> = BTreeMap::new();
        for (outcome, p) in weights {
            assert!(!p.is_negative(), "negative lottery weight");
            *merged.entry(outcome).or_default() += p;
        }
        let atoms: Vec<_> = merged.into_iter().filter(|(_, p)| !p.is_zero()).collect();
        let total: Rational = atoms.iter().map(|(_, p)| *p).sum();
        assert_eq!(total, Rational::ONE, "lottery weights must sum to one");
        Lottery { atoms }
    }

    pub fn point(outcome: T) -> Self {
        Lottery { atoms: vec![(outcome, Rational::ONE)] }
    }

    /// Uniform over the listed items; repeated items accumulate weight.
    pub fn uniform<I: IntoIterator<Item = T>>(items: I) -> Self {
        let items: Vec<T> = items.into_iter().collect();
        assert!(!items.is_empty(), "uniform lottery over nothing");
        let w = Rational::new(1, items.len() as i128);
        Self::from_weights(items.into_iter().map(|x| (x, w)))
    }

    pub fn atoms(&self) -> &[(T, Rational)] {
        &self.atoms
    }

    pub fn support(&self) -> impl Iterator<Item = &T> {
        self.atoms.iter().map(|(x, _)| x)
    }

    pub fn probability(&self, outcome: &T) -> Rational {
        self.atoms.binary_search_by(|(x, _)| x.cmp(outcome)).map(|i| self.atoms[i].1).unwrap_or(Rational::ZERO)
    }

    pub fn is_point(&self) -> bool {
        self.atoms.len() == 1
    }

    pub fn map<U: Ord + Clone>(&self, mut f: impl FnMut(&T) -> U) -> Lottery<U> {
        Lottery::from_weights(self.atoms.iter().map(|(x, p)| (f(x), *p)))
    }

    pub fn total(&self) -> Rational {
        self.atoms.iter().map(|(_, p)| *p).sum()
    }
}

/// Serialized as `[{"value": .., "probability": ..}, ..]`.
impl<T: Serialize> Serialize for Lottery<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Atom<'a, T> {
            value: &'a T,
            probability: &'a Rational,
        }
        let mut seq = serializer.serialize_seq(Some(self.atoms.len()))?;
        for (value, probability) in &self.atoms {
            seq.serialize_element(&Atom { value, probability })?;
        }
        seq.end()
    }
}

impl<T: fmt::Display> fmt::Display for Lottery<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (x, p)) in self.atoms.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{x}: {p}")?;
        }
        f.write_str("}")
    }
}

impl<T: fmt::Display> fmt::Debug for Lottery<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
