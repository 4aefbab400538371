use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Permutation;
use crate::error::{Error, Result};

/// A finite basis: a non-empty antichain of non-empty patterns.
///
/// Patterns are kept sorted by (size, one-line notation). Patterns that
/// contain another member are redundant and are dropped at construction;
/// the dropped ones stay available through [`Basis::redundant`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Basis {
    patterns: Vec<Permutation>,
    #[serde(skip)]
    redundant: Vec<Permutation>,
}

impl Basis {
    pub fn new(patterns: impl IntoIterator<Item = Permutation>) -> Result<Self> {
        let mut all: Vec<Permutation> = patterns.into_iter().collect();
        if all.iter().any(Permutation::is_empty) {
            return Err(Error::InvalidInput("the empty permutation cannot be a basis element".into()));
        }
        if all.is_empty() {
            return Err(Error::InvalidInput("a basis needs at least one pattern".into()));
        }
        all.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        all.dedup();
        let mut kept: Vec<Permutation> = Vec::with_capacity(all.len());
        let mut redundant = Vec::new();
        for p in all {
            // Sorted by size, so only earlier (smaller) patterns can be contained in `p`.
            if kept.iter().any(|q| p.contains(q)) {
                log::debug!("dropping redundant basis pattern {p}");
                redundant.push(p);
            } else {
                kept.push(p);
            }
        }
        Ok(Basis { patterns: kept, redundant })
    }

    pub fn patterns(&self) -> &[Permutation] {
        &self.patterns
    }

    /// Patterns removed at construction because they contain another member.
    pub fn redundant(&self) -> &[Permutation] {
        &self.redundant
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn has(&self, p: &Permutation) -> bool {
        self.patterns.contains(p)
    }

    /// Membership test for the class `Av(self)`.
    pub fn admits(&self, sigma: &Permutation) -> bool {
        sigma.avoids_all(&self.patterns)
    }

    pub fn max_pattern_len(&self) -> usize {
        self.patterns.iter().map(Permutation::len).max().unwrap_or(0)
    }

    /// `Av(self ∪ extra)`.
    pub fn with(&self, extra: impl IntoIterator<Item = Permutation>) -> Basis {
        Basis::new(self.patterns.iter().cloned().chain(extra)).expect("non-empty basis")
    }

    pub(crate) fn map(&self, f: impl Fn(&Permutation) -> Permutation) -> Basis {
        Basis::new(self.patterns.iter().map(f)).expect("symmetry preserves validity")
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.patterns.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", parts.join(","))
    }
}

impl fmt::Debug for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Av({self})")
    }
}

impl FromStr for Basis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let patterns = s
            .split(',')
            .map(|t| t.trim())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<Permutation>())
            .collect::<Result<Vec<_>>>()?;
        Basis::new(patterns)
    }
}

impl TryFrom<String> for Basis {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Basis> for String {
    fn from(b: Basis) -> String {
        b.to_string()
    }
}

/// Parses a basis literal; panics on malformed input.
pub fn basis(s: &str) -> Basis {
    s.parse().unwrap_or_else(|e| panic!("bad basis literal {s:?}: {e}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::perm;

    #[test]
    fn redundant_patterns_are_stripped() {
        let b = basis("2314,3124,123");
        assert_eq!(b.patterns(), &[perm("123")]);
        assert_eq!(b.redundant(), &[perm("2314"), perm("3124")]);
    }

    #[test]
    fn sorted_and_deduplicated() {
        let b = basis("3124,2314,2314");
        assert_eq!(b.to_string(), "2314,3124");
        assert!(b.redundant().is_empty());
    }

    #[test]
    fn rejects_empty() {
        assert!("".parse::<Basis>().is_err());
        assert!(Basis::new(vec![Permutation::empty()]).is_err());
    }
}
