//! Permutations in one-line notation and the classical pattern machinery
//! built on them: standardization, containment, sums, decompositions.

mod basis;
mod oracle;
mod symmetry;

pub use basis::{basis, Basis};
pub use oracle::{enumerate_class, ClassOracle};
pub use symmetry::{canonical_key, distinct_images, symmetry_orbit, Symmetry};

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported permutation size (values are stored as `u8`).
pub const MAX_SIZE: usize = u8::MAX as usize;

/// A permutation in one-line notation.
///
/// Values are stored zero-based; the text form and [`Permutation::one_line`]
/// are one-based. The empty permutation is legal.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Permutation(Vec<u8>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DecompositionKind {
    Sum,
    Skew,
}

impl Permutation {
    pub fn empty() -> Self {
        Permutation(Vec::new())
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n as u8).collect())
    }

    pub fn decreasing(n: usize) -> Self {
        Permutation((0..n as u8).rev().collect())
    }

    /// Builds a permutation from one-based values, checking that they form a
    /// bijection on `1..=n`.
    pub fn from_one_line(values: &[usize]) -> Result<Self> {
        let n = values.len();
        if n > MAX_SIZE {
            return Err(Error::InvalidInput(format!("permutation of size {n} is too large")));
        }
        let mut seen = vec![false; n];
        for &v in values {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidInput(format!(
                    "{values:?} is not a permutation of 1..{n}"
                )));
            }
            seen[v - 1] = true;
        }
        Ok(Permutation(values.iter().map(|&v| (v - 1) as u8).collect()))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Zero-based value at zero-based position `i`.
    pub fn at(&self, i: usize) -> usize {
        self.0[i] as usize
    }

    /// Zero-based values.
    pub fn values(&self) -> &[u8] {
        &self.0
    }

    /// One-based one-line notation.
    pub fn one_line(&self) -> Vec<usize> {
        self.0.iter().map(|&v| v as usize + 1).collect()
    }

    pub fn is_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] < w[1])
    }

    pub fn is_decreasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] > w[1])
    }

    /// Positions (zero-based) of the left-to-right minima, in order.
    pub fn left_to_right_minima(&self) -> Vec<usize> {
        let mut out = Vec::new();
        let mut best = u8::MAX;
        for (i, &v) in self.0.iter().enumerate() {
            if out.is_empty() || v < best {
                out.push(i);
                best = v;
            }
        }
        out
    }

    /// True iff some subsequence of `self` is order-isomorphic to `pattern`.
    pub fn contains(&self, pattern: &Permutation) -> bool {
        occurrence_search(self, pattern, None, &mut |_| true)
    }

    pub fn avoids(&self, pattern: &Permutation) -> bool {
        !self.contains(pattern)
    }

    pub fn avoids_all<'a>(&self, patterns: impl IntoIterator<Item = &'a Permutation>) -> bool {
        patterns.into_iter().all(|p| !self.contains(p))
    }

    /// Containment restricted to occurrences where pattern position
    /// `pattern_pos` is matched with position `self_pos`.
    pub fn contains_through(&self, pattern: &Permutation, pattern_pos: usize, self_pos: usize) -> bool {
        occurrence_search(self, pattern, Some((pattern_pos, self_pos)), &mut |_| true)
    }

    /// Calls `visit` with the (increasing) positions of every occurrence of
    /// `pattern`, stopping early once `visit` returns `true`.
    pub fn for_each_occurrence(&self, pattern: &Permutation, mut visit: impl FnMut(&[usize]) -> bool) -> bool {
        occurrence_search(self, pattern, None, &mut visit)
    }

    pub fn direct_sum(&self, other: &Permutation) -> Permutation {
        let n = self.len() as u8;
        let mut v = self.0.clone();
        v.extend(other.0.iter().map(|&x| x + n));
        Permutation(v)
    }

    pub fn skew_sum(&self, other: &Permutation) -> Permutation {
        let m = other.len() as u8;
        let mut v: Vec<u8> = self.0.iter().map(|&x| x + m).collect();
        v.extend_from_slice(&other.0);
        Permutation(v)
    }

    /// Splits into the finest list of components whose sum (or skew sum)
    /// reproduces `self`.
    pub fn decompose(&self, kind: DecompositionKind) -> Result<Vec<Permutation>> {
        if self.is_empty() {
            return Err(Error::InvalidInput("cannot decompose the empty permutation".into()));
        }
        let n = self.len();
        let mut parts = Vec::new();
        let mut start = 0;
        let mut lo = usize::MAX;
        let mut hi = 0;
        for i in 0..n {
            let v = self.at(i);
            lo = lo.min(v);
            hi = hi.max(v);
            let len = i + 1 - start;
            // The prefix block [start, i] is a component when its values fill
            // exactly the band a sum (resp. skew sum) assigns to it.
            let closed = match kind {
                DecompositionKind::Sum => lo == start && hi == i,
                DecompositionKind::Skew => hi + 1 == n - start && lo + len == n - start,
            };
            if closed {
                parts.push(standardize(&self.0[start..=i]).expect("distinct"));
                start = i + 1;
                lo = usize::MAX;
                hi = 0;
            }
        }
        Ok(parts)
    }

    pub fn is_sum_decomposable(&self) -> bool {
        !self.is_empty() && self.decompose(DecompositionKind::Sum).map_or(false, |p| p.len() > 1)
    }

    pub fn is_skew_decomposable(&self) -> bool {
        !self.is_empty() && self.decompose(DecompositionKind::Skew).map_or(false, |p| p.len() > 1)
    }

    /// Removes a trailing maximum: `alpha ⊕ 1 ↦ alpha`, anything else is
    /// returned unchanged.
    pub fn bstrip(&self) -> Permutation {
        match self.0.last() {
            Some(&last) if last as usize + 1 == self.len() => Permutation(self.0[..self.len() - 1].to_vec()),
            _ => self.clone(),
        }
    }

    /// `Some(pi)` when `self = 1 ⊕ pi`.
    pub fn strip_leading_one(&self) -> Option<Permutation> {
        match self.0.first() {
            Some(0) => Some(Permutation(self.0[1..].iter().map(|&v| v - 1).collect())),
            _ => None,
        }
    }

    pub fn reverse(&self) -> Permutation {
        Permutation(self.0.iter().rev().copied().collect())
    }

    pub fn complement(&self) -> Permutation {
        let n = self.len() as u8;
        Permutation(self.0.iter().map(|&v| n - 1 - v).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0u8; self.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v as usize] = i as u8;
        }
        Permutation(inv)
    }

    /// Inserts a new maximum at position `pos`.
    pub fn insert_max(&self, pos: usize) -> Permutation {
        let mut v = self.0.clone();
        v.insert(pos, self.len() as u8);
        Permutation(v)
    }

    /// Deletes the entry at `pos` and standardizes.
    pub fn delete(&self, pos: usize) -> Permutation {
        let removed = self.0[pos];
        Permutation(
            self.0
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != pos)
                .map(|(_, &v)| if v > removed { v - 1 } else { v })
                .collect(),
        )
    }

    /// Every permutation of size `n` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(n);
        let mut used = vec![false; n];
        fn rec(n: usize, cur: &mut Vec<u8>, used: &mut [bool], out: &mut Vec<Permutation>) {
            if cur.len() == n {
                out.push(Permutation(cur.clone()));
                return;
            }
            for v in 0..n {
                if !used[v] {
                    used[v] = true;
                    cur.push(v as u8);
                    rec(n, cur, used, out);
                    cur.pop();
                    used[v] = false;
                }
            }
        }
        rec(n, &mut cur, &mut used, &mut out);
        out
    }
}

/// Order-isomorphic relabelling of a word of distinct entries.
pub fn standardize<T: Ord>(word: &[T]) -> Result<Permutation> {
    if word.len() > MAX_SIZE {
        return Err(Error::InvalidInput("word too long to standardize".into()));
    }
    let mut idx: Vec<usize> = (0..word.len()).collect();
    idx.sort_by(|&a, &b| word[a].cmp(&word[b]));
    if idx.windows(2).any(|w| word[w[0]] == word[w[1]]) {
        return Err(Error::InvalidInput("word has repeated entries".into()));
    }
    let mut out = vec![0u8; word.len()];
    for (rank, &i) in idx.iter().enumerate() {
        out[i] = rank as u8;
    }
    Ok(Permutation(out))
}

/// Backtracking occurrence search.
///
/// Pattern entries are placed left to right; each new entry's value must lie
/// strictly between the images of its nearest already-placed neighbours in
/// value order. `fixed` pins one pattern position to one text position.
fn occurrence_search(
    text: &Permutation,
    pattern: &Permutation,
    fixed: Option<(usize, usize)>,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = pattern.len();
    let n = text.len();
    if k == 0 {
        return visit(&[]);
    }
    if k > n {
        return false;
    }
    // For each pattern index t, the earlier indices holding the nearest
    // smaller and larger values.
    let mut below = vec![None; k];
    let mut above = vec![None; k];
    for t in 0..k {
        let v = pattern.at(t);
        for s in 0..t {
            let w = pattern.at(s);
            if w < v && below[t].map_or(true, |b: usize| pattern.at(b) < w) {
                below[t] = Some(s);
            }
            if w > v && above[t].map_or(true, |a: usize| pattern.at(a) > w) {
                above[t] = Some(s);
            }
        }
    }
    let mut chosen = vec![0usize; k];
    search_step(text, pattern, &below, &above, fixed, 0, 0, &mut chosen, visit)
}

#[allow(clippy::too_many_arguments)]
fn search_step(
    text: &Permutation,
    pattern: &Permutation,
    below: &[Option<usize>],
    above: &[Option<usize>],
    fixed: Option<(usize, usize)>,
    t: usize,
    from: usize,
    chosen: &mut [usize],
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let k = pattern.len();
    if t == k {
        return visit(chosen);
    }
    let n = text.len();
    let (lo, hi) = match fixed {
        Some((fp, fs)) if fp == t => (fs.max(from), fs),
        Some((fp, fs)) if t < fp => {
            if fs < fp - t {
                return false;
            }
            (from, fs - (fp - t))
        }
        _ => (from, n - (k - t)),
    };
    if lo > hi || hi >= n {
        return false;
    }
    let min_val = below[t].map(|s| text.at(chosen[s]));
    let max_val = above[t].map(|s| text.at(chosen[s]));
    for p in lo..=hi {
        let v = text.at(p);
        if min_val.map_or(false, |m| v <= m) || max_val.map_or(false, |m| v >= m) {
            continue;
        }
        chosen[t] = p;
        if search_step(text, pattern, below, above, fixed, t + 1, p + 1, chosen, visit) {
            return true;
        }
    }
    false
}

impl fmt::Display for Permutation {
    /// Digit string when every value is at most 9, otherwise values joined
    /// by `.`; the empty permutation prints as `ε`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "ε");
        }
        if self.len() <= 9 {
            for v in &self.0 {
                write!(f, "{}", v + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.one_line().iter().map(|v| v.to_string()).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Permutation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "ε" {
            return Ok(Permutation::empty());
        }
        let values: Vec<usize> = if s.contains('.') {
            s.split('.')
                .map(|t| t.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidInput(format!("cannot parse permutation {s:?}")))?
        } else {
            s.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::InvalidInput(format!("cannot parse permutation {s:?}")))?
        };
        Permutation::from_one_line(&values)
    }
}

impl TryFrom<String> for Permutation {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Permutation> for String {
    fn from(p: Permutation) -> String {
        p.to_string()
    }
}

/// Parses a permutation literal; panics on malformed input. Handy in tests.
pub fn perm(s: &str) -> Permutation {
    s.parse().unwrap_or_else(|e| panic!("bad permutation literal {s:?}: {e}"))
}
