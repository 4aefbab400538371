//! Mesh patterns: a classical pattern plus shaded unit cells that must be
//! empty in an occurrence.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::perm::Permutation;

/// A pattern of size `k` together with shaded cells `(x, y)`, `0 ≤ x, y ≤ k`.
///
/// Cell `(x, y)` is the unit square whose bottom-left corner is `(x, y)` in
/// the plot of the pattern.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MeshPattern {
    pattern: Permutation,
    shading: BTreeSet<(usize, usize)>,
}

impl MeshPattern {
    pub fn new(pattern: Permutation, shading: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let k = pattern.len();
        let shading: BTreeSet<_> = shading.into_iter().collect();
        if let Some(&(x, y)) = shading.iter().find(|&&(x, y)| x > k || y > k) {
            return Err(Error::InvalidInput(format!("shaded cell ({x},{y}) outside a size-{k} pattern")));
        }
        Ok(MeshPattern { pattern, shading })
    }

    /// Builds a mesh pattern from the shading text format `"x,y;x,y;…"`.
    pub fn parse(pattern: Permutation, shading: &str) -> Result<Self> {
        MeshPattern::new(pattern, parse_shading(shading)?)
    }

    pub fn pattern(&self) -> &Permutation {
        &self.pattern
    }

    pub fn shading(&self) -> &BTreeSet<(usize, usize)> {
        &self.shading
    }

    pub fn is_shaded(&self, x: usize, y: usize) -> bool {
        self.shading.contains(&(x, y))
    }
}

impl fmt::Display for MeshPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {{{}}})", self.pattern, format_shading(&self.shading))
    }
}

pub fn parse_shading(s: &str) -> Result<BTreeSet<(usize, usize)>> {
    let bad = || Error::InvalidInput(format!("cannot parse shading {s:?}"));
    s.split(';')
        .map(str::trim)
        .filter(|c| !c.is_empty())
        .map(|c| {
            let (x, y) = c.split_once(',').ok_or_else(bad)?;
            Ok((x.trim().parse().map_err(|_| bad())?, y.trim().parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn format_shading(cells: &BTreeSet<(usize, usize)>) -> String {
    cells.iter().map(|(x, y)| format!("{x},{y}")).collect::<Vec<_>>().join(";")
}

/// True iff some classical occurrence of the underlying pattern leaves every
/// shaded region free of points of `sigma`.
pub fn contains_mesh(sigma: &Permutation, p: &MeshPattern) -> bool {
    if p.shading.is_empty() {
        return sigma.contains(&p.pattern);
    }
    sigma.for_each_occurrence(&p.pattern, |positions| {
        let mut values: Vec<usize> = positions.iter().map(|&q| sigma.at(q)).collect();
        values.sort_unstable();
        (0..sigma.len()).all(|q| {
            if positions.binary_search(&q).is_ok() {
                return true;
            }
            let x = positions.partition_point(|&a| a < q);
            let y = values.partition_point(|&b| b < sigma.at(q));
            !p.is_shaded(x, y)
        })
    })
}

pub fn avoids_mesh(sigma: &Permutation, p: &MeshPattern) -> bool {
    !contains_mesh(sigma, p)
}
