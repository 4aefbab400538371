//! Brute-force class enumeration.
//!
//! Level `n` is generated from level `n - 1` by inserting a new maximum in
//! every slot. Classes are closed downwards, so removing that maximum leaves a
//! member of the class; hence only occurrences that use the inserted point
//! need to be checked.

use rayon::prelude::*;

use super::{Basis, Permutation};

/// Cached levels `Av_0(B), Av_1(B), …` in lexicographic order.
#[derive(Debug, Clone)]
pub struct ClassOracle {
    basis: Basis,
    // (pattern, index of its maximum) pairs
    pinned: Vec<(Permutation, usize)>,
    levels: Vec<Vec<Permutation>>,
}

impl ClassOracle {
    pub fn new(basis: Basis) -> Self {
        let pinned = basis
            .patterns()
            .iter()
            .map(|p| {
                let top = p.values().iter().position(|&v| v as usize + 1 == p.len()).expect("non-empty");
                (p.clone(), top)
            })
            .collect();
        ClassOracle { basis, pinned, levels: vec![vec![Permutation::empty()]] }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    /// Size-`n` members of the class.
    pub fn level(&mut self, n: usize) -> &[Permutation] {
        while self.levels.len() <= n {
            let next = self.grow(self.levels.last().expect("level 0 exists"));
            self.levels.push(next);
        }
        &self.levels[n]
    }

    pub fn count(&mut self, n: usize) -> usize {
        self.level(n).len()
    }

    /// Counts for sizes `0..=n`.
    pub fn counts(&mut self, n: usize) -> Vec<usize> {
        (0..=n).map(|k| self.count(k)).collect()
    }

    pub fn contains(&mut self, sigma: &Permutation) -> bool {
        self.level(sigma.len()).binary_search(sigma).is_ok()
    }

    fn grow(&self, parents: &[Permutation]) -> Vec<Permutation> {
        let size = parents.first().map_or(0, |p| p.len()) + 1;
        let admits = |child: &Permutation, pos: usize| {
            self.pinned
                .iter()
                .all(|(pat, top)| pat.len() > size || !child.contains_through(pat, *top, pos))
        };
        let mut next: Vec<Permutation> = if parents.len() > 256 {
            parents
                .par_iter()
                .flat_map_iter(|p| {
                    (0..size).filter_map(move |pos| {
                        let child = p.insert_max(pos);
                        admits(&child, pos).then_some(child)
                    })
                })
                .collect()
        } else {
            parents
                .iter()
                .flat_map(|p| {
                    (0..size).filter_map(move |pos| {
                        let child = p.insert_max(pos);
                        admits(&child, pos).then_some(child)
                    })
                })
                .collect()
        };
        next.par_sort_unstable();
        next
    }
}

/// The size-`n` members of `Av(basis)` in lexicographic order.
pub fn enumerate_class(basis: &Basis, n: usize) -> Vec<Permutation> {
    ClassOracle::new(basis.clone()).level(n).to_vec()
}
