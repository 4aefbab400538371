use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Basis, Permutation};

/// One of the eight symmetries of the containment order, acting as
/// `reverse^r ∘ complement^c ∘ inverse^i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Symmetry {
    pub reverse: bool,
    pub complement: bool,
    pub inverse: bool,
}

impl Symmetry {
    pub const IDENTITY: Symmetry = Symmetry { reverse: false, complement: false, inverse: false };

    pub fn all() -> [Symmetry; 8] {
        let mut out = [Symmetry::IDENTITY; 8];
        for (k, s) in out.iter_mut().enumerate() {
            *s = Symmetry { reverse: k & 1 != 0, complement: k & 2 != 0, inverse: k & 4 != 0 };
        }
        out
    }

    pub fn apply(&self, p: &Permutation) -> Permutation {
        let mut q = p.clone();
        if self.inverse {
            q = q.inverse();
        }
        if self.complement {
            q = q.complement();
        }
        if self.reverse {
            q = q.reverse();
        }
        q
    }

    pub fn apply_basis(&self, b: &Basis) -> Basis {
        b.map(|p| self.apply(p))
    }

    /// The symmetry undoing `self`.
    ///
    /// Uses `inverse ∘ reverse = complement ∘ inverse`, so
    /// `(r^a c^b i)^-1 = r^b c^a i` while inverse-free elements are involutions.
    pub fn invert(&self) -> Symmetry {
        if self.inverse {
            Symmetry { reverse: self.complement, complement: self.reverse, inverse: true }
        } else {
            *self
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Symmetry::IDENTITY
    }

    pub fn name(&self) -> String {
        let mut parts = Vec::new();
        if self.reverse {
            parts.push("reverse");
        }
        if self.complement {
            parts.push("complement");
        }
        if self.inverse {
            parts.push("inverse");
        }
        if parts.is_empty() {
            "identity".into()
        } else {
            parts.join("-")
        }
    }
}

impl fmt::Display for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl fmt::Debug for Symmetry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Images of `basis` under all eight symmetries, identity first.
pub fn symmetry_orbit(basis: &Basis) -> Vec<(Basis, Symmetry)> {
    Symmetry::all().iter().map(|s| (s.apply_basis(basis), *s)).collect()
}

/// The distinct bases in the orbit of `basis`.
pub fn distinct_images(basis: &Basis) -> Vec<Basis> {
    let mut out: Vec<Basis> = symmetry_orbit(basis).into_iter().map(|(b, _)| b).collect();
    out.sort();
    out.dedup();
    out
}

/// Symmetry-minimal representative; equal for bases in the same orbit.
pub fn canonical_key(basis: &Basis) -> String {
    symmetry_orbit(basis)
        .into_iter()
        .map(|(b, _)| b.to_string())
        .min()
        .expect("orbit is non-empty")
}
