//! Enumeration of permutation classes through staircase encodings.

pub mod bijection;
pub mod core_graph;
pub mod enumerator;
pub mod error;
pub mod gf;
pub mod grid;
pub mod mesh;
pub mod perm;
pub mod sampler;
pub mod series;

pub use error::{Error, Result};
pub use perm::{basis, perm, Basis, Permutation, Symmetry};
