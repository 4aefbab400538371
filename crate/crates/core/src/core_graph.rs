//! Core graphs on staircase grids and their independent sets.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::grid::{staircase_cells, Cell};

/// Largest grid whose cells fit in a `u128` mask.
pub const MAX_GRID: usize = 15;

const ATOM_U: u8 = 1;
const ATOM_D: u8 = 2;
const ATOM_R: u8 = 4;
const ATOM_C: u8 = 8;
const ATOM_NAMES: [(u8, char); 4] = [(ATOM_U, 'U'), (ATOM_D, 'D'), (ATOM_R, 'R'), (ATOM_C, 'C')];

/// Which edge rules make up a core graph.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CoreKind {
    /// Union of the up, down, row and column rules (bit set).
    Union(u8),
    /// `D(B_n) ∨ UR(B_{n-1})`.
    DmUR,
    /// `U(B_n) ∨ DR(B_{n-1})`.
    UmDR,
}

impl CoreKind {
    pub const U: CoreKind = CoreKind::Union(ATOM_U);
    pub const D: CoreKind = CoreKind::Union(ATOM_D);
    pub const R: CoreKind = CoreKind::Union(ATOM_R);
    pub const C: CoreKind = CoreKind::Union(ATOM_C);
    pub const UD: CoreKind = CoreKind::Union(ATOM_U | ATOM_D);
    pub const UDC: CoreKind = CoreKind::Union(ATOM_U | ATOM_D | ATOM_C);
    pub const UDRC: CoreKind = CoreKind::Union(ATOM_U | ATOM_D | ATOM_R | ATOM_C);

    fn atoms_adjacent(atoms: u8, a: Cell, b: Cell) -> bool {
        let (lo, hi) = if (a.i, a.j) <= (b.i, b.j) { (a, b) } else { (b, a) };
        (atoms & ATOM_U != 0 && up_edge(lo, hi))
            || (atoms & ATOM_D != 0 && down_edge(lo, hi))
            || (atoms & ATOM_R != 0 && lo.i == hi.i && lo.j != hi.j)
            || (atoms & ATOM_C != 0 && lo.j == hi.j && lo.i != hi.i)
    }

    fn adjacent(&self, a: Cell, b: Cell) -> bool {
        if a == b {
            return false;
        }
        match *self {
            CoreKind::Union(atoms) => CoreKind::atoms_adjacent(atoms, a, b),
            CoreKind::DmUR => CoreKind::merged(ATOM_D, ATOM_U | ATOM_R, a, b),
            CoreKind::UmDR => CoreKind::merged(ATOM_U, ATOM_D | ATOM_R, a, b),
        }
    }

    // Outer rules on B_n; inner rules on off-diagonal cells shifted one column left.
    fn merged(outer: u8, inner: u8, a: Cell, b: Cell) -> bool {
        if CoreKind::atoms_adjacent(outer, a, b) {
            return true;
        }
        !a.is_diagonal()
            && !b.is_diagonal()
            && CoreKind::atoms_adjacent(inner, Cell::new(a.i, a.j - 1), Cell::new(b.i, b.j - 1))
    }
}

// `lo` precedes `hi` in row-major order.
fn up_edge(lo: Cell, hi: Cell) -> bool {
    hi.i > lo.i && hi.j < lo.j
}

fn down_edge(lo: Cell, hi: Cell) -> bool {
    lo.i < hi.i && lo.j < hi.j && hi.i <= lo.j
}

impl fmt::Display for CoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CoreKind::Union(atoms) => {
                for (bit, c) in ATOM_NAMES {
                    if atoms & bit != 0 {
                        write!(f, "{c}")?;
                    }
                }
                Ok(())
            }
            CoreKind::DmUR => f.write_str("DmUR"),
            CoreKind::UmDR => f.write_str("UmDR"),
        }
    }
}

impl fmt::Debug for CoreKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for CoreKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "DmUR" => return Ok(CoreKind::DmUR),
            "UmDR" => return Ok(CoreKind::UmDR),
            _ => {}
        }
        let mut atoms = 0;
        for ch in s.chars() {
            let bit = ATOM_NAMES
                .iter()
                .find(|(_, c)| *c == ch)
                .map(|(b, _)| *b)
                .ok_or_else(|| Error::InvalidInput(format!("unknown core kind {s:?}")))?;
            atoms |= bit;
        }
        if atoms == 0 {
            return Err(Error::InvalidInput("empty core kind".into()));
        }
        Ok(CoreKind::Union(atoms))
    }
}

impl TryFrom<String> for CoreKind {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CoreKind> for String {
    fn from(k: CoreKind) -> String {
        k.to_string()
    }
}

/// A core graph on `B_n`. Vertices are indexed in row-major order and
/// vertex sets are `u128` bit masks.
#[derive(Clone, PartialEq, Eq)]
pub struct CoreGraph {
    n: usize,
    kind: CoreKind,
    cells: Vec<Cell>,
    index: BTreeMap<Cell, usize>,
    adj: Vec<u128>,
}

pub fn build_core(kind: CoreKind, n: usize) -> Result<CoreGraph> {
    if n > MAX_GRID {
        return Err(Error::InvalidInput(format!("grid size {n} exceeds {MAX_GRID}")));
    }
    let cells = staircase_cells(n);
    let index = cells.iter().enumerate().map(|(k, c)| (*c, k)).collect();
    let adj = cells
        .iter()
        .map(|&a| {
            cells
                .iter()
                .enumerate()
                .filter(|(_, &b)| kind.adjacent(a, b))
                .fold(0u128, |m, (k, _)| m | 1 << k)
        })
        .collect();
    Ok(CoreGraph { n, kind, cells, index, adj })
}

impl CoreGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> CoreKind {
        self.kind
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn cell(&self, k: usize) -> Cell {
        self.cells[k]
    }

    pub fn index_of(&self, c: Cell) -> Option<usize> {
        self.index.get(&c).copied()
    }

    pub fn neighbours(&self, k: usize) -> u128 {
        self.adj[k]
    }

    pub fn is_edge(&self, a: Cell, b: Cell) -> bool {
        match (self.index_of(a), self.index_of(b)) {
            (Some(x), Some(y)) => self.adj[x] >> y & 1 == 1,
            _ => false,
        }
    }

    /// Edges as sorted pairs of cells, sorted.
    pub fn edges(&self) -> Vec<(Cell, Cell)> {
        let mut out = Vec::new();
        for (x, &a) in self.cells.iter().enumerate() {
            for (y, &b) in self.cells.iter().enumerate().skip(x + 1) {
                if self.adj[x] >> y & 1 == 1 {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn mask_of(&self, cells: impl IntoIterator<Item = Cell>) -> Result<u128> {
        cells.into_iter().try_fold(0u128, |m, c| {
            self.index_of(c)
                .map(|k| m | 1 << k)
                .ok_or_else(|| Error::InvalidInput(format!("cell {c} not in B_{}", self.n)))
        })
    }

    pub fn cells_of(&self, mask: u128) -> Vec<Cell> {
        (0..self.cells.len()).filter(|&k| mask >> k & 1 == 1).map(|k| self.cells[k]).collect()
    }

    pub fn is_independent(&self, mask: u128) -> bool {
        (0..self.cells.len()).all(|k| mask >> k & 1 == 0 || self.adj[k] & mask == 0)
    }

    /// All independent sets, including the empty one, in lexicographic order
    /// of their sorted cell lists.
    pub fn independent_sets(&self) -> IndependentSets<'_> {
        IndependentSets { graph: self, stack: vec![(0, 0)], fresh: true }
    }

    /// Number of independent sets of each size.
    pub fn count_by_size(&self) -> Vec<u64> {
        let mut out = vec![0u64; self.cells.len() + 1];
        for m in self.independent_sets() {
            out[m.count_ones() as usize] += 1;
        }
        while out.len() > 1 && *out.last().unwrap() == 0 {
            out.pop();
        }
        out
    }

    /// One-line debug dump: `"kind n; edges: (i,j)-(k,l), …"`.
    pub fn dump(&self) -> String {
        let edges: Vec<String> = self.edges().iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("{} {}; edges: {}", self.kind, self.n, edges.join(", "))
    }
}

impl fmt::Debug for CoreGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.dump())
    }
}

/// Depth-first enumeration of independent sets as bit masks.
pub struct IndependentSets<'g> {
    graph: &'g CoreGraph,
    // (current set, next candidate vertex)
    stack: Vec<(u128, usize)>,
    fresh: bool,
}

impl Iterator for IndependentSets<'_> {
    type Item = u128;

    fn next(&mut self) -> Option<u128> {
        if self.fresh {
            self.fresh = false;
            return Some(0);
        }
        let v = self.graph.cells.len();
        while let Some((set, from)) = self.stack.last_mut() {
            let set = *set;
            let mut k = *from;
            while k < v && self.graph.adj[k] & set != 0 {
                k += 1;
            }
            if k >= v {
                self.stack.pop();
                continue;
            }
            *from = k + 1;
            let child = set | 1 << k;
            self.stack.push((child, k + 1));
            return Some(child);
        }
        None
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Y,
    Z,
    S,
    T,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Y => "y",
            Label::Z => "z",
            Label::S => "s",
            Label::T => "t",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// `y` unless the member is the rightmost of its row, then `z`.
    Rl,
    Phi,
    Psi,
}

/// Labels of the members of an independent set under `scheme`.
pub fn label(members: &[Cell], scheme: Scheme, graph: &CoreGraph) -> Result<BTreeMap<Cell, Label>> {
    let mask = graph.mask_of(members.iter().copied())?;
    if !graph.is_independent(mask) {
        return Err(Error::InvalidInput("labelled set is not independent".into()));
    }
    Ok(label_unchecked(&graph.cells_of(mask), scheme))
}

pub(crate) fn label_unchecked(members: &[Cell], scheme: Scheme) -> BTreeMap<Cell, Label> {
    members
        .iter()
        .map(|&v| {
            let others = || members.iter().filter(move |&&w| w != v);
            let same_column = || others().any(|w| w.j == v.j);
            let l = match scheme {
                Scheme::Rl => {
                    if others().any(|w| w.i == v.i && w.j > v.j) {
                        Label::Y
                    } else {
                        Label::Z
                    }
                }
                Scheme::Phi => {
                    if !v.is_diagonal() {
                        Label::Y
                    } else if same_column() {
                        Label::Z
                    } else if others().any(|w| w.i <= v.i && w.j >= v.j) {
                        Label::S
                    } else {
                        Label::T
                    }
                }
                Scheme::Psi => {
                    if !v.is_diagonal() {
                        Label::Y
                    } else if same_column() {
                        Label::Z
                    } else {
                        Label::S
                    }
                }
            };
            (v, l)
        })
        .collect()
}
