//! Staircase grids and the staircase encoding.
//!
//! Cells use matrix coordinates, 1-based: row 1 is the topmost value band
//! (above the first left-to-right minimum) and column `n` is the band of
//! positions after the last minimum. The minima sit on the diagonal and are
//! not stored.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::perm::{standardize, Permutation};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Cell {
    pub i: usize,
    pub j: usize,
}

impl Cell {
    pub const fn new(i: usize, j: usize) -> Self {
        Cell { i, j }
    }

    pub fn is_diagonal(&self) -> bool {
        self.i == self.j
    }

    pub fn in_grid(&self, n: usize) -> bool {
        1 <= self.i && self.i <= self.j && self.j <= n
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.j)
    }
}

impl fmt::Debug for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cells of `B_n` in row-major order.
pub fn staircase_cells(n: usize) -> Vec<Cell> {
    (1..=n).flat_map(|i| (i..=n).map(move |j| Cell::new(i, j))).collect()
}

/// A grid size and a map from cells of `B_n` to non-empty permutations.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct StaircaseEncoding {
    n: usize,
    fill: BTreeMap<Cell, Permutation>,
}

impl StaircaseEncoding {
    pub fn new(n: usize, fill: BTreeMap<Cell, Permutation>) -> Result<Self> {
        for (c, p) in &fill {
            if !c.in_grid(n) {
                return Err(Error::InvalidEncoding(format!("cell {c} is outside B_{n}")));
            }
            if p.is_empty() {
                return Err(Error::InvalidEncoding(format!("cell {c} holds the empty permutation")));
            }
        }
        Ok(StaircaseEncoding { n, fill })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fill(&self) -> &BTreeMap<Cell, Permutation> {
        &self.fill
    }

    pub fn get(&self, c: Cell) -> Option<&Permutation> {
        self.fill.get(&c)
    }

    pub fn active_cells(&self) -> impl Iterator<Item = Cell> + '_ {
        self.fill.keys().copied()
    }

    /// Size of the permutation being encoded.
    pub fn weight(&self) -> usize {
        self.n + self.fill.values().map(Permutation::len).sum::<usize>()
    }
}

impl fmt::Display for StaircaseEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n)?;
        for (c, p) in &self.fill {
            write!(f, "; {c}={p}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for StaircaseEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The raw points of `sigma` in each cell, as (position, value) pairs in
/// position order, both zero-based. Returns the grid size too.
pub fn grid_points(sigma: &Permutation) -> (usize, BTreeMap<Cell, Vec<(usize, usize)>>) {
    let minima = sigma.left_to_right_minima();
    let n = minima.len();
    let min_vals: Vec<usize> = minima.iter().map(|&p| sigma.at(p)).collect();
    let mut cells: BTreeMap<Cell, Vec<(usize, usize)>> = BTreeMap::new();
    let mut next_min = 0;
    for q in 0..sigma.len() {
        if next_min < n && minima[next_min] == q {
            next_min += 1;
            continue;
        }
        let v = sigma.at(q);
        // min_vals is strictly decreasing
        let above = min_vals.partition_point(|&m| m > v);
        cells.entry(Cell::new(above + 1, next_min)).or_default().push((q, v));
    }
    (n, cells)
}

/// The staircase encoding `SE(sigma)`.
pub fn staircase_encode(sigma: &Permutation) -> StaircaseEncoding {
    let (n, points) = grid_points(sigma);
    let fill = points
        .into_iter()
        .map(|(c, pts)| {
            let vals: Vec<usize> = pts.iter().map(|&(_, v)| v).collect();
            (c, standardize(&vals).expect("distinct values"))
        })
        .collect();
    StaircaseEncoding { n, fill }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Direction {
    Increasing,
    Decreasing,
}

/// A run of consecutive entries `start..end` of one cell's permutation.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Segment {
    pub cell: Cell,
    pub start: usize,
    pub end: usize,
}

/// How cell contents are interleaved: per column, the left-to-right order of
/// segments; per row, the bottom-to-top order of cells.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Layout {
    pub columns: Vec<Vec<Segment>>,
    pub rows: Vec<Vec<Cell>>,
}

impl Layout {
    /// Column order of cells `(1..=j, j)` for the given direction.
    pub fn column_order(j: usize, dir: Direction) -> Vec<Cell> {
        match dir {
            Direction::Decreasing => (1..=j).map(|i| Cell::new(i, j)).collect(),
            Direction::Increasing => (1..=j).rev().map(|i| Cell::new(i, j)).collect(),
        }
    }

    /// Bottom-to-top order of cells `(i, i..=n)` for the given direction.
    pub fn row_order(i: usize, n: usize, dir: Direction) -> Vec<Cell> {
        match dir {
            Direction::Decreasing => (i..=n).rev().map(|j| Cell::new(i, j)).collect(),
            Direction::Increasing => (i..=n).map(|j| Cell::new(i, j)).collect(),
        }
    }

    /// The layout with whole cells and uniform directions.
    pub fn monotone(enc: &StaircaseEncoding, rows: Direction, cols: Direction) -> Layout {
        let n = enc.n();
        let whole = |c: Cell| enc.get(c).map(|p| Segment { cell: c, start: 0, end: p.len() });
        Layout {
            columns: (1..=n).map(|j| Layout::column_order(j, cols).into_iter().filter_map(whole).collect()).collect(),
            rows: (1..=n).map(|i| Layout::row_order(i, n, rows)).collect(),
        }
    }
}

/// Places minima on the diagonal and the cell contents of `enc` according to
/// `layout`. Every entry of every cell must be covered by exactly one segment.
pub fn assemble(enc: &StaircaseEncoding, layout: &Layout) -> Result<Permutation> {
    let n = enc.n();
    if layout.columns.len() != n || layout.rows.len() != n {
        return Err(Error::InvalidEncoding("layout does not match the grid size".into()));
    }
    let size = enc.weight();
    // horizontal rank of every (cell, index)
    let mut xpos: BTreeMap<Cell, Vec<Option<usize>>> =
        enc.fill().iter().map(|(c, p)| (*c, vec![None; p.len()])).collect();
    let mut min_x = vec![0usize; n + 1];
    let mut x = 0;
    for j in 1..=n {
        min_x[j] = x;
        x += 1;
        for seg in &layout.columns[j - 1] {
            if seg.cell.j != j {
                return Err(Error::InvalidEncoding(format!("segment of {} placed in column {j}", seg.cell)));
            }
            let slots = xpos
                .get_mut(&seg.cell)
                .ok_or_else(|| Error::InvalidEncoding(format!("segment refers to empty cell {}", seg.cell)))?;
            if seg.start > seg.end || seg.end > slots.len() {
                return Err(Error::InvalidEncoding(format!("segment out of range in {}", seg.cell)));
            }
            for t in seg.start..seg.end {
                if slots[t].replace(x).is_some() {
                    return Err(Error::InvalidEncoding(format!("entry {t} of {} placed twice", seg.cell)));
                }
                x += 1;
            }
        }
    }
    // vertical rank, bottom up: min_n, row n, min_{n-1}, …, min_1, row 1
    let mut min_y = vec![0usize; n + 1];
    let mut ypos: BTreeMap<Cell, usize> = BTreeMap::new();
    let mut y = 0;
    for i in (1..=n).rev() {
        min_y[i] = y;
        y += 1;
        let mut seen = Vec::new();
        for &c in &layout.rows[i - 1] {
            if c.i != i || seen.contains(&c) {
                return Err(Error::InvalidEncoding(format!("bad row order for row {i}")));
            }
            seen.push(c);
            if let Some(p) = enc.get(c) {
                ypos.insert(c, y);
                y += p.len();
            }
        }
    }
    if ypos.len() != enc.fill().len() {
        return Err(Error::InvalidEncoding("row orders miss an active cell".into()));
    }
    let mut out = vec![usize::MAX; size];
    for j in 1..=n {
        out[min_x[j]] = min_y[j];
    }
    for (c, slots) in &xpos {
        let p = &enc.fill()[c];
        for (t, slot) in slots.iter().enumerate() {
            let x = slot.ok_or_else(|| Error::InvalidEncoding(format!("entry {t} of {c} not placed")))?;
            out[x] = ypos[c] + p.at(t);
        }
    }
    Permutation::from_one_line(&out.iter().map(|v| v + 1).collect::<Vec<_>>())
}

/// The permutation with the given row and column interleavings whose
/// staircase encoding is `enc`.
pub fn grid_realize(enc: &StaircaseEncoding, rows: Direction, cols: Direction) -> Result<Permutation> {
    assemble(enc, &Layout::monotone(enc, rows, cols))
}

/// `grid_realize` with decreasing rows and columns.
pub fn uperm(enc: &StaircaseEncoding) -> Permutation {
    grid_realize(enc, Direction::Decreasing, Direction::Decreasing).expect("valid encoding")
}

/// `grid_realize` with increasing rows and columns.
pub fn dperm(enc: &StaircaseEncoding) -> Permutation {
    grid_realize(enc, Direction::Increasing, Direction::Increasing).expect("valid encoding")
}

/// How the active cells of one row or column are interleaved.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Interleaving {
    Increasing,
    Decreasing,
    /// At most one active cell.
    Both,
    Neither,
}

impl Interleaving {
    pub fn allows(&self, dir: Direction) -> bool {
        match self {
            Interleaving::Both => true,
            Interleaving::Neither => false,
            Interleaving::Increasing => dir == Direction::Increasing,
            Interleaving::Decreasing => dir == Direction::Decreasing,
        }
    }
}

/// Per-row and per-column interleavings, indexed from row/column 1.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct GridProfile {
    pub rows: Vec<Interleaving>,
    pub columns: Vec<Interleaving>,
}

impl GridProfile {
    pub fn rows_allow(&self, dir: Direction) -> bool {
        self.rows.iter().all(|r| r.allows(dir))
    }

    pub fn columns_allow(&self, dir: Direction) -> bool {
        self.columns.iter().all(|c| c.allows(dir))
    }
}

pub fn row_column_profile(sigma: &Permutation) -> GridProfile {
    profile_impl(sigma, false)
}

/// As [`row_column_profile`], ignoring diagonal cells.
pub fn row_column_profile_off_diagonal(sigma: &Permutation) -> GridProfile {
    profile_impl(sigma, true)
}

fn profile_impl(sigma: &Permutation, exclude_diagonal: bool) -> GridProfile {
    let (n, points) = grid_points(sigma);
    let keep = |c: &Cell| !(exclude_diagonal && c.is_diagonal());
    // Each block is summarised by (min, max) of the relevant coordinate.
    let span = |pts: &[(usize, usize)], by_value: bool| {
        let it = pts.iter().map(|&(p, v)| if by_value { v } else { p });
        (it.clone().min().unwrap(), it.max().unwrap())
    };
    let classify = |blocks: Vec<(usize, usize)>, forward: Direction| {
        if blocks.len() <= 1 {
            return Interleaving::Both;
        }
        // blocks are listed in the order in which "forward" places them first-to-last
        let ascending = blocks.windows(2).all(|w| w[0].1 < w[1].0);
        let descending = blocks.windows(2).all(|w| w[0].0 > w[1].1);
        let flip = |d: Direction| match d {
            Direction::Increasing => Direction::Decreasing,
            Direction::Decreasing => Direction::Increasing,
        };
        let named = |d: Direction| match d {
            Direction::Increasing => Interleaving::Increasing,
            Direction::Decreasing => Interleaving::Decreasing,
        };
        match (ascending, descending) {
            (true, _) => named(forward),
            (_, true) => named(flip(forward)),
            _ => Interleaving::Neither,
        }
    };
    // Rows: cells left to right; increasing when their value blocks ascend.
    let rows = (1..=n)
        .map(|i| {
            let blocks = (i..=n)
                .map(|j| Cell::new(i, j))
                .filter(keep)
                .filter_map(|c| points.get(&c).map(|pts| span(pts, true)))
                .collect();
            classify(blocks, Direction::Increasing)
        })
        .collect();
    // Columns: cells top to bottom; decreasing when their position blocks ascend.
    let columns = (1..=n)
        .map(|j| {
            let blocks = (1..=j)
                .map(|i| Cell::new(i, j))
                .filter(keep)
                .filter_map(|c| points.get(&c).map(|pts| span(pts, false)))
                .collect();
            classify(blocks, Direction::Decreasing)
        })
        .collect();
    GridProfile { rows, columns }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::{basis, perm};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn enc(n: usize, cells: &[((usize, usize), &str)]) -> StaircaseEncoding {
        StaircaseEncoding::new(n, cells.iter().map(|&((i, j), p)| (Cell::new(i, j), perm(p))).collect()).unwrap()
    }

    #[test]
    fn encode_examples() {
        let e = staircase_encode(&perm("659817432"));
        assert_eq!(e, enc(3, &[((1, 2), "21"), ((1, 3), "1"), ((3, 3), "321")]));
        assert_eq!(e.to_string(), "3; (1,2)=21; (1,3)=1; (3,3)=321");
        assert_eq!(staircase_encode(&perm("659814327")), staircase_encode(&perm("659718432")));
        assert_eq!(staircase_encode(&perm("321")), enc(3, &[]));
        assert_eq!(staircase_encode(&Permutation::empty()), enc(0, &[]));
    }

    #[test]
    fn realize_examples() {
        let one = enc(1, &[((1, 1), "1")]);
        for r in [Direction::Increasing, Direction::Decreasing] {
            for c in [Direction::Increasing, Direction::Decreasing] {
                assert_eq!(grid_realize(&one, r, c).unwrap(), perm("12"));
            }
        }
        let e = enc(2, &[((1, 2), "1"), ((2, 2), "1")]);
        assert_eq!(uperm(&e), perm("3142"));
        assert_eq!(dperm(&e), perm("3124"));
    }

    #[test]
    fn rejects_cells_outside_grid() {
        let bad = BTreeMap::from([(Cell::new(2, 1), perm("1"))]);
        assert!(StaircaseEncoding::new(2, bad).is_err());
        let empty = BTreeMap::from([(Cell::new(1, 1), Permutation::empty())]);
        assert!(StaircaseEncoding::new(1, empty).is_err());
    }

    #[test]
    fn realize_inverts_encode_on_random_encodings() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = rng.gen_range(0..=4);
            let cells = staircase_cells(n);
            let mut fill = BTreeMap::new();
            let mut budget = 8 - n;
            for c in cells {
                if budget == 0 || rng.gen_bool(0.5) {
                    continue;
                }
                let k = rng.gen_range(1..=budget.min(3));
                budget -= k;
                let all = Permutation::all(k);
                fill.insert(c, all[rng.gen_range(0..all.len())].clone());
            }
            let e = StaircaseEncoding::new(n, fill).unwrap();
            for r in [Direction::Increasing, Direction::Decreasing] {
                for c in [Direction::Increasing, Direction::Decreasing] {
                    assert_eq!(staircase_encode(&grid_realize(&e, r, c).unwrap()), e);
                }
            }
        }
    }

    #[test]
    fn weight_is_conserved() {
        for n in 0..=7 {
            for s in Permutation::all(n) {
                assert_eq!(staircase_encode(&s).weight(), n);
            }
        }
    }

    #[test]
    fn layout_segments_split_a_cell() {
        // column 2 reads: first entry of (2,2), then (1,2), then the rest of (2,2)
        let e = enc(2, &[((1, 2), "1"), ((2, 2), "21")]);
        let layout = Layout {
            columns: vec![
                vec![],
                vec![
                    Segment { cell: Cell::new(2, 2), start: 0, end: 1 },
                    Segment { cell: Cell::new(1, 2), start: 0, end: 1 },
                    Segment { cell: Cell::new(2, 2), start: 1, end: 2 },
                ],
            ],
            rows: vec![Layout::row_order(1, 2, Direction::Increasing), Layout::row_order(2, 2, Direction::Increasing)],
        };
        let s = assemble(&e, &layout).unwrap();
        assert_eq!(s, perm("41352"));
        assert_eq!(staircase_encode(&s), e);
        let mut short = layout.clone();
        short.columns[1].pop();
        assert!(assemble(&e, &short).is_err());
    }

    #[test]
    fn profiles() {
        let p = row_column_profile(&perm("321"));
        assert!(p.rows.iter().chain(&p.columns).all(|&x| x == Interleaving::Both));
        let p = row_column_profile(&perm("3142"));
        assert_eq!(p.columns[1], Interleaving::Decreasing);
        let p = row_column_profile(&perm("3124"));
        assert_eq!(p.columns[1], Interleaving::Increasing);
    }

    #[test]
    fn interleaving_lemma() {
        let cases = [
            ("2314", true, Direction::Decreasing),
            ("3124", false, Direction::Decreasing),
            ("2413", true, Direction::Increasing),
            ("3142", false, Direction::Increasing),
        ];
        for n in 0..=7 {
            for s in Permutation::all(n) {
                let prof = row_column_profile(&s);
                for (pat, is_row, dir) in cases {
                    if basis(pat).admits(&s) {
                        let ok = if is_row { prof.rows_allow(dir) } else { prof.columns_allow(dir) };
                        assert!(ok, "{s} avoids {pat}");
                    }
                }
            }
        }
    }
}
