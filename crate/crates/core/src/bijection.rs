//! Weighted independent sets on one side, permutations with a fixed number
//! of left-to-right minima on the other, and the maps between them.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_graph::{build_core, label_unchecked, CoreGraph, CoreKind, Label, Scheme};
use crate::enumerator::split_template;
use crate::error::{Error, Result};
use crate::grid::{assemble, grid_points, grid_realize, staircase_encode, Cell, Direction, Layout, Segment, StaircaseEncoding};
use crate::perm::{perm, Basis, ClassOracle, Permutation};

/// Largest permutation size the lab will materialize.
pub const MAX_TOTAL: usize = 10;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BijectionTheorem {
    Thm123,
    Thm132,
    InfUpcore,
    InfDowncore,
    InfRdcdrucu,
    InfCuCdRu,
    InfRdCdCu,
    InfRdCu,
    InfRd2134,
    InfRu2143,
}

impl BijectionTheorem {
    pub const ALL: [BijectionTheorem; 10] = [
        BijectionTheorem::Thm123,
        BijectionTheorem::Thm132,
        BijectionTheorem::InfUpcore,
        BijectionTheorem::InfDowncore,
        BijectionTheorem::InfRdcdrucu,
        BijectionTheorem::InfCuCdRu,
        BijectionTheorem::InfRdCdCu,
        BijectionTheorem::InfRdCu,
        BijectionTheorem::InfRd2134,
        BijectionTheorem::InfRu2143,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            BijectionTheorem::Thm123 => "thm_123",
            BijectionTheorem::Thm132 => "thm_132",
            BijectionTheorem::InfUpcore => "inf_upcore",
            BijectionTheorem::InfDowncore => "inf_downcore",
            BijectionTheorem::InfRdcdrucu => "inf_rdcdrucu",
            BijectionTheorem::InfCuCdRu => "inf_cu_cd_ru",
            BijectionTheorem::InfRdCdCu => "inf_rd_cd_cu",
            BijectionTheorem::InfRdCu => "inf_rd_cu",
            BijectionTheorem::InfRd2134 => "inf_rd_2134",
            BijectionTheorem::InfRu2143 => "inf_ru_2143",
        }
    }

    pub fn required(&self) -> Vec<Permutation> {
        let names: &[&str] = match self {
            BijectionTheorem::Thm123 => &["123"],
            BijectionTheorem::Thm132 => &["132"],
            BijectionTheorem::InfUpcore => &["2314", "3124"],
            BijectionTheorem::InfDowncore => &["2413", "3142"],
            BijectionTheorem::InfRdcdrucu => &["2413", "3142", "2314", "3124"],
            BijectionTheorem::InfCuCdRu => &["2314", "3124", "3142"],
            BijectionTheorem::InfRdCdCu => &["2413", "3142", "3124"],
            BijectionTheorem::InfRdCu => &["2413", "3124"],
            BijectionTheorem::InfRd2134 => &["2413", "2134"],
            BijectionTheorem::InfRu2143 => &["2314", "2143"],
        };
        names.iter().map(|s| perm(s)).collect()
    }

    pub fn core(&self) -> CoreKind {
        match self {
            BijectionTheorem::Thm123 | BijectionTheorem::InfUpcore => CoreKind::U,
            BijectionTheorem::Thm132 | BijectionTheorem::InfDowncore => CoreKind::D,
            BijectionTheorem::InfRdcdrucu => CoreKind::UDRC,
            BijectionTheorem::InfCuCdRu | BijectionTheorem::InfRdCdCu => CoreKind::UDC,
            BijectionTheorem::InfRdCu => CoreKind::UD,
            BijectionTheorem::InfRd2134 => CoreKind::DmUR,
            BijectionTheorem::InfRu2143 => CoreKind::UmDR,
        }
    }

    pub fn scheme(&self) -> Option<Scheme> {
        match self {
            BijectionTheorem::InfRdCdCu | BijectionTheorem::InfRdCu => Some(Scheme::Rl),
            BijectionTheorem::InfRd2134 => Some(Scheme::Phi),
            BijectionTheorem::InfRu2143 => Some(Scheme::Psi),
            _ => None,
        }
    }

    /// Row and column directions of the realized permutation. For the merged
    /// cores the column direction applies to off-diagonal cells only.
    pub fn directions(&self) -> (Direction, Direction) {
        use Direction::*;
        match self {
            BijectionTheorem::Thm123
            | BijectionTheorem::InfUpcore
            | BijectionTheorem::InfRdcdrucu
            | BijectionTheorem::InfCuCdRu => (Decreasing, Decreasing),
            BijectionTheorem::Thm132 | BijectionTheorem::InfDowncore | BijectionTheorem::InfRdCdCu => {
                (Increasing, Increasing)
            }
            BijectionTheorem::InfRdCu | BijectionTheorem::InfRd2134 => (Increasing, Decreasing),
            BijectionTheorem::InfRu2143 => (Decreasing, Increasing),
        }
    }

    /// Whether z-labelled diagonal weights lose their maximum and split
    /// around the column.
    pub fn splits_z(&self) -> bool {
        matches!(self, BijectionTheorem::InfRd2134 | BijectionTheorem::InfRu2143)
    }

    fn allows_parameters(&self) -> bool {
        !matches!(self, BijectionTheorem::Thm123 | BijectionTheorem::Thm132)
    }

    /// Weight classes by label as (patterns, exclude "1"). Unlabelled
    /// theorems use `Label::Y` for every member.
    fn weight_classes(&self, p: &[Permutation]) -> Vec<(Label, Vec<Permutation>, bool)> {
        let with = |base: &[&str]| -> Vec<Permutation> { base.iter().map(|s| perm(s)).chain(p.iter().cloned()).collect() };
        let stripped = |base: &str| -> Vec<Permutation> {
            std::iter::once(perm(base)).chain(p.iter().map(Permutation::bstrip)).collect()
        };
        let required: Vec<String> = self.required().iter().map(|q| q.to_string()).collect();
        let req: Vec<&str> = required.iter().map(String::as_str).collect();
        match self {
            BijectionTheorem::Thm123 => vec![(Label::Y, vec![perm("12")], false)],
            BijectionTheorem::Thm132 => vec![(Label::Y, vec![perm("21")], false)],
            BijectionTheorem::InfRdCdCu | BijectionTheorem::InfRdCu => {
                vec![(Label::Y, stripped("312"), false), (Label::Z, with(&req), false)]
            }
            BijectionTheorem::InfRd2134 => vec![
                (Label::Y, vec![perm("12")], false),
                (Label::Z, with(&req), true),
                (Label::S, stripped("213"), false),
                (Label::T, with(&req), false),
            ],
            BijectionTheorem::InfRu2143 => vec![
                (Label::Y, vec![perm("21")], false),
                (Label::Z, with(&req), true),
                (Label::S, with(&req), false),
            ],
            _ => vec![(Label::Y, with(&req), false)],
        }
    }
}

impl fmt::Display for BijectionTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for BijectionTheorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BijectionTheorem {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BijectionTheorem::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Unsupported(format!("no bijection for theorem {s:?}")))
    }
}

impl TryFrom<String> for BijectionTheorem {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<BijectionTheorem> for String {
    fn from(t: BijectionTheorem) -> String {
        t.as_str().to_string()
    }
}

/// An independent set of a core graph with labels and weights.
#[derive(Clone, PartialEq, Eq)]
pub struct WeightedSet {
    pub graph: Arc<CoreGraph>,
    /// Empty for unlabelled theorems.
    pub labels: BTreeMap<Cell, Label>,
    pub weights: BTreeMap<Cell, Permutation>,
}

impl WeightedSet {
    pub fn members(&self) -> impl Iterator<Item = Cell> + '_ {
        self.weights.keys().copied()
    }

    pub fn label(&self, c: Cell) -> Option<Label> {
        self.labels.get(&c).copied()
    }
}

impl fmt::Display for WeightedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.graph.n())?;
        for (c, w) in &self.weights {
            match self.labels.get(c) {
                Some(l) => write!(f, "; {c}[{l}]={w}")?,
                None => write!(f, "; {c}={w}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for WeightedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Maps a weighted set to its permutation.
pub fn realize(theorem: BijectionTheorem, ws: &WeightedSet) -> Result<Permutation> {
    let n = ws.graph.n();
    let mut fill = BTreeMap::new();
    let mut alpha = BTreeMap::new();
    for (&c, w) in &ws.weights {
        if theorem.splits_z() && ws.label(c) == Some(Label::Z) {
            if w.len() < 2 {
                return Err(Error::InvalidInput(format!("z-weight {w} at {c} needs size at least 2")));
            }
            let top = w.values().iter().position(|&v| v as usize + 1 == w.len()).expect("non-empty");
            fill.insert(c, w.delete(top));
            alpha.insert(c, top);
        } else {
            fill.insert(c, w.clone());
        }
    }
    let enc = StaircaseEncoding::new(n, fill)?;
    let (rows, cols) = theorem.directions();
    if !theorem.splits_z() {
        return grid_realize(&enc, rows, cols);
    }
    let columns = (1..=n)
        .map(|j| {
            let diag = Cell::new(j, j);
            let mut segs = Vec::new();
            let len = enc.get(diag).map_or(0, Permutation::len);
            let a = alpha.get(&diag).copied().unwrap_or(len);
            if a > 0 {
                segs.push(Segment { cell: diag, start: 0, end: a });
            }
            for c in Layout::column_order(j, cols) {
                if !c.is_diagonal() {
                    if let Some(p) = enc.get(c) {
                        segs.push(Segment { cell: c, start: 0, end: p.len() });
                    }
                }
            }
            if a < len {
                segs.push(Segment { cell: diag, start: a, end: len });
            }
            segs
        })
        .collect();
    let layout = Layout { columns, rows: (1..=n).map(|i| Layout::row_order(i, n, rows)).collect() };
    assemble(&enc, &layout)
}

/// The inverse of [`realize`]: staircase encoding plus label reconstruction.
/// A z-cell gets its maximum back between the entries left of the column's
/// off-diagonal points and those right of them.
pub fn encode(theorem: BijectionTheorem, sigma: &Permutation) -> Result<WeightedSet> {
    let (n, points) = grid_points(sigma);
    let enc = staircase_encode(sigma);
    let graph = build_core(theorem.core(), n)?;
    let members: Vec<Cell> = enc.active_cells().collect();
    let mask = graph.mask_of(members.iter().copied())?;
    if !graph.is_independent(mask) {
        return Err(Error::InvalidEncoding(format!("active cells of {sigma} are not independent in {}", theorem.core())));
    }
    let labels = theorem.scheme().map(|s| label_unchecked(&members, s)).unwrap_or_default();
    let mut weights = BTreeMap::new();
    for &c in &members {
        let stored = enc.get(c).expect("active").clone();
        if theorem.splits_z() && labels.get(&c) == Some(&Label::Z) {
            let column: Vec<usize> = points
                .iter()
                .filter(|(d, _)| d.j == c.j && !d.is_diagonal())
                .flat_map(|(_, pts)| pts.iter().map(|&(q, _)| q))
                .collect();
            let lo = column.iter().min().copied().unwrap_or(usize::MAX);
            let hi = column.iter().max().copied().unwrap_or(0);
            let own = &points[&c];
            if own.iter().any(|&(q, _)| lo < q && q < hi) {
                return Err(Error::InvalidEncoding(format!("{c} of {sigma} interleaves its column")));
            }
            let a = own.iter().filter(|&&(q, _)| q < lo).count();
            weights.insert(c, stored.insert_max(a));
        } else {
            weights.insert(c, stored);
        }
    }
    Ok(WeightedSet { graph: Arc::new(graph), labels, weights })
}

/// Weight classes and class members of one theorem and parameter set,
/// materialized up to a size bound.
pub struct BijectionLab {
    theorem: BijectionTheorem,
    basis: Basis,
    p: Vec<Permutation>,
    max_total: usize,
    // label -> members by size, with "1" already removed where excluded
    classes: BTreeMap<Label, Vec<Vec<Permutation>>>,
    // size -> class members
    target: Vec<Vec<Permutation>>,
}

impl BijectionLab {
    /// `basis` must be the theorem's patterns plus `1 ⊕ π` for each `π ∈ P`.
    pub fn new(theorem: BijectionTheorem, basis: &Basis, max_total: usize) -> Result<Self> {
        if max_total > MAX_TOTAL {
            return Err(Error::ResourceLimit { basis: basis.to_string(), requested: max_total, limit: MAX_TOTAL });
        }
        let p = split_template(basis, &theorem.required())
            .ok_or_else(|| Error::InvalidInput(format!("{basis} does not fit the template of {theorem}")))?;
        if !theorem.allows_parameters() && !p.is_empty() {
            return Err(Error::InvalidInput(format!("{theorem} takes no extra patterns")));
        }
        let classes = theorem
            .weight_classes(&p)
            .into_iter()
            .map(|(label, patterns, exclude_one)| {
                let mut levels = vec![Vec::new(); max_total + 1];
                // ε in the basis empties the class
                if !patterns.iter().any(Permutation::is_empty) {
                    let mut oracle = ClassOracle::new(Basis::new(patterns).expect("non-empty patterns"));
                    for (k, level) in levels.iter_mut().enumerate().skip(1) {
                        if !(exclude_one && k == 1) {
                            *level = oracle.level(k).to_vec();
                        }
                    }
                }
                (label, levels)
            })
            .collect();
        let mut oracle = ClassOracle::new(basis.clone());
        let target = (0..=max_total).map(|k| oracle.level(k).to_vec()).collect();
        Ok(BijectionLab { theorem, basis: basis.clone(), p, max_total, classes, target })
    }

    pub fn theorem(&self) -> BijectionTheorem {
        self.theorem
    }

    pub fn p(&self) -> &[Permutation] {
        &self.p
    }

    fn class_of(&self, label: Option<Label>) -> &[Vec<Permutation>] {
        &self.classes[&label.unwrap_or(Label::Y)]
    }

    fn check_total(&self, total: usize) -> Result<()> {
        if total > self.max_total {
            return Err(Error::ResourceLimit { basis: self.basis.to_string(), requested: total, limit: self.max_total });
        }
        Ok(())
    }

    /// Calls `visit` on every weighted set with `n` minima and size `total`.
    pub fn for_each_weighted_set(&self, n: usize, total: usize, mut visit: impl FnMut(WeightedSet)) -> Result<()> {
        self.check_total(total)?;
        if n > total {
            return Ok(());
        }
        let graph = Arc::new(build_core(self.theorem.core(), n)?);
        for mask in graph.independent_sets() {
            let members = graph.cells_of(mask);
            let labels = self.theorem.scheme().map(|s| label_unchecked(&members, s)).unwrap_or_default();
            let slots: Vec<(Cell, &[Vec<Permutation>], usize)> = members
                .iter()
                .map(|&c| {
                    let l = labels.get(&c).copied();
                    let lost = usize::from(self.theorem.splits_z() && l == Some(Label::Z));
                    (c, self.class_of(l), lost)
                })
                .collect();
            let mut chosen = BTreeMap::new();
            fill_slots(&slots, total - n, &mut chosen, &mut |weights| {
                visit(WeightedSet { graph: Arc::clone(&graph), labels: labels.clone(), weights: weights.clone() })
            });
        }
        Ok(())
    }

    pub fn weighted_sets(&self, n: usize, total: usize) -> Result<Vec<WeightedSet>> {
        let mut out = Vec::new();
        self.for_each_weighted_set(n, total, |w| out.push(w))?;
        Ok(out)
    }

    /// Whether every weight lies in the class its label asks for.
    pub fn is_valid(&self, ws: &WeightedSet) -> bool {
        ws.graph.kind() == self.theorem.core()
            && ws.weights.iter().all(|(&c, w)| {
                let levels = self.class_of(ws.label(c));
                w.len() < levels.len() && levels[w.len()].binary_search(w).is_ok()
            })
    }

    /// Members of the class of size `total` with `n` minima.
    pub fn class_members(&self, n: usize, total: usize) -> Result<Vec<Permutation>> {
        self.check_total(total)?;
        Ok(self.target[total].iter().filter(|s| s.left_to_right_minima().len() == n).cloned().collect())
    }

    fn check_pair(&self, n: usize, total: usize) -> Result<PairReport> {
        let members = self.class_members(n, total)?;
        let wanted: HashSet<&Permutation> = members.iter().collect();
        let mut seen = HashSet::new();
        let mut count = 0;
        let mut mismatch = None;
        self.for_each_weighted_set(n, total, |ws| {
            count += 1;
            if mismatch.is_some() {
                return;
            }
            match realize(self.theorem, &ws) {
                Err(e) => mismatch = Some(format!("{ws}: {e}")),
                Ok(s) if !wanted.contains(&s) => mismatch = Some(format!("{ws} realizes {s}, outside the class")),
                Ok(s) if !seen.insert(s.clone()) => mismatch = Some(format!("{ws} realizes {s} a second time")),
                Ok(_) => {}
            }
        })?;
        if mismatch.is_none() {
            mismatch = members.iter().find(|s| !seen.contains(*s)).map(|s| format!("{s} is not realized"));
        }
        if mismatch.is_none() {
            for s in &members {
                let back = encode(self.theorem, s).and_then(|ws| {
                    if self.is_valid(&ws) {
                        realize(self.theorem, &ws)
                    } else {
                        Err(Error::InvalidEncoding(format!("{ws} has a weight outside its class")))
                    }
                });
                match back {
                    Ok(t) if t == *s => {}
                    Ok(t) => {
                        mismatch = Some(format!("{s} round-trips to {t}"));
                        break;
                    }
                    Err(e) => {
                        mismatch = Some(format!("{s} does not encode: {e}"));
                        break;
                    }
                }
            }
        }
        Ok(PairReport { n, total, weighted_sets: count, class_members: members.len(), pass: mismatch.is_none(), mismatch })
    }

    /// Checks every `(n, total)` with `total ≤ max_total`.
    pub fn verify(&self) -> BijectionReport {
        let pairs: Vec<(usize, usize)> =
            (0..=self.max_total).flat_map(|total| (0..=total).map(move |n| (n, total))).filter(|&(n, t)| n > 0 || t == 0).collect();
        let pairs: Vec<PairReport> = pairs
            .into_par_iter()
            .map(|(n, total)| {
                self.check_pair(n, total).unwrap_or_else(|e| PairReport {
                    n,
                    total,
                    weighted_sets: 0,
                    class_members: 0,
                    pass: false,
                    mismatch: Some(e.to_string()),
                })
            })
            .collect();
        let first_counterexample = pairs.iter().find_map(|r| r.mismatch.clone());
        BijectionReport {
            theorem: self.theorem,
            basis: self.basis.to_string(),
            p: self.p.iter().map(|q| q.to_string()).collect(),
            max_total: self.max_total,
            pass: first_counterexample.is_none(),
            first_counterexample,
            pairs,
        }
    }
}

fn fill_slots(
    slots: &[(Cell, &[Vec<Permutation>], usize)],
    remaining: usize,
    chosen: &mut BTreeMap<Cell, Permutation>,
    emit: &mut dyn FnMut(&BTreeMap<Cell, Permutation>),
) {
    let Some((&(c, levels, lost), rest)) = slots.split_first() else {
        if remaining == 0 {
            emit(chosen);
        }
        return;
    };
    // every later slot needs at least one point
    let Some(room) = remaining.checked_sub(rest.len()) else { return };
    for points in 1..=room {
        let size = points + lost;
        if size >= levels.len() {
            break;
        }
        for w in &levels[size] {
            chosen.insert(c, w.clone());
            fill_slots(rest, remaining - points, chosen, emit);
        }
    }
    chosen.remove(&c);
}

/// Counts for one grid size and permutation size.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PairReport {
    pub n: usize,
    pub total: usize,
    pub weighted_sets: usize,
    pub class_members: usize,
    pub pass: bool,
    pub mismatch: Option<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct BijectionReport {
    pub theorem: BijectionTheorem,
    pub basis: String,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    pub max_total: usize,
    pub pass: bool,
    pub first_counterexample: Option<String>,
    pub pairs: Vec<PairReport>,
}

impl fmt::Display for BijectionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        writeln!(f, "{} on {} up to size {}: {verdict}", self.theorem, self.basis, self.max_total)?;
        for r in &self.pairs {
            write!(f, "  n={} total={}: {} sets, {} permutations", r.n, r.total, r.weighted_sets, r.class_members)?;
            match &r.mismatch {
                Some(m) => writeln!(f, " FAIL ({m})")?,
                None => writeln!(f)?,
            }
        }
        Ok(())
    }
}

/// Every weighted set of the theorem with `n` minima and size `total`.
pub fn weighted_sets(theorem: BijectionTheorem, basis: &Basis, n: usize, total: usize) -> Result<Vec<WeightedSet>> {
    if n > total {
        return Err(Error::InvalidInput(format!("{n} minima exceed size {total}")));
    }
    BijectionLab::new(theorem, basis, total)?.weighted_sets(n, total)
}

pub fn verify_bijection(theorem: BijectionTheorem, basis: &Basis, max_total: usize) -> Result<BijectionReport> {
    Ok(BijectionLab::new(theorem, basis, max_total)?.verify())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::perm::basis;

    fn ws(theorem: BijectionTheorem, n: usize, cells: &[((usize, usize), &str)]) -> WeightedSet {
        let graph = build_core(theorem.core(), n).unwrap();
        let weights: BTreeMap<Cell, Permutation> = cells.iter().map(|&((i, j), w)| (Cell::new(i, j), perm(w))).collect();
        let members: Vec<Cell> = weights.keys().copied().collect();
        let labels = theorem.scheme().map(|s| label_unchecked(&members, s)).unwrap_or_default();
        WeightedSet { graph: Arc::new(graph), labels, weights }
    }

    #[test]
    fn single_cell_gives_12() {
        for t in BijectionTheorem::ALL {
            assert_eq!(realize(t, &ws(t, 1, &[((1, 1), "1")])).unwrap(), perm("12"), "{t}");
        }
    }

    #[test]
    fn upcore_column_example() {
        let w = ws(BijectionTheorem::InfUpcore, 2, &[((1, 2), "1"), ((2, 2), "1")]);
        assert_eq!(realize(BijectionTheorem::InfUpcore, &w).unwrap(), perm("3142"));
    }

    #[test]
    fn z_split_example() {
        let t = BijectionTheorem::InfRd2134;
        let w = ws(t, 2, &[((1, 2), "1"), ((2, 2), "231")]);
        assert_eq!(w.label(Cell::new(2, 2)), Some(Label::Z));
        let s = realize(t, &w).unwrap();
        assert_eq!(s, perm("41352"));
        assert!(s.avoids_all(&[perm("2134"), perm("2413")]));
        assert_eq!(encode(t, &s).unwrap(), w);
    }

    #[test]
    fn small_counts() {
        let sets = weighted_sets(BijectionTheorem::Thm123, &basis("123"), 1, 1).unwrap();
        assert_eq!(sets.len(), 1);
        assert!(sets[0].weights.is_empty());
        let sets = weighted_sets(BijectionTheorem::InfRd2134, &basis("2134,2413"), 1, 2).unwrap();
        assert_eq!(sets.len(), 1);
        assert_eq!(sets[0].label(Cell::new(1, 1)), Some(Label::T));
        assert_eq!(sets[0].weights[&Cell::new(1, 1)], perm("1"));
        let up = weighted_sets(BijectionTheorem::InfUpcore, &basis("2314,3124"), 2, 4).unwrap();
        let lab = BijectionLab::new(BijectionTheorem::InfUpcore, &basis("2314,3124"), 4).unwrap();
        assert_eq!(up.len(), lab.class_members(2, 4).unwrap().len());
    }

    #[test]
    fn malformed_z_weight() {
        let t = BijectionTheorem::InfRu2143;
        let w = ws(t, 2, &[((1, 2), "1"), ((2, 2), "1")]);
        assert!(realize(t, &w).is_err());
    }

    #[test]
    fn template_mismatch_is_an_error() {
        assert!(BijectionLab::new(BijectionTheorem::InfUpcore, &basis("2413,3142"), 5).is_err());
        assert!(BijectionLab::new(BijectionTheorem::Thm123, &basis("123,1432"), 5).is_err());
        assert!("inf_nothing".parse::<BijectionTheorem>().is_err());
    }

    #[test]
    fn small_bijections_pass() {
        for (t, b) in [
            (BijectionTheorem::Thm123, "123"),
            (BijectionTheorem::Thm132, "132"),
            (BijectionTheorem::InfDowncore, "2413,3142"),
            (BijectionTheorem::InfRd2134, "2134,2413"),
            (BijectionTheorem::InfRu2143, "2314,2143"),
        ] {
            let r = verify_bijection(t, &basis(b), 6).unwrap();
            assert!(r.pass, "{r}");
        }
    }
}
