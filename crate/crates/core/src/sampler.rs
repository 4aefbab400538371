//! Uniform random generation for classes with an up-core or down-core
//! decomposition, by the recursive method on exact counts.

use std::collections::{BTreeMap, HashMap};

use num_bigint::{BigUint, RandBigInt};
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::core_graph::{build_core, CoreGraph, CoreKind, MAX_GRID};
use crate::enumerator::{Enumerator, TheoremId};
use crate::error::{Error, Result};
use crate::gf;
use crate::grid::{dperm, uperm, Cell, StaircaseEncoding};
use crate::perm::{Basis, ClassOracle, Permutation, Symmetry};
use crate::series::Series;

// nested weight classes deeper than this are a bug, not a class
const MAX_DEPTH: usize = 8;

/// Exact counts behind the sampler.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CountTable {
    pub order: usize,
    /// `c_0..=c_order` of the class.
    pub class_counts: Vec<BigUint>,
    /// `set_counts[n][k]`: size-`k` independent sets of the core of `B_n`.
    pub set_counts: Vec<Vec<u128>>,
    /// Counts of the non-empty weight class by size, `weight_counts[0] = 0`.
    pub weight_counts: Vec<BigUint>,
    /// `compositions[k][r]`: ways to fill `k` cells with weights of total size `r`.
    pub compositions: Vec<Vec<BigUint>>,
}

impl CountTable {
    fn set_count(&self, m: usize, k: usize) -> BigUint {
        self.set_counts[m].get(k).copied().map(BigUint::from).unwrap_or_default()
    }

    /// Number of `(minima, independent set, weights)` choices of size `n`.
    pub fn decomposition_sum(&self, n: usize) -> BigUint {
        if n == 0 {
            return BigUint::one();
        }
        let mut total = BigUint::zero();
        for m in 1..=n {
            for k in 0..=n - m {
                total += self.set_count(m, k) * &self.compositions[k][n - m];
            }
        }
        total
    }
}

/// Counts and uniform draws of independent sets of one core graph by size,
/// sweeping the columns left to right. Valid when an active cell forbids the
/// same rows in every later column, which holds for the up and down cores.
struct SetTable {
    graph: CoreGraph,
    // per column: (rows bitmask, size, rows forbidden afterwards)
    choices: Vec<Vec<(u32, usize, u32)>>,
    // (column, forbidden rows) -> counts by size, for columns j..=n
    memo: HashMap<(usize, u32), Vec<u128>>,
}

impl SetTable {
    fn new(kind: CoreKind, n: usize) -> Result<Self> {
        let graph = build_core(kind, n)?;
        let bit = |i: usize| 1u32 << (i - 1);
        let mut choices = vec![Vec::new(); n + 1];
        for j in 1..=n {
            for rows in 0u32..(1 << j) {
                let cells: Vec<Cell> = (1..=j).filter(|&i| rows & bit(i) != 0).map(|i| Cell::new(i, j)).collect();
                if !graph.is_independent(graph.mask_of(cells.iter().copied())?) {
                    continue;
                }
                let mut forbid = 0u32;
                for l in j + 1..=n {
                    let here: u32 = (1..=l)
                        .filter(|&k| cells.iter().any(|&c| graph.is_edge(c, Cell::new(k, l))))
                        .fold(0, |m, k| m | bit(k));
                    if l == j + 1 {
                        forbid = here;
                    } else if here != forbid {
                        return Err(Error::Unsupported(format!("{kind} forbids column-dependent rows")));
                    }
                }
                choices[j].push((rows, cells.len(), forbid));
            }
        }
        let mut table = SetTable { graph, choices, memo: HashMap::new() };
        table.fill(1, 0);
        Ok(table)
    }

    fn fill(&mut self, j: usize, forbidden: u32) -> Vec<u128> {
        let n = self.graph.n();
        if j > n {
            return vec![1];
        }
        if let Some(v) = self.memo.get(&(j, forbidden)) {
            return v.clone();
        }
        let mut out: Vec<u128> = Vec::new();
        for (rows, size, forbid) in self.choices[j].clone() {
            if rows & forbidden != 0 {
                continue;
            }
            let rest = self.fill(j + 1, forbidden | forbid);
            if out.len() < rest.len() + size {
                out.resize(rest.len() + size, 0);
            }
            for (k, c) in rest.iter().enumerate() {
                out[k + size] += c;
            }
        }
        self.memo.insert((j, forbidden), out.clone());
        out
    }

    fn count(&self, j: usize, forbidden: u32, k: usize) -> u128 {
        if j > self.graph.n() {
            return u128::from(k == 0);
        }
        self.memo.get(&(j, forbidden)).and_then(|v| v.get(k)).copied().unwrap_or(0)
    }

    fn by_size(&self) -> Vec<u128> {
        if self.graph.n() == 0 {
            return vec![1];
        }
        self.memo[&(1, 0)].clone()
    }

    /// A uniformly random size-`k` independent set.
    fn draw(&self, k: usize, rng: &mut impl Rng) -> Vec<Cell> {
        let mut cells = Vec::new();
        let (mut forbidden, mut left) = (0u32, k);
        for j in 1..=self.graph.n() {
            let total = self.count(j, forbidden, left);
            let mut r = rng.gen_range(0..total);
            for &(rows, size, forbid) in &self.choices[j] {
                if rows & forbidden != 0 || size > left {
                    continue;
                }
                let c = self.count(j + 1, forbidden | forbid, left - size);
                if r < c {
                    cells.extend((1..=j).filter(|&i| rows & (1 << (i - 1)) != 0).map(|i| Cell::new(i, j)));
                    forbidden |= forbid;
                    left -= size;
                    break;
                }
                r -= c;
            }
        }
        cells
    }
}

enum Weights {
    /// The weight class is the class itself.
    Same,
    Nested(Box<Sampler>),
    /// Members by size, for weight classes with no core decomposition.
    Listed(Vec<Vec<Permutation>>),
}

/// A uniform sampler for one class, valid for sizes up to its table order.
pub struct Sampler {
    basis: Basis,
    symmetry: Symmetry,
    down: bool,
    tables: CountTable,
    sets: Vec<SetTable>,
    weights: Weights,
}

impl Sampler {
    pub fn new(basis: &Basis, order: usize) -> Result<Self> {
        Sampler::build(basis, order, &Enumerator::new(), 0)
    }

    fn build(basis: &Basis, order: usize, enumerator: &Enumerator, depth: usize) -> Result<Self> {
        if depth > MAX_DEPTH {
            return Err(Error::Unsupported(format!("weight classes of {basis} nest too deeply")));
        }
        if order > MAX_GRID {
            return Err(Error::ResourceLimit { basis: basis.to_string(), requested: order, limit: MAX_GRID });
        }
        let m = enumerator
            .detect(basis)
            .into_iter()
            .find(|m| matches!(m.theorem, TheoremId::GfUpcore | TheoremId::GfDowncore))
            .ok_or_else(|| Error::Unsupported(format!("{basis} has no up-core or down-core decomposition")))?;
        let down = m.theorem == TheoremId::GfDowncore;
        let kind = if down { CoreKind::D } else { CoreKind::U };
        let sets = (0..=order).map(|n| SetTable::new(kind, n)).collect::<Result<Vec<_>>>()?;
        let set_counts: Vec<Vec<u128>> = sets.iter().map(SetTable::by_size).collect();
        check_against_formula(&set_counts)?;

        let core: Vec<Permutation> = m.theorem.required();
        let weight_basis = Basis::new(core.into_iter().chain(m.p.iter().cloned()))?;
        let class_counts = to_biguints(&enumerator.counts(basis, order)?)?;
        let (weights, weight_counts) = if weight_basis == m.image {
            (Weights::Same, class_counts.clone())
        } else {
            match Sampler::build(&weight_basis, order, enumerator, depth + 1) {
                Ok(s) => {
                    let c = s.tables.class_counts.clone();
                    (Weights::Nested(Box::new(s)), c)
                }
                Err(Error::Unsupported(_)) => {
                    let mut oracle = ClassOracle::new(weight_basis);
                    let levels: Vec<Vec<Permutation>> = (0..=order).map(|k| oracle.level(k).to_vec()).collect();
                    let c = levels.iter().map(|l| BigUint::from(l.len())).collect();
                    (Weights::Listed(levels), c)
                }
                Err(e) => return Err(e),
            }
        };
        let mut weight_counts = weight_counts;
        weight_counts[0] = BigUint::zero();
        let compositions = compositions(&weight_counts, order);
        let tables = CountTable { order, class_counts, set_counts, weight_counts, compositions };
        for n in 0..=order {
            if tables.decomposition_sum(n) != tables.class_counts[n] {
                return Err(Error::InvalidEncoding(format!(
                    "decomposition of {basis} gives {} at size {n}, expected {}",
                    tables.decomposition_sum(n),
                    tables.class_counts[n]
                )));
            }
        }
        log::debug!("sampler for {basis}: {} via {}", m.theorem, m.symmetry);
        Ok(Sampler { basis: basis.clone(), symmetry: m.symmetry, down, tables, sets, weights })
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn tables(&self) -> &CountTable {
        &self.tables
    }

    /// A uniformly random member of size `n`.
    pub fn sample_with(&self, n: usize, rng: &mut impl Rng) -> Result<Permutation> {
        if n > self.tables.order {
            return Err(Error::ResourceLimit { basis: self.basis.to_string(), requested: n, limit: self.tables.order });
        }
        Ok(self.symmetry.invert().apply(&self.draw(n, rng)))
    }

    pub fn sample(&self, n: usize, seed: u64) -> Result<Permutation> {
        self.sample_with(n, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// `count` samples from one seeded stream.
    pub fn sample_many(&self, n: usize, count: usize, seed: u64) -> Result<Vec<Permutation>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..count).map(|_| self.sample_with(n, &mut rng)).collect()
    }

    // a member of the symmetry image the decomposition applies to
    fn draw(&self, n: usize, rng: &mut impl Rng) -> Permutation {
        if n == 0 {
            return Permutation::empty();
        }
        let t = &self.tables;
        let options: Vec<((usize, usize), BigUint)> = (1..=n)
            .flat_map(|m| (0..=n - m).map(move |k| ((m, k), t.set_count(m, k) * &t.compositions[k][n - m])))
            .collect();
        let (m, k) = pick(&options, rng);
        let cells = self.sets[m].draw(k, rng);
        let mut fill = BTreeMap::new();
        let mut left = n - m;
        for (idx, &c) in cells.iter().enumerate() {
            let rest = k - idx - 1;
            let sizes: Vec<(usize, BigUint)> = (1..=left - rest)
                .map(|s| (s, &t.weight_counts[s] * &t.compositions[rest][left - s]))
                .collect();
            let s = pick(&sizes, rng);
            fill.insert(c, self.weight(s, rng));
            left -= s;
        }
        let enc = StaircaseEncoding::new(m, fill).expect("cells come from the grid");
        if self.down {
            dperm(&enc)
        } else {
            uperm(&enc)
        }
    }

    fn weight(&self, s: usize, rng: &mut impl Rng) -> Permutation {
        match &self.weights {
            Weights::Same => self.draw(s, rng),
            Weights::Nested(inner) => inner.sample_with(s, rng).expect("weights are smaller than the table order"),
            Weights::Listed(levels) => levels[s][rng.gen_range(0..levels[s].len())].clone(),
        }
    }
}

// chooses a key with probability proportional to its weight
fn pick<K: Copy>(options: &[(K, BigUint)], rng: &mut impl Rng) -> K {
    let total: BigUint = options.iter().map(|(_, w)| w).sum();
    let mut r = rng.gen_biguint_below(&total);
    for (k, w) in options {
        if r < *w {
            return *k;
        }
        r -= w;
    }
    unreachable!("r is below the total")
}

fn compositions(weight_counts: &[BigUint], order: usize) -> Vec<Vec<BigUint>> {
    let mut f = vec![vec![BigUint::zero(); order + 1]; order + 1];
    f[0][0] = BigUint::one();
    for k in 1..=order {
        for r in 1..=order {
            let mut acc = BigUint::zero();
            for s in 1..=r {
                acc += &weight_counts[s] * &f[k - 1][r - s];
            }
            f[k][r] = acc;
        }
    }
    f
}

fn to_biguints(v: &[num_bigint::BigInt]) -> Result<Vec<BigUint>> {
    v.iter()
        .map(|c| c.to_biguint().ok_or_else(|| Error::Domain(format!("negative count {c}"))))
        .collect()
}

// Σ_k m[n][k] a^k must match [x^n] of the up-core formula at y = a. The up
// and down cores have the same size distribution.
fn check_against_formula(set_counts: &[Vec<u128>]) -> Result<()> {
    let order = set_counts.len() - 1;
    for a in 1..=3i64 {
        let f = gf::eval_u(&Series::from_int(a, order), order)?;
        for (n, row) in set_counts.iter().enumerate() {
            let direct: u128 = row.iter().rev().fold(0, |acc, &c| acc * a as u128 + c);
            let want = f.coeff(n).to_integer().to_u128();
            if want != Some(direct) {
                return Err(Error::InvalidEncoding(format!("independent sets of B_{n} disagree with the formula at y={a}")));
            }
        }
    }
    Ok(())
}

/// Exact tables for sampling `Av(basis)` up to size `order`.
pub fn build_tables(basis: &Basis, order: usize) -> Result<CountTable> {
    Ok(Sampler::new(basis, order)?.tables)
}

/// One uniform member of `Av_n(basis)`, determined by `seed`.
pub fn sample(basis: &Basis, n: usize, seed: u64) -> Result<Permutation> {
    Sampler::new(basis, n)?.sample(n, seed)
}
