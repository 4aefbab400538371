//! Theorem detection and class generating functions.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf;
use crate::perm::{canonical_key, perm, symmetry_orbit, Basis, ClassOracle, Permutation, Symmetry};
use crate::series::{solve_fixed_point, Series};

/// Largest size the brute-force fallback is allowed to reach by default.
pub const ORACLE_CEILING: usize = 11;

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum TheoremId {
    Base123,
    Base132,
    GfUpcore,
    GfDowncore,
    GfRdcdrucu,
    GfRucupi,
    GfRdcdpi,
    GfRdcu,
    Rd2134,
    Ru2143,
}

impl TheoremId {
    /// Dispatch priority order.
    pub const ALL: [TheoremId; 10] = [
        TheoremId::Base123,
        TheoremId::Base132,
        TheoremId::GfUpcore,
        TheoremId::GfDowncore,
        TheoremId::GfRdcdrucu,
        TheoremId::GfRucupi,
        TheoremId::GfRdcdpi,
        TheoremId::GfRdcu,
        TheoremId::Rd2134,
        TheoremId::Ru2143,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            TheoremId::Base123 => "base_123",
            TheoremId::Base132 => "base_132",
            TheoremId::GfUpcore => "gf_upcore",
            TheoremId::GfDowncore => "gf_downcore",
            TheoremId::GfRdcdrucu => "gf_rdcdrucu",
            TheoremId::GfRucupi => "gf_rucupi",
            TheoremId::GfRdcdpi => "gf_rdcdpi",
            TheoremId::GfRdcu => "gf_rdcu",
            TheoremId::Rd2134 => "rd_2134",
            TheoremId::Ru2143 => "ru_2143",
        }
    }

    /// Patterns every matching basis image must contain (or be forced to avoid).
    pub fn required(&self) -> Vec<Permutation> {
        let names: &[&str] = match self {
            TheoremId::Base123 => &["123"],
            TheoremId::Base132 => &["132"],
            TheoremId::GfUpcore => &["2314", "3124"],
            TheoremId::GfDowncore => &["2413", "3142"],
            TheoremId::GfRdcdrucu => &["2413", "3142", "2314", "3124"],
            TheoremId::GfRucupi => &["2314", "3124", "3142"],
            TheoremId::GfRdcdpi => &["2413", "3142", "3124"],
            TheoremId::GfRdcu => &["2413", "3124"],
            TheoremId::Rd2134 => &["2413", "2134"],
            TheoremId::Ru2143 => &["2314", "2143"],
        };
        names.iter().map(|s| perm(s)).collect()
    }

    fn allows_parameters(&self) -> bool {
        !matches!(self, TheoremId::Base123 | TheoremId::Base132)
    }

    fn needs_mesh_condition(&self) -> bool {
        matches!(self, TheoremId::Rd2134 | TheoremId::Ru2143)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown theorem {s:?}")))
    }
}

impl TryFrom<String> for TheoremId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<TheoremId> for String {
    fn from(t: TheoremId) -> String {
        t.as_str().to_string()
    }
}

/// Outcome of one side condition.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    /// `"verified"` or `"assumed"`.
    pub status: String,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct TheoremMatch {
    pub theorem: TheoremId,
    pub symmetry: Symmetry,
    /// The symmetry image of the input basis the template was matched on.
    pub image: Basis,
    #[serde(rename = "P")]
    pub p: Vec<Permutation>,
    pub conditions: Vec<Condition>,
}

pub fn format_set(p: &[Permutation]) -> String {
    if p.is_empty() {
        "∅".into()
    } else {
        format!("{{{}}}", p.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(","))
    }
}

impl fmt::Display for TheoremMatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (symmetry: {}, P={})", self.theorem, self.symmetry, format_set(&self.p))
    }
}

/// Provenance of a computed generating function.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct Trace {
    pub theorem: String,
    pub symmetry: String,
    pub basis: String,
    #[serde(rename = "P")]
    pub p: Vec<String>,
    pub children: Vec<Trace>,
    /// True when this class or one it depends on was counted by brute force.
    pub oracle_backed: bool,
}

impl Trace {
    fn leaf(theorem: &str, basis: &Basis, oracle_backed: bool) -> Trace {
        Trace {
            theorem: theorem.into(),
            symmetry: Symmetry::IDENTITY.name(),
            basis: basis.to_string(),
            p: vec![],
            children: vec![],
            oracle_backed,
        }
    }
}

/// Decides the figure-defined mesh condition on a parameter pattern.
pub type MeshPredicate = Arc<dyn Fn(TheoremId, &Permutation) -> bool + Send + Sync>;

/// Detection and enumeration with a memo of computed classes.
pub struct Enumerator {
    mesh: MeshPredicate,
    mesh_assumed: bool,
    oracle_ceiling: usize,
    memo: Mutex<HashMap<String, (Series, Trace)>>,
    no_free_route: Mutex<HashSet<String>>,
}

impl Default for Enumerator {
    fn default() -> Self {
        Enumerator::new()
    }
}

impl Enumerator {
    /// Non-empty parameter sets of the merged-core theorems are rejected
    /// unless a mesh predicate is supplied.
    pub fn new() -> Self {
        Enumerator {
            mesh: Arc::new(|_, _| false),
            mesh_assumed: false,
            oracle_ceiling: ORACLE_CEILING,
            memo: Mutex::new(HashMap::new()),
            no_free_route: Mutex::new(HashSet::new()),
        }
    }

    /// Treats the mesh condition as satisfied for every parameter pattern.
    pub fn assume_mesh_conditions(self) -> Self {
        Enumerator { mesh: Arc::new(|_, _| true), mesh_assumed: true, ..self }
    }

    pub fn with_mesh_predicate(self, mesh: MeshPredicate) -> Self {
        Enumerator { mesh, mesh_assumed: false, ..self }
    }

    pub fn with_oracle_ceiling(self, oracle_ceiling: usize) -> Self {
        Enumerator { oracle_ceiling, ..self }
    }

    /// Every theorem whose template and side conditions fit some symmetry
    /// image of `basis`, in priority order.
    pub fn detect(&self, basis: &Basis) -> Vec<TheoremMatch> {
        let orbit = symmetry_orbit(basis);
        let mut out = Vec::new();
        for theorem in TheoremId::ALL {
            let required = theorem.required();
            let mut images: Vec<&Basis> = Vec::new();
            for (image, sym) in &orbit {
                // a symmetric basis repeats its image; keep the first symmetry
                if images.contains(&image) {
                    continue;
                }
                images.push(image);
                let Some(p) = split_template(image, &required) else { continue };
                if !theorem.allows_parameters() && !p.is_empty() {
                    continue;
                }
                match self.check_conditions(theorem, &p) {
                    Ok(conditions) => out.push(TheoremMatch {
                        theorem,
                        symmetry: *sym,
                        image: image.clone(),
                        p,
                        conditions,
                    }),
                    Err(why) => log::debug!("{theorem} on {image:?}: {why}"),
                }
            }
        }
        out
    }

    fn check_conditions(&self, theorem: TheoremId, p: &[Permutation]) -> std::result::Result<Vec<Condition>, String> {
        let verified = |name: &str| Condition { name: name.into(), status: "verified".into() };
        let skew_indec = |name: &str| {
            if p.iter().all(|q| !q.is_skew_decomposable()) {
                Ok(verified(name))
            } else {
                Err(format!("{name} fails"))
            }
        };
        let sum_indec = |name: &str| {
            if p.iter().map(Permutation::bstrip).all(|q| !q.is_empty() && !q.is_sum_decomposable()) {
                Ok(verified(name))
            } else {
                Err(format!("{name} fails"))
            }
        };
        let mut out = Vec::new();
        match theorem {
            TheoremId::Base123 | TheoremId::Base132 | TheoremId::GfRdcdrucu => {}
            TheoremId::GfUpcore | TheoremId::GfRucupi => out.push(skew_indec("P skew-indecomposable")?),
            TheoremId::GfDowncore => {
                if p.iter().all(|q| !q.is_sum_decomposable()) {
                    out.push(verified("P sum-indecomposable"));
                } else {
                    return Err("P sum-indecomposable fails".into());
                }
            }
            TheoremId::GfRdcdpi => out.push(sum_indec("bstrip(P) sum-indecomposable")?),
            TheoremId::GfRdcu => {
                out.push(skew_indec("P skew-indecomposable")?);
                out.push(sum_indec("bstrip(P) sum-indecomposable")?);
            }
            TheoremId::Rd2134 => {
                if p.iter().any(|q| ends_with_top_decreasing_run(q, 2)) {
                    return Err("some π ends in a decreasing direct summand of size ≥ 2".into());
                }
                out.push(verified("P avoids S⊕(Av⁺(12)∖{1})"));
            }
            TheoremId::Ru2143 => {
                if p.iter().any(ends_with_bottom_increasing_run) {
                    return Err("some π ends in an increasing skew summand".into());
                }
                out.push(verified("P avoids S⊖Av⁺(21)"));
            }
        }
        if theorem.needs_mesh_condition() && !p.is_empty() {
            if !p.iter().all(|q| (self.mesh)(theorem, q)) {
                return Err("mesh condition not confirmed".into());
            }
            let status = if self.mesh_assumed { "assumed" } else { "verified" };
            out.push(Condition { name: "mesh condition".into(), status: status.into() });
        }
        Ok(out)
    }

    /// Generating function of `Av(basis)` to order `order`, with a trace.
    ///
    /// Matches are tried in priority order and the first one whose auxiliary
    /// classes all resolve without brute force wins. Failing that, the first
    /// match is used with brute-force subclasses, and with no match at all
    /// the class itself is enumerated up to the oracle ceiling.
    pub fn class_gf(&self, basis: &Basis, order: usize) -> Result<(Series, Trace)> {
        self.resolve(basis, order, true)
    }

    /// Generating function through one particular match, for checking a
    /// route that priority would not pick.
    pub fn class_gf_via(&self, basis: &Basis, m: &TheoremMatch, order: usize) -> Result<(Series, Trace)> {
        let (series, trace) = self.apply(basis, &canonical_key(basis), m, order, true)?;
        series.to_integers()?;
        Ok((series, trace))
    }

    /// Integer coefficients `c_0..=c_order`.
    pub fn counts(&self, basis: &Basis, order: usize) -> Result<Vec<BigInt>> {
        self.class_gf(basis, order)?.0.to_integers()
    }

    fn resolve(&self, basis: &Basis, order: usize, allow_oracle: bool) -> Result<(Series, Trace)> {
        let key = canonical_key(basis);
        if let Some((s, t)) = self.memo.lock().expect("memo lock").get(&key) {
            if s.order() >= order && (allow_oracle || !t.oracle_backed) {
                return Ok((s.truncate(order), t.clone()));
            }
        }
        if !allow_oracle && self.no_free_route.lock().expect("memo lock").contains(&key) {
            return Err(Error::Unsupported(format!("no oracle-free route for {basis}")));
        }
        let (series, trace) = self.compute(basis, &key, order, allow_oracle)?;
        series.to_integers()?;
        self.memo.lock().expect("memo lock").insert(key, (series.clone(), trace.clone()));
        Ok((series, trace))
    }

    fn compute(&self, basis: &Basis, key: &str, order: usize, allow_oracle: bool) -> Result<(Series, Trace)> {
        if let Some(s) = monotone_gf(basis, order) {
            return Ok((s, Trace::leaf("monotone", basis, false)));
        }
        let matches = self.detect(basis);
        for m in &matches {
            match self.apply(basis, key, m, order, false) {
                Ok(found) => {
                    log::debug!("{basis}: {m}");
                    return Ok(found);
                }
                Err(Error::Unsupported(_)) | Err(Error::ResourceLimit { .. }) => continue,
                Err(e) => return Err(e),
            }
        }
        if !allow_oracle {
            self.no_free_route.lock().expect("memo lock").insert(key.to_string());
            return Err(Error::Unsupported(format!("no oracle-free route for {basis}")));
        }
        if let Some(m) = matches.first() {
            log::debug!("{basis}: {m} with brute-force subclasses");
            return self.apply(basis, key, m, order, true);
        }
        if order > self.oracle_ceiling {
            return Err(Error::ResourceLimit { basis: basis.to_string(), requested: order, limit: self.oracle_ceiling });
        }
        let counts = ClassOracle::new(basis.clone()).counts(order);
        let series = Series::from_integers(&counts.iter().map(|&c| BigInt::from(c)).collect::<Vec<_>>())?;
        Ok((series, Trace::leaf("oracle", basis, true)))
    }

    fn apply(&self, basis: &Basis, key: &str, m: &TheoremMatch, order: usize, allow_oracle: bool) -> Result<(Series, Trace)> {
        let mut children = Vec::new();
        let mut aux = |patterns: Vec<Permutation>| -> Result<Aux> {
            if patterns.iter().any(Permutation::is_empty) {
                // every permutation contains ε
                return Ok(Aux::Known(Series::zero(order)));
            }
            let b = Basis::new(patterns)?;
            if canonical_key(&b) == key {
                return Ok(Aux::SelfRef);
            }
            let (s, t) = self.resolve(&b, order, allow_oracle)?;
            children.push(t);
            Ok(Aux::Known(s))
        };
        let with_p = |base: &[&str]| -> Vec<Permutation> {
            base.iter().map(|s| perm(s)).chain(m.p.iter().cloned()).collect()
        };
        let stripped = |base: &str| -> Vec<Permutation> {
            std::iter::once(perm(base)).chain(m.p.iter().map(Permutation::bstrip)).collect()
        };
        let y_seq = || Series::x(order) * Series::geometric(order);
        let series = match m.theorem {
            TheoremId::Base123 | TheoremId::Base132 => gf::eval_u(&y_seq(), order)?,
            TheoremId::GfUpcore => {
                let a = aux(with_p(&["2314", "3124"]))?;
                solve(order, &[a], |v, n| gf::eval_u(&v[0].add_const(-1), n))?
            }
            TheoremId::GfDowncore => {
                let a = aux(with_p(&["2413", "3142"]))?;
                solve(order, &[a], |v, n| gf::eval_u(&v[0].add_const(-1), n))?
            }
            TheoremId::GfRdcdrucu => {
                let b = aux(with_p(&["2413", "3142", "2314", "3124"]))?;
                solve(order, &[b], |v, n| gf::eval_udrc(&v[0].add_const(-1), n))?
            }
            TheoremId::GfRucupi => {
                let b = aux(with_p(&["2314", "3124", "3142"]))?;
                solve(order, &[b], |v, n| {
                    let b1 = v[0].add_const(-1);
                    gf::eval_udc_yz(&b1, &b1, n)
                })?
            }
            TheoremId::GfRdcdpi | TheoremId::GfRdcu => {
                let b = if m.theorem == TheoremId::GfRdcdpi {
                    aux(with_p(&["2413", "3142", "3124"]))?
                } else {
                    aux(with_p(&["2413", "3124"]))?
                };
                let c = aux(stripped("312"))?;
                let ud = m.theorem == TheoremId::GfRdcu;
                solve(order, &[b, c], move |v, n| {
                    let (b1, c1) = (v[0].add_const(-1), v[1].add_const(-1));
                    if ud {
                        gf::eval_ud_yz(&c1, &b1, n)
                    } else {
                        gf::eval_udc_yz(&c1, &b1, n)
                    }
                })?
            }
            TheoremId::Rd2134 => {
                let b = aux(with_p(&["2134", "2413"]))?;
                let c = aux(stripped("213"))?;
                solve(order, &[b, c], |v, n| {
                    let (b, c) = (&v[0], &v[1]);
                    let z = (b - &Series::x(n)).add_const(-1).unshift(1)?;
                    gf::eval_dmur(&(Series::x(n) * Series::geometric(n)), &z, &c.add_const(-1), &b.add_const(-1), n)
                })?
            }
            TheoremId::Ru2143 => {
                let b = aux(with_p(&["2314", "2143"]))?;
                solve(order, &[b], |v, n| {
                    let b = &v[0];
                    let z = (b - &Series::x(n)).add_const(-1).unshift(1)?;
                    gf::eval_umdr(&(Series::x(n) * Series::geometric(n)), &z, &b.add_const(-1), n)
                })?
            }
        };
        let series = series.truncate(order);
        if series.order() < order {
            return Err(Error::Precision { wanted: order, got: series.order() });
        }
        let oracle_backed = children.iter().any(|c| c.oracle_backed);
        let trace = Trace {
            theorem: m.theorem.to_string(),
            symmetry: m.symmetry.name(),
            basis: basis.to_string(),
            p: m.p.iter().map(|q| q.to_string()).collect(),
            children,
            oracle_backed,
        };
        Ok((series, trace))
    }

    /// Compares the generating functions of two classes to order `order`.
    pub fn wilf_check(&self, b1: &Basis, b2: &Basis, order: usize) -> Result<WilfReport> {
        let (s1, t1) = self.class_gf(b1, order)?;
        let (s2, t2) = self.class_gf(b2, order)?;
        let first_difference = s1.first_difference(&s2);
        Ok(WilfReport {
            order,
            equal: first_difference.is_none(),
            first_difference,
            counts1: s1.to_integers()?.iter().map(|c| c.to_string()).collect(),
            counts2: s2.to_integers()?.iter().map(|c| c.to_string()).collect(),
            trace1: t1,
            trace2: t2,
        })
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct WilfReport {
    pub order: usize,
    pub equal: bool,
    pub first_difference: Option<usize>,
    pub counts1: Vec<String>,
    pub counts2: Vec<String>,
    pub trace1: Trace,
    pub trace2: Trace,
}

impl fmt::Display for WilfReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.first_difference {
            None => write!(f, "equal up to x^{}", self.order),
            Some(k) => write!(f, "differ at x^{k}: {} vs {}", self.counts1[k], self.counts2[k]),
        }
    }
}

enum Aux {
    Known(Series),
    SelfRef,
}

// Evaluates `formula` on the auxiliary series, solving for the class itself
// when it appears among them.
fn solve(order: usize, aux: &[Aux], formula: impl Fn(&[Series], usize) -> Result<Series>) -> Result<Series> {
    let fill = |a: &Series| -> Vec<Series> {
        aux.iter()
            .map(|x| match x {
                Aux::Known(s) => s.clone(),
                Aux::SelfRef => a.clone(),
            })
            .collect()
    };
    if aux.iter().any(|a| matches!(a, Aux::SelfRef)) {
        solve_fixed_point(|a| formula(&fill(a), a.order()), order)
    } else {
        formula(&fill(&Series::one(order)), order)
    }
}

/// Splits an image into the template's required patterns and `1 ⊕ P`.
///
/// A required pattern may be absent when it contains some element of the
/// image (it is then implied). Every element outside the required set must
/// be `1 ⊕ π` with `π` non-empty.
pub(crate) fn split_template(image: &Basis, required: &[Permutation]) -> Option<Vec<Permutation>> {
    for r in required {
        if !image.has(r) && !image.patterns().iter().any(|b| r.contains(b)) {
            return None;
        }
    }
    let mut p = Vec::new();
    for b in image.patterns() {
        if required.contains(b) {
            continue;
        }
        match b.strip_leading_one() {
            Some(rest) if !rest.is_empty() => p.push(rest),
            _ => return None,
        }
    }
    p.sort();
    Some(p)
}

// π = α ⊕ δ with δ decreasing of size at least `min`.
fn ends_with_top_decreasing_run(pi: &Permutation, min: usize) -> bool {
    let n = pi.len();
    (min..=n).any(|d| (0..d).all(|t| pi.at(n - d + t) == n - 1 - t))
}

// π = α ⊖ δ with δ non-empty and increasing.
fn ends_with_bottom_increasing_run(pi: &Permutation) -> bool {
    let n = pi.len();
    (1..=n).any(|d| (0..d).all(|t| pi.at(n - d + t) == t))
}

/// Closed forms for classes whose basis contains `1`, `12` or `21`.
fn monotone_gf(basis: &Basis, order: usize) -> Option<Series> {
    // 1 + x + … + x^(k-1)
    let ones = |k: usize| {
        let c = (0..=order).map(|i| BigRational::from_integer(BigInt::from((i < k) as u8))).collect();
        Series::from_coeffs(c).expect("non-empty")
    };
    if basis.has(&perm("1")) {
        return Some(ones(1));
    }
    for two in ["12", "21"] {
        if basis.has(&perm(two)) {
            // the class is monotone; any other pattern is monotone of the
            // opposite kind and caps the size
            let k = basis.patterns().iter().filter(|q| **q != perm(two)).map(Permutation::len).min();
            return Some(ones(k.unwrap_or(usize::MAX)));
        }
    }
    None
}
