//! Generating functions of independent sets of the core graphs.
//!
//! Every evaluator takes series in `x` for the marker variables and returns
//! the generating function with those series substituted. Marker
//! coefficients are recovered by evaluating at integer points and
//! interpolating exactly.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::core_graph::{build_core, label_unchecked, CoreKind, Label, Scheme};
use crate::error::{Error, Result};
use crate::series::{solve_fixed_point, Series};

fn prepare(s: &Series, order: usize) -> Series {
    s.truncate(order)
}

/// `F(x, y) = 1 + xF + xyF² / (1 − y(F − 1))`, solved as a fixed point.
pub fn eval_u(y: &Series, order: usize) -> Result<Series> {
    let x = Series::x(order + crate::series::FIXED_POINT_SLACK);
    let y = y.clone();
    solve_fixed_point(
        |f| {
            let one = Series::one(f.order());
            let den = &one - &(&y * &f.add_const(-1));
            let quad = &(&x * &y) * &(f * f);
            Ok(&(&one + &(&x * f)) + &quad.div(&den)?)
        },
        order,
    )
}

/// The same function through the quadratic `yF² − bF + (1 + y) = 0`,
/// `b = 1 + 2y − x − xy`. Needs `y ≠ 0`; precision drops by `val(y)`.
pub fn eval_u_quadratic(y: &Series, order: usize) -> Result<Series> {
    let y = prepare(y, order);
    let x = Series::x(order);
    let b = (&(&y.scale(&BigRational::from_integer(2.into())) - &x) - &(&x * &y)).add_const(1);
    let disc = &(&b * &b) - &(&y * &y.add_const(1)).scale(&BigRational::from_integer(4.into()));
    let num = &b - disc.sqrt()?;
    num.div(&y.scale(&BigRational::from_integer(2.into())))
}

/// `F_UDRC(x, y) = (1 − x) / (x² − xy − 2x + 1)`.
pub fn eval_udrc(y: &Series, order: usize) -> Result<Series> {
    let y = prepare(y, order);
    let x = Series::x(order);
    let num = Series::one(order) - &x;
    let den = (&(&x * &x) - &(&x * &y)) - x.scale(&BigRational::from_integer(2.into()));
    num.div(&den.add_const(1))
}

/// `F_UDC(x, y, z)`; `y` tracks the size and `z` the occupied rows.
pub fn eval_udc(y: &Series, z: &Series, order: usize) -> Result<Series> {
    eval_udc_yz(y, &(y * z), order)
}

/// `F_UDC` written through `y` and the product `yz`, the only two
/// combinations in which it depends on its markers.
pub fn eval_udc_yz(y: &Series, yz: &Series, order: usize) -> Result<Series> {
    let y = prepare(y, order);
    let yz = prepare(yz, order);
    let x = Series::x(order);
    let num = (Series::one(order) - &x) - &(&x * &y);
    let x2 = &x * &x;
    let den = &(&(&(&x2 * &y) - &(&x * &yz)) + &x2) - &(&(&x * &y) + &x.scale(&BigRational::from_integer(2.into())));
    num.div(&den.add_const(1))
}

/// `F_UD = 1/(1 − x − D)` with
/// `D = xyz(xy²z − x + 1) / ((xyz + x − 1)(xy + x − 1))`.
pub fn eval_ud(y: &Series, z: &Series, order: usize) -> Result<Series> {
    eval_ud_yz(y, &(y * z), order)
}

pub fn eval_ud_yz(y: &Series, yz: &Series, order: usize) -> Result<Series> {
    let y = prepare(y, order);
    let yz = prepare(yz, order);
    let x = Series::x(order);
    let xyz = &x * &yz;
    let num = &xyz * &(&(&xyz * &y) - &x).add_const(1);
    let den = &(&xyz + &x).add_const(-1) * &(&(&x * &y) + &x).add_const(-1);
    let d = num.div(&den)?;
    (&(Series::one(order) - &x) - &d).inverse()
}

/// `R(x,y,z,s,t)` of `D(B_n) ∨ UR(B_{n−1})` with φ labels:
/// `R = 1 / (1 − x(1+t) − x²y(s+1)(z+1) / (1 − x(s+1)(y+1)))`.
pub fn eval_dmur(y: &Series, z: &Series, s: &Series, t: &Series, order: usize) -> Result<Series> {
    let (y, z, s, t) = (prepare(y, order), prepare(z, order), prepare(s, order), prepare(t, order));
    let x = Series::x(order);
    let s1 = s.add_const(1);
    let inner = (Series::one(order) - &(&(&x * &s1) * &y.add_const(1))).inverse()?;
    let merged = &(&(&(&(&x * &x) * &y) * &s1) * &z.add_const(1)) * &inner;
    ((Series::one(order) - &(&x * &t.add_const(1))) - &merged).inverse()
}

/// `R(x,y,z,s)` of `U(B_n) ∨ DR(B_{n−1})` with ψ labels:
/// `R = (1 − Q) / (1 − x(s+1) − Q)`, `Q = xy(z+1) / (1 − x(y+1))`.
pub fn eval_umdr(y: &Series, z: &Series, s: &Series, order: usize) -> Result<Series> {
    let (y, z, s) = (prepare(y, order), prepare(z, order), prepare(s, order));
    let x = Series::x(order);
    let q = (&(&x * &y) * &z.add_const(1)).div(&(Series::one(order) - &(&x * &y.add_const(1))))?;
    let num = Series::one(order) - &q;
    let den = &(Series::one(order) - &(&x * &s.add_const(1))) - &q;
    num.div(&den)
}

/// The six generating-function families.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum Family {
    U,
    UDRC,
    UDC,
    UD,
    DmUR,
    UmDR,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::U, Family::UDRC, Family::UDC, Family::UD, Family::DmUR, Family::UmDR];

    /// Marker names, in slot order.
    pub fn markers(&self) -> &'static [&'static str] {
        match self {
            Family::U | Family::UDRC => &["y"],
            Family::UDC | Family::UD => &["y", "z"],
            Family::DmUR => &["y", "z", "s", "t"],
            Family::UmDR => &["y", "z", "s"],
        }
    }

    pub fn arity(&self) -> usize {
        self.markers().len()
    }

    pub fn core(&self) -> CoreKind {
        match self {
            Family::U => CoreKind::U,
            Family::UDRC => CoreKind::UDRC,
            Family::UDC => CoreKind::UDC,
            Family::UD => CoreKind::UD,
            Family::DmUR => CoreKind::DmUR,
            Family::UmDR => CoreKind::UmDR,
        }
    }

    pub fn eval(&self, m: &[Series], order: usize) -> Result<Series> {
        if m.len() != self.arity() {
            return Err(Error::InvalidInput(format!("{self} takes {} marker series", self.arity())));
        }
        match self {
            Family::U => eval_u(&m[0], order),
            Family::UDRC => eval_udrc(&m[0], order),
            Family::UDC => eval_udc(&m[0], &m[1], order),
            Family::UD => eval_ud(&m[0], &m[1], order),
            Family::DmUR => eval_dmur(&m[0], &m[1], &m[2], &m[3], order),
            Family::UmDR => eval_umdr(&m[0], &m[1], &m[2], order),
        }
    }

    /// Per-marker degree bounds valid for every grid size up to `n`.
    pub fn degree_bounds(&self, n: usize) -> Vec<usize> {
        let cells = n * (n + 1) / 2;
        match self {
            Family::U | Family::UD => {
                let mut b = vec![cells];
                if *self == Family::UD {
                    b.push(n);
                }
                b
            }
            // the column rule allows one member per column
            Family::UDRC => vec![n],
            Family::UDC => vec![n, n],
            Family::DmUR => vec![n.saturating_sub(1), n, n, n],
            Family::UmDR => vec![n.saturating_sub(1), n, n],
        }
    }

    /// Marker multidegree of an independent set under this family's convention.
    pub fn multidegree(&self, members: &[crate::grid::Cell]) -> Vec<usize> {
        let rows = || {
            let mut r: Vec<usize> = members.iter().map(|c| c.i).collect();
            r.sort_unstable();
            r.dedup();
            r.len()
        };
        let count = |scheme: Scheme, labels: &[Label]| {
            let l = label_unchecked(members, scheme);
            labels.iter().map(|want| l.values().filter(|v| *v == want).count()).collect()
        };
        match self {
            Family::U | Family::UDRC => vec![members.len()],
            Family::UDC | Family::UD => vec![members.len(), rows()],
            Family::DmUR => count(Scheme::Phi, &[Label::Y, Label::Z, Label::S, Label::T]),
            Family::UmDR => count(Scheme::Psi, &[Label::Y, Label::Z, Label::S]),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::InvalidInput(format!("unknown family {s:?}")))
    }
}

/// For each `n`, the nonzero coefficients of `x^n` keyed by marker multidegree.
pub type MarkerTable = Vec<BTreeMap<Vec<usize>, BigInt>>;

/// Exact coefficient table of a family up to `x^n_max`, by evaluating at
/// integer marker values and interpolating.
pub fn marker_coefficients(family: Family, n_max: usize) -> Result<MarkerTable> {
    let bounds = family.degree_bounds(n_max);
    let shape: Vec<usize> = bounds.iter().map(|d| d + 1).collect();
    let points: Vec<Vec<usize>> = grid_points(&shape);
    let evals: Vec<Series> = points
        .par_iter()
        .map(|pt| {
            let m: Vec<Series> = pt.iter().map(|&a| Series::from_int(a as i64, n_max)).collect();
            family.eval(&m, n_max)
        })
        .collect::<Result<_>>()?;
    let mut table = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let mut values: Vec<BigRational> = evals.iter().map(|s| s.coeff(n).clone()).collect();
        for (axis, &len) in shape.iter().enumerate() {
            apply_along_axis(&mut values, &shape, axis, &vandermonde_inverse(len));
        }
        let mut row = BTreeMap::new();
        for (pt, v) in points.iter().zip(values) {
            if v.is_zero() {
                continue;
            }
            if !v.is_integer() {
                return Err(Error::NonInteger { index: n, value: v.to_string() });
            }
            row.insert(pt.clone(), v.to_integer());
        }
        table.push(row);
    }
    Ok(table)
}

/// The same table by enumerating independent sets of the core graphs.
pub fn brute_force_table(family: Family, n_max: usize) -> Result<MarkerTable> {
    (0..=n_max)
        .map(|n| {
            let g = build_core(family.core(), n)?;
            let mut row: BTreeMap<Vec<usize>, BigInt> = BTreeMap::new();
            for mask in g.independent_sets() {
                *row.entry(family.multidegree(&g.cells_of(mask))).or_default() += 1;
            }
            Ok(row)
        })
        .collect()
}

fn grid_points(shape: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &len in shape {
        out = out.into_iter().flat_map(|p| (0..len).map(move |a| [p.clone(), vec![a]].concat())).collect();
    }
    out
}

// Row k of the result maps values at 0..len to the coefficient of m^k.
fn vandermonde_inverse(len: usize) -> Vec<Vec<BigRational>> {
    let mut a: Vec<Vec<BigRational>> = (0..len)
        .map(|p| {
            let mut row: Vec<BigRational> = (0..len).map(|k| BigRational::from_integer(BigInt::from(p).pow(k as u32))).collect();
            row.extend((0..len).map(|c| if c == p { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..len {
        let piv = (col..len).find(|&r| !a[r][col].is_zero()).expect("Vandermonde is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for v in a[col].iter_mut() {
            *v *= &inv;
        }
        for r in 0..len {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, p) in a[r].iter_mut().zip(pivot_row) {
                    *v -= &f * p;
                }
            }
        }
    }
    // a is now [I | V^{-1}] with V[p][k] = p^k, so coefficients = V^{-1}·values
    a.into_iter().map(|row| row[len..].to_vec()).collect()
}

fn apply_along_axis(values: &mut [BigRational], shape: &[usize], axis: usize, m: &[Vec<BigRational>]) {
    let len = shape[axis];
    let stride: usize = shape[axis + 1..].iter().product();
    let outer: usize = shape[..axis].iter().product();
    for o in 0..outer {
        for inner in 0..stride {
            let base = o * len * stride + inner;
            let column: Vec<BigRational> = (0..len).map(|a| values[base + a * stride].clone()).collect();
            for k in 0..len {
                let mut acc = BigRational::zero();
                for (a, v) in column.iter().enumerate() {
                    if !v.is_zero() && !m[k][a].is_zero() {
                        acc += &m[k][a] * v;
                    }
                }
                values[base + k * stride] = acc;
            }
        }
    }
}
