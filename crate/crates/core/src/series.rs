//! Exact truncated power series in one variable `x`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Default truncation order.
pub const DEFAULT_ORDER: usize = 14;

/// Coefficients `c_0..=c_N` of a power series known up to `x^N`.
///
/// Coefficients are exact rationals; class generating functions must clear
/// to integers (see [`Series::to_integers`]).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Series {
    coeffs: Vec<BigRational>,
}

fn q(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

impl Series {
    pub fn zero(order: usize) -> Self {
        Series { coeffs: vec![BigRational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Series::constant(q(1), order)
    }

    pub fn constant(c: BigRational, order: usize) -> Self {
        let mut s = Series::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn from_int(c: i64, order: usize) -> Self {
        Series::constant(q(c), order)
    }

    /// `c·x^k`.
    pub fn monomial(c: BigRational, k: usize, order: usize) -> Self {
        let mut s = Series::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    /// The variable `x`.
    pub fn x(order: usize) -> Self {
        Series::monomial(q(1), 1, order)
    }

    /// `1/(1-x)`.
    pub fn geometric(order: usize) -> Self {
        Series { coeffs: vec![q(1); order + 1] }
    }

    /// Coefficients `c_0, c_1, …`; the order is one less than their count.
    pub fn from_coeffs(coeffs: Vec<BigRational>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidInput("a series needs at least one coefficient".into()));
        }
        Ok(Series { coeffs })
    }

    pub fn from_integers<T: Into<BigInt> + Clone>(coeffs: &[T]) -> Result<Self> {
        Series::from_coeffs(coeffs.iter().map(|c| BigRational::from_integer(c.clone().into())).collect())
    }

    /// Highest exponent whose coefficient is known.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    /// Index of the first nonzero known coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    // For precision bookkeeping a series that is zero to its order has
    // valuation at least order + 1.
    fn val_bound(&self) -> usize {
        self.valuation().unwrap_or(self.coeffs.len())
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        c.truncate(order + 1);
        Series { coeffs: c }
    }

    /// Raises the order, treating unknown coefficients as zero. Only sound
    /// when the caller re-establishes precision afterwards.
    pub fn pad(&self, order: usize) -> Self {
        let mut c = self.coeffs.clone();
        if c.len() < order + 1 {
            c.resize(order + 1, BigRational::zero());
        }
        Series { coeffs: c }
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Series { coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Multiplication by `x^k`.
    pub fn shift(&self, k: usize) -> Self {
        let mut c = vec![BigRational::zero(); k];
        c.extend(self.coeffs.iter().cloned());
        Series { coeffs: c }
    }

    /// Division by `x^k`; the first `k` coefficients must vanish.
    pub fn unshift(&self, k: usize) -> Result<Self> {
        if let Some(v) = self.valuation() {
            if v < k {
                return Err(Error::DivisionValuation { dividend: v, divisor: k });
            }
        }
        if k > self.order() {
            return Err(Error::Precision { wanted: k, got: self.order() });
        }
        Ok(Series { coeffs: self.coeffs[k..].to_vec() })
    }

    pub fn add_const(&self, c: i64) -> Self {
        let mut s = self.clone();
        s.coeffs[0] += q(c);
        s
    }

    /// Inverse of a series with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let b0 = &self.coeffs[0];
        if b0.is_zero() {
            return Err(Error::DivisionValuation { dividend: 0, divisor: self.val_bound() });
        }
        let n = self.order();
        let inv0 = b0.recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(n + 1);
        out.push(inv0.clone());
        for k in 1..=n {
            let mut acc = BigRational::zero();
            for i in 1..=k {
                if !self.coeffs[i].is_zero() {
                    acc += &self.coeffs[i] * &out[k - i];
                }
            }
            out.push(-acc * &inv0);
        }
        Ok(Series { coeffs: out })
    }

    /// `self / rhs`, cancelling a common power of `x` first.
    pub fn div(&self, rhs: &Series) -> Result<Self> {
        let vb = rhs.valuation().ok_or(Error::DivisionByZero)?;
        if let Some(va) = self.valuation() {
            if va < vb {
                return Err(Error::DivisionValuation { dividend: va, divisor: vb });
            }
        }
        if vb > self.order() {
            return Err(Error::Precision { wanted: vb, got: self.order() });
        }
        let a = self.unshift(vb)?;
        let b = rhs.unshift(vb)?;
        let order = a.order().min(b.order());
        Ok(&a.truncate(order) * &b.truncate(order).inverse()?)
    }

    /// Square root of a series with constant term 1, normalised to `s_0 = 1`.
    pub fn sqrt(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::Domain(format!("square root needs constant term 1, got {}", self.coeffs[0])));
        }
        let n = self.order();
        let mut s: Vec<BigRational> = vec![q(1)];
        let half = BigRational::new(BigInt::from(1), BigInt::from(2));
        for k in 1..=n {
            let mut acc = self.coeffs[k].clone();
            for i in 1..k {
                acc -= &s[i] * &s[k - i];
            }
            s.push(acc * &half);
        }
        Ok(Series { coeffs: s })
    }

    /// `self^k` for `k ≥ 0`.
    pub fn pow(&self, k: usize) -> Self {
        let mut out = Series::one(self.order());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn to_integers(&self) -> Result<Vec<BigInt>> {
        self.coeffs
            .iter()
            .enumerate()
            .map(|(k, c)| {
                if c.is_integer() {
                    Ok(c.to_integer())
                } else {
                    Err(Error::NonInteger { index: k, value: c.to_string() })
                }
            })
            .collect()
    }

    /// True when both agree on every coefficient up to the smaller order.
    pub fn agrees_with(&self, other: &Series) -> bool {
        let n = self.order().min(other.order());
        self.coeffs[..=n] == other.coeffs[..=n]
    }

    /// First exponent where the two differ, up to the smaller order.
    pub fn first_difference(&self, other: &Series) -> Option<usize> {
        let n = self.order().min(other.order());
        (0..=n).find(|&k| self.coeffs[k] != other.coeffs[k])
    }
}

impl Add for &Series {
    type Output = Series;
    fn add(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] + &rhs.coeffs[k]).collect() }
    }
}

impl Sub for &Series {
    type Output = Series;
    fn sub(self, rhs: &Series) -> Series {
        let n = self.order().min(rhs.order());
        Series { coeffs: (0..=n).map(|k| &self.coeffs[k] - &rhs.coeffs[k]).collect() }
    }
}

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        Series { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Mul for &Series {
    type Output = Series;
    fn mul(self, rhs: &Series) -> Series {
        let n = (self.order() + rhs.val_bound()).min(rhs.order() + self.val_bound());
        let mut out = vec![BigRational::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(n + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Series { coeffs: out }
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series { (&self).$m(&rhs) }
        }
        impl $tr<&Series> for Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series { (&self).$m(rhs) }
        }
        impl $tr<Series> for &Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Series {
    /// Comma-separated coefficients from `c_0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(|c| c.to_string()).collect();
        f.write_str(&parts.join(","))
    }
}

impl fmt::Debug for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{self}] + O(x^{})", self.order() + 1)
    }
}

/// Extra orders carried through fixed-point iterations to absorb precision
/// lost to divisions inside the map.
pub const FIXED_POINT_SLACK: usize = 4;

/// Solves `A = phi(A)` to order `order`, starting from `A = 1`.
///
/// `phi` must be an x-adic contraction. After `order + 1` iterations one more
/// application must leave the result unchanged, otherwise the map is
/// reported as non-contracting.
pub fn solve_fixed_point(phi: impl Fn(&Series) -> Result<Series>, order: usize) -> Result<Series> {
    let wide = order + FIXED_POINT_SLACK;
    let step = |a: &Series| -> Result<Series> {
        let next = phi(&a.pad(wide))?;
        if next.order() < order {
            return Err(Error::Precision { wanted: order, got: next.order() });
        }
        Ok(next.truncate(order))
    };
    let mut a = Series::one(order);
    for _ in 0..=order {
        a = step(&a)?;
    }
    if step(&a)? != a {
        return Err(Error::ContractionViolation { order });
    }
    Ok(a)
}

/// Largest absolute numerator among the coefficients; handy for logging.
pub fn height(s: &Series) -> BigInt {
    s.coeffs.iter().map(|c| c.numer().abs()).max().unwrap_or_default()
}
