//! Truncated Puiseux series in q with exact rational coefficients.
//!
//! A `QSeries` stores `c * q^(k/D)` for integer `k` and a per-series
//! denominator `D`, together with a validity order `O`: every coefficient of
//! `q^e` with `e < O` is exact, nothing at or above `O` is stored.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{ceil_i64, denom_u64, format_rational, gcd, int, lcm, parse_rational, to_i64, Rational};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "QSeriesWire", into = "QSeriesWire")]
pub struct QSeries {
    denom: u64,
    coeffs: BTreeMap<i64, Rational>,
    order: Rational,
}

/// Exclusive upper bound on exponent numerators over `denom` below `order`.
fn key_bound(order: &Rational, denom: u64) -> i64 {
    ceil_i64(&(order * int(denom as i64)))
}

impl QSeries {
    pub fn zero(order: Rational) -> Self {
        QSeries { denom: 1, coeffs: BTreeMap::new(), order }
    }

    pub fn one(order: Rational) -> Self {
        Self::constant(Rational::one(), order)
    }

    pub fn constant(c: Rational, order: Rational) -> Self {
        Self::monomial(c, Rational::zero(), order)
    }

    /// `c * q^e`, dropped if `e >= order`.
    pub fn monomial(c: Rational, e: Rational, order: Rational) -> Self {
        Self::from_terms([(e, c)], order)
    }

    /// Sums the given `(exponent, coefficient)` pairs; terms at or above the
    /// order are discarded.
    pub fn from_terms<I>(terms: I, order: Rational) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational)>,
    {
        let terms: Vec<(Rational, Rational)> = terms.into_iter().filter(|(e, _)| *e < order).collect();
        let denom = terms.iter().fold(1u64, |d, (e, _)| lcm(d, denom_u64(e)));
        let scale = int(denom as i64);
        let mut coeffs: BTreeMap<i64, Rational> = BTreeMap::new();
        for (e, c) in terms {
            let k = to_i64((e * &scale).numer());
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        Self::from_parts(denom, coeffs, order)
    }

    /// Integer-coefficient convenience: `Σ c_k q^(k/denom)`.
    pub fn from_int_terms(denom: u64, terms: &[(i64, i64)], order: Rational) -> Self {
        let mut coeffs = BTreeMap::new();
        for &(k, c) in terms {
            *coeffs.entry(k).or_insert_with(Rational::zero) += int(c);
        }
        Self::from_parts(denom, coeffs, order)
    }

    /// Builds from raw parts, dropping zeros and out-of-range keys and
    /// reducing the denominator.
    pub(crate) fn from_parts(denom: u64, mut coeffs: BTreeMap<i64, Rational>, order: Rational) -> Self {
        assert!(denom > 0, "exponent denominator must be positive");
        let bound = key_bound(&order, denom);
        coeffs.retain(|k, c| *k < bound && !c.is_zero());
        let mut s = QSeries { denom, coeffs, order };
        s.reduce_denom();
        s
    }

    fn reduce_denom(&mut self) {
        let g = self
            .coeffs
            .keys()
            .fold(self.denom, |g, &k| gcd(g, k.unsigned_abs()));
        if g > 1 {
            let g_i = g as i64;
            self.coeffs = std::mem::take(&mut self.coeffs)
                .into_iter()
                .map(|(k, c)| (k / g_i, c))
                .collect();
            self.denom /= g;
        }
    }

    pub fn denom(&self) -> u64 {
        self.denom
    }

    pub fn order(&self) -> &Rational {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    /// Stored terms as `(exponent, coefficient)` in increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, &Rational)> + '_ {
        let d = int(self.denom as i64);
        self.coeffs.iter().map(move |(k, c)| (Rational::from_integer(BigInt::from(*k)) / &d, c))
    }

    /// Minimal stored exponent, `None` for the zero series.
    pub fn valuation(&self) -> Option<Rational> {
        self.coeffs
            .keys()
            .next()
            .map(|&k| Rational::new(BigInt::from(k), BigInt::from(self.denom)))
    }

    /// Leading coefficient, `None` for the zero series.
    pub fn leading_coeff(&self) -> Option<&Rational> {
        self.coeffs.values().next()
    }

    /// Valuation, or the order for a series that is zero to its order.
    fn effective_valuation(&self) -> Rational {
        self.valuation().unwrap_or_else(|| self.order.clone())
    }

    pub fn coeff(&self, e: &Rational) -> Result<Rational> {
        if *e >= self.order {
            return Err(Error::BeyondTruncation { exponent: e.clone(), order: self.order.clone() });
        }
        let scaled = e * int(self.denom as i64);
        if !scaled.is_integer() {
            return Ok(Rational::zero());
        }
        let k = to_i64(scaled.numer());
        Ok(self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero))
    }

    /// Drops every term at or above `order` (which may only lower the order).
    pub fn truncate(&self, order: &Rational) -> Self {
        let order = if *order < self.order { order.clone() } else { self.order.clone() };
        Self::from_parts(self.denom, self.coeffs.clone(), order)
    }

    /// Keeps the terms but lowers the validity order to `order` (no-op if
    /// already lower).
    pub fn with_order_at_most(self, order: &Rational) -> Self {
        if *order < self.order {
            Self::from_parts(self.denom, self.coeffs, order.clone())
        } else {
            self
        }
    }

    /// Multiplication by `q^e`.
    pub fn shift(&self, e: &Rational) -> Self {
        let denom = lcm(self.denom, denom_u64(e));
        let f = (denom / self.denom) as i64;
        let off = to_i64((e * int(denom as i64)).numer());
        let coeffs = self.coeffs.iter().map(|(k, c)| (k * f + off, c.clone())).collect();
        Self::from_parts(denom, coeffs, &self.order + e)
    }

    /// Substitution `q -> q^k` for positive integer `k`.
    pub fn rescale(&self, k: u64) -> Self {
        assert!(k > 0, "rescale factor must be positive");
        let kk = k as i64;
        let coeffs = self.coeffs.iter().map(|(e, c)| (e * kk, c.clone())).collect();
        Self::from_parts(self.denom, coeffs, &self.order * int(kk))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.order.clone());
        }
        let coeffs = self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect();
        QSeries { denom: self.denom, coeffs, order: self.order.clone() }
    }

    fn regrid(&self, denom: u64) -> BTreeMap<i64, Rational> {
        let f = (denom / self.denom) as i64;
        self.coeffs.iter().map(|(k, c)| (k * f, c.clone())).collect()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let denom = lcm(self.denom, other.denom);
        let order = std::cmp::min(&self.order, &other.order).clone();
        let mut coeffs = self.regrid(denom);
        let f = (denom / other.denom) as i64;
        for (k, c) in &other.coeffs {
            let e = coeffs.entry(k * f).or_insert_with(Rational::zero);
            if negate {
                *e -= c;
            } else {
                *e += c;
            }
        }
        Self::from_parts(denom, coeffs, order)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let order = std::cmp::min(
            &self.order + other.effective_valuation(),
            &other.order + self.effective_valuation(),
        );
        if self.is_zero() || other.is_zero() {
            return Self::zero(order);
        }
        let denom = lcm(self.denom, other.denom);
        let bound = key_bound(&order, denom);
        // Clear coefficient denominators so the inner loop is integer-only.
        let (la, a) = integerize(&self.regrid(denom));
        let (lb, b) = integerize(&other.regrid(denom));
        let kmin = a[0].0 + b[0].0;
        if kmin >= bound {
            return Self::zero(order);
        }
        let mut acc: Vec<BigInt> = vec![BigInt::zero(); (bound - kmin) as usize];
        for (ka, ca) in &a {
            let lim = bound - ka;
            for (kb, cb) in &b {
                if *kb >= lim {
                    break;
                }
                let slot = &mut acc[(ka + kb - kmin) as usize];
                *slot += ca * cb;
            }
        }
        let scale = la * lb;
        let coeffs = acc
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (kmin + i as i64, Rational::new(c, scale.clone())))
            .collect();
        Self::from_parts(denom, coeffs, order)
    }

    /// Multiplicative inverse. With valuation `v` the result has order `O - 2v`.
    pub fn invert(&self) -> Result<Self> {
        let (&k0, c0) = self
            .coeffs
            .iter()
            .next()
            .ok_or_else(|| Error::ZeroLeadingTerm { order: self.order.clone() })?;
        let d = self.denom as i64;
        let v = Rational::new(BigInt::from(k0), BigInt::from(d));
        let order = &self.order - &v - &v;
        // relative precision in steps of q^(1/D)
        let n = key_bound(&(&self.order - &v), self.denom).max(0) as usize;
        let inv_c0 = c0.recip();
        let tail: Vec<(usize, &Rational)> = self
            .coeffs
            .iter()
            .skip(1)
            .map(|(k, c)| ((k - k0) as usize, c))
            .take_while(|(i, _)| *i < n)
            .collect();
        let mut b: Vec<Rational> = Vec::with_capacity(n);
        for j in 0..n {
            if j == 0 {
                b.push(inv_c0.clone());
                continue;
            }
            let mut s = Rational::zero();
            for &(i, a) in &tail {
                if i > j {
                    break;
                }
                let bj = &b[j - i];
                if !bj.is_zero() {
                    s += a * bj;
                }
            }
            b.push(-(s * &inv_c0));
        }
        let coeffs = b.into_iter().enumerate().map(|(j, c)| (j as i64 - k0, c)).collect();
        Ok(Self::from_parts(self.denom, coeffs, order))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.invert()?)
    }

    /// Integer power; negative powers go through `invert`. `a^0` is `1` to
    /// the relative precision of `a`.
    pub fn pow(&self, n: i64) -> Result<Self> {
        if n < 0 {
            return self.invert()?.pow(-n);
        }
        if n == 0 {
            let rel = &self.order - self.effective_valuation();
            return Ok(Self::one(rel));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        let mut e = n as u64;
        loop {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => &a * &base,
                });
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = &base * &base;
        }
        Ok(acc.expect("n > 0"))
    }

    /// True when both series agree on every exponent below the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = std::cmp::min(&self.order, &other.order);
        self.truncate(order).coeffs_eq(&other.truncate(order))
    }

    fn coeffs_eq(&self, other: &Self) -> bool {
        self.denom == other.denom && self.coeffs == other.coeffs
    }

    /// True when every stored coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.coeffs.values().all(|c| c.is_integer())
    }
}

/// Multiplies all coefficients by the lcm `L` of their denominators.
fn integerize(m: &BTreeMap<i64, Rational>) -> (BigInt, Vec<(i64, BigInt)>) {
    let l = m.values().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let v = m
        .iter()
        .map(|(k, c)| (*k, c.numer() * (&l / c.denom())))
        .collect();
    (l, v)
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;
    fn mul(self, rhs: &QSeries) -> QSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        self.scale(&-Rational::one())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&QSeries> for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: &QSeries) -> QSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        -&self
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self} + O(q^{})", format_rational(&self.order))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms().enumerate() {
            let neg = c.is_negative();
            if i > 0 {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            } else if neg {
                write!(f, "-")?;
            }
            let a = c.abs();
            if e.is_zero() {
                write!(f, "{}", format_rational(&a))?;
            } else {
                if !a.is_one() {
                    write!(f, "{}*", format_rational(&a))?;
                }
                if e.is_one() {
                    write!(f, "q")?;
                } else {
                    write!(f, "q^({})", format_rational(&e))?;
                }
            }
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum IntOrString {
    Int(i64),
    Str(String),
}

#[derive(Serialize, Deserialize)]
struct TermWire {
    exp: IntOrString,
    coeff: String,
}

#[derive(Serialize, Deserialize)]
struct QSeriesWire {
    denom: u64,
    order: String,
    terms: Vec<TermWire>,
}

impl From<QSeries> for QSeriesWire {
    fn from(s: QSeries) -> Self {
        QSeriesWire {
            denom: s.denom,
            order: format_rational(&s.order),
            terms: s
                .coeffs
                .iter()
                .map(|(k, c)| TermWire { exp: IntOrString::Str(k.to_string()), coeff: format_rational(c) })
                .collect(),
        }
    }
}

impl TryFrom<QSeriesWire> for QSeries {
    type Error = Error;
    fn try_from(w: QSeriesWire) -> Result<Self> {
        if w.denom == 0 {
            return Err(Error::Parse("denom must be positive".into()));
        }
        let order = parse_rational(&w.order)?;
        let mut coeffs = BTreeMap::new();
        for t in w.terms {
            let k = match t.exp {
                IntOrString::Int(k) => k,
                IntOrString::Str(s) => s
                    .trim()
                    .parse::<i64>()
                    .map_err(|_| Error::Parse(format!("exponent numerator must be an integer: {s:?}")))?,
            };
            let c = parse_rational(&t.coeff)?;
            *coeffs.entry(k).or_insert_with(Rational::zero) += c;
        }
        let bound = key_bound(&order, w.denom);
        if let Some((&k, _)) = coeffs.iter().next_back() {
            if k >= bound {
                return Err(Error::Parse(format!("term q^({k}/{}) lies at or beyond the order", w.denom)));
            }
        }
        Ok(Self::from_parts(w.denom, coeffs, order))
    }
}
