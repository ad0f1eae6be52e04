//! Two-variable truncated series `Σ c(n,r) q^n ζ^r`, stored as a finite map
//! from ζ-exponents to q-series sharing one validity order.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qseries::QSeries;
use crate::rational::{denom_u64, format_rational, gcd, int, lcm, parse_rational, rat, to_i64, Rational};

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "JSeriesWire", into = "JSeriesWire")]
pub struct JSeries {
    zdenom: u64,
    components: BTreeMap<i64, QSeries>,
    order: Rational,
}

impl JSeries {
    pub fn zero(order: Rational) -> Self {
        JSeries { zdenom: 1, components: BTreeMap::new(), order }
    }

    pub fn one(order: Rational) -> Self {
        Self::from_q(QSeries::one(order))
    }

    /// A series constant in z.
    pub fn from_q(q: QSeries) -> Self {
        let order = q.order().clone();
        let mut components = BTreeMap::new();
        components.insert(0, q);
        Self::from_parts(1, components, order)
    }

    /// `f(τ) ζ^r`.
    pub fn from_component(r: &Rational, f: QSeries) -> Self {
        let zdenom = denom_u64(r);
        let k = to_i64((r * int(zdenom as i64)).numer());
        let order = f.order().clone();
        let mut components = BTreeMap::new();
        components.insert(k, f);
        Self::from_parts(zdenom, components, order)
    }

    /// Sums `c q^n ζ^r` over the given `(n, r, c)`; terms with `n >= order`
    /// are dropped.
    pub fn from_terms<I>(terms: I, order: Rational) -> Self
    where
        I: IntoIterator<Item = (Rational, Rational, Rational)>,
    {
        let mut by_r: BTreeMap<Rational, Vec<(Rational, Rational)>> = BTreeMap::new();
        for (n, r, c) in terms {
            by_r.entry(r).or_default().push((n, c));
        }
        let zdenom = by_r.keys().fold(1u64, |d, r| lcm(d, denom_u64(r)));
        let components = by_r
            .into_iter()
            .map(|(r, ts)| {
                let k = to_i64((r * int(zdenom as i64)).numer());
                (k, QSeries::from_terms(ts, order.clone()))
            })
            .collect();
        Self::from_parts(zdenom, components, order)
    }

    /// Components keyed by ζ-exponent (any rationals); all are truncated to
    /// `order`, which must not exceed any component's own order.
    pub fn from_rational_components<I>(components: I, order: Rational) -> Self
    where
        I: IntoIterator<Item = (Rational, QSeries)>,
    {
        let mut acc = Self::zero(order);
        for (r, f) in components {
            acc = &acc + &Self::from_component(&r, f);
        }
        acc
    }

    pub(crate) fn from_parts(zdenom: u64, components: BTreeMap<i64, QSeries>, order: Rational) -> Self {
        assert!(zdenom > 0);
        let mut components: BTreeMap<i64, QSeries> = components
            .into_iter()
            .map(|(k, f)| {
                debug_assert!(f.order() >= &order, "component order below series order");
                (k, f.truncate(&order))
            })
            .filter(|(_, f)| !f.is_zero())
            .collect();
        let g = components.keys().fold(zdenom, |g, &k| gcd(g, k.unsigned_abs()));
        let mut zdenom = zdenom;
        if g > 1 {
            let gi = g as i64;
            components = components.into_iter().map(|(k, f)| (k / gi, f)).collect();
            zdenom /= g;
        }
        JSeries { zdenom, components, order }
    }

    pub fn zdenom(&self) -> u64 {
        self.zdenom
    }

    pub fn order(&self) -> &Rational {
        &self.order
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    fn zexp(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k), BigInt::from(self.zdenom))
    }

    /// `(r, f_r)` in increasing r.
    pub fn components(&self) -> impl Iterator<Item = (Rational, &QSeries)> + '_ {
        self.components.iter().map(move |(k, f)| (self.zexp(*k), f))
    }

    /// All stored `(n, r, c)`.
    pub fn terms(&self) -> impl Iterator<Item = (Rational, Rational, Rational)> + '_ {
        self.components()
            .flat_map(|(r, f)| f.terms().map(move |(n, c)| (n, r.clone(), c.clone())).collect::<Vec<_>>())
    }

    pub fn zexponents(&self) -> Vec<Rational> {
        self.components.keys().map(|&k| self.zexp(k)).collect()
    }

    /// The q-series multiplying `ζ^r`.
    pub fn zcoeff(&self, r: &Rational) -> QSeries {
        let scaled = r * int(self.zdenom as i64);
        if scaled.is_integer() {
            if let Some(f) = self.components.get(&to_i64(scaled.numer())) {
                return f.clone();
            }
        }
        QSeries::zero(self.order.clone())
    }

    pub fn coeff(&self, n: &Rational, r: &Rational) -> Result<Rational> {
        self.zcoeff(r).coeff(n)
    }

    /// Minimal q-exponent over all components.
    pub fn valuation(&self) -> Option<Rational> {
        self.components.values().filter_map(|f| f.valuation()).min()
    }

    fn effective_valuation(&self) -> Rational {
        self.valuation().unwrap_or_else(|| self.order.clone())
    }

    pub fn truncate(&self, order: &Rational) -> Self {
        let order = std::cmp::min(order, &self.order).clone();
        Self::from_parts(self.zdenom, self.components.clone(), order)
    }

    fn regrid(&self, zdenom: u64) -> BTreeMap<i64, QSeries> {
        let f = (zdenom / self.zdenom) as i64;
        self.components.iter().map(|(k, s)| (k * f, s.clone())).collect()
    }

    fn add_impl(&self, other: &Self, negate: bool) -> Self {
        let zdenom = lcm(self.zdenom, other.zdenom);
        let order = std::cmp::min(&self.order, &other.order).clone();
        let mut comps: BTreeMap<i64, QSeries> = self
            .regrid(zdenom)
            .into_iter()
            .map(|(k, f)| (k, f.truncate(&order)))
            .collect();
        for (k, f) in other.regrid(zdenom) {
            let f = f.truncate(&order);
            let f = if negate { -&f } else { f };
            let e = comps.entry(k).or_insert_with(|| QSeries::zero(order.clone()));
            *e = &*e + &f;
        }
        Self::from_parts(zdenom, comps, order)
    }

    fn mul_impl(&self, other: &Self) -> Self {
        let order = std::cmp::min(
            &self.order + other.effective_valuation(),
            &other.order + self.effective_valuation(),
        );
        let zdenom = lcm(self.zdenom, other.zdenom);
        let a = self.regrid(zdenom);
        let b = other.regrid(zdenom);
        let mut comps: BTreeMap<i64, QSeries> = BTreeMap::new();
        for (ka, fa) in &a {
            for (kb, fb) in &b {
                let p = (fa * fb).truncate(&order);
                if p.is_zero() {
                    continue;
                }
                match comps.entry(ka + kb) {
                    std::collections::btree_map::Entry::Vacant(v) => {
                        v.insert(p);
                    }
                    std::collections::btree_map::Entry::Occupied(mut o) => {
                        let s = o.get() + &p;
                        o.insert(s);
                    }
                }
            }
        }
        Self::from_parts(zdenom, comps, order)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let comps = self.components.iter().map(|(k, f)| (*k, f.scale(c))).collect();
        Self::from_parts(self.zdenom, comps, self.order.clone())
    }

    /// Multiplication by a series in q alone.
    pub fn mul_q(&self, f: &QSeries) -> Self {
        self * &Self::from_q(f.clone())
    }

    /// Multiplication by `q^e`.
    pub fn shift_q(&self, e: &Rational) -> Self {
        let comps = self.components.iter().map(|(k, f)| (*k, f.shift(e))).collect();
        Self::from_parts(self.zdenom, comps, &self.order + e)
    }

    /// Multiplication by `ζ^r`.
    pub fn mul_zeta(&self, r: &Rational) -> Self {
        let zdenom = lcm(self.zdenom, denom_u64(r));
        let off = to_i64((r * int(zdenom as i64)).numer());
        let comps = self.regrid(zdenom).into_iter().map(|(k, f)| (k + off, f)).collect();
        Self::from_parts(zdenom, comps, self.order.clone())
    }

    /// Substitution `z -> -z`.
    pub fn negate_z(&self) -> Self {
        let comps = self.components.iter().map(|(k, f)| (-k, f.clone())).collect();
        Self::from_parts(self.zdenom, comps, self.order.clone())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.order - self.effective_valuation());
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// `φ(0; τ)`: the sum of all components.
    pub fn eval_z0(&self) -> QSeries {
        self.components
            .values()
            .fold(QSeries::zero(self.order.clone()), |acc, f| &acc + f)
    }

    /// `z -> z + 1/2`, which multiplies `ζ^r` by `e^{πir}`. All exponents must
    /// be integers for the result to be real.
    pub fn shift_half(&self) -> Result<Self> {
        self.shift_half_phased()?.into_real()
    }

    /// `z -> z + 1/2` for exponents all lying in one coset of `Z` inside
    /// `(1/2)Z`; the half-integer coset picks up an overall factor `i`.
    pub fn shift_half_phased(&self) -> Result<PhasedJSeries> {
        let mut coset: Option<bool> = None;
        let mut comps = BTreeMap::new();
        for (r, f) in self.components() {
            let two_r = &r * int(2);
            if !two_r.is_integer() {
                return Err(Error::NonRealPhase { exponent: r });
            }
            let half = !r.is_integer();
            if *coset.get_or_insert(half) != half {
                return Err(Error::NonRealPhase { exponent: r });
            }
            // e^{πir} = e^{πi/2} (-1)^{r-1/2} on the half-integer coset
            let base = if half { &r - rat(1, 2) } else { r.clone() };
            let sign_odd = (to_i64(base.numer())).rem_euclid(2) == 1;
            let k = to_i64((&r * int(self.zdenom as i64)).numer());
            comps.insert(k, if sign_odd { -f } else { f.clone() });
        }
        let value = Self::from_parts(self.zdenom, comps, self.order.clone());
        let turn = if coset == Some(true) { rat(1, 4) } else { Rational::zero() };
        Ok(PhasedJSeries::new(turn, value))
    }

    /// `z -> z + τ/2`, which multiplies `ζ^r` by `q^{r/2}`.
    ///
    /// Order rule: with `R` the largest `|r|` stored, the result order is
    /// `O - R/2 - 1`. Terms not stored sit at `n >= O`; for theta-type
    /// series their ζ-exponents obey `r^2 <= 4n + Δ` with `Δ` small, so their
    /// shifted exponents `n + r/2` stay above that bound. A series constant
    /// in z is returned unchanged.
    pub fn shift_half_tau(&self) -> Self {
        if self.components.keys().all(|&k| k == 0) {
            return self.clone();
        }
        let rmax = self
            .components
            .keys()
            .map(|&k| self.zexp(k).abs())
            .max()
            .unwrap_or_else(Rational::zero);
        let order = &self.order - rmax * rat(1, 2) - Rational::one();
        let comps = self
            .components
            .iter()
            .map(|(&k, f)| (k, f.shift(&(self.zexp(k) * rat(1, 2)))))
            .collect();
        Self::from_parts(self.zdenom, comps, order)
    }

    /// True when the two series agree below the smaller order.
    pub fn agrees_with(&self, other: &Self) -> bool {
        let order = std::cmp::min(&self.order, &other.order);
        self.truncate(order) == other.truncate(order)
    }

    pub fn has_integer_zexponents(&self) -> bool {
        self.zdenom == 1
    }
}

impl Add for &JSeries {
    type Output = JSeries;
    fn add(self, rhs: &JSeries) -> JSeries {
        self.add_impl(rhs, false)
    }
}

impl Sub for &JSeries {
    type Output = JSeries;
    fn sub(self, rhs: &JSeries) -> JSeries {
        self.add_impl(rhs, true)
    }
}

impl Mul for &JSeries {
    type Output = JSeries;
    fn mul(self, rhs: &JSeries) -> JSeries {
        self.mul_impl(rhs)
    }
}

impl Neg for &JSeries {
    type Output = JSeries;
    fn neg(self) -> JSeries {
        self.scale(&-Rational::one())
    }
}

impl Neg for JSeries {
    type Output = JSeries;
    fn neg(self) -> JSeries {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for JSeries {
            type Output = JSeries;
            fn $m(self, rhs: JSeries) -> JSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&JSeries> for JSeries {
            type Output = JSeries;
            fn $m(self, rhs: &JSeries) -> JSeries {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for JSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "JSeries(order {}) {{", format_rational(&self.order))?;
        for (r, s) in self.components() {
            writeln!(f, "  ζ^({}): {}", format_rational(&r), s)?;
        }
        write!(f, "}}")
    }
}

/// `e^{2πi·turn}` times a real series; `turn` is kept in `[0, 1/2)` with a
/// half turn folded into the sign of the series.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasedJSeries {
    turn: Rational,
    value: JSeries,
}

impl PhasedJSeries {
    pub fn new(turn: Rational, value: JSeries) -> Self {
        let mut t = &turn - turn.floor();
        let mut value = value;
        if t >= rat(1, 2) {
            t -= rat(1, 2);
            value = -value;
        }
        PhasedJSeries { turn: t, value }
    }

    pub fn real(value: JSeries) -> Self {
        PhasedJSeries { turn: Rational::zero(), value }
    }

    pub fn turn(&self) -> &Rational {
        &self.turn
    }

    pub fn value(&self) -> &JSeries {
        &self.value
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(&self.turn + &other.turn, &self.value * &other.value)
    }

    pub fn pow(&self, n: u32) -> Self {
        Self::new(&self.turn * int(n as i64), self.value.pow(n))
    }

    pub fn into_real(self) -> Result<JSeries> {
        if self.turn.is_zero() {
            Ok(self.value)
        } else {
            Err(Error::NonRealPhase { exponent: self.turn })
        }
    }
}

#[derive(Serialize, Deserialize)]
struct ComponentWire {
    zexp: i64,
    series: QSeries,
}

#[derive(Serialize, Deserialize)]
struct JSeriesWire {
    zdenom: u64,
    order: String,
    components: Vec<ComponentWire>,
}

impl From<JSeries> for JSeriesWire {
    fn from(j: JSeries) -> Self {
        JSeriesWire {
            zdenom: j.zdenom,
            order: format_rational(&j.order),
            components: j
                .components
                .into_iter()
                .map(|(zexp, series)| ComponentWire { zexp, series })
                .collect(),
        }
    }
}

impl TryFrom<JSeriesWire> for JSeries {
    type Error = Error;
    fn try_from(w: JSeriesWire) -> Result<Self> {
        if w.zdenom == 0 {
            return Err(Error::Parse("zdenom must be positive".into()));
        }
        let order = parse_rational(&w.order)?;
        let mut comps: BTreeMap<i64, QSeries> = BTreeMap::new();
        for c in w.components {
            if c.series.order() < &order {
                return Err(Error::Parse(format!("component ζ^({}/{}) has order below the series order", c.zexp, w.zdenom)));
            }
            let e = comps.entry(c.zexp).or_insert_with(|| QSeries::zero(order.clone()));
            *e = &*e + &c.series;
        }
        Ok(Self::from_parts(w.zdenom, comps, order))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(terms: &[(i64, i64)], order: i64) -> QSeries {
        QSeries::from_int_terms(1, terms, int(order))
    }

    fn sample() -> JSeries {
        JSeries::from_rational_components(
            [(int(-1), q(&[(0, 1), (1, 2)], 4)), (int(0), q(&[(1, -3)], 4)), (int(2), q(&[(2, 5)], 4))],
            int(4),
        )
    }

    #[test]
    fn multiplicative_identity() {
        let a = sample();
        let one = JSeries::one(int(10));
        assert_eq!(&a * &one, a);
    }

    #[test]
    fn product_adds_zeta_exponents() {
        let a = JSeries::from_component(&int(1), q(&[(0, 1)], 5));
        let b = JSeries::from_component(&int(-1), q(&[(0, 1), (1, 1)], 5));
        let p = &a * &b;
        assert_eq!(p.zexponents(), vec![int(0)]);
        assert_eq!(p.zcoeff(&int(0)), q(&[(0, 1), (1, 1)], 5));
    }

    #[test]
    fn shift_half_signs_and_involution() {
        let a = sample();
        let s = a.shift_half().unwrap();
        assert_eq!(s.zcoeff(&int(-1)), -&a.zcoeff(&int(-1)));
        assert_eq!(s.zcoeff(&int(2)), a.zcoeff(&int(2)));
        assert_eq!(s.shift_half().unwrap(), a);
    }

    #[test]
    fn shift_half_on_half_integers_is_imaginary() {
        let a = JSeries::from_rational_components(
            [(rat(1, 2), q(&[(0, 1)], 3)), (rat(-1, 2), q(&[(0, -1)], 3))],
            int(3),
        );
        assert!(matches!(a.shift_half(), Err(Error::NonRealPhase { .. })));
        let p = a.shift_half_phased().unwrap();
        assert_eq!(p.turn(), &rat(1, 4));
        // e^{πi/2}·ζ^{1/2} and e^{-πi/2}·(-ζ^{-1/2}) = i·(ζ^{1/2} + ζ^{-1/2})
        assert_eq!(p.value().zcoeff(&rat(-1, 2)), q(&[(0, 1)], 3));
        assert!(p.value().zcoeff(&rat(1, 2)) == q(&[(0, 1)], 3));
        assert_eq!(p.pow(2).turn(), &Rational::zero());
    }

    #[test]
    fn shift_half_rejects_thirds() {
        let a = JSeries::from_component(&rat(1, 3), q(&[(0, 1)], 3));
        assert!(matches!(a.shift_half_phased(), Err(Error::NonRealPhase { .. })));
    }

    #[test]
    fn shift_half_tau_constant_unchanged() {
        let a = JSeries::from_q(q(&[(0, 1), (2, 7)], 5));
        assert_eq!(a.shift_half_tau(), a);
    }

    #[test]
    fn shift_half_tau_moves_exponents() {
        let a = sample();
        let s = a.shift_half_tau();
        assert_eq!(s.order(), &int(2));
        assert_eq!(s.coeff(&rat(-1, 2), &int(-1)).unwrap(), int(1));
        assert_eq!(s.coeff(&int(1), &int(0)).unwrap(), int(-3));
    }

    #[test]
    fn eval_z0_sums_components() {
        let v = sample().eval_z0();
        assert_eq!(v, q(&[(0, 1), (1, -1), (2, 5)], 4));
    }

    #[test]
    fn json_round_trip() {
        let a = JSeries::from_rational_components(
            [(rat(1, 3), q(&[(0, 1)], 3)), (rat(-2, 3), q(&[(1, -4)], 3))],
            int(3),
        );
        let s = serde_json::to_string(&a).unwrap();
        let b: JSeries = serde_json::from_str(&s).unwrap();
        assert_eq!(a, b);
        assert!(s.starts_with(r#"{"zdenom":3,"order":"3","components":[{"zexp":-2,"#));
    }
}
