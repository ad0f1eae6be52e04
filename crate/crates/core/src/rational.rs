//! Arbitrary-precision rationals and their string form on the wire.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"p/q"` or a plain decimal such as `"-0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    if let Some((whole, frac)) = s.split_once('.') {
        if frac.is_empty() || !frac.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.trim_start().starts_with('-');
        let whole: BigInt = match whole.trim() {
            "" | "-" | "+" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let frac_int: BigInt = frac.parse().map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = Rational::new(frac_int, scale);
        let whole = Rational::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    let p: BigInt = s.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(p))
}

/// Always `"p/q"`, also for integers (`"3/1"` is written as `"3"`).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("exponent numerator exceeds i64")
}

pub(crate) fn denom_u64(r: &Rational) -> u64 {
    r.denom().to_u64().expect("denominator exceeds u64")
}

pub(crate) fn lcm(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

pub(crate) fn gcd(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

/// Smallest integer strictly greater than every integer k with k < r, i.e. ceil(r).
pub(crate) fn ceil_i64(r: &Rational) -> i64 {
    to_i64(&r.ceil().to_integer())
}

pub(crate) fn floor_i64(r: &Rational) -> i64 {
    to_i64(&r.floor().to_integer())
}

/// floor(sqrt(n)) for n >= 0.
pub(crate) fn isqrt(n: &BigInt) -> BigInt {
    assert!(!n.is_negative(), "isqrt of a negative number");
    n.sqrt()
}

/// An integer bound B with B >= sqrt(r) for rational r >= 0.
pub(crate) fn sqrt_ceil_bound(r: &Rational) -> i64 {
    if !r.is_positive() {
        return 0;
    }
    let c = r.ceil().to_integer();
    to_i64(&isqrt(&c)) + 1
}

pub(crate) fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // ratios of huge integers: scale down before converting
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// (-1)^k as a rational.
pub(crate) fn sign_pow(k: i64) -> Rational {
    if k.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}
