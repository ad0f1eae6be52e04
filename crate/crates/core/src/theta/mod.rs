//! Theta functions with characteristics, the four Jacobi thetas, the
//! Eichler–Zagier thetas `θ_{m,μ}`, powers of the Dedekind eta function and
//! positive-definite lattice theta series.

mod lattice;

pub use lattice::{lattice_theta, lattice_vectors, LatticeSpec, LatticeVector};

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::jacobi_series::{JSeries, PhasedJSeries};
use crate::qseries::QSeries;
use crate::rational::{ceil_i64, floor_i64, int, rat, sign_pow, sqrt_ceil_bound, Rational};

/// Parameters of `Σ_n e^{2πi(n+a)b} q^{tauscale (n+a)^2/2} ζ^{zscale (n+a)}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaChar {
    pub a: Rational,
    pub b: Rational,
    pub zscale: u64,
    pub tauscale: u64,
}

impl ThetaChar {
    pub fn new(a: Rational, b: Rational, zscale: u64, tauscale: u64) -> Self {
        ThetaChar { a, b, zscale, tauscale }
    }
}

/// Integers `n` with `(n + a)^2 < bound`, a superset computed from an integer
/// square-root ceiling and filtered exactly by the caller.
fn shifted_square_range(a: &Rational, bound: &Rational) -> std::ops::RangeInclusive<i64> {
    let w = int(sqrt_ceil_bound(bound));
    floor_i64(&(-a - &w))..=ceil_i64(&(-a + &w))
}

/// `ϑ[a;b](zscale·z; tauscale·τ)`. The phase `e^{2πi(n+a)b}` factors as
/// `e^{2πiab}·(-1)^{2bn}`; only `2b ∈ Z` is supported, which keeps every
/// coefficient rational up to one global root of unity.
pub fn theta_char(c: &ThetaChar, order: &Rational) -> Result<PhasedJSeries> {
    let two_b = &c.b * int(2);
    if !two_b.is_integer() {
        return Err(Error::UnsupportedPhase { b: c.b.clone() });
    }
    assert!(c.zscale > 0 && c.tauscale > 0, "theta scales must be positive");
    let sign_period = crate::rational::to_i64(two_b.numer()).rem_euclid(2);
    let ts = int(c.tauscale as i64);
    let zs = int(c.zscale as i64);
    // tauscale·(n+a)^2/2 < order  <=>  (n+a)^2 < 2·order/tauscale
    let bound = order * int(2) / &ts;
    let mut terms = Vec::new();
    if order.is_positive() {
        for n in shifted_square_range(&c.a, &bound) {
            let x = int(n) + &c.a;
            let e = &ts * &x * &x * rat(1, 2);
            if e >= *order {
                continue;
            }
            let s = if sign_period == 1 { sign_pow(n) } else { Rational::one() };
            terms.push((e, &zs * &x, s));
        }
    }
    let value = JSeries::from_terms(terms, order.clone());
    Ok(PhasedJSeries::new(&c.a * &c.b, value))
}

/// `theta_char` for characteristics whose global phase is real.
pub fn theta_char_real(c: &ThetaChar, order: &Rational) -> Result<JSeries> {
    theta_char(c, order)?
        .into_real()
        .map_err(|_| Error::UnsupportedPhase { b: c.b.clone() })
}

/// `θ_1(zscale·z; tauscale·τ) = -ϑ[1/2;1/2]`, carrying the phase `i`.
pub fn theta1(zscale: u64, tauscale: u64, order: &Rational) -> PhasedJSeries {
    let t = theta_char(&ThetaChar::new(rat(1, 2), rat(1, 2), zscale, tauscale), order)
        .expect("supported characteristic");
    PhasedJSeries::new(t.turn().clone(), -t.value())
}

/// `θ_1(z;τ)^2`, which is real: `-(Σ (-1)^n q^{(n+1/2)^2/2} ζ^{n+1/2})^2`.
pub fn theta1_squared(order: &Rational) -> JSeries {
    let t = theta1(1, 1, order);
    t.pow(2).into_real().expect("θ_1^2 is real")
}

/// `θ_2 = ϑ[1/2;0]`.
pub fn theta2(zscale: u64, tauscale: u64, order: &Rational) -> JSeries {
    theta_char_real(&ThetaChar::new(rat(1, 2), Rational::zero(), zscale, tauscale), order).expect("real")
}

/// `θ_3 = ϑ[0;0]`.
pub fn theta3(zscale: u64, tauscale: u64, order: &Rational) -> JSeries {
    theta_char_real(&ThetaChar::new(Rational::zero(), Rational::zero(), zscale, tauscale), order).expect("real")
}

/// `θ_4 = ϑ[0;1/2]`.
pub fn theta4(zscale: u64, tauscale: u64, order: &Rational) -> JSeries {
    theta_char_real(&ThetaChar::new(Rational::zero(), rat(1, 2), zscale, tauscale), order).expect("real")
}

/// The theta constant `θ_j(tauscale·τ)` for `j ∈ {2, 3, 4}`.
pub fn theta_const(j: u8, tauscale: u64, order: &Rational) -> QSeries {
    match j {
        2 => theta2(1, tauscale, order).eval_z0(),
        3 => theta3(1, tauscale, order).eval_z0(),
        4 => theta4(1, tauscale, order).eval_z0(),
        _ => panic!("theta constant index must be 2, 3 or 4"),
    }
}

/// `θ_{m,ν}(z;τ) = Σ_{ℓ ≡ ν mod 2m} q^{ℓ^2/4m} ζ^ℓ` for rational `ν`.
pub fn theta_mnu(m: &Rational, nu: &Rational, order: &Rational) -> JSeries {
    assert!(m.is_positive(), "theta index must be positive");
    let two_m = m * int(2);
    let bound_sq = order * int(4) * m;
    let mut terms = Vec::new();
    if order.is_positive() {
        // ℓ = ν + 2m·n with ℓ^2 < 4m·order
        let a = nu / &two_m;
        let b = bound_sq / (&two_m * &two_m);
        for n in shifted_square_range(&a, &b) {
            let l = nu + &two_m * int(n);
            let e = &l * &l / (m * int(4));
            if e < *order {
                terms.push((e, l, Rational::one()));
            }
        }
    }
    JSeries::from_terms(terms, order.clone())
}

/// `θ_{m,μ}(z;τ)`.
pub fn theta_mmu(m: u64, mu: i64, order: &Rational) -> JSeries {
    theta_mnu(&int(m as i64), &int(mu), order)
}

/// `Σ (-1)^n q^{n(3n+1)/2}` below `order` (the eta product without `q^{1/24}`).
fn pentagonal(order: &Rational) -> QSeries {
    let mut terms = Vec::new();
    if order.is_positive() {
        // n(3n+1)/2 >= (|n| - 1/6)^2·3/2, so |n| <= sqrt(2·order/3) + 1
        let w = sqrt_ceil_bound(&(order * rat(2, 3))) + 1;
        for n in -w..=w {
            let e = rat(n * (3 * n + 1), 2);
            if e < *order {
                terms.push((e, sign_pow(n)));
            }
        }
    }
    QSeries::from_terms(terms, order.clone())
}

/// `η(τ)^k`, exact below `order`.
pub fn eta_power(k: i64, order: &Rational) -> QSeries {
    if k == 0 {
        return QSeries::one(order.clone());
    }
    let lead = rat(k, 24);
    let rel = order - &lead;
    if !rel.is_positive() {
        return QSeries::zero(order.clone());
    }
    let p = pentagonal(&rel).pow(k).expect("pentagonal series has unit leading term");
    p.shift(&lead)
}

/// `η(tauscale·τ)^k`.
pub fn eta_power_scaled(k: i64, tauscale: u64, order: &Rational) -> QSeries {
    eta_power(k, &(order / int(tauscale as i64))).rescale(tauscale)
}
