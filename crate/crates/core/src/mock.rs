//! The weight-one mock modular pair `S_0, S_1`, computed by two independent
//! formulas, and the two-variable product `θ_1(z;τ)^2 μ(z;τ)`.

use num_traits::{One, Signed};

use crate::jacobi_series::JSeries;
use crate::qseries::QSeries;
use crate::rational::{ceil_i64, floor_i64, int, rat, sign_pow, sqrt_ceil_bound, Rational};

#[derive(Clone, Debug, PartialEq)]
pub struct SPair {
    pub s0: QSeries,
    pub s1: QSeries,
}

impl SPair {
    pub fn new(order: &Rational) -> Self {
        SPair { s0: s_series(0, order), s1: s_series(1, order) }
    }

    pub fn get(&self, ell: i64) -> &QSeries {
        if ell.rem_euclid(2) == 0 {
            &self.s0
        } else {
            &self.s1
        }
    }
}

/// `P(r,s) = (r+1/2)^2/2 - s^2/4`.
fn p_exp(r: i64, s: i64) -> Rational {
    let x = rat(2 * r + 1, 2);
    &x * &x * rat(1, 2) - rat(s * s, 4)
}

/// `S_ℓ = Σ_{s ≡ ℓ (2)} Σ_{r ≥ |s|} (-1)^r q^{P(r,s)}`.
///
/// For `s < 0` the block `s <= r < -s` cancels termwise under `r -> -r-1`,
/// so only `r >= |s|` is summed. On that range `P(r,s) >= P(|s|,s) =
/// s^2/4 + |s|/2 + 1/8`, which gives the bound on `|s|`. For fixed `s`,
/// `P < order` iff `(r+1/2)^2 < 2(order + s^2/4)`.
pub fn s_series(ell: i64, order: &Rational) -> QSeries {
    let par = ell.rem_euclid(2);
    let mut terms = Vec::new();
    // s^2/4 + |s|/2 + 1/8 < order  =>  |s| < 2 sqrt(order)
    let smax = 2 * sqrt_ceil_bound(order);
    for s in -smax..=smax {
        if s.rem_euclid(2) != par {
            continue;
        }
        let sa = s.abs();
        if rat(sa * sa, 4) + rat(sa, 2) + rat(1, 8) >= *order {
            continue;
        }
        let rmax = sqrt_ceil_bound(&((order + rat(s * s, 4)) * int(2)));
        for r in sa..=rmax {
            let e = p_exp(r, s);
            if e < *order {
                terms.push((e, sign_pow(r)));
            }
        }
    }
    QSeries::from_terms(terms, order.clone())
}

/// `Σ_{r=s}^{-s-1} (-1)^r q^{P(r,s)}` for `s < 0`: the block dropped by
/// `s_series`, which vanishes identically.
pub fn s_cancellation_block(s: i64, order: &Rational) -> QSeries {
    let terms = (s..=(-s - 1)).map(|r| (p_exp(r, s), sign_pow(r)));
    QSeries::from_terms(terms, order.clone())
}

/// `Q(m,n) = (m + 2n - ℓ + 1/2)^2/2 - (n - ℓ/2)^2`.
fn q_exp(ell: i64, m: i64, n: i64) -> Rational {
    let x = rat(2 * (m + 2 * n - ell) + 1, 2);
    let u = rat(2 * n - ell, 2);
    &x * &x * rat(1, 2) - &u * &u
}

/// For fixed `n`, the integers `m` with `Q(m,n) < order`: writing `u = n - ℓ/2`,
/// `Q = (m + 2u + 1/2)^2/2 - u^2`, so `|m + 2u + 1/2| < sqrt(2(order + u^2))`.
fn m_window(ell: i64, n: i64, order: &Rational) -> Option<(i64, i64)> {
    let u = rat(2 * n - ell, 2);
    let budget = (order + &u * &u) * int(2);
    if !budget.is_positive() {
        return None;
    }
    let w = int(sqrt_ceil_bound(&budget));
    let centre = -(&u * int(2)) - rat(1, 2);
    Some((floor_i64(&(&centre - &w)), ceil_i64(&(&centre + &w))))
}

/// `S_ℓ = (Σ_{m,n≥0} - Σ_{m,n<0}) (-1)^{m+ℓ} q^{Q(m,n)}`.
///
/// Quadrant `m,n >= 0`: with `u = n - ℓ/2`, once `2u + 1/2 >= 0` the
/// exponent is increasing in `m >= 0`, so its minimum over the row is
/// `Q(0,n) = u^2 + u + 1/8`, increasing in `n`; rows stop once that minimum
/// reaches the order. Quadrant `m,n < 0`: with `m' = -m-1`, `n' = -n-1`,
/// `w = n' + 1 + ℓ/2` one gets `Q = (m' + 2w + 1/2)^2/2 - w^2`, the same
/// shape, and the same stopping rule applies in `n'`.
pub fn s_series_oracle(ell: i64, order: &Rational) -> QSeries {
    let mut terms = Vec::new();
    let row_min = |v: &Rational| v * v + v + rat(1, 8);
    let mut n = 0i64;
    loop {
        let u = rat(2 * n - ell, 2);
        if u >= rat(-1, 4) && row_min(&u) >= *order {
            break;
        }
        if let Some((lo, hi)) = m_window(ell, n, order) {
            for m in lo.max(0)..=hi {
                let e = q_exp(ell, m, n);
                if e < *order {
                    terms.push((e, sign_pow(m + ell)));
                }
            }
        }
        n += 1;
    }
    let mut n = -1i64;
    loop {
        let w = rat(-2 * n + ell, 2);
        if w >= rat(-1, 4) && row_min(&w) >= *order {
            break;
        }
        if let Some((lo, hi)) = m_window(ell, n, order) {
            for m in lo..=hi.min(-1) {
                let e = q_exp(ell, m, n);
                if e < *order {
                    terms.push((e, -sign_pow(m + ell)));
                }
            }
        }
        n -= 1;
    }
    QSeries::from_terms(terms, order.clone())
}

/// `Σ_{m ∈ Z} (-1)^m q^{Q(m,n)}` for one fixed `n`; vanishes because
/// `m -> -m-1-4n+2ℓ` preserves `Q` and flips the sign.
pub fn s_oracle_row(ell: i64, n: i64, order: &Rational) -> QSeries {
    let mut terms = Vec::new();
    if let Some((lo, hi)) = m_window(ell, n, order) {
        for m in lo..=hi {
            let e = q_exp(ell, m, n);
            if e < *order {
                terms.push((e, sign_pow(m)));
            }
        }
    }
    QSeries::from_terms(terms, order.clone())
}

/// `θ_1(z;τ)^2 μ(z;τ)` as the product
/// `[(Σ_{m,n≥0} - Σ_{m,n<0}) (-1)^n q^{(n^2+2mn+n)/2} ζ^{m+n}]·[Σ_k (-1)^k q^{(k+1/2)^2/2} ζ^{-k}]`.
///
/// Neither factor has finitely many ζ-components, so the product is formed
/// one component at a time: for `ζ^t` the triples are `k = m + n - t`. Both
/// parts of the exponent are non-negative on each quadrant and
/// `(k+1/2)^2/2 < order` bounds `s = m + n` to a window around `t`; for each
/// `s` the split `n` runs over a finite range. Components are produced for
/// `t^2/4 - 1/8 < order`, the support of `S_0 θ_{1,0} + S_1 θ_{1,1}`.
pub fn theta1sq_mu(order: &Rational) -> JSeries {
    // t^2 < 4·order + 1/2
    let tmax = sqrt_ceil_bound(&(order * int(4) + rat(1, 2)));
    let comps = (-tmax..=tmax)
        .filter(|t| rat(t * t, 4) - rat(1, 8) < *order)
        .map(|t| (int(t), theta1sq_mu_component(t, order)));
    JSeries::from_rational_components(comps, order.clone())
}

/// The `ζ^t` component of the triple sum.
pub fn theta1sq_mu_component(t: i64, order: &Rational) -> QSeries {
    let mut terms = Vec::new();
    let w = sqrt_ceil_bound(&(order * int(2)));
    let mut push = |m: i64, n: i64, sign: Rational| {
        let k = m + n - t;
        let kk = rat(2 * k + 1, 2);
        let e = rat(n * n + 2 * m * n + n, 2) + &kk * &kk * rat(1, 2);
        if e < *order {
            terms.push((e, sign * sign_pow(n + k)));
        }
    };
    // |s - t + 1/2| < sqrt(2·order)
    let s_lo = t - w - 1;
    let s_hi = t + w;
    for s in s_lo.max(0)..=s_hi {
        for n in 0..=s {
            push(s - n, n, Rational::one());
        }
    }
    for s in s_lo..=s_hi.min(-2) {
        for n in (s + 1)..=-1 {
            push(s - n, n, -Rational::one());
        }
    }
    QSeries::from_terms(terms, order.clone())
}
