//! Strategies shared by the property tests and the acceptance run.
#![allow(dead_code)]

use proptest::prelude::*;

use n4char::{int, rat, JSeries, QSeries, Rational};

pub fn min(a: Rational, b: Rational) -> Rational {
    if a < b {
        a
    } else {
        b
    }
}

/// Exponents `k/d` with `d ∈ {1,2,4,8}`, offset by a small shift, with
/// small rational coefficients.
pub fn qseries() -> impl Strategy<Value = QSeries> {
    (
        prop::sample::select(vec![1i64, 2, 4, 8]),
        -4i64..4,
        prop::collection::vec((0i64..24, -6i64..7, 1i64..4), 0..8),
        4i64..24,
    )
        .prop_map(|(d, shift, terms, order)| {
            let order = rat(order, 2);
            let ts = terms.into_iter().map(|(k, p, q)| (rat(k + shift, d), rat(p, q)));
            QSeries::from_terms(ts, order)
        })
}

/// A series with a nonzero leading coefficient.
pub fn unit_series() -> impl Strategy<Value = QSeries> {
    (qseries(), prop::sample::select(vec![1i64, 2, 4, 8]), -3i64..3, 1i64..5, 1i64..4, any::<bool>())
        .prop_map(|(s, d, v, p, q, neg)| {
            let lead = if neg { rat(-p, q) } else { rat(p, q) };
            let e = rat(v, d);
            let bump = QSeries::monomial(lead, e.clone(), s.order() + &e + int(1));
            // shift the random part above the leading term
            let rest = s.shift(&(&e + int(1) - s.valuation().unwrap_or_else(|| int(0))));
            let order = min(bump.order().clone(), rest.order().clone());
            (bump + rest).with_order_at_most(&order)
        })
}

pub fn jseries() -> impl Strategy<Value = JSeries> {
    (prop::collection::vec((0i64..12, -4i64..5, -5i64..6), 0..8), 3i64..12).prop_map(|(ts, order)| {
        let ts = ts.into_iter().map(|(n, r, c)| (rat(n, 2), int(r), int(c)));
        JSeries::from_terms(ts, int(order))
    })
}

pub fn veff(s: &QSeries) -> Rational {
    s.valuation().unwrap_or_else(|| s.order().clone())
}
