mod common;

use common::*;
use proptest::prelude::*;

use n4char::{int, rat, QSeries};

proptest! {
    #[test]
    fn addition_is_a_commutative_group(a in qseries(), b in qseries(), c in qseries()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a + &QSeries::zero(a.order().clone()), a.clone());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in qseries(), b in qseries(), c in qseries()) {
        prop_assert_eq!(&a * &b, &b * &a);
        let l = &(&a * &b) * &c;
        let r = &a * &(&b * &c);
        prop_assert!(l.agrees_with(&r));
    }

    #[test]
    fn distributive(a in qseries(), b in qseries(), c in qseries()) {
        let l = &a * &(&b + &c);
        let r = &(&a * &b) + &(&a * &c);
        prop_assert!(l.agrees_with(&r));
    }

    #[test]
    fn one_is_neutral(a in qseries()) {
        let one = QSeries::one(a.order() - veff(&a) + int(1));
        prop_assert!((&a * &one).agrees_with(&a));
    }

    #[test]
    fn order_bookkeeping(a in qseries(), b in qseries()) {
        prop_assert_eq!((&a + &b).order().clone(), min(a.order().clone(), b.order().clone()));
        let want = min(a.order() + veff(&b), b.order() + veff(&a));
        prop_assert_eq!((&a * &b).order().clone(), want);
        for (e, _) in (&a * &b).terms() {
            prop_assert!(&e < (&a * &b).order());
        }
    }

    #[test]
    fn truncate_then_multiply_agrees(a in qseries(), b in qseries(), cut in 1i64..10) {
        let o = rat(cut, 2);
        let p = &a.truncate(&o) * &b.truncate(&o);
        prop_assert!(p.agrees_with(&(&a * &b)));
    }

    #[test]
    fn jseries_ring(a in jseries(), b in jseries(), c in jseries()) {
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert!((&(&a * &b) * &c).agrees_with(&(&a * &(&b * &c))));
        prop_assert!((&a * &(&b + &c)).agrees_with(&(&(&a * &b) + &(&a * &c))));
    }

    #[test]
    fn shift_half_is_an_involution(a in jseries()) {
        let twice = a.shift_half().unwrap().shift_half().unwrap();
        prop_assert_eq!(twice, a.clone());
        prop_assert_eq!(a.negate_z().negate_z(), a);
    }

    #[test]
    fn json_round_trip(a in qseries()) {
        let s = serde_json::to_string(&a).unwrap();
        let b: QSeries = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(a, b);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn inversion_round_trip(a in unit_series()) {
        let v = a.valuation().unwrap();
        let inv = a.invert().unwrap();
        prop_assert_eq!(inv.order().clone(), a.order() - &v * int(2));
        let p = &a * &inv;
        prop_assert_eq!(p.order().clone(), a.order() - &v);
        prop_assert!(p.agrees_with(&QSeries::one(p.order().clone())));
        prop_assert!(inv.invert().unwrap().agrees_with(&a));
    }
}
