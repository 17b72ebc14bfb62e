//! Property tests for the algebraic substrate: ring axioms survive the
//! canonical representation, substitution is a homomorphism, text round
//! trips are bit-exact and series reversion inverts composition.

use std::sync::Arc;

use proptest::prelude::*;

use kummer_core::field::{field_make, FieldDesc};
use kummer_core::local::{series_reversion, TruncatedSeries};
use kummer_core::poly::{Monomial, MonomialOrder, MultiPoly, RingMap, VarRoster};

fn f4() -> Arc<FieldDesc> {
    field_make(2, 2, None).unwrap()
}

fn roster3() -> Arc<VarRoster> {
    VarRoster::new(vec!["x", "y", "z"])
}

prop_compose! {
    fn arb_poly()(terms in prop::collection::vec(
        (prop::collection::vec(0u16..4, 3), 0u8..4),
        0..6,
    )) -> MultiPoly {
        let desc = f4();
        let roster = roster3();
        let mut p = MultiPoly::zero(&roster, &desc);
        for (exps, c) in terms {
            p.add_term(Monomial::from_exps(&exps), desc.element_at(c as u128));
        }
        p
    }
}

proptest! {
    #[test]
    fn addition_and_multiplication_are_commutative_rings(
        a in arb_poly(), b in arb_poly(), c in arb_poly()
    ) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        // canonical form: x - x = 0 exactly
        prop_assert!(a.sub(&a).is_zero());
    }

    #[test]
    fn substitution_is_a_ring_homomorphism(a in arb_poly(), b in arb_poly()) {
        let desc = f4();
        let roster = roster3();
        let images = vec![
            MultiPoly::parse(&roster, &desc, "x + y^2").unwrap(),
            MultiPoly::parse(&roster, &desc, "g*z").unwrap(),
            MultiPoly::parse(&roster, &desc, "x*z + 1").unwrap(),
        ];
        let map = RingMap::new(&roster, images);
        prop_assert_eq!(map.apply(&a.add(&b)), map.apply(&a).add(&map.apply(&b)));
        prop_assert_eq!(map.apply(&a.mul(&b)), map.apply(&a).mul(&map.apply(&b)));
    }

    #[test]
    fn text_round_trip_is_bit_exact(a in arb_poly()) {
        let text = a.to_text();
        let back = MultiPoly::parse(a.roster(), a.desc(), &text).unwrap();
        prop_assert_eq!(&back, &a);
        prop_assert_eq!(back.to_text(), text);
    }

    #[test]
    fn monomial_orders_are_total_multiplicative_well_orders(
        a in prop::collection::vec(0u16..8, 4),
        b in prop::collection::vec(0u16..8, 4),
        m in prop::collection::vec(0u16..8, 4),
        block in prop::collection::vec(0usize..4, 0..4),
    ) {
        let a = Monomial::from_exps(&a);
        let b = Monomial::from_exps(&b);
        let m = Monomial::from_exps(&m);
        let one = Monomial::one(4);
        for order in [MonomialOrder::Lex, MonomialOrder::GrevLex, MonomialOrder::block(block)] {
            prop_assert_eq!(order.cmp(&a, &b), order.cmp(&b, &a).reverse());
            prop_assert!(order.cmp(&a, &b) != std::cmp::Ordering::Equal || a == b);
            prop_assert_eq!(order.cmp(&a.mul(&m), &b.mul(&m)), order.cmp(&a, &b));
            prop_assert!(order.cmp(&one, &a) != std::cmp::Ordering::Greater);
        }
    }

    #[test]
    fn reversion_inverts_composition(
        coeffs in prop::collection::vec(0u8..4, 0..6),
        lead in 1u8..4,
    ) {
        let desc = f4();
        let x = VarRoster::new(vec!["x"]);
        let n = 10;
        // f = lead * x + higher-order tail
        let mut f = TruncatedSeries::var(&x, &desc, 0, n).scale(&desc.element_at(lead as u128));
        for (i, c) in coeffs.into_iter().enumerate() {
            let term = MultiPoly::var_pow(&x, &desc, 0, (i + 2) as u16)
                .scale(&desc.element_at(c as u128));
            f = f.add(&TruncatedSeries::from_poly(&term, n));
        }
        let g = series_reversion(&f).unwrap();
        let composed = f.compose(std::slice::from_ref(&g)).unwrap();
        prop_assert_eq!(composed, TruncatedSeries::var(&x, &desc, 0, n));
    }

    #[test]
    fn series_arithmetic_matches_polynomials_below_truncation(
        a in arb_poly(), b in arb_poly()
    ) {
        let n = 32; // comfortably above any product degree the generator makes
        let sa = TruncatedSeries::from_poly(&a, n);
        let sb = TruncatedSeries::from_poly(&b, n);
        prop_assert_eq!(sa.mul(&sb).to_poly(), a.mul(&b));
        prop_assert_eq!(sa.add(&sb).to_poly(), a.add(&b));
    }
}
