use std::sync::Arc;

use proptest::prelude::*;

use cmapx_core::field::{Field, PrimeField, Rationals};
use cmapx_core::mono::MonomialOrder;
use cmapx_core::poly::{Poly, PolyRing};
use cmapx_core::ring::GradedRing;
use cmapx_core::text::parse_poly;

type Terms = Vec<(i64, [u16; 3])>;

fn terms() -> impl Strategy<Value = Terms> {
    prop::collection::vec((-20i64..20, [0u16..4, 0u16..4, 0u16..4]), 0..6)
}

fn build<F: Field>(r: &PolyRing<F>, t: &Terms) -> Poly<F> {
    r.from_terms(t.iter().map(|(c, e)| (r.mono(e), r.field().from_i64(*c))).collect())
}

fn ring<F: Field>(field: F, order: MonomialOrder) -> PolyRing<F> {
    PolyRing::new(field, vec!["x".into(), "y".into(), "z".into()], vec![1, 2, 1], order).unwrap()
}

proptest! {
    #[test]
    fn multiplication_is_associative_and_distributive(a in terms(), b in terms(), c in terms()) {
        let r = ring(PrimeField::default(), MonomialOrder::Grevlex);
        let (a, b, c) = (build(&r, &a), build(&r, &b), build(&r, &c));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
    }

    #[test]
    fn rendering_parses_back(a in terms()) {
        for order in [MonomialOrder::Grevlex, MonomialOrder::Lex] {
            let r = ring(Rationals, order);
            let p = build(&r, &a);
            prop_assert_eq!(parse_poly(&r, &r.render(&p)).unwrap(), p);
        }
    }

    #[test]
    fn ideal_multiples_reduce_to_zero(a in terms(), b in terms()) {
        let r = Arc::new(ring(PrimeField::default(), MonomialOrder::Grevlex));
        let gens = vec![parse_poly(&r, "x^2 - z^2").unwrap(), parse_poly(&r, "x*z - y").unwrap()];
        let q = GradedRing::new(r.clone(), gens.clone()).unwrap();
        let (a, b) = (build(&r, &a), build(&r, &b));
        let f = r.add(&r.mul(&a, &gens[0]), &r.mul(&b, &gens[1]));
        prop_assert!(q.is_zero(&f));
        let nf = q.reduce(&a);
        prop_assert_eq!(q.reduce(&nf), nf.clone());
        prop_assert!(q.is_zero(&r.sub(&a, &nf)));
    }
}
