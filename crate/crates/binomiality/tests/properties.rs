//! Property-based invariants: field axioms for the scalar arithmetic, ring
//! axioms for polynomials, order axioms for the monomial orders, and
//! round-trips through the text format.

use binomiality::parse::{parse_polynomial, reparse};
use binomiality::{Context, Monomial, MonomialOrder, Polynomial, Scalar};
use proptest::prelude::*;
use std::cmp::Ordering;

fn ctx() -> Context {
    Context::new(
        vec!["x".into(), "y".into(), "z".into()],
        vec!["a".into(), "b".into()],
        MonomialOrder::Grevlex,
    )
}

/// Scalars built from rationals and the two parameters by field operations.
fn scalar_strategy() -> impl Strategy<Value = Scalar> {
    let leaf = prop_oneof![
        (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Scalar::from_frac(n, d)),
        Just(Scalar::param(0, 2)),
        Just(Scalar::param(1, 2)),
    ];
    leaf.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.add(&b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a.mul(&b)),
            inner.prop_map(|a| a.neg()),
        ]
    })
}

fn monomial_strategy() -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0u32..4, 3).prop_map(Monomial)
}

fn poly_strategy() -> impl Strategy<Value = Polynomial> {
    proptest::collection::vec((monomial_strategy(), scalar_strategy()), 0..4).prop_map(|terms| {
        let mut p = Polynomial::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    })
}

fn order_strategy() -> impl Strategy<Value = MonomialOrder> {
    prop_oneof![
        Just(MonomialOrder::Grevlex),
        Just(MonomialOrder::Grlex),
        Just(MonomialOrder::Lex),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn scalar_field_axioms(a in scalar_strategy(), b in scalar_strategy(), c in scalar_strategy()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert_eq!(a.add(&Scalar::zero()), a.clone());
        prop_assert_eq!(a.mul(&Scalar::one()), a.clone());
        prop_assert!(a.add(&a.neg()).is_zero());
    }

    #[test]
    fn scalar_inverses(a in scalar_strategy()) {
        if !a.is_zero() {
            let inv = a.inv().unwrap();
            prop_assert!(a.mul(&inv).is_one());
        } else {
            prop_assert!(a.inv().is_err());
        }
    }

    #[test]
    fn polynomial_ring_axioms(p in poly_strategy(), q in poly_strategy(), r in poly_strategy()) {
        prop_assert_eq!(p.add(&q), q.add(&p));
        prop_assert_eq!(p.mul(&q), q.mul(&p));
        prop_assert_eq!(p.add(&q).add(&r), p.add(&q.add(&r)));
        prop_assert_eq!(p.mul(&q).mul(&r), p.mul(&q.mul(&r)));
        prop_assert_eq!(p.mul(&q.add(&r)), p.mul(&q).add(&p.mul(&r)));
        prop_assert!(p.add(&p.neg()).is_zero());
    }

    #[test]
    fn monomial_order_axioms(
        a in monomial_strategy(),
        b in monomial_strategy(),
        c in monomial_strategy(),
        order in order_strategy(),
    ) {
        // Total and antisymmetric.
        prop_assert_eq!(order.cmp(&a, &b), order.cmp(&b, &a).reverse());
        prop_assert_eq!(order.cmp(&a, &b) == Ordering::Equal, a == b);
        // Compatible with multiplication.
        prop_assert_eq!(order.cmp(&a.mul(&c), &b.mul(&c)), order.cmp(&a, &b));
        // 1 is the minimum (well-ordering of the monoid).
        let one = Monomial::one(3);
        prop_assert!(order.cmp(&a, &one) != Ordering::Less);
        // Graded orders sort by total degree first.
        if order != MonomialOrder::Lex && a.total_degree() != b.total_degree() {
            prop_assert_eq!(
                order.cmp(&a, &b),
                a.total_degree().cmp(&b.total_degree())
            );
        }
    }

    #[test]
    fn homogenization_round_trips(p in poly_strategy()) {
        let h = p.extend_vars(1).homogenize_to(3, p.degree().unwrap_or(0));
        prop_assert!(h.is_homogeneous());
        prop_assert_eq!(h.substitute_one(3), p.extend_vars(1));
    }

    #[test]
    fn text_round_trips(p in poly_strategy()) {
        let c = ctx();
        let back = parse_polynomial(&p.to_text(&c), &c).unwrap();
        prop_assert_eq!(reparse(&back, &c), reparse(&p, &c));
    }
}
