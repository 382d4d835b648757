use std::cmp::Ordering;

use proptest::prelude::*;
use stagedtoric::polyring::{parse_polynomial, render, Monomial, TermOrder, Var};
use stagedtoric::{IntPoly, Integer};

fn var_pool() -> Vec<Var> {
    vec![
        Var::Homogenizer,
        Var::label("s0").unwrap(),
        Var::label("s1").unwrap(),
        Var::label("s10").unwrap(),
        Var::path(vec![0, 1]),
        Var::path(vec![1]),
        Var::path(vec![0, 0, 1]),
    ]
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop::collection::vec(0u32..3, 7).prop_map(|exps| Monomial::from_pairs(var_pool().into_iter().zip(exps)))
}

fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec((monomial(), -6i64..7), 0..5)
        .prop_map(|ts| IntPoly::from_terms(ts.into_iter().map(|(m, c)| (m, Integer::from(c)))))
}

fn order() -> impl Strategy<Value = TermOrder> {
    prop_oneof![
        Just(TermOrder::PathLex),
        prop::sample::subsequence(var_pool(), 0..4).prop_map(TermOrder::eliminating),
        (prop::sample::subsequence(var_pool(), 1..3), prop::sample::subsequence(var_pool(), 1..3))
            .prop_map(|(a, b)| TermOrder::LexBlock(vec![a.into_iter().collect(), b.into_iter().collect()])),
    ]
}

proptest! {
    #[test]
    fn ring_axioms(a in poly(), b in poly(), c in poly()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
        prop_assert_eq!(&a * &IntPoly::one(), a.clone());
    }

    #[test]
    fn specialization_is_multiplicative(a in poly(), b in poly(), drop in prop::sample::subsequence(var_pool(), 0..7)) {
        let sp = |p: &IntPoly| p.specialize_ones(|v| drop.contains(v));
        prop_assert_eq!(sp(&(&a * &b)), &sp(&a) * &sp(&b));
    }

    #[test]
    fn term_orders_are_total_and_multiplicative(ord in order(), x in monomial(), y in monomial(), z in monomial(), n in monomial()) {
        let cxy = ord.compare(&x, &y);
        prop_assert_eq!(cxy, ord.compare(&y, &x).reverse());
        prop_assert_eq!(cxy == Ordering::Equal, x == y);
        prop_assert_eq!(ord.compare(&x.mul(&n), &y.mul(&n)), cxy);
        if cxy != Ordering::Less && ord.compare(&y, &z) != Ordering::Less {
            prop_assert_ne!(ord.compare(&x, &z), Ordering::Less);
        }
        prop_assert_ne!(ord.compare(&Monomial::one(), &x.mul(&Monomial::var(Var::Homogenizer))), Ordering::Greater);
    }

    #[test]
    fn text_round_trips(p in poly(), ord in order()) {
        let text = render(&p, &ord);
        let back: IntPoly = parse_polynomial(&text).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn leading_term_is_first_rendered(p in poly()) {
        prop_assume!(!p.is_zero());
        let (lm, _) = p.leading_term(&TermOrder::PathLex).unwrap();
        let first = p.sorted_terms(&TermOrder::PathLex)[0].0;
        prop_assert_eq!(lm, first);
    }
}

#[test]
fn descending_chain_in_one_degree_is_finite() {
    // Degree-2 monomials in the pool, sorted descending, contain no cycles.
    let vars = var_pool();
    let mut ms: Vec<Monomial> = Vec::new();
    for i in 0..vars.len() {
        for j in i..vars.len() {
            ms.push(Monomial::from_vars([vars[i].clone(), vars[j].clone()]));
        }
    }
    ms.sort_by(|a, b| TermOrder::PathLex.compare(b, a));
    for w in ms.windows(2) {
        assert_eq!(TermOrder::PathLex.compare(&w[0], &w[1]), Ordering::Greater);
    }
}

#[test]
fn path_lex_prefers_the_smallest_index() {
    let a = Monomial::from_vars([Var::path(vec![0, 0, 0]), Var::path(vec![1, 0, 1])]);
    let b = Monomial::from_vars([Var::path(vec![1, 0, 0]), Var::path(vec![0, 0, 1])]);
    assert_eq!(TermOrder::PathLex.compare(&a, &b), Ordering::Greater);
}
