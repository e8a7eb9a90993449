use ipstar_core::structures::Word;
use ipstar_core::{Element, GroundStructure, Poly, SubgroupSpec};
use proptest::prelude::*;

fn poly() -> impl Strategy<Value = Element> {
    prop::collection::vec(-50i64..50, 0..5).prop_map(|c| Element::poly(&c))
}

fn nonzero_poly() -> impl Strategy<Value = Element> {
    poly().prop_filter("nonzero", |p| !p.is_zero())
}

fn int() -> impl Strategy<Value = Element> {
    (-10_000i64..10_000).prop_map(Element::int)
}

fn ring_laws(s: &GroundStructure, a: &Element, b: &Element, c: &Element) {
    let add = |x: &Element, y: &Element| s.add(x, y).unwrap();
    let mul = |x: &Element, y: &Element| s.mul(x, y).unwrap();
    assert_eq!(add(&add(a, b), c), add(a, &add(b, c)));
    assert_eq!(mul(&mul(a, b), c), mul(a, &mul(b, c)));
    assert_eq!(add(a, b), add(b, a));
    assert_eq!(mul(a, b), mul(b, a));
    assert_eq!(mul(a, &add(b, c)), add(&mul(a, b), &mul(a, c)));
    assert_eq!(add(a, &s.zero().unwrap()), a.clone());
    assert_eq!(mul(a, &s.one().unwrap()), a.clone());
    assert!(add(a, &s.neg(a).unwrap()).is_zero());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn integer_ring_laws(a in int(), b in int(), c in int()) {
        ring_laws(&GroundStructure::Integers, &a, &b, &c);
    }

    #[test]
    fn polynomial_ring_laws(a in poly(), b in poly(), c in poly()) {
        ring_laws(&GroundStructure::Polynomials, &a, &b, &c);
    }

    #[test]
    fn modular_ring_laws(n in 2u64..40, a in 0u64..1000, b in 0u64..1000, c in 0u64..1000) {
        let s = GroundStructure::modular(n).unwrap();
        let r = |v: u64| Element::Residue(v % n);
        ring_laws(&s, &r(a), &r(b), &r(c));
    }

    #[test]
    fn concatenation_is_associative(a in "[ab]{1,6}", b in "[ab]{1,6}", c in "[ab]{1,6}") {
        let s = GroundStructure::free_semigroup("ab").unwrap();
        let w = |x: &str| Element::Word(Word::new(x).unwrap());
        let left = s.mul(&s.mul(&w(&a), &w(&b)).unwrap(), &w(&c)).unwrap();
        let right = s.mul(&w(&a), &s.mul(&w(&b), &w(&c)).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn no_zero_divisors(a in nonzero_poly(), b in nonzero_poly(), m in -500i64..500, k in -500i64..500) {
        prop_assert!(!GroundStructure::Polynomials.mul(&a, &b).unwrap().is_zero());
        prop_assume!(m != 0 && k != 0);
        prop_assert!(!GroundStructure::Integers.mul(&Element::int(m), &Element::int(k)).unwrap().is_zero());
    }

    #[test]
    fn integer_coset_labels_are_constant(k in 1i64..30, g in int(), h in -1000i64..1000) {
        let sub = SubgroupSpec::int_multiples(k).unwrap();
        let shifted = GroundStructure::Integers.add(&g, &Element::int(h * k)).unwrap();
        prop_assert_eq!(sub.coset_label(&g).unwrap(), sub.coset_label(&shifted).unwrap());
    }

    #[test]
    fn polynomial_coset_labels_are_constant(
        alpha in prop::sample::select(vec![vec![0, 1], vec![2], vec![0, 0, 1], vec![1, 1], vec![1, 0, -1], vec![3, 2], vec![-5]]),
        g in poly(),
        q in poly(),
    ) {
        let alpha = Poly::from_i64s(&alpha);
        let sub = SubgroupSpec::poly_multiples(alpha.clone()).unwrap();
        let s = GroundStructure::Polynomials;
        let h = s.mul(&Element::Poly(alpha), &q).unwrap();
        prop_assert!(sub.contains(&h).unwrap());
        let shifted = s.add(&g, &h).unwrap();
        let (l1, l2) = (sub.coset_label(&g).unwrap(), sub.coset_label(&shifted).unwrap());
        prop_assert!(sub.labels_match(&l1, &l2).unwrap());
        if l1.is_exact() {
            prop_assert_eq!(l1, l2);
        }
    }
}

#[test]
fn enumeration_is_prefix_stable() {
    let structures = [
        GroundStructure::Integers,
        GroundStructure::modular(7).unwrap(),
        GroundStructure::Polynomials,
        GroundStructure::free_semigroup("ab").unwrap(),
    ];
    for s in structures {
        let long = s.enumerate(300);
        for n in [0, 1, 2, 5, 17, 100, 299] {
            assert_eq!(s.enumerate(n), long[..n.min(long.len())], "{s} n = {n}");
        }
        let distinct: std::collections::HashSet<_> = long.iter().collect();
        assert_eq!(distinct.len(), long.len(), "{s} repeats an element");
    }
}
