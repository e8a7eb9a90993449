use ipstar_core::constructions::{
    avoid_sequence, diff_ipstar_demo, goswami_d, goswami_product_check, j_witness_search, pigeonhole_extract,
};
use ipstar_core::largeness::fs_enumerate;
use ipstar_core::{Element, FiniteSequence, Poly, SearchConfig, SetSpec, SubgroupSpec};
use num_integer::Integer;
use proptest::prelude::*;

fn ints(range: std::ops::RangeInclusive<i64>) -> Vec<Element> {
    range.map(Element::int).collect()
}

fn positive_evens() -> SetSpec {
    SetSpec::intersection(vec![SetSpec::multiples(2).unwrap(), SetSpec::interval(Some(1), None)]).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn pigeonhole_always_finds_a_block(k in 2i64..=10, extra in 0usize..4, seed in prop::collection::vec(-1000i64..1000, 14)) {
        let h = SubgroupSpec::int_multiples(k).unwrap();
        let len = k as usize + 1 + extra;
        let seq = FiniteSequence::ints(&seed[..len]).unwrap();
        let block = pigeonhole_extract(&h, &seq).unwrap();
        prop_assert!(1 <= block.start && block.start <= block.end && block.end <= k as usize + 1);
        prop_assert!(h.contains(&block.sum).unwrap());
        let direct: i64 = seed[block.start - 1..block.end].iter().sum();
        prop_assert_eq!(block.sum, Element::int(direct));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn differences_of_positive_evens_meet_every_sum_set(x in prop::collection::vec(1i64..=50, 2..=8)) {
        let a = positive_evens();
        let seq = FiniteSequence::ints(&x).unwrap();
        let cfg = SearchConfig::default();
        let w = diff_ipstar_demo(&a, &seq, &ints(1..=10), &ints(0..=20), &cfg).unwrap();
        prop_assert!(w.recheck(&a, &seq).unwrap());
        prop_assert!(w.certificate(&a, &seq).unwrap().recheck);
    }

    #[test]
    fn j_witnesses_recheck(
        k in 2i64..6,
        fam in prop::collection::vec(prop::collection::vec(-30i64..30, 6), 1..4),
    ) {
        let a = SetSpec::multiples(k).unwrap();
        let family: Vec<FiniteSequence> = fam.iter().map(|f| FiniteSequence::ints(f).unwrap()).collect();
        let out = j_witness_search(&a, &family, &ints(-5..=5), &SearchConfig::default()).unwrap();
        if let Some(w) = out.witness() {
            prop_assert!(w.recheck(&a, &family).unwrap());
        }
    }

    #[test]
    fn d_set_of_integers_is_an_lcm_ideal(b in prop::collection::vec(-12i64..=12, 1..=3)) {
        let seq = FiniteSequence::ints(&b).unwrap();
        let sums: Vec<i64> = fs_enumerate(&seq)
            .unwrap()
            .values()
            .map(|v| i64::try_from(v.as_int().unwrap()).unwrap())
            .collect();
        prop_assume!(!sums.contains(&0));
        let lcm = sums.iter().fold(1i64, |acc, s| acc.lcm(s));
        let window = ints(-300..=300);
        let d = goswami_d(&SetSpec::all_integers(), &seq, &window, &SearchConfig::default()).unwrap();
        let by_lcm: Vec<Element> = (-300..=300i64).filter(|n| n % lcm == 0).map(Element::int).collect();
        let by_division: Vec<Element> = (-300..=300i64).filter(|n| sums.iter().all(|s| n % s == 0)).map(Element::int).collect();
        prop_assert_eq!(&d.members, &by_lcm);
        prop_assert_eq!(&d.members, &by_division);
    }
}

#[test]
fn avoiding_sequences_pass_the_exhaustive_check() {
    let cfg = SearchConfig::default();
    for alpha in [Poly::x(), Poly::constant(2), Poly::monomial(1, 2)] {
        let h = SubgroupSpec::poly_multiples(alpha).unwrap();
        for n in 1..=12 {
            let out = avoid_sequence(&h, n, &cfg).unwrap();
            assert_eq!(out.sequence.len(), n);
            for v in fs_enumerate(&out.sequence).unwrap().values() {
                assert!(!h.contains(v).unwrap(), "{} meets {}", out.sequence, h.describe());
            }
        }
    }
}

#[test]
fn product_certificates_recheck() {
    let cfg = SearchConfig::default();
    let a = SetSpec::multiples(3).unwrap();
    let b_set = SetSpec::multiples(4).unwrap();
    let b = FiniteSequence::ints(&[2, 2, 6]).unwrap();
    let out = goswami_product_check(&a, &b_set, &b, &ints(-10..=10), &ints(-60..=60), &cfg).unwrap();
    assert_eq!(out.index_sets.len(), 20);
    assert!(!out.certificates.is_empty());
    for c in &out.certificates {
        assert!(c.recheck(&a, &b_set, &b).unwrap());
        assert!(c.certificate(&a, &b_set, &b).unwrap().recheck);
    }
}
