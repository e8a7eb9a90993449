use std::collections::BTreeSet;

use ipstar_core::largeness::{
    certify_ipr_star_window, delta_set, difference_set, fs_enumerate, product_set, VerdictStatus,
};
use ipstar_core::{Element, FiniteSequence, GroundStructure, SearchConfig, SetSpec, WindowVerdict};
use proptest::prelude::*;

fn ints(v: &[i64]) -> Vec<Element> {
    v.iter().map(|&x| Element::int(x)).collect()
}

fn sums_of(seq: &[i64]) -> BTreeSet<Element> {
    let s = FiniteSequence::ints(seq).unwrap();
    fs_enumerate(&s).unwrap().values().cloned().collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn fs_incremental_identity(seq in prop::collection::vec(-40i64..40, 1..=12), next in -40i64..40) {
        let before = sums_of(&seq);
        let mut longer = seq.clone();
        longer.push(next);
        let table = fs_enumerate(&FiniteSequence::ints(&longer).unwrap()).unwrap();
        prop_assert_eq!(table.len(), (1 << longer.len()) - 1);
        let z = GroundStructure::Integers;
        let x = Element::int(next);
        let mut expected = before.clone();
        expected.insert(x.clone());
        expected.extend(before.iter().map(|y| z.add(y, &x).unwrap()));
        prop_assert_eq!(table.values().cloned().collect::<BTreeSet<_>>(), expected);
    }

    #[test]
    fn falsification_survives_larger_windows(
        members in prop::collection::btree_set(-30i64..30, 0..20),
        window in prop::collection::btree_set(-8i64..8, 1..5),
        extra in prop::collection::btree_set(-8i64..8, 0..4),
        r in 1usize..4,
    ) {
        let a = SetSpec::ints(members);
        let cfg = SearchConfig::default();
        let w = ints(&window.iter().copied().collect::<Vec<_>>());
        let verdict = certify_ipr_star_window(&a, r, &w, &cfg).unwrap();
        prop_assert!(verdict.recheck(&a, &SearchConfig::sequential()).unwrap());
        if !verdict.is_certified() {
            let wide: Vec<Element> = ints(&window.union(&extra).copied().collect::<Vec<_>>());
            let widened = certify_ipr_star_window(&a, r, &wide, &cfg).unwrap();
            prop_assert_eq!(widened.status, VerdictStatus::Falsified);
            let carried = WindowVerdict { window: wide, ..verdict };
            prop_assert!(carried.recheck(&a, &cfg).unwrap());
        }
    }

    #[test]
    fn signed_differences_are_symmetric(members in prop::collection::btree_set(-60i64..60, 1..25)) {
        let d = difference_set(&SetSpec::ints(members), 150).unwrap();
        for k in 0..=150i64 {
            prop_assert_eq!(d.contains(&Element::int(k)).unwrap(), d.contains(&Element::int(-k)).unwrap());
        }
    }

    #[test]
    fn products_match_brute_force(
        left in prop::collection::btree_set(-40i64..40, 1..100),
        right in prop::collection::btree_set(-40i64..40, 1..100),
    ) {
        let brute: BTreeSet<i64> = left.iter().flat_map(|x| right.iter().map(move |y| x * y)).collect();
        let p = product_set(&SetSpec::ints(left), &SetSpec::ints(right), 500).unwrap();
        for n in -500..=500i64 {
            prop_assert_eq!(p.contains(&Element::int(n)).unwrap(), brute.contains(&n), "n = {}", n);
        }
    }

    #[test]
    fn delta_set_is_positive_part_of_differences(members in prop::collection::btree_set(1i64..=50, 2..=6)) {
        let elems = ints(&members.iter().copied().collect::<Vec<_>>());
        let delta = delta_set(&elems).unwrap();
        let diff = difference_set(&SetSpec::ints(members), 60).unwrap();
        for k in 1..=60i64 {
            let e = Element::int(k);
            prop_assert_eq!(delta.contains(&e).unwrap(), diff.contains(&e).unwrap(), "k = {}", k);
        }
    }
}
