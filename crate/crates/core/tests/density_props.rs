use std::collections::BTreeSet;

use ipstar_core::density::{banach_upper_density_est, upper_density, FolnerFamily};
use ipstar_core::{Element, Exec, SetSpec};
use num_rational::Rational64;
use proptest::prelude::*;

const N: usize = 120;

fn subset() -> impl Strategy<Value = BTreeSet<i64>> {
    prop::collection::btree_set(1i64..=N as i64, 1..80)
}

fn est(members: &BTreeSet<i64>, n_min: usize) -> Rational64 {
    upper_density(
        &SetSpec::ints(members.iter().copied()),
        &FolnerFamily::Intervals,
        n_min,
        N,
        Exec::default(),
    )
    .unwrap()
    .value
}

fn count(members: &BTreeSet<i64>, n: usize) -> usize {
    members.iter().filter(|&&m| 1 <= m && m <= n as i64).count()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn estimates_are_probabilities(a in subset(), n_min in 1usize..N) {
        let v = est(&a, n_min);
        prop_assert!(Rational64::from(0) <= v && v <= Rational64::from(1));
        let b = banach_upper_density_est(&SetSpec::ints(a.iter().copied()), N, n_min, Exec::default()).unwrap();
        prop_assert!(Rational64::from(0) <= b.value && b.value <= Rational64::from(1));
    }

    #[test]
    fn monotone_in_the_set(a in subset(), extra in subset(), n_min in 1usize..N) {
        let b: BTreeSet<i64> = a.union(&extra).copied().collect();
        prop_assert!(est(&a, n_min) <= est(&b, n_min));
    }

    #[test]
    fn disjoint_unions_add_windowwise(a in subset(), b in subset(), n in 1usize..=N) {
        let b: BTreeSet<i64> = b.difference(&a).copied().collect();
        let union: BTreeSet<i64> = a.union(&b).copied().collect();
        let fam = FolnerFamily::Intervals;
        let ratio = |s: &BTreeSet<i64>| {
            upper_density(&SetSpec::ints(s.iter().copied()), &fam, n, n, Exec::default()).unwrap().value
        };
        prop_assert_eq!(ratio(&union), ratio(&a) + ratio(&b));
        prop_assert_eq!(count(&union, n), count(&a, n) + count(&b, n));
    }

    #[test]
    fn shifts_move_estimates_by_at_most_g_over_n(a in subset(), g in -15i64..=15, n_min in 20usize..N) {
        let shifted: BTreeSet<i64> = a.iter().map(|m| m + g).collect();
        for n in n_min..=N {
            prop_assert!(count(&a, n).abs_diff(count(&shifted, n)) <= g.unsigned_abs() as usize);
        }
        let diff = est(&a, n_min) - est(&shifted, n_min);
        let bound = Rational64::new(g.abs(), n_min as i64);
        prop_assert!(-bound <= diff && diff <= bound, "diff {} bound {}", diff, bound);
    }
}

#[test]
fn dilation_family_ratios_are_exact() {
    let zx = ipstar_core::GroundStructure::Polynomials;
    let seed: Vec<Element> = zx.enumerate(9).into_iter().filter(|e| !e.is_zero()).collect();
    let fam = FolnerFamily::dilation(zx, seed, Element::poly(&[0, 1])).unwrap();
    let xzx = SetSpec::ideal(ipstar_core::SubgroupSpec::poly_multiples(ipstar_core::Poly::x()).unwrap());
    let e = upper_density(&xzx, &fam, 1, 10, Exec::Sequential).unwrap();
    let windows: Vec<usize> = (1..=10).map(|n| fam.window(n).unwrap().len()).collect();
    assert!(windows.windows(2).all(|w| w[0] <= w[1]));
    assert!(e.value <= Rational64::from(1));
    assert_eq!(e, upper_density(&xzx, &fam, 1, 10, Exec::default()).unwrap());
}
