use compoundkit::index_sets::{binomial, enumerate};
use compoundkit::IndexSet;
use proptest::prelude::*;

#[test]
fn enumeration_counts_and_order() {
    for n in 1..=12 {
        for k in 1..=n {
            let sets = enumerate(k, n).unwrap();
            assert_eq!(sets.len() as u128, binomial(n, k), "C({n},{k})");
            for w in sets.windows(2) {
                assert!(w[0].elements() < w[1].elements(), "lexicographic order for n={n}, k={k}");
            }
            for s in &sets {
                assert!(s.elements().windows(2).all(|p| p[0] < p[1]));
                assert_eq!(s.k(), k);
            }
        }
    }
}

#[test]
fn rank_unrank_exhaustive() {
    for n in 1..=10 {
        for k in 1..=n {
            for (r, s) in enumerate(k, n).unwrap().iter().enumerate() {
                assert_eq!(s.rank(), r);
                assert_eq!(&IndexSet::unrank(r, k, n).unwrap(), s);
            }
            assert!(IndexSet::unrank(binomial(n, k) as usize, k, n).is_err());
        }
    }
}

proptest! {
    #[test]
    fn rank_round_trips_for_larger_n(n in 11usize..=20, k_frac in 0.0..1.0f64, pick in any::<u64>()) {
        let k = 1 + ((n - 1) as f64 * k_frac) as usize;
        let count = binomial(n, k) as u64;
        let r = (pick % count) as usize;
        let s = IndexSet::unrank(r, k, n).unwrap();
        prop_assert_eq!(s.rank(), r);
        prop_assert_eq!(s.k(), k);
    }
}
