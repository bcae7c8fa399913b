mod common;

use common::rng;
use compoundkit::diag_stability::{
    construct_dlf_nonneg, lemma_conditions, lift_dlf, random_diagonally_stable,
    random_nonneg_schur, verify_k_diag_stability,
};
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn nonneg_schur_conditions_all_hold(n in 1usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_nonneg_schur(n, &mut r).unwrap();
        let x: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..2.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..2.0)).collect();
        let v = lemma_conditions(&a, &x, &y).unwrap();
        for key in ["schur", "xi", "z", "diagonal", "resolvent_nonneg"] {
            prop_assert_eq!(v.detail(&format!("condition_{key}")), Some(&serde_json::json!(true)));
        }
        let cert = construct_dlf_nonneg(&a, &x, &y).unwrap();
        let check = verify_k_diag_stability(&a, 1, &cert.d).unwrap();
        prop_assert!(check.pass && check.margin.unwrap() > 0.0);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lifted_certificates_hold_for_every_order(n in 1usize..=6, seed in any::<u64>()) {
        let (a, d0) = random_diagonally_stable(n, &mut rng(seed)).unwrap();
        for k in 1..=n {
            let cert = lift_dlf(&a, &d0, k).unwrap();
            prop_assert!(cert.is_valid());
            prop_assert!(verify_k_diag_stability(&a, k, &cert.d).unwrap().pass);
        }
    }

    #[test]
    fn shrinking_the_matrix_never_hurts(n in 1usize..=5, seed in any::<u64>()) {
        let (a, d0) = random_diagonally_stable(n, &mut rng(seed)).unwrap();
        for k in 1..=n {
            let d = lift_dlf(&a, &d0, k).unwrap().d;
            let mut last = f64::NEG_INFINITY;
            for theta in [1.0, 0.9, 0.7, 0.5, 0.2, 0.01] {
                let m = verify_k_diag_stability(&a.scale(theta), k, &d).unwrap().margin.unwrap();
                prop_assert!(m >= last - 1e-12, "k={} θ={}: {} < {}", k, theta, m, last);
                last = m;
            }
        }
    }
}
