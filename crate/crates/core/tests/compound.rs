mod common;

use common::{matrix, near_identity, rel_close, rng, scaled_diff};
use compoundkit::compound::{add_compound, add_compound_via_derivative, mult_compound};
use compoundkit::Matrix;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn cauchy_binet(dims in (1usize..=6, 1usize..=6, 1usize..=6), seed in any::<u64>()) {
        let (n, m, p) = dims;
        let mut r = rng(seed);
        let a = common::random_matrix(n, m, &mut r);
        let b = common::random_matrix(m, p, &mut r);
        let ab = &a * &b;
        for k in 1..=n.min(m).min(p).min(4) {
            let lhs = mult_compound(&ab, k).unwrap().into_matrix();
            let rhs = mult_compound(&a, k).unwrap().matrix() * mult_compound(&b, k).unwrap().matrix();
            for (x, y) in lhs.data().iter().zip(rhs.data()) {
                prop_assert!(rel_close(*x, *y, 1e-8), "k={} {} vs {}", k, x, y);
            }
        }
    }

    #[test]
    fn inverse_commutes_with_compound(n in 1usize..=5, seed in any::<u64>()) {
        let a = near_identity(n, &mut rng(seed)).scale(1.5);
        let inv = a.inverse().unwrap();
        for k in 1..=n {
            let lhs = mult_compound(&a, k).unwrap().into_matrix().inverse().unwrap();
            let rhs = mult_compound(&inv, k).unwrap().into_matrix();
            prop_assert!(scaled_diff(&lhs, &rhs) < 1e-7);
        }
    }

    #[test]
    fn transpose_commutes_exactly(a in (1usize..=5, 1usize..=5).prop_flat_map(|(r, c)| matrix(r, c))) {
        for k in 1..=a.rows().min(a.cols()) {
            let lhs = mult_compound(&a.transpose(), k).unwrap().into_matrix();
            let rhs = mult_compound(&a, k).unwrap().into_matrix().transpose();
            if k <= 3 {
                prop_assert_eq!(lhs, rhs);
            } else {
                // LU with pivoting is not transpose-symmetric in rounding
                prop_assert!(scaled_diff(&lhs, &rhs) <= 1e-12);
            }
        }
    }

    #[test]
    fn additive_compound_is_linear(n in 1usize..=6, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = common::random_matrix(n, n, &mut r);
        let b = common::random_matrix(n, n, &mut r);
        for k in 1..=n {
            let lhs = add_compound(&(&a + &b), k).unwrap().into_matrix();
            let rhs = add_compound(&a, k).unwrap().matrix() + add_compound(&b, k).unwrap().matrix();
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12);
        }
    }

    #[test]
    fn similarity_transform(n in 1usize..=5, seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = common::random_matrix(n, n, &mut r);
        let t = near_identity(n, &mut r);
        let t_inv = t.inverse().unwrap();
        let similar = &(&t * &a) * &t_inv;
        for k in 1..=n {
            let tk = mult_compound(&t, k).unwrap().into_matrix();
            let lhs = add_compound(&similar, k).unwrap().into_matrix();
            let rhs = &(&tk * add_compound(&a, k).unwrap().matrix()) * &tk.inverse().unwrap();
            prop_assert!(scaled_diff(&lhs, &rhs) < 1e-7);
        }
    }

    #[test]
    fn derivative_definition_agrees(n in 1usize..=5, seed in any::<u64>()) {
        let a = common::random_matrix(n, n, &mut rng(seed));
        for k in 1..=n {
            let exact = add_compound(&a, k).unwrap().into_matrix();
            for eps in [1e-5, 1e-6] {
                let approx = add_compound_via_derivative(&a, k, eps).unwrap().into_matrix();
                // forward difference: O(ε) truncation plus O(1e-16/ε) rounding
                prop_assert!(approx.max_abs_diff(&exact) <= 1e3 * eps, "k={} eps={}", k, eps);
            }
        }
    }
}

#[test]
fn identity_compounds_are_identities() {
    for n in 1..=6 {
        for k in 1..=n {
            let r = compoundkit::index_sets::binomial(n, k) as usize;
            assert_eq!(mult_compound(&Matrix::identity(n), k).unwrap().matrix(), &Matrix::identity(r));
            assert_eq!(
                add_compound(&Matrix::identity(n), k).unwrap().matrix(),
                &Matrix::identity(r).scale(k as f64)
            );
        }
    }
}
