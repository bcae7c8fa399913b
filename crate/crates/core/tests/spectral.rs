mod common;

use common::{rng, scaled_diff};
use compoundkit::compound::{add_compound, mult_compound};
use compoundkit::index_sets::binomial;
use compoundkit::spectral::{
    alpha_add_compound, eigenvalues, frac_power, hermitian_eigenvalues, multiset_mismatch,
};
use compoundkit::ComplexMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::Rng;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exponential_identity(n in 1usize..=5, seed in any::<u64>()) {
        let a = common::random_matrix(n, n, &mut rng(seed));
        for k in 1..=n {
            let gen = add_compound(&a, k).unwrap().into_matrix();
            for t in [0.1, 1.0] {
                let lhs = gen.scale(t).expm().unwrap();
                let rhs = mult_compound(&a.scale(t).expm().unwrap(), k).unwrap().into_matrix();
                prop_assert!(scaled_diff(&lhs, &rhs) <= 1e-6);
            }
        }
    }

    #[test]
    fn alpha_spectrum_interpolates(n in 2usize..=5, seed in any::<u64>(), s in 0.01..0.99f64) {
        let mut r = rng(seed);
        let a = common::random_matrix(n, n, &mut r);
        let k = r.gen_range(1..n);
        prop_assume!(binomial(n, k) * binomial(n, k + 1) <= 64);
        let lower = eigenvalues(add_compound(&a, k).unwrap().matrix()).unwrap();
        let upper = eigenvalues(add_compound(&a, k + 1).unwrap().matrix()).unwrap();
        let expected: Vec<Complex64> = lower
            .iter()
            .flat_map(|&l| upper.iter().map(move |&u| l * (1.0 - s) + u * s))
            .collect();
        let actual = eigenvalues(&alpha_add_compound(&a, k as f64 + s).unwrap()).unwrap();
        prop_assert!(multiset_mismatch(&actual, &expected) <= 1e-5);
    }

    #[test]
    fn fractional_power_keeps_hermitian_pd(n in 1usize..=5, seed in any::<u64>(), s in 0.05..0.95f64) {
        let mut r = rng(seed);
        let b = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(r.gen_range(-1.0..1.0), r.gen_range(-1.0..1.0)));
        let mut h = &b * &b.adjoint();
        for i in 0..n {
            h[(i, i)] += Complex64::new(0.5, 0.0);
        }
        let p = frac_power(&h, s).unwrap();
        let asym = (&p - &p.adjoint()).max_abs();
        prop_assert!(asym <= 1e-8, "asymmetry {}", asym);
        let eig = hermitian_eigenvalues(&p).unwrap();
        prop_assert!(eig.iter().all(|&l| l > 0.0));
    }
}

#[test]
fn square_root_squares_back() {
    let h = ComplexMatrix::from_fn(3, 3, |i, j| {
        if i == j {
            Complex64::new(3.0, 0.0)
        } else if i < j {
            Complex64::new(0.5, 0.25)
        } else {
            Complex64::new(0.5, -0.25)
        }
    });
    let root = frac_power(&h, 0.5).unwrap();
    assert!((&(&root * &root) - &h).max_abs() < 1e-10);
}
