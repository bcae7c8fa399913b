mod common;

use common::rng;
use compoundkit::hankel::{
    factorization_residual, hankel_compound_ir, hankel_k_positive_ir, hankel_k_positive_verdict,
    impulse_response, operator_svdp_check, HankelSystem, ImpulseResponse,
};
use compoundkit::sign_tools::random_vector_in_cone;
use compoundkit::Matrix;
use proptest::prelude::*;
use rand::Rng;

fn relaxation<R: Rng>(n: usize, rng: &mut R) -> HankelSystem {
    let poles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.05..0.9)).collect();
    let residues: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
    HankelSystem::lag_sum(&poles, &residues).unwrap()
}

/// Random stable realization: mixed-sign poles and residues.
fn mixed<R: Rng>(n: usize, rng: &mut R) -> HankelSystem {
    let poles: Vec<f64> = (0..n).map(|_| rng.gen_range(-0.9..0.9)).collect();
    let residues: Vec<f64> = (0..n).map(|_| rng.gen_range(-2.0..2.0)).collect();
    HankelSystem::lag_sum(&poles, &residues).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn passing_systems_diminish_operator_variations(n in 1usize..=4, seed in any::<u64>(), mixed_sys in any::<bool>()) {
        let mut r = rng(seed);
        let sys = if mixed_sys { mixed(n, &mut r) } else { relaxation(n, &mut r) };
        let k = r.gen_range(1..=3);
        let verdict = hankel_k_positive_verdict(&sys, k, 200).unwrap();
        prop_assume!(verdict.pass);
        let g = impulse_response(&sys, 200).unwrap();
        for _ in 0..1000 {
            let len = r.gen_range(1..=10);
            let u = random_vector_in_cone(len, k - 1, &mut r);
            let v = operator_svdp_check(&g, &u, 60).unwrap();
            prop_assert!(v.pass, "k={} u={:?} {:?}", k, u, v.details);
        }
    }

    #[test]
    fn parallel_sum_preserves_positivity(seed in any::<u64>(), n1 in 1usize..=3, n2 in 1usize..=3) {
        let mut r = rng(seed);
        let (s1, s2) = (mixed(n1, &mut r), mixed(n2, &mut r));
        for k in 1..=3 {
            let (a, b) = (
                hankel_k_positive_verdict(&s1, k, 200).unwrap(),
                hankel_k_positive_verdict(&s2, k, 200).unwrap(),
            );
            if a.pass && b.pass {
                prop_assert!(hankel_k_positive_verdict(&s1.parallel(&s2), k, 200).unwrap().pass);
            }
        }
        let ga = impulse_response(&s1, 50).unwrap().add(&impulse_response(&s2, 50).unwrap()).unwrap();
        let gp = impulse_response(&s1.parallel(&s2), 50).unwrap();
        for (x, y) in ga.samples.iter().zip(&gp.samples) {
            prop_assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }

    #[test]
    fn hankel_blocks_factor_through_the_realization(n in 1usize..=5, seed in any::<u64>(), p in 1usize..=6, q in 1usize..=5) {
        let mut r = rng(seed);
        let a = common::random_matrix(n, n, &mut r).scale(0.3);
        let b: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let c: Vec<f64> = (0..n).map(|_| r.gen_range(-1.0..1.0)).collect();
        let sys = HankelSystem::new(a, b, c).unwrap();
        prop_assert!(factorization_residual(&sys, p, q).unwrap() <= 1e-9);
    }
}

#[test]
fn relaxation_systems_pass_every_tested_order() {
    let mut r = rng(81);
    for n in 1..=4 {
        let sys = relaxation(n, &mut r);
        for k in 1..=n {
            let v = hankel_k_positive_verdict(&sys, k, 200).unwrap();
            assert!(v.pass, "n={n} k={k}: {:?}", v.details);
        }
    }
}

#[test]
fn lag_compound_vanishes_beyond_first_order() {
    let g = impulse_response(&HankelSystem::first_order_lag(0.7, 2.0), 60).unwrap();
    for k in 2..=4 {
        assert!(hankel_compound_ir(&g, k, 20).unwrap().iter().all(|v| v.abs() < 1e-12));
    }
}

#[test]
fn explicit_sequences() {
    let alternating = ImpulseResponse::explicit(vec![1.0, -0.5, 0.25, -0.125, 0.0625]).unwrap();
    assert!(!hankel_k_positive_ir(&alternating, 1).unwrap().pass);
    let decaying = ImpulseResponse::explicit((0..40).map(|j| 0.8f64.powi(j)).collect()).unwrap();
    assert!(hankel_k_positive_ir(&decaying, 3).unwrap().pass);
    assert!(ImpulseResponse::explicit(vec![]).is_err());
    assert!(hankel_k_positive_ir(&decaying, 25).is_err());
}

#[test]
fn unstable_and_malformed_realizations_are_rejected() {
    assert!(hankel_k_positive_verdict(&HankelSystem::first_order_lag(1.0, 1.0), 1, 100).is_err());
    assert!(HankelSystem::new(Matrix::identity(2), vec![1.0], vec![1.0, 0.0]).is_err());
}
