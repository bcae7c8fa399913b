mod common;

use common::rng;
use compoundkit::compound::{add_compound, mult_compound};
use compoundkit::dynamics::{
    compound_propagate, compound_propagate_along, equilibrium_check, integrate, propagate_frame,
    transition_matrix, BuiltinSystem, Step, SystemDef,
};
use compoundkit::matrix::norm2;
use compoundkit::Matrix;
use proptest::prelude::*;
use rand::Rng;

fn random_ltv(n: usize, seed: u64) -> SystemDef {
    let mut r = rng(seed);
    let times = vec![0.0, 0.5, 1.2, 2.0];
    let matrices = times.iter().map(|_| common::random_matrix(n, n, &mut r)).collect();
    SystemDef::Ltv { times, matrices }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn liouville_formula(n in 1usize..=4, seed in any::<u64>()) {
        let sys = random_ltv(n, seed);
        let t1 = 2.0;
        let det = transition_matrix(&sys, 0.0, t1, 1e-3).unwrap().det().unwrap();
        // trace is piecewise linear between the knots, so the trapezoid rule is exact
        let SystemDef::Ltv { times, matrices } = &sys else { unreachable!() };
        let integral: f64 = times
            .windows(2)
            .zip(matrices.windows(2))
            .map(|(t, m)| 0.5 * (t[1] - t[0]) * (m[0].trace() + m[1].trace()))
            .sum();
        let expect = integral.exp();
        prop_assert!((det - expect).abs() <= 1e-5 * expect.max(1.0), "{} vs {}", det, expect);
    }

    #[test]
    fn parallelotopes_never_collapse(n in 2usize..=4, seed in any::<u64>()) {
        let sys = random_ltv(n, seed);
        let mut r = rng(seed ^ 1);
        let k = r.gen_range(1..=n);
        let frame = common::random_matrix(n, k, &mut r);
        let traj = compound_propagate(&sys, k, &frame, (0.0, 2.0), Step::new(1e-3).every(100)).unwrap();
        let SystemDef::Ltv { matrices, .. } = &sys else { unreachable!() };
        let rate = matrices
            .iter()
            .map(|m| add_compound(m, k).unwrap().into_matrix().norm_fro())
            .fold(0.0, f64::max);
        let v0 = norm2(&traj.states[0]);
        prop_assume!(v0 > 1e-8);
        for (t, y) in traj.times.iter().zip(&traj.states) {
            prop_assert!(norm2(y) > 1e-12 * v0 * (-rate * t).exp());
        }
    }
}

fn compare_linear(sys: &SystemDef, frame: &Matrix, span: (f64, f64)) {
    let k = frame.cols();
    let step = Step::new(1e-3).every(250);
    let compound = compound_propagate(sys, k, frame, span, step).unwrap();
    let frames = propagate_frame(sys, None, frame, span, step).unwrap();
    assert_eq!(compound.len(), frames.len());
    for ((_, x), y) in frames.iter().zip(&compound.states) {
        let direct = mult_compound(x, k).unwrap().into_matrix().into_data();
        let err = direct.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err <= 1e-5, "{}: k={k} error {err}", sys.describe());
    }
}

#[test]
fn compound_flow_matches_compounded_frames() {
    let mut r = rng(71);
    let linear = [
        SystemDef::builtin(BuiltinSystem::Squares),
        SystemDef::builtin(BuiltinSystem::Rotation { c: 1.5 }),
        SystemDef::builtin(BuiltinSystem::Consensus {
            n: 4,
            edges: vec![(1, 2, 1.0), (2, 3, 0.5), (3, 4, 2.0), (4, 1, 0.7)],
        }),
        random_ltv(3, 7),
    ];
    for sys in &linear {
        let n = sys.dim();
        for k in 1..=n.min(3) {
            compare_linear(sys, &common::random_matrix(n, k, &mut r), (0.0, 2.0));
        }
    }
    for sys in [
        SystemDef::builtin(BuiltinSystem::thomas(0.2)),
        SystemDef::builtin(BuiltinSystem::thomas_closed_loop(0.15, -0.85)),
    ] {
        let base = [0.4, -1.1, 2.0];
        for k in 1..=3 {
            let frame = common::random_matrix(3, k, &mut r);
            let step = Step::new(1e-3).every(250);
            let compound = compound_propagate_along(&sys, &base, k, &frame, (0.0, 2.0), step).unwrap();
            let frames = propagate_frame(&sys, Some(&base), &frame, (0.0, 2.0), step).unwrap();
            for ((_, x), y) in frames.iter().zip(&compound.states) {
                let direct = mult_compound(x, k).unwrap().into_matrix().into_data();
                let err = direct.iter().zip(y).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                assert!(err <= 1e-5, "{}: k={k} error {err}", sys.describe());
            }
        }
    }
}

#[test]
fn closed_loop_thomas_settles() {
    let b = 0.15;
    let sys = SystemDef::builtin(BuiltinSystem::thomas_closed_loop(b, 2.0 * b - 1.15));
    let bounds = sys.default_box().unwrap();
    let mut r = rng(72);
    for _ in 0..12 {
        let x0: Vec<f64> = bounds.iter().map(|&(lo, hi)| r.gen_range(lo..hi)).collect();
        let traj = integrate(&sys, &x0, (0.0, 200.0), Step::new(1e-3).every(100)).unwrap();
        let v = equilibrium_check(&sys, &traj);
        assert!(v.pass, "from {x0:?}: {:?}", v.details);
    }
}
