//! End-to-end acceptance suite. Runs without the libtest harness so that every
//! criterion prints exactly one PASS/FAIL line; exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use compoundkit::compound::{add_compound, minor, mult_compound};
use compoundkit::diag_stability::{
    construct_dlf_nonneg, lemma_conditions, lift_dlf, random_diagonally_stable,
    random_nonneg_schur, verify_k_diag_stability,
};
use compoundkit::dynamics::{BuiltinSystem, SystemDef};
use compoundkit::dynamics::{
    equilibrium_check, integrate, propagate_frame, transition_matrix, volume_evolution,
    volume_evolution_along, Step,
};
use compoundkit::hankel::{
    hankel_k_positive_verdict, impulse_response, operator_svdp_check, HankelSystem,
};
use compoundkit::index_sets::{binomial, enumerate};
use compoundkit::positivity::{is_metzler, metzler_compound_pattern, Constraint};
use compoundkit::sign_tools::{
    classify_sign_regularity, random_sign_vector, random_tp_matrix, random_vector_in_cone,
    svdp_check, OrderClass, SvdpMode,
};
use compoundkit::spectral::{
    alpha_add_compound, alpha_mult_compound, check_compound_spectrum, eigenvalues,
    multiset_mismatch,
};
use compoundkit::{IndexSet, Matrix};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    summary: String,
    limit: Option<Duration>,
}

impl Outcome {
    fn new(pass: bool, summary: impl Into<String>) -> Self {
        Self {
            pass,
            summary: summary.into(),
            limit: None,
        }
    }

    fn within(mut self, secs: u64) -> Self {
        self.limit = Some(Duration::from_secs(secs));
        self
    }
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_matrix(r: usize, c: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.gen_range(-2.0..2.0))
}

fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
}

fn cauchy_binet() -> Outcome {
    let mut rng = rng(1);
    let mut failures = 0;
    let mut checked = 0;
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=6);
        let p = rng.gen_range(1..=6);
        let a = random_matrix(n, m, &mut rng);
        let b = random_matrix(m, p, &mut rng);
        let ab = &a * &b;
        for k in 1..=n.min(m).min(p) {
            let lhs = mult_compound(&ab, k).unwrap().into_matrix();
            let rhs = &mult_compound(&a, k).unwrap().into_matrix() * &mult_compound(&b, k).unwrap().into_matrix();
            checked += 1;
            if lhs.data().iter().zip(rhs.data()).any(|(x, y)| !rel_close(*x, *y, 1e-8)) {
                failures += 1;
            }
        }
    }
    Outcome::new(failures == 0, format!("{checked} (pair, k) cases, {failures} mismatches")).within(10)
}

fn spectral_mapping() -> Outcome {
    let mut rng = rng(2);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let a = random_matrix(n, n, &mut rng);
        for k in 1..=n {
            let v = check_compound_spectrum(&a, k).unwrap();
            worst = worst
                .max(v.detail_f64("multiplicative_mismatch").unwrap())
                .max(v.detail_f64("additive_mismatch").unwrap());
            failures += usize::from(!v.pass);
        }
    }
    Outcome::new(failures == 0, format!("worst multiset mismatch {worst:.2e} (tol 1e-5)")).within(30)
}

fn exponential_identity() -> Outcome {
    let mut rng = rng(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(1..=5);
        let a = random_matrix(n, n, &mut rng);
        for k in 1..=n {
            let gen = add_compound(&a, k).unwrap().into_matrix();
            for t in [0.1, 1.0] {
                let lhs = gen.scale(t).expm().unwrap();
                let rhs = mult_compound(&a.scale(t).expm().unwrap(), k).unwrap().into_matrix();
                worst = worst.max(lhs.max_abs_diff(&rhs) / rhs.max_abs().max(1.0));
            }
        }
    }
    Outcome::new(worst <= 1e-6, format!("worst scaled deviation {worst:.2e} (tol 1e-6)"))
}

fn worked_value_regressions() -> Outcome {
    let mut bad = Vec::new();
    let a = Matrix::from_rows(&[[2.0, 1.0, -0.5], [0.0, -1.0, 0.5], [-1.0, 0.0, 5.0]]);
    let expected = Matrix::from_rows(&[[1.0, 0.5, 0.5], [0.0, 7.0, 1.0], [1.0, 0.0, 4.0]]);
    if add_compound(&a, 2).unwrap().matrix() != &expected {
        bad.push("additive compound");
    }
    let wide = Matrix::from_rows(&[[2.0, 1.0, 1.0], [1.0, 3.0, 4.0]]);
    if mult_compound(&wide, 2).unwrap().matrix().data() != [5.0, 7.0, 1.0] {
        bad.push("2x3 multiplicative compound");
    }
    let f = Matrix::from_rows(&[[3.0, 1.0, 2.0], [2.0, 1.0, 3.0], [1.0, 3.0, 10.0]]);
    let blocks = [(1, 1), (1, 2), (2, 1), (2, 2)];
    let minors: Vec<f64> = blocks
        .iter()
        .map(|&(r, c)| {
            let rows = IndexSet::contiguous(r, 2, 3).unwrap();
            let cols = IndexSet::contiguous(c, 2, 3).unwrap();
            minor(&f, &rows, &cols).unwrap()
        })
        .collect();
    if minors != [1.0, 1.0, 5.0, 1.0] {
        bad.push("contiguous 2-minors");
    }
    let sr = classify_sign_regularity(&Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]), 2).unwrap();
    if sr.order(1) != OrderClass::Ssr(1) || sr.order(2) != OrderClass::Ssr(-1) {
        bad.push("SSR signatures");
    }
    Outcome::new(bad.is_empty(), if bad.is_empty() { "4/4 exact".to_string() } else { format!("mismatch: {}", bad.join(", ")) })
}

fn svdp_fuzz() -> Outcome {
    let mut rng = rng(5);
    let mut violations = 0;
    let mut equalities = 0;
    for m in 0..50 {
        let n = 2 + m % 5;
        let a = random_tp_matrix(n, &mut rng);
        for _ in 0..10_000 {
            let zero_prob = rng.gen_range(0.0..0.5);
            let x = random_sign_vector(n, zero_prob, &mut rng);
            let v = svdp_check(&a, &x, SvdpMode::Tp).unwrap();
            violations += usize::from(!v.pass);
            let su = v.detail("s_minus_x").and_then(|x| x.as_u64());
            let sp = v.detail("s_plus_ax").and_then(|x| x.as_u64());
            equalities += usize::from(su.is_some() && su == sp);
        }
    }
    Outcome::new(
        violations == 0,
        format!("500000 vectors on 50 TP matrices, {violations} violations, {equalities} equality cases"),
    )
}

fn conforming(pattern: &compoundkit::positivity::SignPattern, n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        let mag = if rng.gen_bool(0.15) { 0.0 } else { rng.gen_range(0.1..2.0) };
        match pattern.at(i, j) {
            Constraint::Free => rng.gen_range(-2.0..2.0),
            Constraint::NonNeg => mag,
            Constraint::NonPos => -mag,
            Constraint::Zero => 0.0,
        }
    })
}

fn metzler_patterns() -> Outcome {
    let mut rng = rng(6);
    let mut disagreements = 0;
    let mut matched = 0;
    let mut total = 0;
    for n in 3..=5 {
        for k in 2..n {
            let pattern = metzler_compound_pattern(n, k).unwrap();
            let constrained: Vec<(usize, usize)> = (0..n)
                .flat_map(|i| (0..n).map(move |j| (i, j)))
                .filter(|&(i, j)| pattern.at(i, j) != Constraint::Free)
                .collect();
            for trial in 0..300 {
                let mut a = conforming(&pattern, n, &mut rng);
                if trial % 2 == 1 {
                    let (i, j) = constrained[rng.gen_range(0..constrained.len())];
                    let bump = rng.gen_range(0.1..1.0);
                    a[(i, j)] = match pattern.at(i, j) {
                        Constraint::NonNeg => -bump,
                        Constraint::NonPos => bump,
                        _ => if rng.gen_bool(0.5) { bump } else { -bump },
                    };
                }
                let in_pattern = pattern.matches(&a).unwrap();
                let metzler = is_metzler(add_compound(&a, k).unwrap().matrix()).unwrap().pass;
                matched += usize::from(in_pattern);
                total += 1;
                disagreements += usize::from(in_pattern != metzler);
            }
        }
    }
    Outcome::new(
        disagreements == 0,
        format!("{total} matrices ({matched} in pattern), {disagreements} disagreements"),
    )
}

fn squares_dynamics() -> Outcome {
    let sys = SystemDef::builtin(BuiltinSystem::Squares);
    let mut phi_err = 0.0f64;
    for t in [0.5f64, 1.0, 2.0] {
        let phi = transition_matrix(&sys, 0.0, t, 1e-3).unwrap();
        let e = (-t).exp();
        let closed = Matrix::from_rows(&[[e, 0.0], [-1.0 + e * (t.cos() - t.sin()), 1.0]]);
        phi_err = phi_err.max(phi.max_abs_diff(&closed));
    }
    let area = volume_evolution(&sys, &Matrix::identity(2), (0.0, 10.0), Step::new(1e-3).every(10)).unwrap();
    let area_err = area
        .iter()
        .map(|(t, v)| (v - (-t).exp()).abs())
        .fold(0.0f64, f64::max);
    let x0 = [0.7, -1.3];
    let end = integrate(&sys, &x0, (0.0, 10.0), 1e-3).unwrap();
    let limit = [0.0, x0[1] - x0[0]];
    let end_err = end
        .final_state()
        .iter()
        .zip(limit)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0f64, f64::max);
    Outcome::new(
        phi_err <= 1e-6 && area_err <= 1e-5 && end_err <= 1e-3,
        format!("transition {phi_err:.1e} (1e-6), area {area_err:.1e} (1e-5), endpoint {end_err:.1e} (1e-3)"),
    )
}

fn thomas() -> Outcome {
    let b = 0.15;
    let c = 2.0 * b - 1.15;
    let closed = SystemDef::builtin(BuiltinSystem::thomas_closed_loop(b, c));
    let bounds = closed.default_box().unwrap();
    let mut rng = rng(8);
    let mut worst = 0.0f64;
    let mut failures = 0;
    for _ in 0..12 {
        let x0: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
        let traj = integrate(&closed, &x0, (0.0, 200.0), Step::new(1e-3).every(100)).unwrap();
        let v = equilibrium_check(&closed, &traj);
        worst = worst.max(v.detail_f64("max_speed").unwrap());
        failures += usize::from(!v.pass);
    }
    let open = SystemDef::builtin(BuiltinSystem::thomas(b));
    let base: Vec<f64> = bounds.iter().map(|&(lo, hi)| rng.gen_range(lo..hi)).collect();
    let frame = Matrix::from_fn(3, 3, |i, j| if i == j { 1.0 } else { rng.gen_range(-0.3..0.3) });
    let vols = volume_evolution_along(&open, &base, &frame, (0.0, 10.0), Step::new(1e-3).every(1000)).unwrap();
    let ratio = vols.last().unwrap().1 / vols[0].1;
    let target = (-3.0 * b * 10.0f64).exp();
    let rel = (ratio / target - 1.0).abs();
    // cross-check the frame propagation itself
    let frames = propagate_frame(&open, Some(&base), &frame, (0.0, 10.0), Step::new(1e-3).every(10_000)).unwrap();
    let det_ratio = frames.last().unwrap().1.det().unwrap().abs() / frame.det().unwrap().abs();
    Outcome::new(
        failures == 0 && rel <= 0.02,
        format!(
            "12 closed-loop runs, worst final-window speed {worst:.1e} (1e-6); 3-volume ratio {ratio:.6} vs {target:.6} ({:.3}%), det route {det_ratio:.6}",
            100.0 * rel
        ),
    )
    .within(60)
}

fn alpha_consistency() -> Outcome {
    let mut rng = rng(9);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(3..=5);
        let a = random_matrix(n, n, &mut rng);
        // keep the Kronecker sum within the dense eigen-solver's size
        let k = loop {
            let k = rng.gen_range(1..n);
            if binomial(n, k) * binomial(n, k + 1) <= 64 {
                break k;
            }
        };
        let s: f64 = rng.gen_range(0.05..0.95);
        let lower = eigenvalues(add_compound(&a, k).unwrap().matrix()).unwrap();
        let upper = eigenvalues(add_compound(&a, k + 1).unwrap().matrix()).unwrap();
        let expected: Vec<Complex64> = lower
            .iter()
            .flat_map(|&l| upper.iter().map(move |&u| l * (1.0 - s) + u * s))
            .collect();
        let actual = eigenvalues(&alpha_add_compound(&a, k as f64 + s).unwrap()).unwrap();
        worst = worst.max(multiset_mismatch(&actual, &expected));
    }
    let mut diag_err = 0.0f64;
    for _ in 0..100 {
        let d: Vec<f64> = (0..4).map(|_| rng.gen_range(0.1..3.0)).collect();
        let k = rng.gen_range(1..4);
        let s: f64 = rng.gen_range(0.05..0.95);
        let dm = alpha_mult_compound(&Matrix::diag(&d), k as f64 + s).unwrap();
        let rows = enumerate(k, 4).unwrap();
        let cols = enumerate(k + 1, 4).unwrap();
        for (p, r) in rows.iter().enumerate() {
            for (q, c) in cols.iter().enumerate() {
                let lo: f64 = r.zero_based().iter().map(|&i| d[i]).product();
                let hi: f64 = c.zero_based().iter().map(|&i| d[i]).product();
                let expect = lo.powf(1.0 - s) * hi.powf(s);
                let idx = p * cols.len() + q;
                for (i, j) in (0..dm.rows()).map(|i| (i, idx)) {
                    let want = if i == j { expect } else { 0.0 };
                    diag_err = diag_err.max((dm[(i, j)] - Complex64::new(want, 0.0)).norm());
                }
            }
        }
        if k == 2 {
            // entries listed in the worked example: d1 d2 d3^s, d1 d2 d4^s, ..., d2^s d3 d4
            let first = d[0] * d[1] * d[2].powf(s);
            let second = d[0] * d[1] * d[3].powf(s);
            let last = d[1].powf(s) * d[2] * d[3];
            let m = dm.rows() - 1;
            diag_err = diag_err
                .max((dm[(0, 0)].re - first).abs())
                .max((dm[(1, 1)].re - second).abs())
                .max((dm[(m, m)].re - last).abs());
        }
    }
    Outcome::new(
        worst <= 1e-5 && diag_err <= 1e-10,
        format!("spectrum mismatch {worst:.1e} (1e-5), diagonal formula {diag_err:.1e} (1e-10)"),
    )
}

fn diagonal_stability() -> Outcome {
    let mut rng = rng(10);
    let mut lemma_fail = 0;
    let mut min_margin = f64::INFINITY;
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let a = random_nonneg_schur(n, &mut rng).unwrap();
        let x: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        let y: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..2.0)).collect();
        let conditions = lemma_conditions(&a, &x, &y).unwrap();
        let cert = construct_dlf_nonneg(&a, &x, &y).unwrap();
        let check = verify_k_diag_stability(&a, 1, &cert.d).unwrap();
        let margin = check.margin.unwrap_or(f64::NEG_INFINITY);
        min_margin = min_margin.min(margin);
        lemma_fail += usize::from(!conditions.pass || !check.pass || margin <= 0.0);
    }
    let mut lift_fail = 0;
    let mut lifted = 0;
    for _ in 0..100 {
        let n = rng.gen_range(2..=6);
        let (a, d0) = random_diagonally_stable(n, &mut rng).unwrap();
        for k in 1..=n {
            let cert = lift_dlf(&a, &d0, k).unwrap();
            let v = verify_k_diag_stability(&a, k, &cert.d).unwrap();
            lifted += 1;
            lift_fail += usize::from(!cert.is_valid() || !v.pass);
        }
    }
    Outcome::new(
        lemma_fail == 0 && lift_fail == 0,
        format!(
            "200 nonneg Schur ({lemma_fail} failures, min margin {min_margin:.1e}); {lifted} lifted certificates ({lift_fail} failures)"
        ),
    )
}

fn hankel_suite() -> Outcome {
    let mut bad = Vec::new();
    let lag = HankelSystem::first_order_lag(0.6, 1.0);
    if !hankel_k_positive_verdict(&lag, 1, 200).unwrap().pass {
        bad.push("positive lag k=1".to_string());
    }
    let boundary = hankel_k_positive_verdict(&lag, 2, 200).unwrap();
    if !boundary.pass {
        bad.push("positive lag k=2".to_string());
    }
    let alt = HankelSystem::first_order_lag(-0.6, 1.0);
    if hankel_k_positive_verdict(&alt, 1, 200).unwrap().pass {
        bad.push("alternating lag k=1".to_string());
    }
    let mut rng = rng(11);
    let mut closure_fail = 0;
    let mut svdp_violations = 0;
    let mut svdp_runs = 0;
    let mut worst_tail = 0.0f64;
    for _ in 0..100 {
        let s1 = HankelSystem::first_order_lag(rng.gen_range(0.05..0.9), rng.gen_range(0.1..2.0));
        let s2 = HankelSystem::first_order_lag(rng.gen_range(0.05..0.9), rng.gen_range(0.1..2.0));
        let sum = s1.parallel(&s2);
        let g = impulse_response(&sum, 200).unwrap();
        let separate = impulse_response(&s1, 200).unwrap().add(&impulse_response(&s2, 200).unwrap()).unwrap();
        let ir_ok = g.samples.iter().zip(&separate.samples).all(|(a, b)| rel_close(*a, *b, 1e-12));
        let mut ok = ir_ok;
        for k in 1..=3 {
            let v = hankel_k_positive_verdict(&sum, k, 200).unwrap();
            ok &= v.pass;
            worst_tail = worst_tail.max(v.detail_f64("tail_bound").unwrap());
        }
        closure_fail += usize::from(!ok);
    }
    let relaxation = HankelSystem::lag_sum(&[0.2, 0.5, 0.85], &[1.0, 0.4, 0.7]).unwrap();
    let passing = [(lag.clone(), 2usize), (relaxation, 3usize)];
    for (sys, k) in &passing {
        let g = impulse_response(sys, 200).unwrap();
        for _ in 0..1000 {
            let len = rng.gen_range(1..=8);
            let u = random_vector_in_cone(len, k - 1, &mut rng);
            let v = operator_svdp_check(&g, &u, 40).unwrap();
            svdp_runs += 1;
            svdp_violations += usize::from(!v.pass);
        }
    }
    if closure_fail > 0 {
        bad.push(format!("{closure_fail} parallel-sum closure failures"));
    }
    if svdp_violations > 0 {
        bad.push(format!("{svdp_violations} operator SVDP violations"));
    }
    let summary = format!(
        "lag k=1,2 pass (k=2 margin {:.1e}), alternating lag fails; 100 parallel sums; {svdp_runs} operator inputs; worst tail bound {worst_tail:.1e}",
        boundary.margin.unwrap_or(f64::NAN)
    );
    Outcome::new(bad.is_empty(), if bad.is_empty() { summary } else { bad.join("; ") })
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("Cauchy-Binet", cauchy_binet),
        ("spectral mapping", spectral_mapping),
        ("exponential identity", exponential_identity),
        ("worked-value regressions", worked_value_regressions),
        ("SVDP fuzz", svdp_fuzz),
        ("Metzler-pattern equivalence", metzler_patterns),
        ("squares dynamics", squares_dynamics),
        ("Thomas de-chaotification", thomas),
        ("alpha-compound consistency", alpha_consistency),
        ("diagonal stability", diagonal_stability),
        ("Hankel suite", hankel_suite),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = outcome.limit.is_none_or(|l| elapsed <= l);
        let pass = outcome.pass && in_time;
        failed += usize::from(!pass);
        let limit = outcome
            .limit
            .map_or(String::new(), |l| format!(", limit {}s", l.as_secs()));
        println!(
            "criterion {:>2} {:<28} {}  {} [{:.2}s{}]",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            outcome.summary,
            elapsed.as_secs_f64(),
            limit
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
