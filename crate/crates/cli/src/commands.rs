use std::path::PathBuf;

use clap::Args;
use compoundkit::compound::{add_compound, mult_compound};
use compoundkit::diag_stability::{
    classify_cyclic, construct_dlf_nonneg, lemma_conditions, lift_dlf, verify_k_diag_stability,
};
use compoundkit::dynamics::{
    equilibrium_check, integrate, propagate_frame, volume_evolution, volume_evolution_along, Step,
    SystemDef,
};
use compoundkit::hankel::{
    hankel_compound_ir, hankel_k_positive_ir, hankel_k_positive_verdict, impulse_response,
    HankelSystem, ImpulseResponse,
};
use compoundkit::index_sets::enumerate;
use compoundkit::io::{format_f64, parse_sequence};
use compoundkit::measures::{
    alpha_contraction_verdict, k_contraction_verdict, lti_k_subspace_check, NormTag, SampleGrid,
};
use compoundkit::positivity::{is_irreducible, is_jacobi, is_metzler, metzler_compound_pattern};
use compoundkit::sign_tools::{
    classify_sign_regularity, random_sign_vector, random_vector_in_cone, svdp_check_tol,
    tp_recognize_fast, OrderClass, SvdpMode,
};
use compoundkit::spectral::{alpha_add_compound, alpha_mult_compound, spectral_radius};
use compoundkit::tolerance::{HANKEL_TOL, MINOR_TOL, PATTERN_TOL, PD_TOL, STRICTNESS_TOL};
use compoundkit::{Matrix, Verdict};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::input::{
    load_certificate, load_frame, load_matrix, load_system, parse_list, parse_span, parse_times,
    read,
};
use crate::report::{Report, Table};
use crate::CliError;

fn row_strings(values: &[f64]) -> Vec<String> {
    values.iter().map(|&v| format_f64(v)).collect()
}

fn labeled_table(m: &Matrix, rows: &[String], cols: &[String]) -> Table {
    let mut header = vec![String::new()];
    header.extend(cols.iter().cloned());
    let mut t = Table::new(header);
    t.labeled = true;
    for i in 0..m.rows() {
        let mut row = vec![rows[i].clone()];
        row.extend(row_strings(m.row(i)));
        t.push(row);
    }
    t
}

#[derive(Args, Debug, Serialize)]
pub struct CompoundArgs {
    /// Matrix file (JSON or whitespace/comma separated text).
    pub file: PathBuf,
    /// Compound order.
    #[arg(long, short, required_unless_present = "alpha", conflicts_with = "alpha")]
    pub k: Option<usize>,
    /// Additive compound A^[k] (or A^[α] with --alpha).
    #[arg(long, conflicts_with = "multiplicative")]
    pub additive: bool,
    /// Multiplicative compound A^(k) (the default).
    #[arg(long)]
    pub multiplicative: bool,
    /// Fractional order α = k + s with s in (0, 1).
    #[arg(long)]
    pub alpha: Option<f64>,
}

pub fn compound(args: &CompoundArgs) -> Result<Report, CliError> {
    let a = load_matrix(&args.file)?;
    let mut report = Report::new("compound", args);
    let label = |sets: Vec<compoundkit::IndexSet>| -> Vec<String> {
        sets.iter().map(ToString::to_string).collect()
    };
    match (args.k, args.alpha) {
        (Some(k), _) => {
            let c = if args.additive {
                add_compound(&a, k)?
            } else {
                mult_compound(&a, k)?
            };
            let rows = label(c.row_index().to_vec());
            let cols = label(c.col_index().to_vec());
            report.set("kind", if args.additive { "additive" } else { "multiplicative" });
            report.set("k", k);
            report.set("row_labels", &rows);
            report.set("col_labels", &cols);
            report.set("matrix", c.matrix());
            report.table = Some(labeled_table(c.matrix(), &rows, &cols));
        }
        (None, Some(alpha)) => {
            if !a.is_square() {
                return Err(CliError::Usage("α-compounds need a square matrix".into()));
            }
            let n = a.rows();
            let (k, s) = compoundkit::spectral::split_alpha(alpha, n)?;
            let lower = enumerate(k, n)?;
            let upper = enumerate(k + 1, n)?;
            let labels: Vec<String> = lower
                .iter()
                .flat_map(|l| upper.iter().map(move |u| format!("{l}⊗{u}")))
                .collect();
            report.set("alpha", alpha);
            report.set("k", k);
            report.set("s", s);
            report.set("row_labels", &labels);
            report.set("col_labels", &labels);
            if args.additive {
                let m = alpha_add_compound(&a, alpha)?;
                report.set("kind", "alpha_additive");
                report.set("matrix", &m);
                report.table = Some(labeled_table(&m, &labels, &labels));
            } else {
                let m = alpha_mult_compound(&a, alpha)?;
                let re = m.real_part();
                let im = m.map(|z| z.im);
                report.set("kind", "alpha_multiplicative");
                report.set("max_imag", m.max_imag());
                report.set("matrix", &re);
                report.set("imag", &im);
                report.note("principal branch of the fractional powers; \"matrix\" is the real part");
                report.table = Some(labeled_table(&re, &labels, &labels));
            }
        }
        (None, None) => unreachable!("clap requires --k or --alpha"),
    }
    Ok(report)
}

#[derive(Args, Debug, Serialize)]
pub struct ClassifyArgs {
    pub file: PathBuf,
    /// Highest minor order to scan (default: min(rows, cols)).
    #[arg(long)]
    pub max_k: Option<usize>,
    /// Number of random vectors for a sign-variation-diminishing fuzz (0 = off).
    #[arg(long, default_value_t = 0)]
    pub fuzz: usize,
    /// Check the variation-diminishing property for this vector (comma-separated).
    #[arg(long)]
    pub vector: Option<String>,
    /// Entries with |v| ≤ this count as zeros when counting sign variations.
    #[arg(long, default_value_t = 0.0)]
    pub zero_tol: f64,
}

fn class_name(c: OrderClass) -> String {
    match c {
        OrderClass::Ssr(s) => format!("SSR({s:+})"),
        OrderClass::Sr(s) => format!("SR({s:+})"),
        OrderClass::None => "none".into(),
    }
}

pub fn classify(args: &ClassifyArgs, seed: u64) -> Result<Report, CliError> {
    let a = load_matrix(&args.file)?;
    let mut report = Report::new("classify", args);
    report.set("seed", seed);
    report.tolerance("minor", MINOR_TOL);
    report.tolerance("pattern", PATTERN_TOL);
    let max_k = args.max_k.unwrap_or(a.rows().min(a.cols()));
    let sr = classify_sign_regularity(&a, max_k)?;
    let mut table = Table::new(vec!["k".into(), "class".into(), "tp_fast".into()]);
    let mut orders = Vec::new();
    for k in 1..=max_k {
        let fast = tp_recognize_fast(&a, k)?;
        table.push(vec![k.to_string(), class_name(sr.order(k)), fast.pass.to_string()]);
        orders.push(serde_json::json!({ "k": k, "class": class_name(sr.order(k)), "tp_fast": fast.pass }));
        report.verdict(fast);
    }
    report.set("orders", orders);
    report.set("max_tp_order", sr.max_tp_order);
    report.set("max_tn_order", sr.max_tn_order);
    report.table = Some(table);

    if a.is_square() {
        let n = a.rows();
        report.verdict(is_metzler(&a)?);
        report.verdict(is_irreducible(&a)?);
        report.verdict(is_jacobi(&a)?);
        if n >= 3 {
            let mut patterns = Vec::new();
            for k in 2..n {
                let p = metzler_compound_pattern(n, k)?;
                patterns.push(serde_json::json!({
                    "k": k,
                    "pattern": p.to_string().lines().collect::<Vec<_>>(),
                    "matches": p.matches(&a)?,
                    "compound_metzler": is_metzler(add_compound(&a, k)?.matrix())?.pass,
                }));
            }
            report.set("metzler_patterns", patterns);
        }
        let cyclic = classify_cyclic(&a, None)?;
        if cyclic.detail("shape").and_then(|s| s.as_str()) == Some("cyclic") {
            report.verdict(cyclic);
        }
        if args.fuzz > 0 || args.vector.is_some() {
            report.tolerance("zero", args.zero_tol);
            let x = args.vector.as_deref().map(|v| parse_list(v, "vector")).transpose()?;
            svdp(&a, &sr, args.fuzz, x, args.zero_tol, seed, &mut report)?;
        }
    } else if args.fuzz > 0 || args.vector.is_some() {
        report.note("sign-variation checks need a square matrix; skipped");
    }
    Ok(report)
}

fn svdp(
    a: &Matrix,
    sr: &compoundkit::sign_tools::SignRegularity,
    count: usize,
    vector: Option<Vec<f64>>,
    tau: f64,
    seed: u64,
    report: &mut Report,
) -> Result<(), CliError> {
    let n = a.rows();
    let prefix = |pred: fn(OrderClass) -> bool| (1..=sr.orders.len()).take_while(|&k| pred(sr.order(k))).count();
    let mode = if sr.max_tp_order == n {
        Some(SvdpMode::Tp)
    } else if prefix(OrderClass::is_ssr) > 0 {
        Some(SvdpMode::SsrK(prefix(OrderClass::is_ssr)))
    } else if prefix(OrderClass::is_sr) > 0 {
        Some(SvdpMode::SrK(prefix(OrderClass::is_sr)))
    } else {
        None
    };
    let Some(mode) = mode else {
        report.note("matrix is not sign-regular of order 1; no variation-diminishing property to fuzz");
        return Ok(());
    };
    if let Some(x) = vector {
        let v = svdp_check_tol(a, &x, mode, tau)?;
        if count == 0 {
            report.deciding(v);
            return Ok(());
        }
        report.verdict(v);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut violations = 0;
    let mut first_violation = None;
    for _ in 0..count {
        let x = match mode {
            SvdpMode::Tp => random_sign_vector(n, 0.2, &mut rng),
            SvdpMode::SrK(k) | SvdpMode::SsrK(k) => random_vector_in_cone(n, k - 1, &mut rng),
        };
        let v = svdp_check_tol(a, &x, mode, tau)?;
        if !v.pass {
            violations += 1;
            first_violation.get_or_insert(x);
        }
    }
    let mut v = Verdict::new("svdp_fuzz", violations == 0, tau)
        .with_detail("mode", mode)
        .with_detail("vectors", count)
        .with_detail("violations", violations);
    if let Some(x) = first_violation {
        v = v.with_detail("first_violation", x);
    }
    report.deciding(v);
    Ok(())
}

#[derive(Args, Debug, Serialize)]
pub struct ContractArgs {
    /// System: JSON file, inline JSON, or built-in `name[:key=value,...]` (e.g. `thomas:b=0.1`).
    pub system: String,
    #[arg(long, short, required_unless_present = "alpha", conflicts_with = "alpha")]
    pub k: Option<usize>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// L1, L2 or Linf.
    #[arg(long, default_value = "L2", value_parser = parse_norm)]
    pub norm: NormTag,
    /// Required contraction rate η > 0.
    #[arg(long)]
    pub eta: f64,
    /// Sample times: `t0:t1:count` or a comma-separated list.
    #[arg(long)]
    pub times: Option<String>,
    /// State box `lo,hi`, applied to every coordinate.
    #[arg(long = "box")]
    pub state_box: Option<String>,
    #[arg(long)]
    pub points_per_axis: Option<usize>,
}

fn parse_norm(s: &str) -> Result<NormTag, String> {
    s.parse().map_err(|e: compoundkit::Error| e.to_string())
}

pub fn contract(args: &ContractArgs) -> Result<Report, CliError> {
    let sys = load_system(&args.system)?;
    let mut report = Report::new("contract", args);
    report.tolerance("strictness", STRICTNESS_TOL);
    let mut grid = SampleGrid::default_for(&sys);
    if let Some(t) = &args.times {
        grid.times = parse_times(t)?;
    }
    if let Some(b) = &args.state_box {
        match parse_list(b, "box")?[..] {
            [lo, hi] if lo <= hi => grid.state_box = Some(vec![(lo, hi); sys.dim()]),
            _ => return Err(CliError::Usage(format!("box must be lo,hi, got {b:?}"))),
        }
    }
    if let Some(p) = args.points_per_axis {
        if p == 0 {
            return Err(CliError::Usage("points per axis must be positive".into()));
        }
        grid.points_per_axis = p;
    }
    report.set("system", sys.describe());
    report.set("grid", &grid);
    let verdict = match (args.k, args.alpha) {
        (Some(k), _) => k_contraction_verdict(&sys, k, args.norm, args.eta, &grid)?,
        (None, Some(alpha)) => alpha_contraction_verdict(&sys, alpha, args.norm, args.eta, &grid)?,
        (None, None) => unreachable!("clap requires --k or --alpha"),
    };
    report.deciding(verdict);
    if let (SystemDef::Lti { a }, Some(k)) = (&sys, args.k) {
        report.verdict(lti_k_subspace_check(a, k)?);
    }
    Ok(report)
}

#[derive(Args, Debug, Serialize)]
pub struct SimulateArgs {
    /// System: JSON file, inline JSON, or built-in `name[:key=value,...]`.
    pub system: String,
    /// Initial state (comma-separated); the base point for frames of nonlinear systems.
    #[arg(long)]
    pub x0: Option<String>,
    /// Frame of initial vectors: `unit-square`, `identity`, `identity:K`, or a matrix file.
    #[arg(long)]
    pub frame: Option<String>,
    #[arg(long, default_value = "0,10")]
    pub tspan: String,
    #[arg(long, default_value_t = compoundkit::dynamics::DEFAULT_STEP)]
    pub step: f64,
    /// Keep every `stride`-th step (default: at most about 1000 samples).
    #[arg(long)]
    pub stride: Option<usize>,
    /// Emit the k-volume of the frame instead of its columns.
    #[arg(long, requires = "frame")]
    pub volume: bool,
}

pub fn simulate(args: &SimulateArgs) -> Result<Report, CliError> {
    let sys = load_system(&args.system)?;
    let span = parse_span(&args.tspan)?;
    if !(args.step > 0.0 && args.step.is_finite()) {
        return Err(CliError::Usage(format!("step must be positive, got {}", args.step)));
    }
    let steps = ((span.1 - span.0) / args.step).ceil().max(1.0) as usize;
    let stride = args.stride.unwrap_or((steps / 1000).max(1));
    if stride == 0 {
        return Err(CliError::Usage("stride must be positive".into()));
    }
    let step = Step::new(args.step).every(stride);
    let n = sys.dim();
    let x0 = args.x0.as_deref().map(|s| parse_list(s, "x0")).transpose()?;
    let mut report = Report::new("simulate", args);
    report.set("system", sys.describe());
    report.set("method", "rk4");
    report.set("stride", stride);
    let (header, series): (Vec<String>, Vec<(f64, Vec<f64>)>) = match (&args.frame, &x0) {
        (Some(frame), _) => {
            let frame = load_frame(frame, n)?;
            let base = if sys.is_linear() {
                None
            } else {
                Some(x0.as_deref().ok_or_else(|| {
                    CliError::Usage("nonlinear systems need --x0 as the base point of the frame".into())
                })?)
            };
            if args.volume {
                let v = match base {
                    None => volume_evolution(&sys, &frame, span, step)?,
                    Some(b) => volume_evolution_along(&sys, b, &frame, span, step)?,
                };
                report.set("k", frame.cols());
                (
                    vec!["t".into(), "volume".into()],
                    v.into_iter().map(|(t, v)| (t, vec![v])).collect(),
                )
            } else {
                let frames = propagate_frame(&sys, base, &frame, span, step)?;
                let mut header = vec!["t".to_string()];
                for i in 0..n {
                    for j in 0..frame.cols() {
                        header.push(format!("X{}_{}", i + 1, j + 1));
                    }
                }
                (header, frames.into_iter().map(|(t, m)| (t, m.into_data())).collect())
            }
        }
        (None, Some(x0)) => {
            let traj = integrate(&sys, x0, span, step)?;
            report.verdict(equilibrium_check(&sys, &traj));
            let mut header = vec!["t".to_string()];
            header.extend((1..=n).map(|i| format!("x{i}")));
            (header, traj.times.into_iter().zip(traj.states).collect())
        }
        (None, None) => return Err(CliError::Usage("give --x0, --frame, or both".into())),
    };
    if let Some((t, last)) = series.last() {
        report.set("final_time", t);
        report.set("final", last);
    }
    report.set("samples", series.len());
    report.set(
        "series",
        series
            .iter()
            .map(|(t, v)| std::iter::once(*t).chain(v.iter().copied()).collect::<Vec<f64>>())
            .collect::<Vec<_>>(),
    );
    let mut table = Table::new(header.clone());
    for (t, v) in &series {
        let mut row = vec![format_f64(*t)];
        row.extend(row_strings(v));
        table.push(row);
    }
    report.set("columns", header);
    report.table = Some(table);
    Ok(report)
}

#[derive(Args, Debug, Serialize)]
pub struct DiagstabArgs {
    pub file: PathBuf,
    #[arg(long, short, default_value_t = 1)]
    pub k: usize,
    /// Candidate diagonal, JSON `[d1, ...]` or `{"d": [...]}`, of length C(n, k).
    #[arg(long)]
    pub certificate: Option<PathBuf>,
    /// Positive vector x for the non-negative construction (default all ones).
    #[arg(long)]
    pub x: Option<String>,
    /// Positive vector y for the non-negative construction (default all ones).
    #[arg(long)]
    pub y: Option<String>,
}

fn positive_vector(text: Option<&str>, n: usize, what: &str) -> Result<Vec<f64>, CliError> {
    let Some(t) = text else { return Ok(vec![1.0; n]) };
    let v = parse_list(t, what)?;
    if v.len() != n || v.iter().any(|&x| !(x > 0.0)) {
        return Err(CliError::Usage(format!("{what} must be {n} positive numbers")));
    }
    Ok(v)
}

pub fn diagstab(args: &DiagstabArgs) -> Result<Report, CliError> {
    let a = load_matrix(&args.file)?;
    if !a.is_square() {
        return Err(CliError::Usage("diagonal stability needs a square matrix".into()));
    }
    let n = a.rows();
    let k = args.k;
    let mut report = Report::new("diagstab", args);
    report.tolerance("positive_definite", PD_TOL);
    if let Some(path) = &args.certificate {
        let d = load_certificate(path)?;
        report.deciding(verify_k_diag_stability(&a, k, &d)?);
        return Ok(report);
    }
    let ck = mult_compound(&a, k)?.into_matrix();
    let rho_k = spectral_radius(&ck)?;
    report.set("spectral_radius_compound", rho_k);
    if ck.data().iter().all(|&v| v >= 0.0) {
        // non-negative A^(k): diagonally stable exactly when Schur, with an explicit certificate
        if rho_k >= 1.0 {
            report.deciding(
                Verdict::new(format!("{k}_diagonal_stability"), false, PD_TOL)
                    .with_margin(1.0 - rho_k)
                    .with_note("non-negative compound with spectral radius ≥ 1 is not Schur"),
            );
            return Ok(report);
        }
        let m = ck.rows();
        let x = positive_vector(if k == 1 { args.x.as_deref() } else { None }, m, "x")?;
        let y = positive_vector(if k == 1 { args.y.as_deref() } else { None }, m, "y")?;
        report.verdict(lemma_conditions(&ck, &x, &y)?);
        let cert = construct_dlf_nonneg(&ck, &x, &y)?;
        report.set("certificate", &cert);
        report.deciding(verify_k_diag_stability(&a, k, &cert.d)?);
        return Ok(report);
    }
    if a.data().iter().all(|&v| v >= 0.0) && k > 1 {
        let rho = spectral_radius(&a)?;
        if rho < 1.0 {
            let x = positive_vector(args.x.as_deref(), n, "x")?;
            let y = positive_vector(args.y.as_deref(), n, "y")?;
            let base = construct_dlf_nonneg(&a, &x, &y)?;
            let cert = lift_dlf(&a, &base.d, k)?;
            report.set("certificate", &cert);
            report.note("certificate lifted from the order-1 certificate of the non-negative matrix");
            report.deciding(verify_k_diag_stability(&a, k, &cert.d)?);
            return Ok(report);
        }
    }
    if rho_k >= 1.0 {
        report.deciding(
            Verdict::new(format!("{k}_diagonal_stability"), false, PD_TOL)
                .with_margin(1.0 - rho_k)
                .with_note("necessary condition fails: the compound is not Schur"),
        );
        return Ok(report);
    }
    let cyclic = classify_cyclic(&a, None)?;
    if cyclic.detail("shape").and_then(|s| s.as_str()) == Some("cyclic") {
        let orders = cyclic.detail("orders").and_then(|o| o.as_array()).cloned().unwrap_or_default();
        let holds = |e: &serde_json::Value| {
            e["sr_signature_plus"].as_bool() == Some(true) && e["stable"].as_bool() == Some(true)
        };
        // odd ℓ: diagonal stability (which lifts to every k); even ℓ = k: k-diagonal stability
        let decided = orders.iter().any(|e| {
            let l = e["ell"].as_u64().unwrap_or(0) as usize;
            holds(e) && (l % 2 == 1 || l == k)
        });
        report.verdict(cyclic);
        if decided {
            report.deciding(
                Verdict::new(format!("{k}_diagonal_stability"), true, PD_TOL)
                    .with_margin(1.0 - rho_k)
                    .with_note("existence follows from the cyclic-system criterion; no explicit certificate"),
            );
            return Ok(report);
        }
    }
    report.deciding(
        Verdict::new(format!("{k}_diagonal_certificate"), false, PD_TOL)
            .with_note("no certificate construction applies to this sign structure; the compound is Schur, so the question is open")
            .with_note("supply a candidate with --certificate to verify it"),
    );
    Ok(report)
}

#[derive(Args, Debug, Serialize)]
pub struct HankelArgs {
    /// Realization JSON `{"A", "b", "c"}` or an impulse-response sequence g(1), g(2), ...
    pub input: PathBuf,
    #[arg(long, short)]
    pub k: usize,
    /// Number of impulse-response samples (realizations only).
    #[arg(long)]
    pub horizon: Option<usize>,
}

pub fn hankel(args: &HankelArgs) -> Result<Report, CliError> {
    let text = read(&args.input)?;
    let mut report = Report::new("hankel", args);
    report.tolerance("minor", HANKEL_TOL);
    let (g, verdict) = if text.trim_start().starts_with('{') {
        let sys: HankelSystem = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("realization: {e}")))?;
        sys.validate()?;
        let horizon = args.horizon.unwrap_or(sys.horizon);
        report.set("source", "realization");
        (impulse_response(&sys, horizon)?, hankel_k_positive_verdict(&sys, args.k, horizon)?)
    } else {
        if args.horizon.is_some() {
            return Err(CliError::Usage("--horizon applies to realizations only".into()));
        }
        let g = ImpulseResponse::explicit(parse_sequence(&text)?)?;
        report.set("source", "impulse_response");
        let v = hankel_k_positive_ir(&g, args.k)?;
        (g, v)
    };
    report.deciding(verdict);
    let columns: Vec<Vec<f64>> = (1..=args.k)
        .map(|order| hankel_compound_ir(&g, order, g.len() + 2 - 2 * order))
        .collect::<Result<_, _>>()?;
    let mut header = vec!["j".to_string()];
    header.extend((1..=args.k).map(|o| if o == 1 { "g".to_string() } else { format!("g{o}") }));
    let mut table = Table::new(header);
    for j in 0..columns[0].len() {
        let mut row = vec![(j + 1).to_string()];
        row.extend(columns.iter().map(|c| c.get(j).map_or(String::new(), |&v| format_f64(v))));
        table.push(row);
    }
    report.set("compound_impulse_responses", &columns);
    report.table = Some(table);
    Ok(report)
}
