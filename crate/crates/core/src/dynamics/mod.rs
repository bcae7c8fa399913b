//! Fixed-step RK4 propagation of states, transition matrices, compound
//! (variational) systems and parallelotope volumes.

mod system;

pub use system::{globally_reachable_vertex, laplacian, BuiltinSystem, SystemDef};

use serde::Serialize;

use crate::compound::{add_compound, mult_compound};
use crate::error::{Error, Result};
use crate::io::format_series_csv;
use crate::matrix::{norm2, Matrix};
use crate::sign_tools::s_minus_tol;
use crate::verdict::Verdict;

pub const DEFAULT_STEP: f64 = 1e-3;
/// `‖f(x)‖∞` threshold for declaring an equilibrium.
pub const EQUILIBRIUM_TOL: f64 = 1e-6;
/// Fraction of the time span inspected by the equilibrium test.
pub const EQUILIBRIUM_WINDOW: f64 = 0.1;

/// Step size plus output decimation (keep every `stride`-th step).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Step {
    pub h: f64,
    pub stride: usize,
}

impl Step {
    pub fn new(h: f64) -> Self {
        Self { h, stride: 1 }
    }

    pub fn every(mut self, stride: usize) -> Self {
        self.stride = stride.max(1);
        self
    }
}

impl Default for Step {
    fn default() -> Self {
        Self::new(DEFAULT_STEP)
    }
}

impl From<f64> for Step {
    fn from(h: f64) -> Self {
        Self::new(h)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// Step actually used: `(t1 − t0) / steps`, never larger than requested.
    pub step: f64,
    pub method: String,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> &[f64] {
        self.states.last().expect("trajectory has at least the initial state")
    }

    pub fn to_csv(&self, prefix: &str) -> String {
        let n = self.states.first().map_or(0, Vec::len);
        let names: Vec<String> = (1..=n).map(|i| format!("{prefix}{i}")).collect();
        let mut header = vec!["t"];
        header.extend(names.iter().map(String::as_str));
        let rows: Vec<(f64, Vec<f64>)> = self
            .times
            .iter()
            .copied()
            .zip(self.states.iter().cloned())
            .collect();
        format_series_csv(&header, &rows)
    }
}

fn step_count(span: (f64, f64), h: f64) -> Result<(usize, f64)> {
    let (t0, t1) = span;
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidArgument(format!("step h = {h} must be positive")));
    }
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::InvalidArgument(format!(
            "time span [{t0}, {t1}] must be finite and ordered"
        )));
    }
    if t1 == t0 {
        return Ok((0, h));
    }
    let steps = (((t1 - t0) / h) - 1e-9).ceil().max(1.0) as usize;
    Ok((steps, (t1 - t0) / steps as f64))
}

fn axpy(y: &[f64], a: f64, x: &[f64]) -> Vec<f64> {
    y.iter().zip(x).map(|(yi, xi)| yi + a * xi).collect()
}

/// Classical RK4 for `ẏ = f(t, y)` recording every `stride`-th step and the endpoint.
fn rk4<F>(f: F, y0: &[f64], span: (f64, f64), step: Step, method: &str) -> Result<Trajectory>
where
    F: Fn(f64, &[f64]) -> Vec<f64>,
{
    let (steps, h) = step_count(span, step.h)?;
    let t0 = span.0;
    let mut times = vec![t0];
    let mut states = vec![y0.to_vec()];
    let mut y = y0.to_vec();
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let k1 = f(t, &y);
        let k2 = f(t + h / 2.0, &axpy(&y, h / 2.0, &k1));
        let k3 = f(t + h / 2.0, &axpy(&y, h / 2.0, &k2));
        let k4 = f(t + h, &axpy(&y, h, &k3));
        for j in 0..y.len() {
            y[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
        if y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { t });
        }
        if (i + 1) % step.stride == 0 || i + 1 == steps {
            times.push(if i + 1 == steps { span.1 } else { t0 + (i + 1) as f64 * h });
            states.push(y.clone());
        }
    }
    Ok(Trajectory {
        times,
        states,
        step: h,
        method: method.to_string(),
    })
}

/// RK4 for `Ẏ = M(t) Y` with `Y` stored column-major in a flat vector;
/// `M` is evaluated once per distinct stage time.
fn rk4_linear<M>(m: M, y0: &Matrix, span: (f64, f64), step: Step) -> Result<Vec<(f64, Matrix)>>
where
    M: Fn(f64) -> Result<Matrix>,
{
    let (steps, h) = step_count(span, step.h)?;
    let t0 = span.0;
    let mut out = vec![(t0, y0.clone())];
    let mut y = y0.clone();
    let mut m_start = m(t0)?;
    for i in 0..steps {
        let t = t0 + i as f64 * h;
        let m_mid = m(t + h / 2.0)?;
        let m_end = m(t + h)?;
        let k1 = &m_start * &y;
        let k2 = &m_mid * &(&y + &k1.scale(h / 2.0));
        let k3 = &m_mid * &(&y + &k2.scale(h / 2.0));
        let k4 = &m_end * &(&y + &k3.scale(h));
        let incr = &(&k1 + &k2.scale(2.0)) + &(&k3.scale(2.0) + &k4);
        y = &y + &incr.scale(h / 6.0);
        if y.data().iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { t });
        }
        m_start = m_end;
        if (i + 1) % step.stride == 0 || i + 1 == steps {
            let ti = if i + 1 == steps { span.1 } else { t0 + (i + 1) as f64 * h };
            out.push((ti, y.clone()));
        }
    }
    Ok(out)
}

fn check_state(sys: &SystemDef, x: &[f64], what: &str) -> Result<()> {
    sys.validate()?;
    if x.len() != sys.dim() {
        return Err(Error::Dimension(format!(
            "{what} has length {}, system dimension is {}",
            x.len(),
            sys.dim()
        )));
    }
    if x.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument(format!("{what} has non-finite entries")));
    }
    Ok(())
}

fn check_frame(sys: &SystemDef, frame: &Matrix) -> Result<usize> {
    sys.validate()?;
    if frame.rows() != sys.dim() || frame.cols() == 0 || frame.cols() > sys.dim() {
        return Err(Error::Dimension(format!(
            "frame of shape {:?} for a system of dimension {}",
            frame.shape(),
            sys.dim()
        )));
    }
    Ok(frame.cols())
}

fn require_linear(sys: &SystemDef) -> Result<()> {
    if sys.is_linear() {
        Ok(())
    } else {
        Err(Error::Precondition(format!(
            "{} is nonlinear; supply a base point",
            sys.describe()
        )))
    }
}

pub fn integrate(
    sys: &SystemDef,
    x0: &[f64],
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Trajectory> {
    check_state(sys, x0, "x0")?;
    rk4(|t, x| sys.field(t, x), x0, span, step.into(), "rk4")
}

/// `Φ(t1, t0)` for a linear system.
pub fn transition_matrix(sys: &SystemDef, t0: f64, t1: f64, h: f64) -> Result<Matrix> {
    sys.validate()?;
    require_linear(sys)?;
    let n = sys.dim();
    let path = rk4_linear(
        |t| Ok(sys.matrix_at(t).expect("linear")),
        &Matrix::identity(n),
        (t0, t1),
        Step::new(h).every(usize::MAX),
    )?;
    Ok(path.into_iter().last().expect("endpoint").1)
}

/// Propagates the columns of `frame`. For linear systems these are solutions;
/// for nonlinear ones they are tangent vectors along the solution from `base`.
pub fn propagate_frame(
    sys: &SystemDef,
    base: Option<&[f64]>,
    frame: &Matrix,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Vec<(f64, Matrix)>> {
    let k = check_frame(sys, frame)?;
    let step = step.into();
    match base {
        None => {
            require_linear(sys)?;
            rk4_linear(|t| Ok(sys.matrix_at(t).expect("linear")), frame, span, step)
        }
        Some(x0) => {
            check_state(sys, x0, "base point")?;
            let n = sys.dim();
            let mut y0 = x0.to_vec();
            y0.extend(frame.transpose().data());
            let traj = rk4(
                |t, y| {
                    let (x, v) = y.split_at(n);
                    let j = sys.jacobian(t, x);
                    let mut out = sys.field(t, x);
                    for col in v.chunks(n) {
                        out.extend(j.mul_vec(col).expect("dimension"));
                    }
                    out
                },
                &y0,
                span,
                step,
                "rk4-variational",
            )?;
            Ok(traj
                .times
                .into_iter()
                .zip(traj.states)
                .map(|(t, y)| {
                    let cols: Vec<Vec<f64>> = y[n..].chunks(n).map(<[f64]>::to_vec).collect();
                    (t, Matrix::from_columns(&cols[..k]).expect("frame shape"))
                })
                .collect())
        }
    }
}

fn compound_vector(frame: &Matrix, k: usize) -> Result<Vec<f64>> {
    Ok(mult_compound(frame, k)?.into_matrix().into_data())
}

/// Integrates `ẏ = A^[k](t) y` from `y(t0) = X0^(k)` for a linear system.
pub fn compound_propagate(
    sys: &SystemDef,
    k: usize,
    frame: &Matrix,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Trajectory> {
    let cols = check_frame(sys, frame)?;
    if cols != k {
        return Err(Error::Dimension(format!("frame has {cols} columns, k = {k}")));
    }
    require_linear(sys)?;
    let step = step.into();
    let y0 = Matrix::column_vector(&compound_vector(frame, k)?);
    let fixed = if sys.is_time_invariant() {
        Some(add_compound(&sys.matrix_at(0.0).expect("linear"), k)?.into_matrix())
    } else {
        None
    };
    let path = rk4_linear(
        |t| match &fixed {
            Some(m) => Ok(m.clone()),
            None => Ok(add_compound(&sys.matrix_at(t).expect("linear"), k)?.into_matrix()),
        },
        &y0,
        span,
        step,
    )?;
    let (times, states) = path.into_iter().map(|(t, y)| (t, y.into_data())).unzip();
    Ok(Trajectory {
        times,
        states,
        step: step_count(span, step.h)?.1,
        method: "rk4-compound".into(),
    })
}

/// Nonlinear counterpart of [`compound_propagate`]: integrates the state from
/// `base` jointly with `ẏ = J^[k](t, x(t)) y`, the compound of the variational flow.
pub fn compound_propagate_along(
    sys: &SystemDef,
    base: &[f64],
    k: usize,
    frame: &Matrix,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Trajectory> {
    let cols = check_frame(sys, frame)?;
    check_state(sys, base, "base point")?;
    if cols != k {
        return Err(Error::Dimension(format!("frame has {cols} columns, k = {k}")));
    }
    let n = sys.dim();
    let mut y0 = base.to_vec();
    y0.extend(compound_vector(frame, k)?);
    let traj = rk4(
        |t, y| {
            let (x, c) = y.split_at(n);
            let jk = add_compound(&sys.jacobian(t, x), k).expect("order checked").into_matrix();
            let mut out = sys.field(t, x);
            out.extend(jk.mul_vec(c).expect("dimension"));
            out
        },
        &y0,
        span,
        step.into(),
        "rk4-compound-variational",
    )?;
    Ok(Trajectory {
        states: traj.states.into_iter().map(|y| y[n..].to_vec()).collect(),
        ..traj
    })
}

fn volumes(traj: Trajectory) -> Vec<(f64, f64)> {
    traj.times
        .into_iter()
        .zip(traj.states)
        .map(|(t, y)| (t, norm2(&y)))
        .collect()
}

/// `|X^(k)(t)|₂`, the k-volume of the parallelotope spanned by the frame.
pub fn volume_evolution(
    sys: &SystemDef,
    frame: &Matrix,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Vec<(f64, f64)>> {
    Ok(volumes(compound_propagate(sys, frame.cols(), frame, span, step)?))
}

pub fn volume_evolution_along(
    sys: &SystemDef,
    base: &[f64],
    frame: &Matrix,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Vec<(f64, f64)>> {
    Ok(volumes(compound_propagate_along(sys, base, frame.cols(), frame, span, step)?))
}

/// 16-point Gauss–Legendre nodes and weights on `[0, 1]`.
fn gauss_legendre_16() -> &'static [(f64, f64); 16] {
    use std::sync::OnceLock;
    static RULE: OnceLock<[(f64, f64); 16]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = 16;
        let mut rule = [(0.0, 0.0); 16];
        for i in 0..n {
            // Newton on P_n from the Chebyshev-like initial guess
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for j in 2..=n {
                    let p2 = ((2 * j - 1) as f64 * x * p1 - (j - 1) as f64 * p0) / j as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            rule[i] = ((1.0 - x) / 2.0, w / 2.0);
        }
        rule
    })
}

/// `∫₀¹ J(t, s·xa + (1 − s)·xb) ds` by 16-point Gauss–Legendre quadrature.
pub fn segment_jacobian_average(sys: &SystemDef, t: f64, xa: &[f64], xb: &[f64]) -> Result<Matrix> {
    check_state(sys, xa, "xa")?;
    check_state(sys, xb, "xb")?;
    let n = sys.dim();
    let mut acc = Matrix::zeros(n, n);
    for &(s, w) in gauss_legendre_16() {
        let p: Vec<f64> = xa.iter().zip(xb).map(|(a, b)| s * a + (1.0 - s) * b).collect();
        acc = &acc + &sys.jacobian(t, &p).scale(w);
    }
    Ok(acc)
}

/// `A^{ab}(t)`: the Jacobian averaged over the segment between `x(t, b)` and `x(t, a)`,
/// so that `ẋ(t,a) − ẋ(t,b) = A^{ab}(t) (x(t,a) − x(t,b))`.
pub fn variational_matrix(
    sys: &SystemDef,
    a: &[f64],
    b: &[f64],
    t: f64,
    h: f64,
) -> Result<Matrix> {
    check_state(sys, a, "a")?;
    check_state(sys, b, "b")?;
    let every = Step::new(h).every(usize::MAX);
    let xa = integrate(sys, a, (0.0, t), every)?;
    let xb = integrate(sys, b, (0.0, t), every)?;
    segment_jacobian_average(sys, t, xa.final_state(), xb.final_state())
}

/// `d/dt [x¹ … x^k]^(k)` when `ẋ^i = A x^i + f^i`:
/// `A^[k] X^(k) + Σ_i [x¹ … f^i … x^k]^(k)`.
pub fn forced_compound_derivative(a: &Matrix, x: &Matrix, f: &Matrix) -> Result<Vec<f64>> {
    if !a.is_square() || x.rows() != a.rows() || f.shape() != x.shape() {
        return Err(Error::Dimension(format!(
            "A {:?}, X {:?}, F {:?} are inconsistent",
            a.shape(),
            x.shape(),
            f.shape()
        )));
    }
    let k = x.cols();
    let drift = add_compound(a, k)?
        .matrix()
        .mul_vec(&compound_vector(x, k)?)?;
    let mut total = drift;
    for i in 0..k {
        let mut cols: Vec<Vec<f64>> = (0..k).map(|j| x.column(j)).collect();
        cols[i] = f.column(i);
        let replaced = compound_vector(&Matrix::from_columns(&cols)?, k)?;
        for (t, r) in total.iter_mut().zip(replaced) {
            *t += r;
        }
    }
    Ok(total)
}

/// Supremum of feedback gains `c` for which the Thomas closed loop satisfies
/// the μ1 bound for `(2 + s)`-contraction: `c* = (s(b + 1) + 2b − 1) / (1 + s)`.
pub fn thomas_gain_designer(b: f64, s: f64) -> Result<f64> {
    if !(b > 0.0 && b.is_finite()) || !(0.0..1.0).contains(&s) {
        return Err(Error::InvalidArgument(format!(
            "need b > 0 and s in [0, 1), got b = {b}, s = {s}"
        )));
    }
    Ok((s * (b + 1.0) + 2.0 * b - 1.0) / (1.0 + s))
}

/// Simulates `x(t, a)` and `x(t, b)` and checks that the difference keeps at
/// most `k − 1` sign variations. Entries below `1e−9·‖d(t)‖∞` count as zero.
pub fn cone_invariance_sim(
    sys: &SystemDef,
    a: &[f64],
    b: &[f64],
    k: usize,
    span: (f64, f64),
    step: impl Into<Step>,
) -> Result<Verdict> {
    check_state(sys, a, "a")?;
    check_state(sys, b, "b")?;
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={n}")));
    }
    let rel = 1e-9;
    let variations = |d: &[f64]| {
        let scale = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        s_minus_tol(d, rel * scale)
    };
    let d0: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    if variations(&d0) > k - 1 {
        return Err(Error::Precondition(format!(
            "a − b has {} sign variations, more than k − 1 = {}",
            variations(&d0),
            k - 1
        )));
    }
    let step = step.into();
    let ta = integrate(sys, a, span, step)?;
    let tb = integrate(sys, b, span, step)?;
    let counts: Vec<usize> = ta
        .states
        .iter()
        .zip(&tb.states)
        .map(|(xa, xb)| {
            let d: Vec<f64> = xa.iter().zip(xb).map(|(x, y)| x - y).collect();
            variations(&d)
        })
        .collect();
    let (worst_i, worst) = counts
        .iter()
        .copied()
        .enumerate()
        .max_by_key(|&(i, c)| (c, std::cmp::Reverse(i)))
        .expect("at least one sample");
    let nonincreasing = counts.windows(2).all(|w| w[1] <= w[0]);
    Ok(Verdict::new(format!("cone_invariance_{k}"), worst < k, rel)
        .with_detail("samples", counts.len())
        .with_detail("max_variations", worst)
        .with_detail("worst_time", ta.times[worst_i])
        .with_detail("nonincreasing", nonincreasing)
        .with_note("simulation-based check at sampled times"))
}

/// Checks `‖f(t, x)‖∞ < 1e−6` at every stored sample in the last 10% of the span.
pub fn equilibrium_check(sys: &SystemDef, traj: &Trajectory) -> Verdict {
    let (t0, t1) = (traj.times[0], *traj.times.last().expect("nonempty"));
    let start = t1 - EQUILIBRIUM_WINDOW * (t1 - t0);
    let mut worst = 0.0f64;
    let mut samples = 0usize;
    for (t, x) in traj.times.iter().zip(&traj.states) {
        if *t + 1e-12 >= start {
            let speed = sys.field(*t, x).iter().fold(0.0f64, |m, v| m.max(v.abs()));
            worst = worst.max(speed);
            samples += 1;
        }
    }
    Verdict::new("equilibrium", worst < EQUILIBRIUM_TOL, EQUILIBRIUM_TOL)
        .with_margin(EQUILIBRIUM_TOL - worst)
        .with_detail("max_speed", worst)
        .with_detail("window_start", start)
        .with_detail("samples", samples)
        .with_detail("final_state", traj.final_state())
}
