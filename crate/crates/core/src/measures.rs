//! Matrix measures (logarithmic norms) and the k- and α-contraction verdicts
//! built on them.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dynamics::{BuiltinSystem, SystemDef};
use crate::error::{Error, Result};
use crate::index_sets::{self, binomial};
use crate::matrix::Matrix;
use crate::spectral::{alpha_add_compound, eigenvalues, split_alpha, symmetric_eigen};
use crate::tolerance::STRICTNESS_TOL;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormTag {
    L1,
    L2,
    Linf,
}

impl fmt::Display for NormTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormTag::L1 => "L1",
            NormTag::L2 => "L2",
            NormTag::Linf => "Linf",
        })
    }
}

impl FromStr for NormTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "l1" | "1" => Ok(NormTag::L1),
            "l2" | "2" => Ok(NormTag::L2),
            "linf" | "inf" | "l_inf" => Ok(NormTag::Linf),
            _ => Err(Error::InvalidArgument(format!("unknown norm {s:?}"))),
        }
    }
}

fn require_square(a: &Matrix) -> Result<usize> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "matrix measure needs a square matrix, got {:?}",
            a.shape()
        )));
    }
    Ok(a.rows())
}

/// Matrix measure induced by the chosen vector norm.
pub fn mu(a: &Matrix, norm: NormTag) -> Result<f64> {
    let n = require_square(a)?;
    Ok(match norm {
        NormTag::L1 => (0..n)
            .map(|j| a[(j, j)] + (0..n).filter(|&i| i != j).map(|i| a[(i, j)].abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        NormTag::Linf => (0..n)
            .map(|i| a[(i, i)] + (0..n).filter(|&j| j != i).map(|j| a[(i, j)].abs()).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max),
        NormTag::L2 => symmetric_eigen(&a.symmetric_part())?.0[0],
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum Witness {
    /// Index set attaining the maximum (columns for L1, rows for L∞).
    IndexSet(Vec<usize>),
    /// The `k` largest eigenvalues of the symmetric part (L2).
    Eigenvalues(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MeasureResult {
    pub norm: NormTag,
    pub value: f64,
    pub k_or_alpha: f64,
    pub witness: Witness,
}

/// `μ(A^[k])` from the closed forms, without building `A^[k]`.
///
/// * L1: `max_α Σ_p (a_{α_p α_p} + Σ_{j∉α} |a_{j α_p}|)`
/// * L∞: the same with rows instead of columns
/// * L2: sum of the `k` largest eigenvalues of `(A + Aᵀ)/2`
pub fn mu_compound(a: &Matrix, k: usize, norm: NormTag) -> Result<MeasureResult> {
    let n = require_square(a)?;
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={n}")));
    }
    let (value, witness) = match norm {
        NormTag::L2 => {
            let (vals, _) = symmetric_eigen(&a.symmetric_part())?;
            let top = vals[..k].to_vec();
            (top.iter().sum(), Witness::Eigenvalues(top))
        }
        NormTag::L1 | NormTag::Linf => {
            index_sets::check_guardrail(binomial(n, k))?;
            let entry = |i: usize, j: usize| match norm {
                NormTag::L1 => a[(i, j)],
                _ => a[(j, i)],
            };
            let mut best = f64::NEG_INFINITY;
            let mut best_set = None;
            for alpha in index_sets::enumerate(k, n)? {
                let members = alpha.zero_based();
                let mut inside = vec![false; n];
                for &p in &members {
                    inside[p] = true;
                }
                let mut total = 0.0;
                for &p in &members {
                    total += entry(p, p);
                    for j in (0..n).filter(|&j| !inside[j]) {
                        total += entry(j, p).abs();
                    }
                }
                if total > best {
                    best = total;
                    best_set = Some(alpha);
                }
            }
            let set = best_set.expect("Q(k, n) is nonempty");
            (best, Witness::IndexSet(set.elements().to_vec()))
        }
    };
    Ok(MeasureResult {
        norm,
        value,
        k_or_alpha: k as f64,
        witness,
    })
}

/// Where the contraction conditions are sampled: a list of times and, for
/// nonlinear systems, a rectangular state box with a uniform grid per axis.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SampleGrid {
    pub times: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub state_box: Option<Vec<(f64, f64)>>,
    #[serde(default = "default_points")]
    pub points_per_axis: usize,
}

pub const DEFAULT_POINTS_PER_AXIS: usize = 9;

fn default_points() -> usize {
    DEFAULT_POINTS_PER_AXIS
}

impl SampleGrid {
    pub fn at_times(times: Vec<f64>) -> Self {
        Self {
            times,
            state_box: None,
            points_per_axis: DEFAULT_POINTS_PER_AXIS,
        }
    }

    pub fn with_box(mut self, state_box: Vec<(f64, f64)>, points_per_axis: usize) -> Self {
        self.state_box = Some(state_box);
        self.points_per_axis = points_per_axis;
        self
    }

    /// `count` equally spaced times on `[t0, t1]`.
    pub fn linspace_times(t0: f64, t1: f64, count: usize) -> Vec<f64> {
        linspace(t0, t1, count)
    }

    /// Default grid: the LTV sample times (μ is convex, so these bound the
    /// interpolated schedule), 257 times over `[0, 2π]` for the periodic
    /// built-in, `t = 0` otherwise; the built-in state box when there is one.
    pub fn default_for(sys: &SystemDef) -> Self {
        let times = match sys {
            SystemDef::Ltv { times, .. } => times.clone(),
            SystemDef::Builtin(BuiltinSystem::Squares) => {
                linspace(0.0, 2.0 * std::f64::consts::PI, 257)
            }
            _ => vec![0.0],
        };
        Self {
            times,
            state_box: sys.default_box(),
            points_per_axis: DEFAULT_POINTS_PER_AXIS,
        }
    }

    /// All grid points of the state box (empty when there is no box).
    pub fn states(&self) -> Vec<Vec<f64>> {
        let Some(bx) = &self.state_box else {
            return Vec::new();
        };
        let axes: Vec<Vec<f64>> = bx
            .iter()
            .map(|&(lo, hi)| linspace(lo, hi, self.points_per_axis))
            .collect();
        let mut out = vec![Vec::new()];
        for axis in &axes {
            let mut next = Vec::with_capacity(out.len() * axis.len());
            for prefix in &out {
                for &v in axis {
                    let mut p = prefix.clone();
                    p.push(v);
                    next.push(p);
                }
            }
            out = next;
        }
        out
    }
}

fn linspace(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![(lo + hi) / 2.0],
        _ => (0..count)
            .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

struct Sample {
    time: f64,
    state: Option<Vec<f64>>,
    value: f64,
}

fn sample_measure(
    sys: &SystemDef,
    grid: &SampleGrid,
    measure: impl Fn(&Matrix) -> Result<f64>,
) -> Result<(Sample, usize)> {
    sys.validate()?;
    if grid.times.is_empty() {
        return Err(Error::InvalidArgument("sample grid has no times".into()));
    }
    if grid.times.iter().any(|t| !t.is_finite()) {
        return Err(Error::InvalidArgument("sample times must be finite".into()));
    }
    let states = if sys.is_linear() {
        vec![None]
    } else {
        let pts = grid.states();
        if pts.is_empty() {
            return Err(Error::InvalidArgument(
                "nonlinear system needs a nonempty state box".into(),
            ));
        }
        if pts[0].len() != sys.dim() {
            return Err(Error::Dimension(format!(
                "state box has {} axes, system dimension is {}",
                pts[0].len(),
                sys.dim()
            )));
        }
        pts.into_iter().map(Some).collect()
    };
    let mut worst: Option<Sample> = None;
    let mut count = 0;
    for &t in &grid.times {
        for x in &states {
            let j = match x {
                Some(x) => sys.jacobian(t, x),
                None => sys.matrix_at(t).expect("linear"),
            };
            let value = measure(&j)?;
            count += 1;
            if worst.as_ref().is_none_or(|w| value > w.value) {
                worst = Some(Sample {
                    time: t,
                    state: x.clone(),
                    value,
                });
            }
        }
    }
    Ok((worst.expect("at least one sample"), count))
}

fn contraction_verdict(
    check: String,
    sys: &SystemDef,
    eta: f64,
    worst: Sample,
    count: usize,
) -> Verdict {
    let pass = worst.value <= -eta + STRICTNESS_TOL;
    let mut v = Verdict::new(check, pass, STRICTNESS_TOL)
        .with_margin(-eta - worst.value)
        .with_detail("eta", eta)
        .with_detail("worst_measure", worst.value)
        .with_detail("worst_time", worst.time)
        .with_detail("samples", count)
        .with_detail("system", sys.describe());
    if let Some(x) = &worst.state {
        v = v.with_detail("worst_state", x);
    }
    if !sys.is_linear() {
        v = v.with_note("sampled sufficient-condition check over the state grid, not a proof");
    } else if !sys.is_time_invariant() {
        v = v.with_note("checked at the sampled times only");
    }
    v.with_note("verdict is for this norm only; another norm may still certify contraction")
}

fn check_eta(eta: f64) -> Result<()> {
    if eta.is_finite() && eta > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("η = {eta} must be positive")))
    }
}

/// PASS when `μ(A^[k](t, x)) ≤ −η` at every sample.
pub fn k_contraction_verdict(
    sys: &SystemDef,
    k: usize,
    norm: NormTag,
    eta: f64,
    grid: &SampleGrid,
) -> Result<Verdict> {
    check_eta(eta)?;
    let (worst, count) = sample_measure(sys, grid, |j| Ok(mu_compound(j, k, norm)?.value))?;
    Ok(contraction_verdict(format!("{k}_contraction_{norm}"), sys, eta, worst, count).with_detail("k", k))
}

/// PASS when `μ(A^[α](t, x)) ≤ −η` at every sample. For the Thomas system
/// with L1 and `α ∈ (2, 3)` the analytic bound on the measure is reported too.
pub fn alpha_contraction_verdict(
    sys: &SystemDef,
    alpha: f64,
    norm: NormTag,
    eta: f64,
    grid: &SampleGrid,
) -> Result<Verdict> {
    check_eta(eta)?;
    let (k, s) = split_alpha(alpha, sys.dim())?;
    let (worst, count) =
        sample_measure(sys, grid, |j| mu(&alpha_add_compound(j, alpha)?, norm))?;
    let mut v = contraction_verdict(format!("alpha_contraction_{norm}"), sys, eta, worst, count)
        .with_detail("alpha", alpha)
        .with_detail("k", k)
        .with_detail("s", s);
    if let (SystemDef::Builtin(BuiltinSystem::Thomas { b, c }), NormTag::L1, 2) = (sys, norm, k) {
        let open = 1.0 - 2.0 * b - s * (b + 1.0);
        v = v.with_detail("analytic_bound_open_loop", open);
        if let Some(c) = c {
            // measure of the feedback term c·diag(2, 1+s, 1+s)
            let feedback = (2.0 * c).max((1.0 + s) * c);
            v = v.with_detail("analytic_bound", open + feedback);
        } else {
            v = v.with_detail("analytic_bound", open);
        }
    }
    Ok(v)
}

/// Spectral form of the LTI subspace condition: every sum of `k` eigenvalues
/// has negative real part, which leaves at least `n − k + 1` stable eigenvalues.
pub fn lti_k_subspace_check(a: &Matrix, k: usize) -> Result<Verdict> {
    let n = require_square(a)?;
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={n}")));
    }
    let mut re: Vec<f64> = eigenvalues(a)?.iter().map(|l| l.re).collect();
    re.sort_by(|x, y| y.total_cmp(x));
    let max_sum: f64 = re[..k].iter().sum();
    let pass = max_sum < -STRICTNESS_TOL;
    let stable = re.iter().filter(|&&r| r < -STRICTNESS_TOL).count();
    let mut v = Verdict::new(format!("lti_{k}_subspace"), pass, STRICTNESS_TOL)
        .with_margin(-max_sum)
        .with_detail("max_k_sum_real", max_sum)
        .with_detail("real_parts_desc", &re)
        .with_detail("stable_eigenvalues", stable);
    if pass {
        v = v.with_detail("guaranteed_stable", n - k + 1);
    }
    Ok(v)
}
