//! Hankel k-positivity of discrete-time SISO systems `x(j+1) = Ax(j) + bu(j)`,
//! `y = cᵀx`, through the Hankel k-compound impulse response
//! `g^(k)(j) = det H_g(j, k)`.

use serde::{Deserialize, Serialize};

use crate::compound::small_det;
use crate::error::{Error, Result};
use crate::matrix::{norm2, Matrix};
use crate::sign_tools::s_minus_tol;
use crate::spectral::spectral_radius;
use crate::tolerance::HANKEL_TOL;
use crate::verdict::Verdict;

pub const DEFAULT_HORIZON: usize = 200;

/// Realization `(A, b, c)` plus truncation horizon. JSON: `{"A": ..., "b": [...], "c": [...]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HankelSystem {
    #[serde(rename = "A")]
    pub a: Matrix,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    #[serde(default = "default_horizon")]
    pub horizon: usize,
}

fn default_horizon() -> usize {
    DEFAULT_HORIZON
}

impl HankelSystem {
    pub fn new(a: Matrix, b: Vec<f64>, c: Vec<f64>) -> Result<Self> {
        let sys = Self {
            a,
            b,
            c,
            horizon: DEFAULT_HORIZON,
        };
        sys.validate()?;
        Ok(sys)
    }

    pub fn with_horizon(mut self, horizon: usize) -> Self {
        self.horizon = horizon;
        self
    }

    /// `G(z) = r / (z − p)`.
    pub fn first_order_lag(p: f64, r: f64) -> Self {
        Self::new(Matrix::diag(&[p]), vec![1.0], vec![r]).expect("1x1 realization")
    }

    /// Diagonal realization of `Σ r_i / (z − p_i)`.
    pub fn lag_sum(poles: &[f64], residues: &[f64]) -> Result<Self> {
        if poles.len() != residues.len() || poles.is_empty() {
            return Err(Error::Dimension("poles and residues must pair up".into()));
        }
        Self::new(Matrix::diag(poles), vec![1.0; poles.len()], residues.to_vec())
    }

    /// Parallel interconnection: impulse responses add.
    pub fn parallel(&self, other: &Self) -> Self {
        let (n, m) = (self.dim(), other.dim());
        let a = Matrix::from_fn(n + m, n + m, |i, j| match (i < n, j < n) {
            (true, true) => self.a[(i, j)],
            (false, false) => other.a[(i - n, j - n)],
            _ => 0.0,
        });
        let mut b = self.b.clone();
        b.extend(&other.b);
        let mut c = self.c.clone();
        c.extend(&other.c);
        Self {
            a,
            b,
            c,
            horizon: self.horizon.max(other.horizon),
        }
    }

    pub fn dim(&self) -> usize {
        self.a.rows()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.a.rows();
        if !self.a.is_square() || n == 0 || self.b.len() != n || self.c.len() != n {
            return Err(Error::Dimension(format!(
                "realization shapes A {:?}, b {}, c {} are inconsistent",
                self.a.shape(),
                self.b.len(),
                self.c.len()
            )));
        }
        if self.b.iter().chain(&self.c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("b and c must be finite".into()));
        }
        if self.horizon == 0 {
            return Err(Error::InvalidArgument("horizon must be positive".into()));
        }
        Ok(())
    }

    pub fn spectral_radius(&self) -> Result<f64> {
        spectral_radius(&self.a)
    }

    /// `‖c‖‖b‖ ρ^N / (1 − ρ)`: estimate of `Σ_{j>N} |g(j)|`.
    pub fn tail_bound(&self, horizon: usize) -> Result<f64> {
        let rho = self.spectral_radius()?;
        if rho >= 1.0 {
            return Ok(f64::INFINITY);
        }
        Ok(norm2(&self.c) * norm2(&self.b) * rho.powi(horizon as i32) / (1.0 - rho))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IrSource {
    Realization,
    Explicit,
}

/// Samples `g(1), …, g(N)` (`g(0) = 0` is implicit).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ImpulseResponse {
    pub samples: Vec<f64>,
    pub source: IrSource,
}

impl ImpulseResponse {
    pub fn explicit(samples: Vec<f64>) -> Result<Self> {
        if samples.is_empty() || samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "impulse response must be nonempty and finite".into(),
            ));
        }
        Ok(Self {
            samples,
            source: IrSource::Explicit,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// `g(j)`, 1-based; zero for `j = 0`.
    pub fn g(&self, j: usize) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.samples[j - 1]
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.len() != other.len() {
            return Err(Error::Dimension("impulse responses differ in length".into()));
        }
        Ok(Self {
            samples: self.samples.iter().zip(&other.samples).map(|(a, b)| a + b).collect(),
            source: IrSource::Explicit,
        })
    }
}

/// `g(j) = cᵀ A^{j−1} b` for `j = 1..=n_samples`.
pub fn impulse_response(sys: &HankelSystem, n_samples: usize) -> Result<ImpulseResponse> {
    sys.validate()?;
    if n_samples == 0 {
        return Err(Error::InvalidArgument("need at least one sample".into()));
    }
    let mut x = sys.b.clone();
    let mut samples = Vec::with_capacity(n_samples);
    for _ in 0..n_samples {
        samples.push(sys.c.iter().zip(&x).map(|(c, x)| c * x).sum());
        x = sys.a.mul_vec(&x)?;
    }
    Ok(ImpulseResponse {
        samples,
        source: IrSource::Realization,
    })
}

fn horizon_error(needed: usize, have: usize) -> Error {
    Error::InvalidArgument(format!(
        "needs g up to index {needed}, only {have} samples available"
    ))
}

/// `H_g(p, q)`: the `q×q` Hankel block with entries `g(p + i + j)`.
pub fn hankel_block(g: &ImpulseResponse, p: usize, q: usize) -> Result<Matrix> {
    if p == 0 || q == 0 {
        return Err(Error::InvalidArgument("p and q start at 1".into()));
    }
    let last = p + 2 * q - 2;
    if last > g.len() {
        return Err(horizon_error(last, g.len()));
    }
    Ok(Matrix::from_fn(q, q, |i, j| g.g(p + i + j)))
}

/// `max |H_g(p, q) − O^q(A, c) A^{p−1} C^q(A, b)|`.
pub fn factorization_residual(sys: &HankelSystem, p: usize, q: usize) -> Result<f64> {
    let g = impulse_response(sys, p + 2 * q - 2)?;
    let block = hankel_block(&g, p, q)?;
    let n = sys.dim();
    let mut ctrl = Vec::with_capacity(q);
    let mut v = sys.b.clone();
    for _ in 0..q {
        ctrl.push(v.clone());
        v = sys.a.mul_vec(&v)?;
    }
    let mut obs = Vec::with_capacity(q);
    let mut w = sys.c.clone();
    let at = sys.a.transpose();
    for _ in 0..q {
        obs.push(w.clone());
        w = at.mul_vec(&w)?;
    }
    let c_mat = Matrix::from_columns(&ctrl)?;
    let o_mat = Matrix::from_columns(&obs)?.transpose();
    let mut power = Matrix::identity(n);
    for _ in 1..p {
        power = &power * &sys.a;
    }
    let product = &(&o_mat * &power) * &c_mat;
    Ok(block.max_abs_diff(&product))
}

/// `g^(k)(j) = det H_g(j, k)` for `j = 1..=up_to_j`.
pub fn hankel_compound_ir(g: &ImpulseResponse, k: usize, up_to_j: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidArgument("k starts at 1".into()));
    }
    let last = up_to_j + 2 * k - 2;
    if last > g.len() {
        return Err(horizon_error(last, g.len()));
    }
    (1..=up_to_j)
        .map(|j| Ok(small_det(&hankel_block(g, j, k)?)))
        .collect()
}

fn scan_orders(g: &ImpulseResponse, k: usize) -> Result<(bool, Vec<serde_json::Value>, f64)> {
    let mut pass = true;
    let mut per_order = Vec::new();
    let mut margin = f64::INFINITY;
    for order in 1..=k {
        let count = g.len() + 2 - 2 * order;
        let seq = hankel_compound_ir(g, order, count)?;
        let (argmin, min) = seq
            .iter()
            .copied()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
        let ok = min >= -HANKEL_TOL;
        pass &= ok;
        margin = margin.min(min);
        per_order.push(serde_json::json!({
            "order": order,
            "samples": count,
            "min": min,
            "argmin_j": argmin + 1,
            "pass": ok,
        }));
    }
    Ok((pass, per_order, margin))
}

fn check_order_fits(k: usize, len: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::InvalidArgument("k starts at 1".into()));
    }
    if 2 * k - 1 > len {
        return Err(Error::InvalidArgument(format!(
            "horizon {len} is too short for order {k} (needs at least {})",
            2 * k - 1
        )));
    }
    Ok(())
}

/// Hankel k-positivity on the truncated horizon: `g^(i)(j) ≥ −τ` for every
/// order `i ≤ k` and every `j` the horizon allows. The geometric tail bound is
/// reported alongside.
pub fn hankel_k_positive_verdict(sys: &HankelSystem, k: usize, horizon: usize) -> Result<Verdict> {
    sys.validate()?;
    let rho = sys.spectral_radius()?;
    if rho >= 1.0 {
        return Err(Error::Precondition(format!(
            "spectral radius {rho} ≥ 1: impulse response is not summable"
        )));
    }
    check_order_fits(k, horizon)?;
    let g = impulse_response(sys, horizon)?;
    let (pass, orders, margin) = scan_orders(&g, k)?;
    let mut v = Verdict::new(format!("hankel_{k}_positive"), pass, HANKEL_TOL)
        .with_margin(margin)
        .with_detail("horizon", horizon)
        .with_detail("spectral_radius", rho)
        .with_detail("tail_bound", sys.tail_bound(horizon)?)
        .with_detail("orders", orders)
        .with_note("truncated-horizon certificate: rigorous only modulo the reported tail bound");
    if k > sys.dim() {
        v = v.with_note("orders above the state dimension are checked numerically only");
    }
    Ok(v)
}

/// Same scan on an explicit impulse response (no realization, no tail bound).
pub fn hankel_k_positive_ir(g: &ImpulseResponse, k: usize) -> Result<Verdict> {
    check_order_fits(k, g.len())?;
    let (pass, orders, margin) = scan_orders(g, k)?;
    Ok(Verdict::new(format!("hankel_{k}_positive"), pass, HANKEL_TOL)
        .with_margin(margin)
        .with_detail("horizon", g.len())
        .with_detail("orders", orders)
        .with_note("finite impulse-response sequence; behaviour beyond the last sample is not covered"))
}

/// `y(j) = Σ_{τ=1}^{T} g(j + τ) u(−τ)` for `j = 0..=j_max`, with `u[τ−1] = u(−τ)`.
pub fn hankel_operator_apply(g: &ImpulseResponse, u: &[f64], j_max: usize) -> Result<Vec<f64>> {
    let t = u.len();
    if j_max + t > g.len() {
        return Err(horizon_error(j_max + t, g.len()));
    }
    Ok((0..=j_max)
        .map(|j| (1..=t).map(|tau| g.g(j + tau) * u[tau - 1]).sum())
        .collect())
}

/// Checks `s⁻(y) ≤ s⁻(u)` and, on equality, matching first nonzero signs.
/// Output entries below `1e−10 · Σ_τ |g(j+τ) u(−τ)|` (rounding level) count as zero.
pub fn operator_svdp_check(g: &ImpulseResponse, u: &[f64], j_max: usize) -> Result<Verdict> {
    let y = hankel_operator_apply(g, u, j_max)?;
    let rel = 1e-10;
    let noise: Vec<f64> = (0..=j_max)
        .map(|j| rel * (1..=u.len()).map(|tau| (g.g(j + tau) * u[tau - 1]).abs()).sum::<f64>())
        .collect();
    let cleaned: Vec<f64> = y
        .iter()
        .zip(&noise)
        .map(|(&v, &n)| if v.abs() <= n { 0.0 } else { v })
        .collect();
    let su = s_minus_tol(u, 0.0);
    let sy = s_minus_tol(&cleaned, 0.0);
    let first = |v: &[f64]| v.iter().find(|&&x| x != 0.0).map_or(0.0, |x| x.signum());
    let mut pass = sy <= su;
    if sy == su && cleaned.iter().any(|&v| v != 0.0) {
        pass &= first(u) == first(&cleaned);
    }
    Ok(Verdict::new("hankel_operator_svdp", pass, rel)
        .with_detail("s_minus_u", su)
        .with_detail("s_minus_y", sy)
        .with_detail("y", &y))
}

/// `j`-th order forward difference; `Δs(k) = s(k+1) − s(k)`.
pub fn difference(seq: &[f64], order: usize) -> Result<Vec<f64>> {
    if seq.len() <= order {
        return Err(Error::InvalidArgument(format!(
            "difference of order {order} needs more than {order} samples"
        )));
    }
    let mut out = seq.to_vec();
    for _ in 0..order {
        out = out.windows(2).map(|w| w[1] - w[0]).collect();
    }
    Ok(out)
}
