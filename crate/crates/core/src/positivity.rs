//! Metzler and irreducibility tests, sign patterns under which `A^[k]` is
//! Metzler, k-positivity of linear systems, Jacobi matrices and the cones
//! `P^k_−`, `P^k_+`.

use std::fmt;

use serde::Serialize;

use crate::compound::add_compound;
use crate::dynamics::SystemDef;
use crate::error::{Error, Result};
use crate::index_sets::IndexSet;
use crate::matrix::Matrix;
use crate::measures::SampleGrid;
use crate::sign_tools::{s_minus, s_plus};
use crate::tolerance::PATTERN_TOL;
use crate::verdict::Verdict;

fn require_square(a: &Matrix) -> Result<usize> {
    if !a.is_square() || a.rows() == 0 {
        return Err(Error::Dimension(format!(
            "expected a non-empty square matrix, got {:?}",
            a.shape()
        )));
    }
    Ok(a.rows())
}

/// First off-diagonal entry below `−τ`, as 0-based `(i, j, value)`.
fn metzler_violation(a: &Matrix) -> Option<(usize, usize, f64)> {
    let n = a.rows();
    let mut worst: Option<(usize, usize, f64)> = None;
    for i in 0..n {
        for j in (0..n).filter(|&j| j != i) {
            let v = a[(i, j)];
            if v < -PATTERN_TOL && worst.is_none_or(|w| v < w.2) {
                worst = Some((i, j, v));
            }
        }
    }
    worst
}

/// Off-diagonal entries `≥ −1e−12`. Margin is the smallest off-diagonal entry.
pub fn is_metzler(a: &Matrix) -> Result<Verdict> {
    let n = require_square(a)?;
    let min_off = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .map(|(i, j)| a[(i, j)])
        .fold(f64::INFINITY, f64::min);
    let mut v = Verdict::new("metzler", metzler_violation(a).is_none(), PATTERN_TOL);
    if n > 1 {
        v = v.with_margin(min_off);
    }
    if let Some((i, j, x)) = metzler_violation(a) {
        v = v.with_detail("most_negative_entry", (i + 1, j + 1, x));
    }
    Ok(v)
}

/// Strong connectivity of the graph with an edge `i → j` whenever `|a_ij| > τ`, `i ≠ j`.
pub fn is_irreducible(a: &Matrix) -> Result<Verdict> {
    let n = require_square(a)?;
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        for (j, r) in row.iter_mut().enumerate() {
            *r = i == j || a[(i, j)].abs() > PATTERN_TOL;
        }
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                for j in 0..n {
                    if reach[k][j] {
                        reach[i][j] = true;
                    }
                }
            }
        }
    }
    let missing = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !reach[i][j]);
    let mut v = Verdict::new("irreducible", missing.is_none(), PATTERN_TOL);
    if let Some((i, j)) = missing {
        v = v.with_detail("unreachable_pair", (i + 1, j + 1));
    }
    Ok(v)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Constraint {
    Free,
    NonNeg,
    NonPos,
    Zero,
}

impl Constraint {
    fn holds(self, x: f64) -> bool {
        match self {
            Constraint::Free => true,
            Constraint::NonNeg => x >= -PATTERN_TOL,
            Constraint::NonPos => x <= PATTERN_TOL,
            Constraint::Zero => x.abs() <= PATTERN_TOL,
        }
    }

    fn symbol(self) -> char {
        match self {
            Constraint::Free => '*',
            Constraint::NonNeg => '+',
            Constraint::NonPos => '-',
            Constraint::Zero => '0',
        }
    }
}

/// Entry-wise sign constraints on `A` equivalent to `A^[k]` being Metzler.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignPattern {
    pub n: usize,
    pub k: usize,
    pub grid: Vec<Vec<Constraint>>,
}

impl SignPattern {
    pub fn at(&self, i: usize, j: usize) -> Constraint {
        self.grid[i][j]
    }

    /// First violated entry as 0-based `(i, j)`, if any.
    pub fn violation(&self, a: &Matrix) -> Result<Option<(usize, usize)>> {
        if a.shape() != (self.n, self.n) {
            return Err(Error::Dimension(format!(
                "pattern is {n}x{n}, matrix is {:?}",
                a.shape(),
                n = self.n
            )));
        }
        Ok((0..self.n)
            .flat_map(|i| (0..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| !self.grid[i][j].holds(a[(i, j)])))
    }

    pub fn matches(&self, a: &Matrix) -> Result<bool> {
        Ok(self.violation(a)?.is_none())
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.grid {
            let line: Vec<String> = row.iter().map(|c| c.symbol().to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

/// The sign pattern for `A^[k]` Metzler, `n ≥ 3`, `1 < k ≤ n − 1`:
///
/// * `k = n − 1`: `a_ij ≥ 0` when `i − j` is odd, `a_ij ≤ 0` when `i ≠ j` and `i − j` is even;
/// * `k` odd: neighbours `|i − j| = 1` and corners `a_1n, a_n1` non-negative, other off-band zero;
/// * `k` even: as for odd `k` but with non-positive corners.
pub fn metzler_compound_pattern(n: usize, k: usize) -> Result<SignPattern> {
    if n < 3 {
        return Err(Error::Dimension(format!("sign patterns need n ≥ 3, got {n}")));
    }
    if k <= 1 || k >= n {
        return Err(Error::Dimension(format!(
            "k = {k} outside 2..={}; use is_metzler for k = 1",
            n - 1
        )));
    }
    let grid = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        return Constraint::Free;
                    }
                    let d = i.abs_diff(j);
                    if k == n - 1 {
                        if d % 2 == 1 {
                            Constraint::NonNeg
                        } else {
                            Constraint::NonPos
                        }
                    } else if d == 1 {
                        Constraint::NonNeg
                    } else if d == n - 1 {
                        if k % 2 == 1 {
                            Constraint::NonNeg
                        } else {
                            Constraint::NonPos
                        }
                    } else {
                        Constraint::Zero
                    }
                })
                .collect()
        })
        .collect();
    Ok(SignPattern { n, k, grid })
}

/// `A^[k](t)` Metzler at every sampled time; in strong mode also irreducible,
/// except on at most `allowed_reducible_fraction` of the samples.
pub fn k_positive_verdict_with(
    sys: &SystemDef,
    k: usize,
    strong: bool,
    grid: &SampleGrid,
    allowed_reducible_fraction: f64,
) -> Result<Verdict> {
    sys.validate()?;
    if !sys.is_linear() {
        return Err(Error::Precondition(
            "k-positivity verdicts need an LTI or LTV system".into(),
        ));
    }
    if grid.times.is_empty() {
        return Err(Error::InvalidArgument("sample grid has no times".into()));
    }
    let n = sys.dim();
    if k == 0 || k > n {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={n}")));
    }
    let mut metzler_fail: Option<(f64, usize, usize, f64)> = None;
    let mut min_off = f64::INFINITY;
    let mut reducible = Vec::new();
    let mut index: Option<Vec<IndexSet>> = None;
    for &t in &grid.times {
        let c = add_compound(&sys.matrix_at(t).expect("linear"), k)?;
        if index.is_none() {
            index = Some(c.row_index().to_vec());
        }
        let m = c.matrix();
        if let Some((i, j, v)) = metzler_violation(m) {
            if metzler_fail.is_none_or(|w| v < w.3) {
                metzler_fail = Some((t, i, j, v));
            }
        }
        for i in 0..m.rows() {
            for j in (0..m.cols()).filter(|&j| j != i) {
                min_off = min_off.min(m[(i, j)]);
            }
        }
        if strong && !is_irreducible(m)?.pass {
            reducible.push(t);
        }
    }
    let fraction = reducible.len() as f64 / grid.times.len() as f64;
    let strong_ok = !strong || fraction <= allowed_reducible_fraction;
    let pass = metzler_fail.is_none() && strong_ok;
    let name = if strong { "strongly_k_positive" } else { "k_positive" };
    let mut v = Verdict::new(format!("{name}_{k}"), pass, PATTERN_TOL)
        .with_detail("k", k)
        .with_detail("samples", grid.times.len());
    if min_off.is_finite() {
        v = v.with_margin(min_off);
    }
    if let (Some((t, i, j, x)), Some(idx)) = (metzler_fail, &index) {
        v = v
            .with_detail("violation_time", t)
            .with_detail("violation_row", idx[i].to_string())
            .with_detail("violation_col", idx[j].to_string())
            .with_detail("violation_value", x);
    }
    if strong {
        v = v
            .with_detail("reducible_times", &reducible)
            .with_detail("allowed_reducible_fraction", allowed_reducible_fraction);
    }
    if !sys.is_time_invariant() {
        v = v.with_note("checked at the sampled times only");
    }
    Ok(v)
}

pub fn k_positive_verdict(sys: &SystemDef, k: usize, strong: bool, grid: &SampleGrid) -> Result<Verdict> {
    k_positive_verdict_with(sys, k, strong, grid, 0.0)
}

/// Tridiagonal with strictly positive sub- and super-diagonal.
pub fn is_jacobi(a: &Matrix) -> Result<Verdict> {
    let n = require_square(a)?;
    let mut off_band = None;
    let mut min_neighbor = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let d = i.abs_diff(j);
            if d == 1 {
                min_neighbor = min_neighbor.min(a[(i, j)]);
            } else if d > 1 && a[(i, j)].abs() > PATTERN_TOL && off_band.is_none() {
                off_band = Some((i + 1, j + 1));
            }
        }
    }
    let pass = off_band.is_none() && (n == 1 || min_neighbor > 0.0);
    let mut v = Verdict::new("jacobi", pass, PATTERN_TOL);
    if n > 1 {
        v = v.with_margin(min_neighbor).with_detail("min_neighbor_entry", min_neighbor);
    }
    if let Some(p) = off_band {
        v = v.with_detail("nonzero_off_band", p);
    }
    Ok(v)
}

/// Membership in `P^k_− = {s⁻ ≤ k − 1}` (the verdict) and `P^k_+ = {s⁺ ≤ k − 1}`.
pub fn cone_membership(x: &[f64], k: usize) -> Verdict {
    let sm = s_minus(x);
    let sp = s_plus(x);
    let in_minus = sm < k;
    let in_plus = sp < k;
    Verdict::new(format!("cone_P{k}"), in_minus, 0.0)
        .with_detail("s_minus", sm)
        .with_detail("s_plus", sp)
        .with_detail("in_p_minus", in_minus)
        .with_detail("in_p_plus", in_plus)
}
