//! Multiplicative and additive compound matrices.
//!
//! The multiplicative compound `A^(k)` collects every `k`-minor of `A` with
//! rows and columns indexed by `Q(k, ·)` in lexicographic order. The additive
//! compound `A^[k]` is its derivative at the identity and is built directly
//! from the entries of `A`: diagonal entries are sums of `k` diagonal entries
//! of `A`, entries whose index sets differ in one position carry a signed entry
//! of `A`, and everything else is zero.

use crate::error::{Error, Result};
use crate::index_sets::{self, binomial, IndexSet};
use crate::matrix::Matrix;

#[derive(Clone, Debug)]
pub struct CompoundMatrix {
    base_rows: usize,
    base_cols: usize,
    order: usize,
    entries: Matrix,
    row_index: Vec<IndexSet>,
    col_index: Vec<IndexSet>,
}

impl CompoundMatrix {
    pub fn base_shape(&self) -> (usize, usize) {
        (self.base_rows, self.base_cols)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn matrix(&self) -> &Matrix {
        &self.entries
    }

    pub fn into_matrix(self) -> Matrix {
        self.entries
    }

    pub fn row_index(&self) -> &[IndexSet] {
        &self.row_index
    }

    pub fn col_index(&self) -> &[IndexSet] {
        &self.col_index
    }

    /// Entry addressed by index sets.
    pub fn get(&self, alpha: &IndexSet, beta: &IndexSet) -> Result<f64> {
        if alpha.k() != self.order
            || beta.k() != self.order
            || alpha.n() != self.base_rows
            || beta.n() != self.base_cols
        {
            return Err(Error::IndexOutOfRange(format!(
                "{alpha} / {beta} do not address a compound of order {}",
                self.order
            )));
        }
        Ok(self.entries[(alpha.rank(), beta.rank())])
    }
}

/// Determinant with closed forms for orders up to three and LU beyond.
pub fn small_det(m: &Matrix) -> f64 {
    debug_assert!(m.is_square());
    match m.rows() {
        0 => 1.0,
        1 => m[(0, 0)],
        2 => m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)],
        3 => {
            // Leibniz terms, each multiplied in sorted order so that det(Mᵀ) == det(M) bit for bit
            let t = |x: f64, y: f64, z: f64| {
                let mut v = [x, y, z];
                v.sort_by(f64::total_cmp);
                v[0] * v[1] * v[2]
            };
            let e = |i: usize, j: usize| m[(i, j)];
            let pos = t(e(0, 0), e(1, 1), e(2, 2))
                + (t(e(0, 1), e(1, 2), e(2, 0)) + t(e(0, 2), e(1, 0), e(2, 1)));
            let neg = t(e(0, 2), e(1, 1), e(2, 0))
                + (t(e(0, 0), e(1, 2), e(2, 1)) + t(e(0, 1), e(1, 0), e(2, 2)));
            pos - neg
        }
        _ => m.det().expect("square by construction"),
    }
}

/// The minor `A(α|β)`.
pub fn minor(a: &Matrix, alpha: &IndexSet, beta: &IndexSet) -> Result<f64> {
    if alpha.k() != beta.k() {
        return Err(Error::Dimension(format!(
            "row set {alpha} and column set {beta} differ in size"
        )));
    }
    if alpha.n() > a.rows() || beta.n() > a.cols() {
        return Err(Error::IndexOutOfRange(format!(
            "{alpha} x {beta} against a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    Ok(minor_unchecked(a, &alpha.zero_based(), &beta.zero_based()))
}

pub(crate) fn minor_unchecked(a: &Matrix, rows: &[usize], cols: &[usize]) -> f64 {
    small_det(&a.submatrix(rows, cols))
}

/// `A^(k)`: all `k`-minors in lexicographic row/column order.
pub fn mult_compound(a: &Matrix, k: usize) -> Result<CompoundMatrix> {
    let (n, m) = a.shape();
    if k < 1 || k > n.min(m) {
        return Err(Error::Dimension(format!(
            "compound order {k} invalid for a {n}x{m} matrix"
        )));
    }
    index_sets::check_guardrail(binomial(n, k) * binomial(m, k))?;
    let row_index = index_sets::enumerate(k, n)?;
    let col_index = index_sets::enumerate(k, m)?;
    let col_zero: Vec<Vec<usize>> = col_index.iter().map(IndexSet::zero_based).collect();
    let mut entries = Matrix::zeros(row_index.len(), col_index.len());
    for (r, alpha) in row_index.iter().enumerate() {
        let rows = alpha.zero_based();
        for (c, cols) in col_zero.iter().enumerate() {
            entries[(r, c)] = minor_unchecked(a, &rows, cols);
        }
    }
    Ok(CompoundMatrix {
        base_rows: n,
        base_cols: m,
        order: k,
        entries,
        row_index,
        col_index,
    })
}

/// `A^[k]` from the explicit entry formula.
pub fn add_compound(a: &Matrix, k: usize) -> Result<CompoundMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "additive compound of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    if k < 1 || k > n {
        return Err(Error::Dimension(format!(
            "compound order {k} invalid for n = {n}"
        )));
    }
    index_sets::check_guardrail(binomial(n, k) * binomial(n, k))?;
    let index = index_sets::enumerate(k, n)?;
    let r = index.len();
    let mut entries = Matrix::zeros(r, r);
    for (row, alpha) in index.iter().enumerate() {
        let elems = alpha.elements();
        entries[(row, row)] = elems.iter().map(|&i| a[(i - 1, i - 1)]).sum();
        // Replace the element in position l by j ∉ α; j lands in position m of β.
        for (l, &i) in elems.iter().enumerate() {
            for j in 1..=n {
                if alpha.contains(j) {
                    continue;
                }
                let mut beta: Vec<usize> = elems.iter().copied().filter(|&e| e != i).collect();
                let m = beta.partition_point(|&e| e < j);
                beta.insert(m, j);
                let beta = IndexSet::new(beta, n)?;
                let sign = if (l + m) % 2 == 0 { 1.0 } else { -1.0 };
                entries[(row, beta.rank())] = sign * a[(i - 1, j - 1)];
            }
        }
    }
    Ok(CompoundMatrix {
        base_rows: n,
        base_cols: n,
        order: k,
        entries,
        row_index: index.clone(),
        col_index: index,
    })
}

/// Forward-difference approximation `((I + εA)^(k) − I)/ε` of the additive compound.
///
/// Only meant as an independent check of [`add_compound`].
pub fn add_compound_via_derivative(a: &Matrix, k: usize, eps: f64) -> Result<CompoundMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("additive compound of a non-square matrix".into()));
    }
    if !(eps > 0.0 && eps <= 1e-3) {
        return Err(Error::InvalidArgument(format!("ε = {eps} outside (0, 1e-3]")));
    }
    let n = a.rows();
    let mut shifted = a.scale(eps);
    for i in 0..n {
        shifted[(i, i)] += 1.0;
    }
    let mut c = mult_compound(&shifted, k)?;
    let r = c.entries.rows();
    for i in 0..r {
        c.entries[(i, i)] -= 1.0;
    }
    c.entries = c.entries.scale(1.0 / eps);
    Ok(c)
}

/// `det(YᵀX)` computed as the inner product of the compound vectors `Y^(k)` and `X^(k)`.
pub fn gram_det(x: &Matrix, y: &Matrix) -> Result<f64> {
    if x.shape() != y.shape() {
        return Err(Error::Dimension(format!(
            "shape mismatch {:?} vs {:?}",
            x.shape(),
            y.shape()
        )));
    }
    let (n, k) = x.shape();
    if k > n || k == 0 {
        return Err(Error::Dimension(format!("need 1 <= k <= n, got {n}x{k}")));
    }
    let xc = mult_compound(x, k)?;
    let yc = mult_compound(y, k)?;
    Ok(xc
        .matrix()
        .data()
        .iter()
        .zip(yc.matrix().data())
        .map(|(a, b)| a * b)
        .sum())
}

/// `det(AB)` for `A: n×m`, `B: m×n` through the minor expansion over `α ∈ Q(n, m)`.
pub fn det_product_rectangular(a: &Matrix, b: &Matrix) -> Result<f64> {
    let (n, m) = a.shape();
    if b.shape() != (m, n) {
        return Err(Error::Dimension(format!(
            "expected B of shape {m}x{n}, got {:?}",
            b.shape()
        )));
    }
    if n > m {
        return Ok(0.0);
    }
    if n == 0 {
        return Ok(1.0);
    }
    let all: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    for alpha in index_sets::enumerate(n, m)? {
        let idx = alpha.zero_based();
        total += minor_unchecked(a, &all, &idx) * minor_unchecked(b, &idx, &all);
    }
    Ok(total)
}
