//! Sign variations, variation-diminishing checks and sign-regularity
//! classification of matrices.

use rand::Rng;
use serde::Serialize;

use crate::compound::{minor_unchecked, mult_compound};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::tolerance::MINOR_TOL;
use crate::verdict::Verdict;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SignStats {
    pub s_minus: usize,
    pub s_plus: usize,
    pub first_nonzero_sign: i8,
    pub last_nonzero_sign: i8,
}

fn sign_of(x: f64, tau: f64) -> i8 {
    if x > tau {
        1
    } else if x < -tau {
        -1
    } else {
        0
    }
}

/// Sign changes after deleting entries with `|x_i| ≤ tau`.
pub fn s_minus_tol(x: &[f64], tau: f64) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for &v in x {
        let s = sign_of(v, tau);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

pub fn s_minus(x: &[f64]) -> usize {
    s_minus_tol(x, 0.0)
}

/// Maximal sign changes over all ±1 assignments of the (near-)zero entries.
/// `first` optionally pins the sign used for the first entry.
fn s_plus_impl(x: &[f64], tau: f64, first: Option<i8>) -> Option<usize> {
    // best[0]: last sign −, best[1]: last sign +
    let mut best: [Option<usize>; 2] = [None, None];
    for (i, &v) in x.iter().enumerate() {
        let s = sign_of(v, tau);
        let allowed: &[i8] = match (s, i, first) {
            (0, 0, Some(f)) => {
                if f == 0 {
                    &[-1, 1]
                } else if f > 0 {
                    &[1]
                } else {
                    &[-1]
                }
            }
            (0, _, _) => &[-1, 1],
            (1, 0, Some(-1)) | (-1, 0, Some(1)) => return None,
            (1, _, _) => &[1],
            _ => &[-1],
        };
        let mut next: [Option<usize>; 2] = [None, None];
        for &sig in allowed {
            let slot = usize::from(sig > 0);
            let candidate = if i == 0 {
                Some(0)
            } else {
                let stay = best[slot];
                let flip = best[1 - slot].map(|c| c + 1);
                stay.max(flip)
            };
            next[slot] = next[slot].max(candidate);
        }
        best = next;
    }
    if x.is_empty() {
        return Some(0);
    }
    best[0].max(best[1])
}

pub fn s_plus_tol(x: &[f64], tau: f64) -> usize {
    s_plus_impl(x, tau, None).unwrap_or(0)
}

pub fn s_plus(x: &[f64]) -> usize {
    s_plus_tol(x, 0.0)
}

pub fn sign_stats(x: &[f64], tau: f64) -> SignStats {
    let mut signs = x.iter().map(|&v| sign_of(v, tau)).filter(|&s| s != 0);
    SignStats {
        s_minus: s_minus_tol(x, tau),
        s_plus: s_plus_tol(x, tau),
        first_nonzero_sign: signs.clone().next().unwrap_or(0),
        last_nonzero_sign: signs.next_back().unwrap_or(0),
    }
}

/// Checks `s⁻(x) + s⁺(D± x) = n − 1` with `D± = diag(1, −1, 1, …)`.
pub fn duality_check(x: &[f64]) -> Verdict {
    let n = x.len();
    let alternated: Vec<f64> = x
        .iter()
        .enumerate()
        .map(|(i, &v)| if i % 2 == 0 { v } else { -v })
        .collect();
    let sm = s_minus(x);
    let sp = s_plus(&alternated);
    let rhs = n.saturating_sub(1);
    Verdict::new("sign_duality", sm + sp == rhs, 0.0)
        .with_detail("s_minus", sm)
        .with_detail("s_plus_alternated", sp)
        .with_detail("n_minus_1", rhs)
}

/// Sign-regularity status of the minors of one order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "signature")]
pub enum OrderClass {
    /// All minors strictly of sign `ε`.
    Ssr(i8),
    /// All minors weakly of sign `ε`; `Sr(0)` means all minors vanish.
    Sr(i8),
    None,
}

impl OrderClass {
    pub fn is_sr(self) -> bool {
        !matches!(self, OrderClass::None)
    }

    pub fn is_ssr(self) -> bool {
        matches!(self, OrderClass::Ssr(_))
    }

    pub fn signature(self) -> Option<i8> {
        match self {
            OrderClass::Ssr(e) | OrderClass::Sr(e) => Some(e),
            OrderClass::None => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SignRegularity {
    /// `orders[k-1]` describes the `k`-minors.
    pub orders: Vec<OrderClass>,
    /// Largest `r` with every minor of order `≤ r` positive (0 if none).
    pub max_tp_order: usize,
    /// Largest `r` with every minor of order `≤ r` non-negative.
    pub max_tn_order: usize,
    pub tolerance: f64,
}

impl SignRegularity {
    pub fn order(&self, k: usize) -> OrderClass {
        self.orders[k - 1]
    }
}

fn classify_values(values: &[f64], tau: f64) -> OrderClass {
    let pos = values.iter().filter(|&&v| v > tau).count();
    let neg = values.iter().filter(|&&v| v < -tau).count();
    let n = values.len();
    match (pos, neg) {
        (p, 0) if p == n => OrderClass::Ssr(1),
        (0, m) if m == n => OrderClass::Ssr(-1),
        (0, 0) => OrderClass::Sr(0),
        (_, 0) => OrderClass::Sr(1),
        (0, _) => OrderClass::Sr(-1),
        _ => OrderClass::None,
    }
}

/// Scans every minor of order `1..=max_k` with threshold `τ_m = 1e−10`.
pub fn classify_sign_regularity(a: &Matrix, max_k: usize) -> Result<SignRegularity> {
    let limit = a.rows().min(a.cols());
    if max_k == 0 || max_k > limit {
        return Err(Error::Dimension(format!(
            "max_k = {max_k} must lie in 1..={limit}"
        )));
    }
    let tau = MINOR_TOL;
    let mut orders = Vec::with_capacity(max_k);
    let mut tp_run = true;
    let mut tn_run = true;
    let mut max_tp = 0;
    let mut max_tn = 0;
    for k in 1..=max_k {
        let c = mult_compound(a, k)?;
        let class = classify_values(c.matrix().data(), tau);
        tp_run &= class == OrderClass::Ssr(1);
        tn_run &= matches!(class, OrderClass::Ssr(1) | OrderClass::Sr(1) | OrderClass::Sr(0));
        if tp_run {
            max_tp = k;
        }
        if tn_run {
            max_tn = k;
        }
        orders.push(class);
    }
    Ok(SignRegularity {
        orders,
        max_tp_order: max_tp,
        max_tn_order: max_tn,
        tolerance: tau,
    })
}

fn contiguous(start: usize, len: usize) -> Vec<usize> {
    (start..start + len).collect()
}

/// TP_k test from initial minors of order `< k` and contiguous minors of order `k`.
///
/// A minor is initial when it is contiguous and its row or column set starts at 1.
pub fn tp_recognize_fast(a: &Matrix, k: usize) -> Result<Verdict> {
    let (m, n) = a.shape();
    if k == 0 || k > m.min(n) {
        return Err(Error::Dimension(format!("k = {k} must lie in 1..={}", m.min(n))));
    }
    let tau = MINOR_TOL;
    let mut checked = 0usize;
    let mut worst = f64::INFINITY;
    let mut witness: Option<(Vec<usize>, Vec<usize>)> = None;
    let mut visit = |rows: Vec<usize>, cols: Vec<usize>| {
        let v = minor_unchecked(a, &rows, &cols);
        checked += 1;
        if v < worst {
            worst = v;
            witness = Some((rows, cols));
        }
    };
    for j in 1..k {
        for start in 0..=n - j {
            visit(contiguous(0, j), contiguous(start, j));
        }
        for start in 1..=m - j {
            visit(contiguous(start, j), contiguous(0, j));
        }
    }
    for r in 0..=m - k {
        for c in 0..=n - k {
            visit(contiguous(r, k), contiguous(c, k));
        }
    }
    let (rows, cols) = witness.expect("at least one minor");
    let one_based = |v: Vec<usize>| v.into_iter().map(|i| i + 1).collect::<Vec<_>>();
    Ok(Verdict::new(format!("tp_{k}_fast"), worst > tau, tau)
        .with_margin(worst)
        .with_detail("minors_checked", checked)
        .with_detail("smallest_minor", worst)
        .with_detail("smallest_rows", one_based(rows))
        .with_detail("smallest_cols", one_based(cols)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", content = "k")]
pub enum SvdpMode {
    /// `s⁻(x) ≤ k−1 ⇒ s⁻(Ax) ≤ k−1`.
    SrK(usize),
    /// `s⁻(x) ≤ k−1 ⇒ s⁺(Ax) ≤ k−1`.
    SsrK(usize),
    /// `s⁺(Ax) ≤ s⁻(x)`, with matching orientation when equal.
    Tp,
}

/// Evaluates the variation-diminishing implication for one input `x`.
pub fn svdp_check(a: &Matrix, x: &[f64], mode: SvdpMode) -> Result<Verdict> {
    svdp_check_tol(a, x, mode, 0.0)
}

/// As [`svdp_check`], treating entries of `x` and `Ax` with `|v| ≤ tau` as zeros.
pub fn svdp_check_tol(a: &Matrix, x: &[f64], mode: SvdpMode, tau: f64) -> Result<Verdict> {
    if !(tau >= 0.0) {
        return Err(Error::InvalidArgument(format!("zero tolerance must be ≥ 0, got {tau}")));
    }
    if x.len() != a.cols() {
        return Err(Error::Dimension(format!(
            "vector of length {} for a matrix with {} columns",
            x.len(),
            a.cols()
        )));
    }
    if x.iter().all(|&v| v.abs() <= tau) {
        return Err(Error::InvalidArgument("x must be nonzero".into()));
    }
    let y = a.mul_vec(x)?;
    let sx = s_minus_tol(x, tau);
    match mode {
        SvdpMode::SrK(k) | SvdpMode::SsrK(k) => {
            if !a.is_square() {
                return Err(Error::Dimension("SR_k / SSR_k modes need a square matrix".into()));
            }
            if a.lu()?.is_singular() {
                return Err(Error::Singular);
            }
            let strict = matches!(mode, SvdpMode::SsrK(_));
            let sy = if strict { s_plus_tol(&y, tau) } else { s_minus_tol(&y, tau) };
            let premise = sx < k;
            let pass = !premise || sy < k;
            let name = if strict { "svdp_ssr" } else { "svdp_sr" };
            let mut v = Verdict::new(format!("{name}_{k}"), pass, tau)
                .with_detail("s_minus_x", sx)
                .with_detail("variations_ax", sy)
                .with_detail("ax", &y);
            if !premise {
                v = v.with_note("premise s⁻(x) ≤ k−1 not met; implication holds vacuously");
            }
            Ok(v)
        }
        SvdpMode::Tp => {
            let sy = s_plus_tol(&y, tau);
            let first = sign_stats(x, tau).first_nonzero_sign;
            let mut pass = sy <= sx;
            let mut oriented = None;
            if sy == sx {
                // some maximizing assignment must start with the sign of x
                let ok = s_plus_impl(&y, tau, Some(first)) == Some(sy);
                oriented = Some(ok);
                pass &= ok;
            }
            let mut v = Verdict::new("svdp_tp", pass, tau)
                .with_detail("s_minus_x", sx)
                .with_detail("s_plus_ax", sy)
                .with_detail("ax", &y);
            if let Some(ok) = oriented {
                v = v.with_detail("orientation_agrees", ok);
            }
            Ok(v)
        }
    }
}

/// Random TP matrix: product of `n − 1` lower bidiagonals, a positive diagonal
/// and `n − 1` upper bidiagonals, all entries drawn from `[lo, hi]`.
pub fn random_tp_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Matrix {
    let (lo, hi) = (0.5, 2.0);
    let mut acc = Matrix::identity(n);
    for _ in 1..n {
        let l = Matrix::from_fn(n, n, |i, j| {
            if i == j || i == j + 1 {
                rng.gen_range(lo..hi)
            } else {
                0.0
            }
        });
        acc = &acc * &l;
    }
    let d = Matrix::diag(&(0..n).map(|_| rng.gen_range(lo..hi)).collect::<Vec<_>>());
    acc = &acc * &d;
    for _ in 1..n {
        let u = Matrix::from_fn(n, n, |i, j| {
            if i == j || j == i + 1 {
                rng.gen_range(lo..hi)
            } else {
                0.0
            }
        });
        acc = &acc * &u;
    }
    acc
}

/// Random vector with entries in `{−1, 0, +1}·U(0.1, 1)`, never all zero.
pub fn random_sign_vector<R: Rng + ?Sized>(n: usize, zero_prob: f64, rng: &mut R) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..n)
            .map(|_| {
                if rng.gen_bool(zero_prob) {
                    0.0
                } else {
                    let m = rng.gen_range(0.1..1.0);
                    if rng.gen_bool(0.5) {
                        m
                    } else {
                        -m
                    }
                }
            })
            .collect();
        if x.iter().any(|&v| v != 0.0) {
            return x;
        }
    }
}

/// Random vector with at most `max_changes` sign variations (zeros allowed).
pub fn random_vector_in_cone<R: Rng + ?Sized>(
    n: usize,
    max_changes: usize,
    rng: &mut R,
) -> Vec<f64> {
    loop {
        let x = random_sign_vector(n, 0.2, rng);
        if s_minus(&x) <= max_changes {
            return x;
        }
        // flip trailing signs to remove excess changes
        let mut y = x.clone();
        let mut sign = 0.0;
        let mut changes = 0;
        for v in y.iter_mut() {
            if *v == 0.0 {
                continue;
            }
            if sign != 0.0 && v.signum() != sign {
                if changes == max_changes {
                    *v = -*v;
                } else {
                    changes += 1;
                }
            }
            sign = v.signum();
        }
        if s_minus(&y) <= max_changes {
            return y;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn brute_s_plus(x: &[f64]) -> usize {
        let zeros: Vec<usize> = (0..x.len()).filter(|&i| x[i] == 0.0).collect();
        let mut best = 0;
        for mask in 0..(1u32 << zeros.len()) {
            let mut y = x.to_vec();
            for (b, &i) in zeros.iter().enumerate() {
                y[i] = if mask >> b & 1 == 1 { 1.0 } else { -1.0 };
            }
            best = best.max(s_minus(&y));
        }
        best
    }

    #[test]
    fn worked_counts() {
        let x = [-1.0, 0.0, 0.0, 2.0, -3.0];
        assert_eq!(s_minus(&x), 2);
        assert_eq!(s_plus(&x), 4);
        assert_eq!(s_minus(&[0.0; 5]), 0);
        assert_eq!(s_plus(&[0.0; 5]), 4);
        assert_eq!(s_plus(&[]), 0);
        let st = sign_stats(&x, 0.0);
        assert_eq!((st.first_nonzero_sign, st.last_nonzero_sign), (-1, -1));
    }

    #[test]
    fn s_plus_matches_enumeration_exhaustively() {
        for n in 1..=6u32 {
            for code in 0..3u32.pow(n) {
                let mut c = code;
                let x: Vec<f64> = (0..n)
                    .map(|_| {
                        let d = c % 3;
                        c /= 3;
                        d as f64 - 1.0
                    })
                    .collect();
                assert_eq!(s_plus(&x), brute_s_plus(&x), "{x:?}");
                assert!(duality_check(&x).pass, "{x:?}");
            }
        }
    }

    #[test]
    fn duality_examples() {
        let v = duality_check(&[-1.0, 0.0, 0.0, 2.0, -3.0]);
        assert!(v.pass);
        assert_eq!(v.detail_f64("s_plus_alternated"), Some(2.0));
        assert!(duality_check(&[1.0, 1.0, 1.0]).pass);
    }

    #[test]
    fn classification_examples() {
        let a = Matrix::from_rows(&[[1.0, 2.0], [3.0, 4.0]]);
        let c = classify_sign_regularity(&a, 2).unwrap();
        assert_eq!(c.orders, vec![OrderClass::Ssr(1), OrderClass::Ssr(-1)]);
        assert_eq!(c.max_tp_order, 1);
        let tp = Matrix::from_rows(&[[2.0, 1.0, 1.0], [1.0, 3.0, 4.0]]);
        assert_eq!(classify_sign_regularity(&tp, 2).unwrap().max_tp_order, 2);
        let apb = Matrix::from_rows(&[[2.0, 1.0, 1.0], [1.0, 2.0, 1.0], [1.0, 1.0, 2.0]]);
        let c = classify_sign_regularity(&apb, 3).unwrap();
        assert_eq!(c.max_tn_order, 1);
        assert_eq!(c.order(2), OrderClass::None);
    }

    #[test]
    fn fast_recognition_examples() {
        let a = Matrix::from_rows(&[[3.0, 1.0, 2.0], [2.0, 1.0, 3.0], [1.0, 3.0, 10.0]]);
        let v = tp_recognize_fast(&a, 2).unwrap();
        assert!(v.pass);
        assert_eq!(v.margin, Some(1.0));
        assert!(!tp_recognize_fast(&Matrix::identity(3), 2).unwrap().pass);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let t = random_tp_matrix(5, &mut rng);
        assert!(tp_recognize_fast(&t, 3).unwrap().pass);
        assert_eq!(classify_sign_regularity(&t, 5).unwrap().max_tp_order, 5);
    }

    #[test]
    fn svdp_examples() {
        let a = Matrix::from_rows(&[[1.0, 0.5], [2.0, 3.0]]);
        for x in [[1.0, -1.0], [1.0, 0.0], [-2.0, 1.0], [0.0, 1.0]] {
            assert!(svdp_check(&a, &x, SvdpMode::Tp).unwrap().pass);
        }
        let sr2 = Matrix::from_rows(&[[3.0, 2.0, -1.0], [3.0, 5.0, -1.0], [3.0, 5.0, 0.0]]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let x = random_vector_in_cone(3, 1, &mut rng);
            assert!(svdp_check(&sr2, &x, SvdpMode::SrK(2)).unwrap().pass);
        }
        let x = [1.0, -2.0, 3.0];
        let v = svdp_check(&Matrix::identity(3), &x, SvdpMode::SrK(3)).unwrap();
        assert_eq!(v.detail_f64("variations_ax"), Some(2.0));
        let sing = Matrix::from_rows(&[[1.0, 1.0], [1.0, 1.0]]);
        assert!(matches!(svdp_check(&sing, &[1.0, 0.0], SvdpMode::SrK(1)), Err(Error::Singular)));
    }
}
