//! Eigenvalues, Kronecker algebra, fractional matrix powers and α-compounds.
//!
//! General (non-symmetric) matrices go through a complex Hessenberg reduction
//! followed by Wilkinson-shifted QR iterations to a complex Schur form; the
//! eigenvectors come from back substitution on the triangular factor. For
//! `n ≤ 8` a failed QR run falls back to the roots of the characteristic
//! polynomial. Real symmetric matrices use cyclic Jacobi rotations.

use num_complex::Complex64;

use crate::compound::{add_compound, mult_compound};
use crate::error::{Error, Result};
use crate::index_sets;
use crate::matrix::{ComplexMatrix, Matrix, Scalar};
use crate::tolerance::SPECTRUM_TOL;
use crate::verdict::Verdict;

const EPS: f64 = f64::EPSILON;

/// Largest matrix the eigen-solvers accept.
pub const MAX_EIG_DIM: usize = 64;

/// Eigenvector matrices with a larger 1-norm condition number are treated as defective.
pub const MAX_EIGVEC_CONDITION: f64 = 1e8;

/// Note attached to reports that contain fractional powers.
pub const BRANCH_NOTE: &str =
    "fractional powers use the principal branch λ^s = exp(s·Log λ) of the complex logarithm";

#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
    /// Unit-norm eigenvectors as columns, in the order of `eigenvalues`.
    pub eigenvectors: Option<ComplexMatrix>,
}

impl Spectrum {
    pub fn max_real(&self) -> f64 {
        self.eigenvalues
            .iter()
            .map(|z| z.re)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

fn check_eig_input<T: Scalar>(a: &crate::matrix::DenseMatrix<T>) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "eigenvalues of a non-square {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    if a.rows() > MAX_EIG_DIM {
        return Err(Error::Dimension(format!(
            "eigen-solver limited to n <= {MAX_EIG_DIM}, got {}",
            a.rows()
        )));
    }
    Ok(())
}

/// All eigenvalues and eigenvectors of a real matrix.
///
/// Symmetric input takes the Jacobi path: real eigenvalues sorted descending.
pub fn eig(a: &Matrix) -> Result<Spectrum> {
    check_eig_input(a)?;
    if a.is_symmetric(0.0) {
        let (values, vectors) = symmetric_eigen(a)?;
        return Ok(Spectrum {
            eigenvalues: values.into_iter().map(|v| Complex64::new(v, 0.0)).collect(),
            eigenvectors: Some(vectors.to_complex()),
        });
    }
    eig_complex(&a.to_complex())
}

/// Eigenvalues only.
pub fn eigenvalues(a: &Matrix) -> Result<Vec<Complex64>> {
    Ok(eig(a)?.eigenvalues)
}

pub fn eig_complex(a: &ComplexMatrix) -> Result<Spectrum> {
    check_eig_input(a)?;
    let n = a.rows();
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: vec![],
            eigenvectors: Some(ComplexMatrix::zeros(0, 0)),
        });
    }
    match complex_schur(a) {
        Ok((t, q)) => {
            let eigenvalues = t.diagonal();
            let y = triangular_eigenvectors(&t);
            let mut v = &q * &y;
            for j in 0..n {
                let norm = (0..n).map(|i| v[(i, j)].norm_sqr()).sum::<f64>().sqrt();
                if norm > 0.0 {
                    for i in 0..n {
                        v[(i, j)] /= norm;
                    }
                }
            }
            Ok(Spectrum {
                eigenvalues,
                eigenvectors: Some(v),
            })
        }
        Err(Error::NoConvergence(its)) if n <= 8 => {
            let coeffs = characteristic_polynomial(a);
            let roots = polynomial_roots(&coeffs).ok_or(Error::NoConvergence(its))?;
            Ok(Spectrum {
                eigenvalues: roots,
                eigenvectors: None,
            })
        }
        Err(e) => Err(e),
    }
}

/// Householder reduction to upper Hessenberg form, `A = Q H Q*`.
fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 {
            x[0] / x[0].norm()
        } else {
            Complex64::new(1.0, 0.0)
        };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H ← (I − 2vv*) H
        for j in 0..n {
            let mut dotv = Complex64::new(0.0, 0.0);
            for (t, vi) in v.iter().enumerate() {
                dotv += vi.conj() * h[(k + 1 + t, j)];
            }
            for (t, vi) in v.iter().enumerate() {
                h[(k + 1 + t, j)] -= 2.0 * vi * dotv;
            }
        }
        // H ← H (I − 2vv*), Q ← Q (I − 2vv*)
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let mut dotv = Complex64::new(0.0, 0.0);
                for (t, vi) in v.iter().enumerate() {
                    dotv += m[(i, k + 1 + t)] * vi;
                }
                for (t, vi) in v.iter().enumerate() {
                    m[(i, k + 1 + t)] -= 2.0 * dotv * vi.conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    (h, q)
}

/// Rotation `[[c, s], [−s̄, c]]` with real `c` mapping `(a, b)` to `(r, 0)`.
fn givens(a: Complex64, b: Complex64) -> (f64, Complex64) {
    let an = a.norm();
    let bn = b.norm();
    if bn == 0.0 {
        return (1.0, Complex64::new(0.0, 0.0));
    }
    if an == 0.0 {
        return (0.0, Complex64::new(1.0, 0.0));
    }
    let r = an.hypot(bn);
    (an / r, (a / an) * b.conj() / r)
}

/// Complex Schur form `A = Q T Q*` by shifted QR on the Hessenberg form.
pub fn complex_schur(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let n = a.rows();
    let (mut h, mut q) = hessenberg(a);
    if n <= 1 {
        return Ok((h, q));
    }
    let scale = h.norm_fro().max(f64::MIN_POSITIVE);
    let cap = 100 * n;
    let mut iterations = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut local = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if local == 0.0 {
                local = scale;
            }
            if sub <= EPS * local || sub <= f64::MIN_POSITIVE * 4.0 {
                h[(lo, lo - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        iterations += 1;
        since_deflation += 1;
        if iterations > cap {
            return Err(Error::NoConvergence(iterations - 1));
        }
        let shift = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].norm()
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        for i in lo..=hi {
            h[(i, i)] -= shift;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for j in lo..hi {
            let (c, s) = givens(h[(j, j)], h[(j + 1, j)]);
            for col in j..n {
                let x = h[(j, col)];
                let y = h[(j + 1, col)];
                h[(j, col)] = c * x + s * y;
                h[(j + 1, col)] = -s.conj() * x + c * y;
            }
            h[(j + 1, j)] = Complex64::new(0.0, 0.0);
            rotations.push((c, s));
        }
        for (offset, &(c, s)) in rotations.iter().enumerate() {
            let j = lo + offset;
            for row in 0..=(j + 1).min(n - 1) {
                let x = h[(row, j)];
                let y = h[(row, j + 1)];
                h[(row, j)] = x * c + y * s.conj();
                h[(row, j + 1)] = -x * s + y * c;
            }
            for row in 0..n {
                let x = q[(row, j)];
                let y = q[(row, j + 1)];
                q[(row, j)] = x * c + y * s.conj();
                q[(row, j + 1)] = -x * s + y * c;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += shift;
        }
    }
    for i in 0..n {
        for j in 0..i {
            h[(i, j)] = Complex64::new(0.0, 0.0);
        }
    }
    Ok((h, q))
}

fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half = (a - d) * 0.5;
    let disc = (half * half + b * c).sqrt();
    let mid = (a + d) * 0.5;
    let r1 = mid + disc;
    let r2 = mid - disc;
    if (r1 - d).norm() <= (r2 - d).norm() {
        r1
    } else {
        r2
    }
}

/// Eigenvectors of an upper-triangular matrix (unnormalized columns).
fn triangular_eigenvectors(t: &ComplexMatrix) -> ComplexMatrix {
    let n = t.rows();
    let smin = (EPS * t.norm_fro()).max(f64::MIN_POSITIVE);
    let mut y = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        y[(k, k)] = Complex64::new(1.0, 0.0);
        for i in (0..k).rev() {
            let mut acc = Complex64::new(0.0, 0.0);
            for j in i + 1..=k {
                acc += t[(i, j)] * y[(j, k)];
            }
            if acc.norm() == 0.0 {
                continue;
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = Complex64::new(smin, 0.0);
            }
            y[(i, k)] = -acc / denom;
        }
    }
    y
}

/// Monic characteristic polynomial coefficients `[1, c1, ..., cn]` (Faddeev–LeVerrier).
fn characteristic_polynomial(a: &ComplexMatrix) -> Vec<Complex64> {
    let n = a.rows();
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = a * &m;
        let c_prev = coeffs[k - 1];
        for i in 0..n {
            next[(i, i)] += c_prev;
        }
        m = next;
        let am = a * &m;
        coeffs.push(-am.trace() / k as f64);
    }
    coeffs
}

/// Roots of a monic polynomial by Durand–Kerner iteration.
fn polynomial_roots(coeffs: &[Complex64]) -> Option<Vec<Complex64>> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.norm()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..n).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..10_000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if i != j {
                    denom *= roots[i] - roots[j];
                }
            }
            if denom.norm() == 0.0 {
                denom = Complex64::new(EPS, 0.0);
            }
            let step = eval(roots[i]) / denom;
            roots[i] -= step;
            max_step = max_step.max(step.norm());
        }
        if max_step <= 1e-14 * radius {
            return Some(roots);
        }
    }
    None
}

/// Cyclic Jacobi eigen-decomposition of a real symmetric matrix.
///
/// Eigenvalues sorted descending; eigenvectors are the matching columns.
pub fn symmetric_eigen(a: &Matrix) -> Result<(Vec<f64>, Matrix)> {
    check_eig_input(a)?;
    if !a.is_symmetric(1e-12 * a.max_abs().max(1.0)) {
        return Err(Error::InvalidArgument("matrix is not symmetric".into()));
    }
    let n = a.rows();
    let mut m = a.symmetric_part();
    let mut v = Matrix::identity(n);
    let target = 1e-12 * m.norm_fro().max(f64::MIN_POSITIVE);
    let off = |m: &Matrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)] * m[(i, j)];
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while off(&m) > target {
        sweeps += 1;
        if sweeps > 100 {
            return Err(Error::NoConvergence(sweeps));
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[(k, p)];
                    let mkq = m[(k, q)];
                    m[(k, p)] = c * mkp - s * mkq;
                    m[(k, q)] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[(p, k)];
                    let mqk = m[(q, k)];
                    m[(p, k)] = c * mpk - s * mqk;
                    m[(q, k)] = s * mpk + c * mqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let vectors = Matrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// Largest eigenvalue of a real symmetric matrix.
pub fn symmetric_max_eigenvalue(a: &Matrix) -> Result<f64> {
    Ok(symmetric_eigen(a)?.0[0])
}

/// Eigenvalues (descending) of a Hermitian matrix via its real symmetric embedding
/// `[[Re, −Im], [Im, Re]]`, whose spectrum repeats each eigenvalue twice.
pub fn hermitian_eigenvalues(h: &ComplexMatrix) -> Result<Vec<f64>> {
    if !h.is_hermitian(1e-12 * h.max_abs().max(1.0)) {
        return Err(Error::InvalidArgument("matrix is not Hermitian".into()));
    }
    let n = h.rows();
    let emb = Matrix::from_fn(2 * n, 2 * n, |i, j| {
        let z = h[(i % n, j % n)];
        let z = 0.5 * (z + h[(j % n, i % n)].conj());
        match (i < n, j < n) {
            (true, true) | (false, false) => z.re,
            (true, false) => -z.im,
            (false, true) => z.im,
        }
    });
    let (values, _) = symmetric_eigen(&emb)?;
    Ok(values.into_iter().step_by(2).collect())
}

/// Greedy nearest-neighbour matching of two eigenvalue multisets after sorting by
/// `(re, im)`. Returns the worst distance, scaled by `max(1, |expected|)`.
pub fn multiset_mismatch(actual: &[Complex64], expected: &[Complex64]) -> f64 {
    if actual.len() != expected.len() {
        return f64::INFINITY;
    }
    let mut exp = expected.to_vec();
    exp.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut used = vec![false; actual.len()];
    let mut worst: f64 = 0.0;
    for e in exp {
        let (best, dist) = actual
            .iter()
            .enumerate()
            .filter(|(i, _)| !used[*i])
            .map(|(i, a)| (i, (a - e).norm()))
            .fold((usize::MAX, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
        used[best] = true;
        worst = worst.max(dist / e.norm().max(1.0));
    }
    worst
}

/// Checks that `A^(k)` has the `k`-fold eigenvalue products and `A^[k]` the `k`-fold sums.
pub fn check_compound_spectrum(a: &Matrix, k: usize) -> Result<Verdict> {
    let base = eigenvalues(a)?;
    let n = a.rows();
    let sets = index_sets::enumerate(k, n)?;
    let products: Vec<Complex64> = sets
        .iter()
        .map(|s| s.zero_based().iter().map(|&i| base[i]).product())
        .collect();
    let sums: Vec<Complex64> = sets
        .iter()
        .map(|s| s.zero_based().iter().map(|&i| base[i]).sum())
        .collect();
    let mult = eigenvalues(mult_compound(a, k)?.matrix())?;
    let add = eigenvalues(add_compound(a, k)?.matrix())?;
    let mult_err = multiset_mismatch(&mult, &products);
    let add_err = multiset_mismatch(&add, &sums);
    let worst = mult_err.max(add_err);
    Ok(Verdict::new("compound_spectrum", worst <= SPECTRUM_TOL, SPECTRUM_TOL)
        .with_margin(SPECTRUM_TOL - worst)
        .with_detail("k", k)
        .with_detail("multiplicative_mismatch", mult_err)
        .with_detail("additive_mismatch", add_err))
}

/// `X ⊕ Y = X ⊗ I_m + I_n ⊗ Y`.
pub fn kron_sum<T: Scalar>(
    x: &crate::matrix::DenseMatrix<T>,
    y: &crate::matrix::DenseMatrix<T>,
) -> Result<crate::matrix::DenseMatrix<T>> {
    if !x.is_square() || !y.is_square() {
        return Err(Error::Dimension("Kronecker sum needs square operands".into()));
    }
    let n = x.rows();
    let m = y.rows();
    let left = x.kron(&crate::matrix::DenseMatrix::identity(m));
    let right = crate::matrix::DenseMatrix::identity(n).kron(y);
    left.checked_add(&right)
}

/// Principal fractional power `V diag(λ^s) V⁻¹` of a diagonalizable matrix.
pub fn frac_power(a: &ComplexMatrix, s: f64) -> Result<ComplexMatrix> {
    check_eig_input(a)?;
    if !s.is_finite() {
        return Err(Error::InvalidArgument(format!("exponent {s} is not finite")));
    }
    let n = a.rows();
    if n == 0 {
        return Ok(a.clone());
    }
    if s == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    if s == 1.0 {
        return Ok(a.clone());
    }
    let scale = a.max_abs();
    let is_diagonal = (0..n).all(|i| (0..n).all(|j| i == j || a[(i, j)].norm() == 0.0));
    let integer = s.fract() == 0.0;
    let (values, vectors) = if is_diagonal {
        (a.diagonal(), ComplexMatrix::identity(n))
    } else {
        let spec = eig_complex(a)?;
        let v = spec
            .eigenvectors
            .ok_or(Error::Defective(f64::INFINITY))?;
        (spec.eigenvalues, v)
    };
    for &lambda in &values {
        if lambda.norm() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::Singular);
        }
        if !integer && lambda.re < 0.0 && lambda.im.abs() <= 1e-12 * lambda.norm().max(1.0) {
            return Err(Error::BranchCut(format!("{lambda}")));
        }
    }
    let powered: Vec<Complex64> = values.iter().map(|&l| principal_power(l, s)).collect();
    if is_diagonal {
        return Ok(ComplexMatrix::diag(&powered));
    }
    let inv = vectors.inverse().map_err(|_| Error::Defective(f64::INFINITY))?;
    let condition = vectors.norm_1() * inv.norm_1();
    if !(condition <= MAX_EIGVEC_CONDITION) {
        return Err(Error::Defective(condition));
    }
    let mut scaled = vectors;
    for j in 0..n {
        for i in 0..n {
            scaled[(i, j)] *= powered[j];
        }
    }
    Ok(&scaled * &inv)
}

fn principal_power(lambda: Complex64, s: f64) -> Complex64 {
    if lambda.im == 0.0 && lambda.re > 0.0 {
        Complex64::new(lambda.re.powf(s), 0.0)
    } else {
        (lambda.ln() * s).exp()
    }
}

/// Splits `α` into `(k, s)` with `k = ⌊α⌋`, requiring `1 ≤ k ≤ n − 1` and `0 < s < 1`.
pub fn split_alpha(alpha: f64, n: usize) -> Result<(usize, f64)> {
    if !alpha.is_finite() || alpha <= 1.0 || alpha >= n as f64 {
        return Err(Error::InvalidArgument(format!(
            "α = {alpha} outside the open interval (1, {n})"
        )));
    }
    let k = alpha.floor();
    let s = alpha - k;
    if s == 0.0 {
        return Err(Error::InvalidArgument(format!(
            "α = {alpha} is an integer; use the integer compound"
        )));
    }
    Ok((k as usize, s))
}

/// `A^(α) = (A^(k))^{1−s} ⊗ (A^(k+1))^s` for `α = k + s`.
pub fn alpha_mult_compound(a: &Matrix, alpha: f64) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension("α-compound of a non-square matrix".into()));
    }
    let n = a.rows();
    let (k, s) = split_alpha(alpha, n)?;
    let det = a.det()?;
    if det.abs() <= 1e-14 * a.max_abs().powi(n as i32).max(f64::MIN_POSITIVE) {
        return Err(Error::Singular);
    }
    let lower = frac_power(&mult_compound(a, k)?.matrix().to_complex(), 1.0 - s)?;
    let upper = frac_power(&mult_compound(a, k + 1)?.matrix().to_complex(), s)?;
    index_sets::check_guardrail((lower.rows() * upper.rows()) as u128)?;
    Ok(lower.kron(&upper))
}

/// `A^[α] = ((1 − s) A^[k]) ⊕ (s A^[k+1])` for `α = k + s`.
///
/// Real for real `A`, so it is returned as a real matrix.
pub fn alpha_add_compound(a: &Matrix, alpha: f64) -> Result<Matrix> {
    if !a.is_square() {
        return Err(Error::Dimension("α-compound of a non-square matrix".into()));
    }
    let n = a.rows();
    let (k, s) = split_alpha(alpha, n)?;
    let lower = add_compound(a, k)?.into_matrix().scale(1.0 - s);
    let upper = add_compound(a, k + 1)?.into_matrix().scale(s);
    index_sets::check_guardrail((lower.rows() * upper.rows()) as u128)?;
    kron_sum(&lower, &upper)
}

/// Hurwitz test: every eigenvalue has real part below `−tol`. Margin is `−max Re λ`.
pub fn is_hurwitz(a: &Matrix) -> Result<Verdict> {
    let tol = 1e-12;
    let spec = eig(a)?;
    let max_re = spec.max_real();
    Ok(Verdict::new("hurwitz", max_re < -tol, tol)
        .with_margin(-max_re)
        .with_detail("max_real_part", max_re))
}

/// Schur test: spectral radius below `1 − tol`. Margin is `1 − ρ`.
pub fn is_schur(a: &Matrix) -> Result<Verdict> {
    let tol = 1e-12;
    let rho = eig(a)?.spectral_radius();
    Ok(Verdict::new("schur", rho < 1.0 - tol, tol)
        .with_margin(1.0 - rho)
        .with_detail("spectral_radius", rho))
}

pub fn spectral_radius(a: &Matrix) -> Result<f64> {
    Ok(eig(a)?.spectral_radius())
}
