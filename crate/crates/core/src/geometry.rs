//! Volumes of parallelotopes spanned by the columns of a matrix.

use serde::Serialize;

use crate::compound::mult_compound;
use crate::error::{Error, Result};
use crate::matrix::{norm2, Matrix};

/// `G = XᵀX`.
pub fn gram(x: &Matrix) -> Result<Matrix> {
    check_frame(x)?;
    x.transpose().checked_mul(x)
}

fn check_frame(x: &Matrix) -> Result<()> {
    if x.cols() == 0 || x.cols() > x.rows() {
        return Err(Error::Dimension(format!(
            "need 1 ≤ k ≤ n generators, got a {}x{} matrix",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Volume {
    /// `|X^(k)|₂`.
    pub value: f64,
    /// `sqrt(det(XᵀX))`, clamped at zero.
    pub gram_route: f64,
    /// `|compound − gram|`.
    pub discrepancy: f64,
}

/// k-volume of the parallelotope with generators the columns of `X`,
/// computed from the compound vector and from the Gram determinant.
pub fn volume(x: &Matrix) -> Result<Volume> {
    check_frame(x)?;
    let k = x.cols();
    let value = norm2(mult_compound(x, k)?.matrix().data());
    let det = gram(x)?.det()?;
    let gram_route = det.max(0.0).sqrt();
    Ok(Volume {
        value,
        gram_route,
        discrepancy: (value - gram_route).abs(),
    })
}

/// Base times altitude: `vol(x¹..x^k) = vol(x¹..x^{k−1}) · dist(x^k, span(x¹..x^{k−1}))`,
/// with the foot of the altitude found by least squares.
pub fn volume_recursive(x: &Matrix) -> Result<f64> {
    check_frame(x)?;
    let first = x.column(0);
    let mut vol = norm2(&first);
    for j in 1..x.cols() {
        if vol == 0.0 {
            return Ok(0.0);
        }
        let base = x.columns_range(0, j);
        let v = x.column(j);
        let rhs = base.transpose().mul_vec(&v)?;
        let coeffs = match gram(&base)?.solve(&rhs) {
            Ok(c) => c,
            Err(Error::Singular) => return Ok(0.0),
            Err(e) => return Err(e),
        };
        let foot = base.mul_vec(&coeffs)?;
        let altitude: Vec<f64> = v.iter().zip(&foot).map(|(a, b)| a - b).collect();
        vol *= norm2(&altitude);
    }
    Ok(vol)
}
