#![allow(dead_code)]

use compoundkit::Matrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `r×c` matrix with entries in `[-2, 2]`.
pub fn matrix(r: usize, c: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0..2.0f64, r * c)
        .prop_map(move |data| Matrix::new(r, c, data).expect("shape"))
}

pub fn square(max_n: usize) -> impl Strategy<Value = Matrix> {
    (1..=max_n).prop_flat_map(|n| matrix(n, n))
}

pub fn random_matrix<R: Rng>(r: usize, c: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(r, c, |_, _| rng.gen_range(-2.0..2.0))
}

pub fn rel_close(x: f64, y: f64, tol: f64) -> bool {
    (x - y).abs() <= tol * 1f64.max(x.abs()).max(y.abs())
}

/// Largest entrywise deviation scaled by `max(1, ‖b‖max)`.
pub fn scaled_diff(a: &Matrix, b: &Matrix) -> f64 {
    a.max_abs_diff(b) / b.max_abs().max(1.0)
}

/// Well-conditioned `I + small` perturbation.
pub fn near_identity<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(n, n, |i, j| {
        let e = rng.gen_range(-0.3..0.3) / n as f64;
        if i == j {
            1.0 + e
        } else {
            e
        }
    })
}
