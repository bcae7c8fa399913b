//! Thresholds shared across modules.

/// Absolute part of the default float comparison.
pub const ABS_TOL: f64 = 1e-9;
/// Relative part of the default float comparison.
pub const REL_TOL: f64 = 1e-7;

/// Minors closer than this to zero are treated as zero when classifying signs.
pub const MINOR_TOL: f64 = 1e-10;

/// Slack on "≥ 0" constraints in sign-pattern checks.
pub const PATTERN_TOL: f64 = 1e-12;

/// Slack on "≤ −η" in contraction verdicts.
pub const STRICTNESS_TOL: f64 = 1e-12;

/// Positive-definiteness margin for diagonal Lyapunov certificates.
pub const PD_TOL: f64 = 1e-10;

/// Nonnegativity threshold for Hankel minors.
pub const HANKEL_TOL: f64 = 1e-9;

/// Tolerance for multiset eigenvalue comparisons.
pub const SPECTRUM_TOL: f64 = 1e-5;

/// Equal within the looser of [`ABS_TOL`] and [`REL_TOL`].
pub fn close(a: f64, b: f64) -> bool {
    let diff = (a - b).abs();
    diff <= ABS_TOL || diff <= REL_TOL * a.abs().max(b.abs())
}

/// `|a − b| ≤ tol · max(1, |a|, |b|)`.
pub fn close_rel(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * 1f64.max(a.abs()).max(b.abs())
}
