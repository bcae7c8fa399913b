use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;

/// A dynamical system `ẋ = f(t, x)`.
///
/// Serialized with a `"tag"` discriminator:
///
/// ```json
/// {"tag": "lti", "a": {"rows": 2, "cols": 2, "data": [[-1, 0], [0, -2]]}}
/// {"tag": "ltv", "times": [0, 1], "matrices": [...]}
/// {"tag": "builtin", "name": "thomas", "b": 0.15, "c": -0.85}
/// ```
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "tag", rename_all = "snake_case")]
pub enum SystemDef {
    Lti { a: Matrix },
    /// Time samples of `A(t)`, linearly interpolated and held constant outside the range.
    Ltv { times: Vec<f64>, matrices: Vec<Matrix> },
    Builtin(BuiltinSystem),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum BuiltinSystem {
    /// `ẋ_i = sin(x_{i+1}) − b x_i` (cyclically), with optional feedback `c·diag(1,1,0)x`.
    Thomas {
        b: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        c: Option<f64>,
    },
    /// `A(t) = [[−1, 0], [−2 cos t, 0]]`.
    Squares,
    /// `A = [[0, c], [−c, 0]]`.
    Rotation { c: f64 },
    /// `ẋ = −L x` for the Laplacian of a weighted digraph on vertices `1..=n`.
    /// An edge `(i, j, w)` makes vertex `i` follow vertex `j` with weight `w`.
    Consensus {
        n: usize,
        edges: Vec<(usize, usize, f64)>,
    },
}

impl BuiltinSystem {
    pub fn thomas(b: f64) -> Self {
        Self::Thomas { b, c: None }
    }

    pub fn thomas_closed_loop(b: f64, c: f64) -> Self {
        Self::Thomas { b, c: Some(c) }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Thomas { .. } => 3,
            Self::Squares | Self::Rotation { .. } => 2,
            Self::Consensus { n, .. } => *n,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Thomas { b, c } => {
                if !b.is_finite() || c.is_some_and(|c| !c.is_finite()) {
                    return Err(Error::InvalidArgument("Thomas parameters must be finite".into()));
                }
                Ok(())
            }
            Self::Squares => Ok(()),
            Self::Rotation { c } => {
                if c.is_finite() {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument("rotation rate must be finite".into()))
                }
            }
            Self::Consensus { n, edges } => {
                if *n == 0 {
                    return Err(Error::InvalidArgument("consensus graph has no vertices".into()));
                }
                for &(i, j, w) in edges {
                    if i < 1 || j < 1 || i > *n || j > *n || i == j {
                        return Err(Error::InvalidArgument(format!(
                            "edge ({i}, {j}) invalid for vertices 1..={n}"
                        )));
                    }
                    if !(w.is_finite() && w > 0.0) {
                        return Err(Error::InvalidArgument(format!(
                            "edge ({i}, {j}) has non-positive weight {w}"
                        )));
                    }
                }
                if globally_reachable_vertex(*n, edges).is_none() {
                    return Err(Error::Precondition(
                        "consensus graph has no globally reachable vertex".into(),
                    ));
                }
                Ok(())
            }
        }
    }

    /// Default state box: `Ω = {|x_i| ≤ 1/b}` for Thomas with `b > 0`.
    pub fn default_box(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Self::Thomas { b, .. } if *b > 0.0 => Some(vec![(-1.0 / b, 1.0 / b); 3]),
            _ => None,
        }
    }
}

/// Graph Laplacian `D − W` with `W[i][j] = w` for every edge `(i, j, w)`.
pub fn laplacian(n: usize, edges: &[(usize, usize, f64)]) -> Matrix {
    let mut l = Matrix::zeros(n, n);
    for &(i, j, w) in edges {
        l[(i - 1, i - 1)] += w;
        l[(i - 1, j - 1)] -= w;
    }
    l
}

/// First vertex (1-based) reachable from every vertex along the edges, if any.
pub fn globally_reachable_vertex(n: usize, edges: &[(usize, usize, f64)]) -> Option<usize> {
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for &(i, j, _) in edges {
        if (1..=n).contains(&i) && (1..=n).contains(&j) {
            reach[i - 1][j - 1] = true;
        }
    }
    // transitive closure
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
    (0..n).find(|&v| (0..n).all(|u| reach[u][v])).map(|v| v + 1)
}

impl SystemDef {
    pub fn lti(a: Matrix) -> Self {
        Self::Lti { a }
    }

    pub fn builtin(b: BuiltinSystem) -> Self {
        Self::Builtin(b)
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Lti { a } => a.rows(),
            Self::Ltv { matrices, .. } => matrices.first().map_or(0, Matrix::rows),
            Self::Builtin(b) => b.dim(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Lti { a } => {
                if !a.is_square() || a.rows() == 0 {
                    return Err(Error::Dimension(format!(
                        "LTI matrix must be square and non-empty, got {:?}",
                        a.shape()
                    )));
                }
                Ok(())
            }
            Self::Ltv { times, matrices } => {
                if times.is_empty() || times.len() != matrices.len() {
                    return Err(Error::InvalidArgument(format!(
                        "{} sample times for {} matrices",
                        times.len(),
                        matrices.len()
                    )));
                }
                if times.windows(2).any(|w| !(w[0] < w[1])) || times.iter().any(|t| !t.is_finite()) {
                    return Err(Error::InvalidArgument(
                        "LTV sample times must be finite and strictly increasing".into(),
                    ));
                }
                let n = matrices[0].rows();
                if n == 0 || matrices.iter().any(|m| m.shape() != (n, n)) {
                    return Err(Error::Dimension("LTV matrices must share one square shape".into()));
                }
                Ok(())
            }
            Self::Builtin(b) => b.validate(),
        }
    }

    pub fn is_linear(&self) -> bool {
        !matches!(self, Self::Builtin(BuiltinSystem::Thomas { .. }))
    }

    pub fn is_time_invariant(&self) -> bool {
        !matches!(self, Self::Ltv { .. } | Self::Builtin(BuiltinSystem::Squares))
    }

    /// `A(t)` for linear systems, `None` for nonlinear ones.
    pub fn matrix_at(&self, t: f64) -> Option<Matrix> {
        match self {
            Self::Lti { a } => Some(a.clone()),
            Self::Ltv { times, matrices } => Some(interpolate(times, matrices, t)),
            Self::Builtin(BuiltinSystem::Squares) => Some(Matrix::from_rows(&[
                [-1.0, 0.0],
                [-2.0 * t.cos(), 0.0],
            ])),
            Self::Builtin(BuiltinSystem::Rotation { c }) => {
                Some(Matrix::from_rows(&[[0.0, *c], [-c, 0.0]]))
            }
            Self::Builtin(BuiltinSystem::Consensus { n, edges }) => {
                Some(laplacian(*n, edges).scale(-1.0))
            }
            Self::Builtin(BuiltinSystem::Thomas { .. }) => None,
        }
    }

    /// Vector field `f(t, x)`.
    pub fn field(&self, t: f64, x: &[f64]) -> Vec<f64> {
        match self {
            Self::Builtin(BuiltinSystem::Thomas { b, c }) => {
                let mut f = vec![
                    x[1].sin() - b * x[0],
                    x[2].sin() - b * x[1],
                    x[0].sin() - b * x[2],
                ];
                if let Some(c) = c {
                    f[0] += c * x[0];
                    f[1] += c * x[1];
                }
                f
            }
            _ => self
                .matrix_at(t)
                .expect("linear system")
                .mul_vec(x)
                .expect("state dimension"),
        }
    }

    /// Jacobian `∂f/∂x (t, x)`.
    pub fn jacobian(&self, t: f64, x: &[f64]) -> Matrix {
        match self {
            Self::Builtin(BuiltinSystem::Thomas { b, c }) => {
                let g = c.unwrap_or(0.0);
                Matrix::from_rows(&[
                    [-b + g, x[1].cos(), 0.0],
                    [0.0, -b + g, x[2].cos()],
                    [x[0].cos(), 0.0, -b],
                ])
            }
            _ => self.matrix_at(t).expect("linear system"),
        }
    }

    pub fn default_box(&self) -> Option<Vec<(f64, f64)>> {
        match self {
            Self::Builtin(b) => b.default_box(),
            _ => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            Self::Lti { a } => format!("LTI, n = {}", a.rows()),
            Self::Ltv { times, .. } => format!(
                "sampled LTV, n = {}, {} samples on [{}, {}]",
                self.dim(),
                times.len(),
                times[0],
                times[times.len() - 1]
            ),
            Self::Builtin(BuiltinSystem::Thomas { b, c: None }) => format!("Thomas, b = {b}"),
            Self::Builtin(BuiltinSystem::Thomas { b, c: Some(c) }) => {
                format!("Thomas with feedback, b = {b}, c = {c}")
            }
            Self::Builtin(BuiltinSystem::Squares) => "squares LTV".into(),
            Self::Builtin(BuiltinSystem::Rotation { c }) => format!("rotation, c = {c}"),
            Self::Builtin(BuiltinSystem::Consensus { n, edges }) => {
                format!("consensus, n = {n}, {} edges", edges.len())
            }
        }
    }
}

fn interpolate(times: &[f64], matrices: &[Matrix], t: f64) -> Matrix {
    if t <= times[0] {
        return matrices[0].clone();
    }
    let last = times.len() - 1;
    if t >= times[last] {
        return matrices[last].clone();
    }
    let i = times.partition_point(|&s| s <= t) - 1;
    let w = (t - times[i]) / (times[i + 1] - times[i]);
    let (a, b) = (&matrices[i], &matrices[i + 1]);
    Matrix::from_fn(a.rows(), a.cols(), |r, c| (1.0 - w) * a[(r, c)] + w * b[(r, c)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        let sys = SystemDef::builtin(BuiltinSystem::thomas_closed_loop(0.15, -0.85));
        let json = serde_json::to_string(&sys).unwrap();
        assert_eq!(json, r#"{"tag":"builtin","name":"thomas","b":0.15,"c":-0.85}"#);
        let back: SystemDef = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sys);
        let lti: SystemDef = serde_json::from_str(
            r#"{"tag":"lti","a":{"rows":1,"cols":1,"data":[[-1.0]]}}"#,
        )
        .unwrap();
        assert_eq!(lti.dim(), 1);
        let sq: SystemDef = serde_json::from_str(r#"{"tag":"builtin","name":"squares"}"#).unwrap();
        assert!(!sq.is_time_invariant());
        assert!(serde_json::from_str::<SystemDef>(r#"{"tag":"builtin","name":"lorenz"}"#).is_err());
    }

    #[test]
    fn ltv_interpolation_and_validation() {
        let sys = SystemDef::Ltv {
            times: vec![0.0, 2.0],
            matrices: vec![Matrix::diag(&[0.0]), Matrix::diag(&[2.0])],
        };
        sys.validate().unwrap();
        assert_eq!(sys.matrix_at(0.5).unwrap()[(0, 0)], 0.5);
        assert_eq!(sys.matrix_at(-1.0).unwrap()[(0, 0)], 0.0);
        assert_eq!(sys.matrix_at(9.0).unwrap()[(0, 0)], 2.0);
        let bad = SystemDef::Ltv {
            times: vec![1.0, 0.0],
            matrices: vec![Matrix::diag(&[0.0]), Matrix::diag(&[2.0])],
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn thomas_jacobian_matches_finite_differences() {
        let sys = SystemDef::builtin(BuiltinSystem::thomas_closed_loop(0.2, -0.5));
        let x = [0.3, -1.2, 2.1];
        let j = sys.jacobian(0.0, &x);
        let h = 1e-6;
        for col in 0..3 {
            let mut xp = x;
            let mut xm = x;
            xp[col] += h;
            xm[col] -= h;
            let fp = sys.field(0.0, &xp);
            let fm = sys.field(0.0, &xm);
            for row in 0..3 {
                let fd = (fp[row] - fm[row]) / (2.0 * h);
                assert!((fd - j[(row, col)]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn consensus_graph_checks() {
        // 1 follows 2, 2 follows 3: vertex 3 is globally reachable
        let edges = vec![(1, 2, 1.0), (2, 3, 2.0)];
        assert_eq!(globally_reachable_vertex(3, &edges), Some(3));
        let sys = BuiltinSystem::Consensus { n: 3, edges };
        sys.validate().unwrap();
        let l = laplacian(3, &[(1, 2, 1.0), (2, 3, 2.0)]);
        assert_eq!(l.row(1), &[0.0, 2.0, -2.0]);
        let split = BuiltinSystem::Consensus {
            n: 3,
            edges: vec![(1, 2, 1.0)],
        };
        assert!(matches!(split.validate(), Err(Error::Precondition(_))));
    }
}
