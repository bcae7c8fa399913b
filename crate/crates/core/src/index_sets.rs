//! Lexicographically ordered k-subsets of `{1, ..., n}`.
//!
//! Elements are 1-based, ranks are 0-based. The rows and columns of every
//! compound matrix in the crate are addressed through this ordering.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest ground-set size accepted anywhere in the crate.
pub const MAX_GROUND_SET: usize = 64;

/// Default cap on the number of index sets (and hence compound dimension).
pub const DEFAULT_MAX_DIM: u128 = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "COMPOUNDKIT_MAX_DIM";

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct IndexSet {
    elements: Vec<usize>,
    n: usize,
}

impl IndexSet {
    /// Validates a strictly increasing tuple drawn from `{1, ..., n}`.
    pub fn new(elements: Vec<usize>, n: usize) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::InvalidArgument("empty index set".into()));
        }
        if n > MAX_GROUND_SET {
            return Err(Error::Dimension(format!(
                "ground set size {n} exceeds {MAX_GROUND_SET}"
            )));
        }
        if elements[0] < 1 || *elements.last().unwrap() > n {
            return Err(Error::IndexOutOfRange(format!(
                "{elements:?} is not contained in 1..={n}"
            )));
        }
        if elements.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidArgument(format!(
                "{elements:?} is not strictly increasing"
            )));
        }
        Ok(Self { elements, n })
    }

    /// `{1, ..., k}`
    pub fn initial(k: usize, n: usize) -> Result<Self> {
        Self::new((1..=k).collect(), n)
    }

    /// `{p, p+1, ..., p+k-1}`
    pub fn contiguous(p: usize, k: usize, n: usize) -> Result<Self> {
        Self::new((p..p + k).collect(), n)
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    /// Zero-based positions, convenient for matrix indexing.
    pub fn zero_based(&self) -> Vec<usize> {
        self.elements.iter().map(|&e| e - 1).collect()
    }

    pub fn k(&self) -> usize {
        self.elements.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, i: usize) -> bool {
        self.elements.binary_search(&i).is_ok()
    }

    pub fn is_contiguous(&self) -> bool {
        self.elements.windows(2).all(|w| w[1] == w[0] + 1)
    }

    /// Elements of `{1, ..., n}` not in the set, increasing.
    pub fn complement(&self) -> Vec<usize> {
        (1..=self.n).filter(|&i| !self.contains(i)).collect()
    }

    /// Position of the set in the lexicographic order of `Q(k, n)`.
    pub fn rank(&self) -> usize {
        let k = self.k();
        let mut rank = 0u128;
        let mut prev = 0;
        for (i, &e) in self.elements.iter().enumerate() {
            for v in prev + 1..e {
                rank += binomial(self.n - v, k - i - 1);
            }
            prev = e;
        }
        rank as usize
    }

    /// Inverse of [`IndexSet::rank`].
    pub fn unrank(rank: usize, k: usize, n: usize) -> Result<Self> {
        check_kn(k, n)?;
        let total = binomial(n, k);
        if rank as u128 >= total {
            return Err(Error::IndexOutOfRange(format!(
                "rank {rank} outside 0..{total} for Q({k},{n})"
            )));
        }
        let mut r = rank as u128;
        let mut elements = Vec::with_capacity(k);
        let mut v = 1;
        for i in 0..k {
            loop {
                let block = binomial(n - v, k - i - 1);
                if r < block {
                    break;
                }
                r -= block;
                v += 1;
            }
            elements.push(v);
            v += 1;
        }
        Self::new(elements, n)
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, ")")
    }
}

/// `C(n, k)`, zero when `k > n`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// Current limit on `C(n, k)`, honouring `COMPOUNDKIT_MAX_DIM`.
pub fn max_dim() -> u128 {
    std::env::var(MAX_DIM_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u128>().ok())
        .filter(|&v| v > 0)
        .unwrap_or(DEFAULT_MAX_DIM)
}

pub fn check_guardrail(count: u128) -> Result<()> {
    let limit = max_dim();
    if count > limit {
        return Err(Error::Guardrail { count, limit });
    }
    Ok(())
}

fn check_kn(k: usize, n: usize) -> Result<()> {
    if k < 1 || k > n {
        return Err(Error::Dimension(format!("need 1 <= k <= n, got k={k}, n={n}")));
    }
    if n > MAX_GROUND_SET {
        return Err(Error::Dimension(format!(
            "ground set size {n} exceeds {MAX_GROUND_SET}"
        )));
    }
    Ok(())
}

/// All of `Q(k, n)` in lexicographic order.
pub fn enumerate(k: usize, n: usize) -> Result<Vec<IndexSet>> {
    check_kn(k, n)?;
    let count = binomial(n, k);
    check_guardrail(count)?;
    let mut out = Vec::with_capacity(count as usize);
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(IndexSet {
            elements: current.clone(),
            n,
        });
        // rightmost position that can still be incremented
        let Some(i) = (0..k).rev().find(|&i| current[i] < n - (k - 1 - i)) else {
            break;
        };
        current[i] += 1;
        for j in i + 1..k {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(out)
}
