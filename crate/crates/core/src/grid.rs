//! The time grids D_n of [0, 1] with their index maps.
//!
//! Points are stored as exact integer numerators over the common
//! denominator 2^(2n+1) 3^n, so membership tests and the maps j_n, t1, t2
//! are exact for every grid point.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subdivision::MAX_STEP;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    n: usize,
    denominator: u64,
    numerators: Vec<u64>,
}

/// Builds D_n: the interior block j / (2 6^n), j = 0..6^n, followed for
/// k = 1..n by sum_{i<=k} 2^-i + j / (2^(k+1) 2^(k-1) 6^(n-k+1)).
pub fn build_grid(n: usize) -> Result<TimeGrid> {
    if n > MAX_STEP {
        return Err(Error::StepOutOfRange(n));
    }
    let q = (1u64 << (2 * n + 1)) * 3u64.pow(n as u32);
    let mut numerators: Vec<u64> = (0..=6u64.pow(n as u32)).map(|j| j << n).collect();
    for k in 1..=n {
        let offset = q - (q >> k);
        let unit = (1u64 << (n - k)) * 3u64.pow(k as u32 - 1);
        let count = (1u64 << (k - 1)) * 6u64.pow((n - k + 1) as u32);
        numerators.extend((1..=count).map(|j| offset + j * unit));
    }
    debug_assert!(numerators.windows(2).all(|w| w[0] < w[1]));
    Ok(TimeGrid { n, denominator: q, numerators })
}

impl TimeGrid {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.numerators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.numerators.is_empty()
    }

    /// The j-th element.
    pub fn value(&self, j: usize) -> f64 {
        self.numerators[j] as f64 / self.denominator as f64
    }

    pub fn points(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.value(j)).collect()
    }

    pub fn last(&self) -> f64 {
        self.value(self.len() - 1)
    }

    /// Number of intervals, which equals the number of triangles of step n.
    pub fn intervals(&self) -> usize {
        self.len() - 1
    }

    /// j_n(t): the index of t in D_n.
    pub fn j_n(&self, t: f64) -> Result<usize> {
        let x = t * self.denominator as f64;
        let r = x.round();
        if (x - r).abs() > 1e-6 || r < 0.0 {
            return Err(Error::GridDomain(format!("{t} is not in D_{}", self.n), "j_n"));
        }
        self.numerators
            .binary_search(&(r as u64))
            .map_err(|_| Error::GridDomain(format!("{t} is not in D_{}", self.n), "j_n"))
    }

    /// t1(t): the preceding element; t1(1) is the last element. Undefined at 0.
    pub fn t1(&self, t: f64) -> Result<f64> {
        if t == 1.0 {
            return Ok(self.last());
        }
        match self.j_n(t)? {
            0 => Err(Error::GridDomain("t1 is undefined at 0".into(), "t1")),
            j => Ok(self.value(j - 1)),
        }
    }

    /// t2(t): the following element. Undefined at the last element.
    pub fn t2(&self, t: f64) -> Result<f64> {
        let j = self.j_n(t)?;
        if j + 1 == self.len() {
            return Err(Error::GridDomain("t2 is undefined at the last element".into(), "t2"));
        }
        Ok(self.value(j + 1))
    }
}

/// |D_n| = 6^n + sum_{k=1}^n 2^(k-1) 6^(n-k+1) + 1.
pub fn grid_size(n: usize) -> usize {
    6usize.pow(n as u32) + (1..=n).map(|k| (1usize << (k - 1)) * 6usize.pow((n - k + 1) as u32)).sum::<usize>() + 1
}
