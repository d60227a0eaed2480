//! Partition-supremum dynamic programming over grid points.
//!
//! For a weight `w(u, v)` on grid pairs the supremum over partitions
//! `s = u_0 < u_1 < ... < u_r = t` of `Σ w(u_i, u_{i+1})` satisfies
//! `best[v] = max_{s ≤ u < v} best[u] + w(u, v)` with `best[s] = 0`.

use rayon::prelude::*;

use crate::path::GridInterval;

/// Dense table indexed by grid pairs `(i, j)`; only `i ≤ j` is meaningful.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTable {
    points: usize,
    data: Vec<f64>,
}

impl PairTable {
    pub fn zeros(points: usize) -> Self {
        Self { points, data: vec![0.0; points * points] }
    }

    /// Fills every cell `i < j` with `f(i, j)`; the diagonal is zero.
    pub fn from_fn(points: usize, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let mut data = vec![0.0; points * points];
        data.par_chunks_mut(points).enumerate().for_each(|(i, row)| {
            for (j, cell) in row.iter_mut().enumerate().skip(i + 1) {
                *cell = f(i, j);
            }
        });
        Self { points, data }
    }

    pub fn points(&self) -> usize {
        self.points
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.points + j]
    }

    pub fn map(&self, f: impl Fn(f64) -> f64 + Sync) -> Self {
        Self { points: self.points, data: self.data.par_iter().map(|&x| f(x)).collect() }
    }

    /// Combines two tables cell by cell over `i < j`, passing the indices along.
    pub fn zip_with_index(&self, other: &Self, f: impl Fn(usize, usize, f64, f64) -> f64 + Sync) -> Self {
        Self::from_fn(self.points, |i, j| f(i, j, self.get(i, j), other.get(i, j)))
    }
}

/// Values of a norm (or distance) on every grid subinterval `[t_i, t_j]`.
pub type IntervalTable = PairTable;

/// `max_P Σ w` over partitions of `interval` into grid blocks.
pub fn partition_sup(interval: GridInterval, w: impl Fn(usize, usize) -> f64) -> f64 {
    let GridInterval { start, end } = interval;
    if start >= end {
        return 0.0;
    }
    let mut best = vec![0.0_f64; end - start + 1];
    for v in start + 1..=end {
        let mut top = f64::NEG_INFINITY;
        for u in start..v {
            let cand = best[u - start] + w(u, v);
            if cand > top {
                top = cand;
            }
        }
        best[v - start] = top;
    }
    best[end - start]
}

/// Partition suprema of `weights` on every interval `[t_s, t_t]` at once.
pub fn partition_sup_table(weights: &PairTable) -> PairTable {
    let n = weights.points();
    let mut data = vec![0.0; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(s, row)| {
        for v in s + 1..n {
            let mut top = f64::NEG_INFINITY;
            for u in s..v {
                let cand = row[u] + weights.get(u, v);
                if cand > top {
                    top = cand;
                }
            }
            row[v] = top;
        }
    });
    PairTable { points: n, data }
}

/// Largest value of `w` over all sub-pairs `s ≤ u < v ≤ t` of `interval`.
pub fn subinterval_sup(interval: GridInterval, w: impl Fn(usize, usize) -> f64) -> f64 {
    let mut top = 0.0_f64;
    for u in interval.start..interval.end {
        for v in u + 1..=interval.end {
            top = top.max(w(u, v));
        }
    }
    top
}

/// Integrated shift functional on every interval of a uniform grid.
///
/// For `p < ∞` cell `(u, v)` holds
/// `max_{1 ≤ m ≤ v−u} scale[m] · Σ_{r=u}^{v−m−1} pow[r][r+m]`
/// (left Riemann sum of the `m`-shift, multiplied by `scale[m]`); for
/// `p = ∞` (`sup_norm = true`) the sum is replaced by a maximum over
/// `r ∈ [u, v−m]`.
pub fn shift_table(pow: &PairTable, scale: &[f64], sup_norm: bool) -> PairTable {
    let n = pow.points();
    let mut data = vec![0.0_f64; n * n];
    data.par_chunks_mut(n).enumerate().for_each(|(u, row)| {
        for m in 1..n - u {
            let mut acc = 0.0_f64;
            if sup_norm {
                for v in u + m..n {
                    acc = acc.max(pow.get(v - m, v));
                    row[v] = row[v].max(scale[m] * acc);
                }
            } else {
                for v in u + m + 1..n {
                    acc += pow.get(v - m - 1, v - 1);
                    row[v] = row[v].max(scale[m] * acc);
                }
            }
        }
    });
    PairTable { points: n, data }
}
