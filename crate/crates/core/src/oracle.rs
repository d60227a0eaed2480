//! Brute-force references for the dynamic programs and the group norm.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::path::{GridInterval, TimeGrid};
use crate::tensor::GroupElement;

/// Largest interval (in grid points) accepted by the enumeration oracle.
pub const ENUMERATION_CAP: usize = 12;
/// Largest polygon accepted by [`cc_norm_bruteforce`].
pub const CC_MAX_SEGMENTS: usize = 32;
const CC_STARTS: u64 = 8;
const CC_SEED: u64 = 0xcc_0001;

/// Exact partition supremum by listing every subset of interior grid points.
pub fn enumerate_partition_supremum(
    grid: &TimeGrid,
    interval: GridInterval,
    w: impl Fn(usize, usize) -> f64,
) -> Result<f64> {
    interval.validate(grid)?;
    let points = interval.len() + 1;
    if points > ENUMERATION_CAP {
        return Err(Error::OracleSizeCap { points, cap: ENUMERATION_CAP });
    }
    if interval.is_empty() {
        return Ok(0.0);
    }
    let interior = points - 2;
    let mut best = f64::NEG_INFINITY;
    for mask in 0u32..(1u32 << interior) {
        let mut prev = interval.start;
        let mut sum = 0.0;
        for b in 0..interior {
            if mask & (1 << b) != 0 {
                let cut = interval.start + 1 + b;
                sum += w(prev, cut);
                prev = cut;
            }
        }
        sum += w(prev, interval.end);
        best = best.max(sum);
    }
    Ok(best)
}

/// Result of the polygonal Carnot–Carathéodory search.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CcEstimate {
    /// Length of a polygon whose depth-2 signature equals the target; an upper bound.
    pub value: f64,
    pub converged: bool,
}

/// Signed area `½ Σ_{i<j} Δ_i ∧ Δ_j` of a planar polygon.
fn polygon_area(d: &[[f64; 2]]) -> f64 {
    let mut run = [0.0, 0.0];
    let mut area = 0.0;
    for di in d {
        area += run[0] * di[1] - run[1] * di[0];
        run[0] += di[0];
        run[1] += di[1];
    }
    0.5 * area
}

fn polygon_length(d: &[[f64; 2]]) -> f64 {
    d.iter().map(|v| v[0].hypot(v[1])).sum()
}

struct CcProblem {
    x: [f64; 2],
    area: f64,
    k: usize,
}

impl CcProblem {
    fn deltas(&self, w: &[[f64; 2]], lambda: f64) -> Vec<[f64; 2]> {
        let k = self.k as f64;
        w.iter().map(|wi| [self.x[0] / k + lambda * wi[0], self.x[1] / k + lambda * wi[1]]).collect()
    }

    /// Penalized smooth objective and its gradient projected onto `Σ w = 0`.
    fn objective(&self, w: &[[f64; 2]], mu: f64, eps2: f64) -> (f64, Vec<[f64; 2]>) {
        let d = self.deltas(w, 1.0);
        let resid = polygon_area(&d) - self.area;
        let mut f = mu * resid * resid;
        let total = [d.iter().map(|v| v[0]).sum::<f64>(), d.iter().map(|v| v[1]).sum::<f64>()];
        let mut before = [0.0, 0.0];
        let mut grad = Vec::with_capacity(d.len());
        for di in &d {
            let norm = (di[0] * di[0] + di[1] * di[1] + eps2).sqrt();
            f += norm;
            let after = [total[0] - before[0] - di[0], total[1] - before[1] - di[1]];
            // ∂ area / ∂Δ_i = ½ (after_2 − before_2, before_1 − after_1)
            let da = [0.5 * (after[1] - before[1]), 0.5 * (before[0] - after[0])];
            grad.push([di[0] / norm + 2.0 * mu * resid * da[0], di[1] / norm + 2.0 * mu * resid * da[1]]);
            before[0] += di[0];
            before[1] += di[1];
        }
        let k = grad.len() as f64;
        let mean = [grad.iter().map(|g| g[0]).sum::<f64>() / k, grad.iter().map(|g| g[1]).sum::<f64>() / k];
        grad.iter_mut().for_each(|g| {
            g[0] -= mean[0];
            g[1] -= mean[1];
        });
        (f, grad)
    }

    /// Scales `w` by the root `λ` nearest 1 of `area(x/K + λw) = A`.
    fn restore(&self, w: &[[f64; 2]]) -> Option<(f64, Vec<[f64; 2]>)> {
        // area(λ) = αλ + βλ², read off from three evaluations
        let a0 = polygon_area(&self.deltas(w, 0.0));
        let a1 = polygon_area(&self.deltas(w, 1.0));
        let am = polygon_area(&self.deltas(w, -1.0));
        let beta = 0.5 * (a1 + am) - a0;
        let alpha = 0.5 * (a1 - am);
        let target = self.area - a0;
        let roots: Vec<f64> = if beta.abs() < 1e-300 {
            if alpha == 0.0 {
                return None;
            }
            vec![target / alpha]
        } else {
            let disc = alpha * alpha + 4.0 * beta * target;
            if disc < 0.0 {
                return None;
            }
            let s = disc.sqrt();
            let sign = if alpha >= 0.0 { 1.0 } else { -1.0 };
            let q = -0.5 * (alpha + sign * s);
            let mut r = vec![];
            if q != 0.0 {
                r.push(q / beta);
                r.push(-target / q);
            }
            r
        };
        let lambda = roots.into_iter().filter(|r| r.is_finite()).min_by(|a, b| (a - 1.0).abs().total_cmp(&(b - 1.0).abs()))?;
        Some((lambda, self.deltas(w, lambda)))
    }

    fn run(&self, seed: u64) -> Option<(f64, bool)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = self.k;
        let radius = (self.area.abs() / std::f64::consts::PI).sqrt().max(0.1);
        // start on a noisy circle of the right orientation
        let orient = if self.area < 0.0 { -1.0 } else { 1.0 };
        let phase: f64 = rng.random_range(0.0..std::f64::consts::TAU);
        let step = std::f64::consts::TAU / k as f64;
        let ring = |i: usize| {
            let th = phase + orient * step * i as f64;
            [radius * th.cos(), radius * th.sin()]
        };
        let jitter = 0.3 * radius * step;
        let mut w: Vec<[f64; 2]> = (0..k)
            .map(|i| {
                let (p, q) = (ring(i), ring(i + 1));
                let n1: f64 = rng.sample(StandardNormal);
                let n2: f64 = rng.sample(StandardNormal);
                [q[0] - p[0] + jitter * n1, q[1] - p[1] + jitter * n2]
            })
            .collect();
        let mean = [w.iter().map(|v| v[0]).sum::<f64>() / k as f64, w.iter().map(|v| v[1]).sum::<f64>() / k as f64];
        w.iter_mut().for_each(|v| {
            v[0] -= mean[0];
            v[1] -= mean[1];
        });
        let eps2 = 1e-16;
        let mut lr = 1e-2;
        let mut grad_norm = f64::INFINITY;
        for mu in [1.0, 10.0, 1e2, 1e3, 1e4, 1e5] {
            for _ in 0..4000 {
                let (f0, g) = self.objective(&w, mu, eps2);
                grad_norm = g.iter().map(|v| v[0] * v[0] + v[1] * v[1]).sum::<f64>().sqrt();
                if grad_norm < 1e-11 {
                    break;
                }
                lr *= 2.0;
                loop {
                    let trial: Vec<[f64; 2]> = w.iter().zip(&g).map(|(a, b)| [a[0] - lr * b[0], a[1] - lr * b[1]]).collect();
                    let (f1, _) = self.objective(&trial, mu, eps2);
                    if f1 <= f0 - 0.5 * lr * grad_norm * grad_norm {
                        w = trial;
                        break;
                    }
                    lr *= 0.5;
                    if lr < 1e-18 {
                        break;
                    }
                }
            }
        }
        let (lambda, d) = self.restore(&w)?;
        let feasible = (polygon_area(&d) - self.area).abs() <= 1e-10 * (1.0 + self.area.abs());
        let converged = feasible && (lambda - 1.0).abs() <= 1e-3 && grad_norm < 1e-3;
        feasible.then(|| (polygon_length(&d), converged))
    }
}

/// Upper bound on the Carnot–Carathéodory norm of a depth-2 element of
/// `G²(R²)`, minimizing the length of a `segments`-gon with signature `g`.
pub fn cc_norm_bruteforce(g: &GroupElement, segments: usize) -> Result<CcEstimate> {
    if g.dim() != 2 || g.depth() != 2 {
        return Err(Error::Parameter(format!(
            "the Carnot–Carathéodory oracle needs n = 2, N = 2, got n = {}, N = {}",
            g.dim(),
            g.depth()
        )));
    }
    if !(2..=CC_MAX_SEGMENTS).contains(&segments) {
        return Err(Error::Parameter(format!("segments must lie in 2..={CC_MAX_SEGMENTS}, got {segments}")));
    }
    let x = [g.level(1)[0], g.level(1)[1]];
    let l2 = g.level(2);
    let area = 0.5 * (l2[1] - l2[2]);
    let scale = x[0].hypot(x[1]).max(area.abs().sqrt());
    if scale == 0.0 {
        return Ok(CcEstimate { value: 0.0, converged: true });
    }
    let problem = CcProblem { x: [x[0] / scale, x[1] / scale], area: area / (scale * scale), k: segments };
    if problem.area.abs() <= 1e-14 {
        // the straight segment is optimal and feasible
        return Ok(CcEstimate { value: scale * problem.x[0].hypot(problem.x[1]), converged: true });
    }
    let runs: Vec<(f64, bool)> = (0..CC_STARTS).into_par_iter().filter_map(|s| problem.run(CC_SEED + s)).collect();
    let best = runs.iter().copied().min_by(|a, b| a.0.total_cmp(&b.0));
    match best {
        Some((len, converged)) => {
            if !converged {
                log::warn!("cc_norm_bruteforce: best start did not converge, returning an upper bound");
            }
            Ok(CcEstimate { value: scale * len, converged })
        }
        None => {
            log::warn!("cc_norm_bruteforce: no start reached the constraint set");
            Ok(CcEstimate { value: f64::INFINITY, converged: false })
        }
    }
}
