//! Checks on pairs of rough paths: distance equivalences and the control function.

use rayon::prelude::*;

use crate::distances::{rho_level, DistanceKind, LevelDistanceSpec};
use crate::error::{Error, Result};
use crate::norms::{mixed_norm, qvar_table, Exponent};
use crate::partition::{partition_sup, PairTable};
use crate::path::{lift, EuclideanPath, GridInterval, GroupPath};
use crate::verify::checks::{ratio, rel_err, EXACT_TOL, REFINEMENT_BAND};
use crate::verify::family::{FamilyKind, PathFamily};
use crate::verify::record::{CheckParams, CheckRecord};

/// Pairs `(f_i, f_i + ε_i g_i)` with `f_i`, `g_i` drawn from two seeded
/// families of the same kind and `ε_i` spread log-uniformly over `[ε_min, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairFamily {
    pub base: PathFamily,
    pub eps_min: f64,
}

impl PairFamily {
    pub fn new(kind: FamilyKind, count: usize, intervals: usize, dim: usize, seed: u64) -> Self {
        Self { base: PathFamily::new(kind, count, intervals, dim, seed), eps_min: 1e-2 }
    }

    pub fn count(&self) -> usize {
        self.base.count
    }

    pub fn intervals(&self) -> usize {
        self.base.intervals
    }

    fn perturbation(&self) -> PathFamily {
        PathFamily { seed: self.base.seed ^ 0x5eed_0f_9e27, ..self.base }
    }

    pub fn epsilon(&self, index: usize) -> f64 {
        let n = self.base.count.max(2) - 1;
        self.eps_min.powf(1.0 - (index % (n + 1)) as f64 / n as f64)
    }

    /// Level-one pairs sampled on a uniform grid with `intervals` steps.
    pub fn sample(&self, intervals: usize) -> Result<Vec<(EuclideanPath, EuclideanPath)>> {
        if !(self.eps_min > 0.0 && self.eps_min <= 1.0) {
            return Err(Error::Parameter(format!("eps_min must lie in (0, 1], got {}", self.eps_min)));
        }
        let f = self.base.sample(intervals)?;
        let g = self.perturbation().sample(intervals)?;
        f.into_iter()
            .zip(g)
            .enumerate()
            .map(|(i, (f, g))| {
                let eps = self.epsilon(i);
                let h = EuclideanPath::new(
                    f.grid().clone(),
                    f.points().zip(g.points()).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + eps * y).collect()).collect(),
                )?;
                Ok((f, h))
            })
            .collect()
    }

    /// Lifted pairs at `depth`.
    pub fn lifted(&self, intervals: usize, depth: usize) -> Result<Vec<(GroupPath, GroupPath)>> {
        self.sample(intervals)?.iter().map(|(a, b)| Ok((lift(a, depth)?, lift(b, depth)?))).collect()
    }
}

fn level_spec(kind: DistanceKind, delta: f64, p: f64, level: usize) -> LevelDistanceSpec {
    LevelDistanceSpec { kind, delta, p, level }
}

/// Per level: `ρ_V = ρ_Ṽ` on the grid, `ρ_V ≤ ρ_Ṽ` (constant 1), and the
/// empirical constants of `ρ_N̂ ≲ ρ_Ṽ` and `ρ_Ṽ ≲ ρ_N̂` on two grids.
pub fn check_distance_equivalences(pairs: &PairFamily, delta: f64, p: f64, depth: usize) -> Result<Vec<CheckRecord>> {
    let params = CheckParams::dp(delta, p);
    let full = |x: &GroupPath| GridInterval::full(x.grid());
    let mut out = Vec::new();
    let lifted = pairs.lifted(pairs.intervals(), depth)?;
    // per pair and level: [ρ_V, ρ_Ṽ, ρ_N̂]
    let values: Vec<Vec<[f64; 3]>> = lifted
        .par_iter()
        .map(|(x1, x2)| {
            (1..=depth)
                .map(|k| {
                    let r = |kind| rho_level(x1, x2, &level_spec(kind, delta, p, k), full(x1));
                    Ok([r(DistanceKind::RieszDist)?, r(DistanceKind::MixedDist)?, r(DistanceKind::NikolskiiHatDist)?])
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let ball = lifted
        .par_iter()
        .map(|(x1, x2)| {
            let n = |x: &GroupPath| crate::norms::refined_nikolskii_norm(x, delta, Exponent::Finite(p), full(x));
            Ok(n(x1)?.max(n(x2)?))
        })
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let constants = |values: &[Vec<[f64; 3]>], k: usize| {
        values.iter().fold((0.0_f64, 0.0_f64), |(c1, c2), v| {
            let [_, m, n] = v[k];
            (c1.max(ratio(n, m)), c2.max(ratio(m, n)))
        })
    };
    let fine = pairs.lifted(2 * pairs.intervals(), depth)?;
    let fine_values: Vec<Vec<[f64; 3]>> = fine
        .par_iter()
        .map(|(x1, x2)| {
            (1..=depth)
                .map(|k| {
                    let r = |kind| rho_level(x1, x2, &level_spec(kind, delta, p, k), full(x1));
                    Ok([0.0, r(DistanceKind::MixedDist)?, r(DistanceKind::NikolskiiHatDist)?])
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    for k in 0..depth {
        let level = k + 1;
        let (worst_eq, worst_le) = values.iter().fold(((0.0, 0.0, 0.0), (0.0, 0.0, f64::NEG_INFINITY)), |acc, v| {
            let [rv, rm, _] = v[k];
            let eq = if rel_err(rv, rm) > acc.0 .0 { (rel_err(rv, rm), rv, rm) } else { acc.0 };
            let le = if rv - rm > acc.1 .2 { (rv, rm, rv - rm) } else { acc.1 };
            (eq, le)
        });
        out.push(
            CheckRecord::equality(format!("distances.riesz_eq_mixed.level{level}"), params, worst_eq.1, worst_eq.2, EXACT_TOL)
                .with_notes(format!("worst relative gap {} over {} pairs", worst_eq.0, pairs.count())),
        );
        out.push(
            CheckRecord::inequality(format!("distances.riesz_le_mixed.level{level}"), params, worst_le.0, worst_le.1, 1.0, EXACT_TOL)
                .with_notes("constant-1 direction, worst pair"),
        );
        let (c1, c2) = constants(&values, k);
        let (f1, f2) = constants(&fine_values, k);
        let note = format!("ball bound b = max ‖X^i‖_N̂ = {ball}; grids {} and {}", pairs.intervals(), 2 * pairs.intervals());
        out.push(
            CheckRecord::empirical(format!("distances.refined_le_mixed.level{level}"), CheckParams { b: Some(ball), ..params }, f1, c1, REFINEMENT_BAND)
                .with_notes(format!("C = max ρ_N̂ / ρ_Ṽ; {note}")),
        );
        out.push(
            CheckRecord::empirical(format!("distances.mixed_le_refined.level{level}"), CheckParams { b: Some(ball), ..params }, f2, c2, REFINEMENT_BAND)
                .with_notes(format!("C' = max ρ_Ṽ / ρ_N̂; {note}")),
        );
    }
    let same = lifted.first().map(|(x1, _)| {
        (1..=depth)
            .map(|k| rho_level(x1, x1, &level_spec(DistanceKind::MixedDist, delta, p, k), full(x1)))
            .collect::<Result<Vec<_>>>()
    });
    if let Some(zero) = same {
        let worst = zero?.into_iter().fold(0.0, f64::max);
        out.push(CheckRecord::inequality("distances.self_distance_zero", params, worst, 0.0, 1.0, 0.0));
    }
    Ok(out)
}

/// Control function on every pair of grid indices:
/// `ω = ‖X¹‖^{1/δ}_{1/δ-var} + ‖X²‖^{1/δ}_{1/δ-var} + Σ_k (ρ^{(k)}_{1/δ-var} / ρ^{(k)}_{Ṽ;[0,T]})^{1/(δk)}`
/// with `0/0 = 0`.
pub fn build_control_function(x1: &GroupPath, x2: &GroupPath, delta: f64, p: f64) -> Result<PairTable> {
    if !(delta > 0.0 && delta <= 1.0 && p.is_finite() && delta * p >= 1.0) {
        return Err(Error::Parameter(format!("need δ ∈ (0,1], 1/δ ≤ p < ∞, got δ = {delta}, p = {p}")));
    }
    let q = 1.0 / delta;
    let full = GridInterval::full(x1.grid());
    let v1 = qvar_table(x1, q)?;
    let v2 = qvar_table(x2, q)?;
    let mut omega = PairTable::from_fn(x1.grid().len(), |s, t| v1.get(s, t).powf(q) + v2.get(s, t).powf(q));
    for k in 1..=x1.depth() {
        let total = rho_level(x1, x2, &level_spec(DistanceKind::MixedDist, delta, p, k), full)?;
        let local = crate::distances::rho_qvar_level_table(x1, x2, q, k)?;
        let e = 1.0 / (delta * k as f64);
        omega = omega.zip_with_index(&local, |_, _, w, r| w + ratio(r, total).powf(e));
    }
    Ok(omega)
}

/// Superadditivity of the control function and the empirical constant of
/// `sup_P Σ ω^{δp}/(t−s)^{δp−1} ≲ ‖X¹‖_Ṽ^p + ‖X²‖_Ṽ^p + 1` on two grids.
pub fn check_control_function(pairs: &PairFamily, delta: f64, p: f64, depth: usize) -> Result<Vec<CheckRecord>> {
    let params = CheckParams::dp(delta, p);
    let estimate = |intervals: usize, superadd: bool| -> Result<(f64, Vec<CheckRecord>)> {
        let lifted = pairs.lifted(intervals, depth)?;
        let res: Vec<(f64, Option<CheckRecord>)> = lifted
            .par_iter()
            .enumerate()
            .map(|(i, (x1, x2))| {
                let omega = build_control_function(x1, x2, delta, p)?;
                let t = x1.grid().times();
                let full = GridInterval::full(x1.grid());
                let expo = delta * p - 1.0;
                let lhs = partition_sup(full, |u, v| omega.get(u, v).powf(delta * p) / (t[v] - t[u]).powf(expo));
                let n = |x: &GroupPath| mixed_norm(x, delta, Exponent::Finite(p), full);
                let rhs = n(x1)?.powf(p) + n(x2)?.powf(p) + 1.0;
                let rec = (superadd && i < 5).then(|| {
                    super::checks::check_superadditivity(
                        &format!("control.superadditivity.pair{i}"),
                        omega.points(),
                        |s, u| omega.get(s, u),
                    )
                    .with_notes(format!("control function of pair {i}, depth {depth}"))
                });
                Ok((lhs / rhs, rec))
            })
            .collect::<Result<_>>()?;
        let c = res.iter().map(|r| r.0).fold(0.0, f64::max);
        Ok((c, res.into_iter().filter_map(|r| r.1).collect()))
    };
    let (coarse, mut out) = estimate(pairs.intervals(), true)?;
    let (fine, _) = estimate(2 * pairs.intervals(), false)?;
    out.push(
        CheckRecord::empirical("control.estimate", params, fine, coarse, REFINEMENT_BAND).with_notes(format!(
            "C = max sup_P Σ ω^(δp)/(t−s)^(δp−1) / (‖X¹‖^p + ‖X²‖^p + 1) over {} pairs, grids {} and {}",
            pairs.count(),
            pairs.intervals(),
            2 * pairs.intervals()
        )),
    );
    Ok(out)
}
