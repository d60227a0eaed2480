//! Checks on single paths, group elements and the partition oracles.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::distances::{rho_level, DistanceKind, LevelDistanceSpec};
use crate::error::{Error, Result};
use crate::norms::{
    frac_sobolev_norm, holder_norm, mixed_norm, nikolskii_norm, qvar_norm, qvar_table, refined_nikolskii_norm,
    riesz_norm, riesz_table, Exponent,
};
use crate::oracle::{cc_norm_bruteforce, enumerate_partition_supremum};
use crate::path::{lift, EuclideanPath, GridInterval, GroupPath, MetricPath, TimeGrid};
use crate::tensor::{GroupElement, TruncatedTensor};
use crate::verify::family::{FamilyKind, PathFamily};
use crate::verify::record::{CheckParams, CheckRecord};

/// Relative slack for constant-1 inequalities and grid equalities.
pub const EXACT_TOL: f64 = 1e-9;
/// Relative tolerance of the algebra suite.
pub const ALGEBRA_TOL: f64 = 1e-11;
/// Admissible ratio between empirical constants on two grids.
pub const REFINEMENT_BAND: f64 = 2.0;

pub(crate) fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-300 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

/// Largest `lhs/rhs`, treating `0/0` as 0.
pub(crate) fn ratio(lhs: f64, rhs: f64) -> f64 {
    if lhs == 0.0 {
        0.0
    } else {
        lhs / rhs
    }
}

/// Keeps the `(lhs, rhs)` pair with the largest excess `lhs − c·rhs`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Worst {
    pub lhs: f64,
    pub rhs: f64,
    excess: f64,
}

impl Worst {
    pub fn new() -> Self {
        Self { lhs: 0.0, rhs: 0.0, excess: f64::NEG_INFINITY }
    }

    pub fn push(&mut self, lhs: f64, rhs: f64, c: f64) {
        let excess = if lhs.is_finite() && rhs.is_finite() { lhs - c * rhs } else { f64::INFINITY };
        if excess > self.excess || self.excess == f64::NEG_INFINITY {
            *self = Self { lhs, rhs, excess };
        }
    }

    pub fn merge(mut self, other: Self) -> Self {
        if other.excess > self.excess {
            self = other;
        }
        self
    }
}

/// `ω(s,t) + ω(t,u) ≤ ω(s,u)(1 + 1e-9)` over all grid triples.
pub fn check_superadditivity(id: &str, points: usize, omega: impl Fn(usize, usize) -> f64 + Sync) -> CheckRecord {
    let worst = (0..points)
        .into_par_iter()
        .map(|s| {
            let mut w = Worst::new();
            for t in s..points {
                for u in t..points {
                    let outer = omega(s, u);
                    w.push(omega(s, t) + omega(t, u), outer, 1.0 + EXACT_TOL);
                }
            }
            w
        })
        .reduce(Worst::new, Worst::merge);
    CheckRecord::inequality(id, CheckParams::none(), worst.lhs, worst.rhs, 1.0, EXACT_TOL)
        .with_notes(format!("worst triple over {points} grid points"))
}

/// Superadditivity of `ω^α ω̃^β` for superadditive `ω, ω̃` and `α + β ≥ 1`.
pub fn check_superadditive_product(
    id: &str,
    points: usize,
    omega: impl Fn(usize, usize) -> f64 + Sync,
    omega_tilde: impl Fn(usize, usize) -> f64 + Sync,
    alpha: f64,
    beta: f64,
) -> CheckRecord {
    let prod = |s: usize, t: usize| omega(s, t).powf(alpha) * omega_tilde(s, t).powf(beta);
    let mut rec = check_superadditivity(id, points, prod);
    rec.notes = format!("α = {alpha}, β = {beta}; {}", rec.notes);
    rec
}

fn random_tensor(rng: &mut ChaCha8Rng, dim: usize, depth: usize) -> TruncatedTensor {
    let levels = (0..=depth)
        .map(|k| (0..dim.pow(k as u32)).map(|_| rng.sample::<f64, _>(StandardNormal)).collect())
        .collect();
    TruncatedTensor::from_levels(dim, depth, levels).expect("shape is consistent")
}

fn random_path(rng: &mut ChaCha8Rng, dim: usize, intervals: usize) -> EuclideanPath {
    let mut times = vec![0.0];
    for _ in 0..intervals {
        let last = *times.last().expect("non-empty");
        times.push(last + rng.random_range(0.05..1.0));
    }
    let grid = TimeGrid::new(times).expect("increasing times");
    let mut pos = vec![0.0; dim];
    let mut values = vec![pos.clone()];
    for _ in 0..intervals {
        pos.iter_mut().for_each(|x| *x += rng.sample::<f64, _>(StandardNormal));
        values.push(pos.clone());
    }
    EuclideanPath::new(grid, values).expect("consistent path")
}

fn random_element(rng: &mut ChaCha8Rng, dim: usize, depth: usize) -> GroupElement {
    let segments = rng.random_range(1..=4);
    let path = random_path(rng, dim, segments);
    lift(&path, depth).expect("depth within cap").value(segments).clone()
}

fn tensor_rel_diff(a: &TruncatedTensor, b: &TruncatedTensor) -> f64 {
    a.max_abs_diff(b) / a.max_abs().max(b.max_abs()).max(1.0)
}

/// Chen identity, associativity, inverses, dilation homogeneity and
/// left invariance on `trials` seeded random instances with `N, n ≤ 3`.
pub fn check_algebra(seed: u64, trials: usize) -> Vec<CheckRecord> {
    #[derive(Default, Clone, Copy)]
    struct Errs {
        assoc: f64,
        inverse: f64,
        chen: f64,
        dilation: f64,
        dilation_hom: f64,
        left_inv: f64,
        symmetry: f64,
    }
    let errs: Vec<Errs> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64 + 1);
            let dim = rng.random_range(1..=3);
            let depth = rng.random_range(1..=3);
            let (a, b, c) = (
                random_tensor(&mut rng, dim, depth),
                random_tensor(&mut rng, dim, depth),
                random_tensor(&mut rng, dim, depth),
            );
            let lhs = a.mul(&b).and_then(|ab| ab.mul(&c)).expect("same shape");
            let rhs = b.mul(&c).and_then(|bc| a.mul(&bc)).expect("same shape");
            let mut e = Errs { assoc: tensor_rel_diff(&lhs, &rhs), ..Errs::default() };

            let g = random_element(&mut rng, dim, depth);
            let h = random_element(&mut rng, dim, depth);
            let k = random_element(&mut rng, dim, depth);
            let unit = GroupElement::identity(dim, depth).expect("valid shape");
            let gi = g.inverse();
            e.inverse = tensor_rel_diff(g.mul_unchecked(&gi).tensor(), unit.tensor())
                .max(tensor_rel_diff(gi.mul_unchecked(&g).tensor(), unit.tensor()));

            let intervals = rng.random_range(2..=8);
            let path = random_path(&mut rng, dim, intervals);
            let split = rng.random_range(1..intervals);
            let whole = lift(&path, depth).expect("depth within cap");
            let t = path.grid().times();
            let head_grid = TimeGrid::new(t[..=split].to_vec()).expect("prefix of a grid");
            let tail_grid = TimeGrid::new(t[split..].iter().map(|x| x - t[split]).collect()).expect("shifted grid");
            let head = EuclideanPath::new(head_grid, path.points().take(split + 1).map(<[f64]>::to_vec).collect())
                .expect("prefix path");
            let tail = EuclideanPath::new(tail_grid, path.points().skip(split).map(<[f64]>::to_vec).collect())
                .expect("suffix path");
            let xh = lift(&head, depth).expect("depth within cap");
            let xt = lift(&tail, depth).expect("depth within cap");
            let chen = xh.value(split).mul_unchecked(xt.value(intervals - split));
            e.chen = tensor_rel_diff(chen.tensor(), whole.value(intervals).tensor());

            let norm = g.homogeneous_norm();
            for lambda in [0.5, 2.0, 10.0, -2.0] {
                e.dilation_hom = e.dilation_hom.max(rel_err(g.dilate(lambda).homogeneous_norm(), lambda.abs() * norm));
                let lhs = g.mul_unchecked(&h).dilate(lambda);
                let rhs = g.dilate(lambda).mul_unchecked(&h.dilate(lambda));
                e.dilation = e.dilation.max(tensor_rel_diff(lhs.tensor(), rhs.tensor()));
            }
            let d = crate::tensor::group_distance(&g, &h).expect("same shape");
            let kd = crate::tensor::group_distance(&k.mul_unchecked(&g), &k.mul_unchecked(&h)).expect("same shape");
            e.left_inv = rel_err(d, kd);
            e.symmetry = rel_err(d, crate::tensor::group_distance(&h, &g).expect("same shape"));
            e
        })
        .collect();
    let max = |f: fn(&Errs) -> f64| errs.iter().map(f).fold(0.0, f64::max);
    let note = format!("{trials} seeded trials, N ≤ 3, n ≤ 3");
    let rec = |id: &str, v: f64, tol: f64| {
        CheckRecord::inequality(id, CheckParams::none(), v, tol, 1.0, 0.0).with_notes(note.clone())
    };
    vec![
        rec("algebra.associativity", max(|e| e.assoc), ALGEBRA_TOL),
        rec("algebra.inverse", max(|e| e.inverse), ALGEBRA_TOL),
        rec("algebra.chen_identity", max(|e| e.chen), ALGEBRA_TOL),
        rec("algebra.dilation_homomorphism", max(|e| e.dilation), ALGEBRA_TOL),
        rec("algebra.dilation_homogeneity", max(|e| e.dilation_hom), ALGEBRA_TOL),
        rec("algebra.left_invariance", max(|e| e.left_inv), 1e-10),
        rec("algebra.distance_symmetry", max(|e| e.symmetry), 1e-12),
    ]
}

fn random_uniform_path(rng: &mut ChaCha8Rng, dim: usize, intervals: usize) -> EuclideanPath {
    let horizon = rng.random_range(0.5..2.0);
    let grid = TimeGrid::uniform(horizon, intervals).expect("valid grid");
    let mut pos = vec![0.0; dim];
    let mut values = vec![pos.clone()];
    for _ in 0..intervals {
        pos.iter_mut().for_each(|x| *x += rng.sample::<f64, _>(StandardNormal));
        values.push(pos.clone());
    }
    EuclideanPath::new(grid, values).expect("consistent path")
}

/// Partition supremum by enumeration; `w` may itself call the oracle.
fn enumerate(grid: &TimeGrid, iv: GridInterval, w: impl Fn(usize, usize) -> f64) -> f64 {
    enumerate_partition_supremum(grid, iv, w).expect("interval within the oracle cap")
}

fn oracle_qvar_power(path: &dyn MetricPath, q: f64, iv: GridInterval) -> f64 {
    enumerate(path.grid(), iv, |u, v| path.distance(u, v).powf(q))
}

/// Euclidean norm of the level-`k` increment difference.
fn level_diff(x1: &GroupPath, x2: &GroupPath, k: usize, u: usize, v: usize) -> f64 {
    let a = x1.increment(u, v).expect("ordered indices");
    let b = x2.increment(u, v).expect("ordered indices");
    a.level(k).iter().zip(b.level(k)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// DP values against full enumeration on `trials` random paths with at
/// most 10 grid points, for every partition-supremum norm and distance.
pub fn check_oracle_equivalence(seed: u64, trials: usize) -> Vec<CheckRecord> {
    const KINDS: usize = 8;
    let names = [
        "oracle.qvar",
        "oracle.riesz",
        "oracle.mixed",
        "oracle.refined_nikolskii",
        "oracle.rho_qvar",
        "oracle.rho_riesz",
        "oracle.rho_mixed",
        "oracle.rho_nikolskii_hat",
    ];
    let errs: Vec<[f64; KINDS]> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0ac1e);
            rng.set_stream(i as u64 + 1);
            let dim = rng.random_range(1..=3);
            let intervals = rng.random_range(1..=9);
            let delta: f64 = rng.random_range(0.3..0.8);
            let p = 1.0 / delta + rng.random_range(0.0..4.0);
            let q: f64 = rng.random_range(1.0..4.0);
            let f = random_uniform_path(&mut rng, dim, intervals);
            let grid = f.grid().clone();
            let dt = grid.mesh().expect("uniform grid");
            let t = grid.times();
            let full = GridInterval::full(&grid);
            let mut e = [0.0; KINDS];

            let qv = oracle_qvar_power(&f, q, full).powf(1.0 / q);
            e[0] = rel_err(qvar_norm(&f, q, full).expect("valid q"), qv);
            let expo = delta * p - 1.0;
            let rz = enumerate(&grid, full, |u, v| f.distance(u, v).powf(p) / (t[v] - t[u]).powf(expo)).powf(1.0 / p);
            e[1] = rel_err(riesz_norm(&f, delta, Exponent::Finite(p), full).expect("valid δ, p"), rz);
            let mx = enumerate(&grid, full, |u, v| {
                oracle_qvar_power(&f, 1.0 / delta, GridInterval::new(u, v)).powf(delta * p) / (t[v] - t[u]).powf(expo)
            })
            .powf(1.0 / p);
            e[2] = rel_err(mixed_norm(&f, delta, Exponent::Finite(p), full).expect("valid δ, p"), mx);
            let nk = enumerate(&grid, full, |u, v| {
                nikolskii_norm(&f, delta, Exponent::Finite(p), GridInterval::new(u, v)).expect("uniform grid").powf(p)
            })
            .powf(1.0 / p);
            e[3] = rel_err(refined_nikolskii_norm(&f, delta, Exponent::Finite(p), full).expect("uniform grid"), nk);

            let depth = rng.random_range(1..=3);
            let g = random_uniform_path(&mut rng, dim, intervals);
            let g = EuclideanPath::new(grid.clone(), g.points().map(<[f64]>::to_vec).collect()).expect("same shape");
            let (x1, x2) = (lift(&f, depth).expect("depth within cap"), lift(&g, depth).expect("depth within cap"));
            let level = rng.random_range(1..=depth);
            let kf = level as f64;
            let lvl = |kind: DistanceKind, p: f64| {
                rho_level(&x1, &x2, &LevelDistanceSpec { kind, delta, p, level }, full).expect("valid pair")
            };
            let diff = |u: usize, v: usize| level_diff(&x1, &x2, level, u, v);
            let inner_qvar = |iv: GridInterval| enumerate(&grid, iv, |u, v| diff(u, v).powf(1.0 / (delta * kf)));
            let o_qvar = enumerate(&grid, full, |u, v| diff(u, v).powf(q / kf)).powf(kf / q);
            e[4] = rel_err(lvl(DistanceKind::QVarDist, q), o_qvar);
            let o_riesz =
                enumerate(&grid, full, |u, v| diff(u, v).powf(p / kf) / (t[v] - t[u]).powf(expo)).powf(kf / p);
            e[5] = rel_err(lvl(DistanceKind::RieszDist, p), o_riesz);
            let o_mixed = enumerate(&grid, full, |u, v| {
                inner_qvar(GridInterval::new(u, v)).powf(delta * p) / (t[v] - t[u]).powf(expo)
            })
            .powf(kf / p);
            e[6] = rel_err(lvl(DistanceKind::MixedDist, p), o_mixed);
            let o_nik = enumerate(&grid, full, |u, v| {
                let mut top = 0.0_f64;
                for m in 1..=v - u {
                    let h = m as f64 * dt;
                    let sum: f64 = (u..v - m).map(|r| diff(r, r + m).powf(p / kf)).sum();
                    top = top.max(h.powf(-delta * p) * dt * sum);
                }
                top
            })
            .powf(kf / p);
            e[7] = rel_err(lvl(DistanceKind::NikolskiiHatDist, p), o_nik);
            e
        })
        .collect();
    (0..KINDS)
        .map(|k| {
            let worst = errs.iter().map(|e| e[k]).fold(0.0, f64::max);
            CheckRecord::inequality(names[k], CheckParams::none(), worst, EXACT_TOL, 1.0, 0.0)
                .with_notes(format!("max relative DP/enumeration gap over {trials} paths with ≤ 10 grid points"))
        })
        .collect()
}

/// Calibration of the Carnot–Carathéodory oracle against closed forms.
pub fn check_cc_calibration(seed: u64) -> Vec<CheckRecord> {
    let a = 0.25;
    let circle = 2.0 * (std::f64::consts::PI * a).sqrt();
    let area = GroupElement::pure_area(2, 2, 0, 1, a).expect("valid shape");
    let est = cc_norm_bruteforce(&area, 32).expect("n = N = 2");
    let mut out = vec![CheckRecord::inequality(
        "oracle.cc_pure_area",
        CheckParams::none(),
        rel_err(est.value, circle),
        0.05,
        1.0,
        0.0,
    )
    .with_notes(format!("estimate {} vs 2√(πa) = {circle}, converged = {}", est.value, est.converged))];

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xcc);
    let mut worst_seg = 0.0_f64;
    for _ in 0..5 {
        let d = [rng.sample::<f64, _>(StandardNormal), rng.sample::<f64, _>(StandardNormal)];
        let g = GroupElement::segment_exp(&d, 2).expect("finite increment");
        let est = cc_norm_bruteforce(&g, 16).expect("n = N = 2");
        worst_seg = worst_seg.max(rel_err(est.value, d[0].hypot(d[1])));
    }
    out.push(CheckRecord::inequality("oracle.cc_segment", CheckParams::none(), worst_seg, 0.01, 1.0, 0.0));

    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for _ in 0..4 {
        let g = random_element(&mut rng, 2, 2);
        let est = cc_norm_bruteforce(&g, 24).expect("n = N = 2");
        let r = est.value / g.homogeneous_norm();
        lo = lo.min(r);
        hi = hi.max(r);
    }
    out.push(
        CheckRecord::flag("oracle.cc_vs_homogeneous", CheckParams::none(), hi, lo >= 0.1 && hi <= 10.0)
            .with_notes(format!("cc/homogeneous ratio range [{lo}, {hi}], sanity band [0.1, 10]")),
    );
    out
}

fn sub_params(delta: f64, p: f64) -> (Option<f64>, Option<f64>) {
    let dp = (delta - 0.1).max(1.0 / p);
    let pp = (p / 2.0).max(1.0 / delta);
    ((dp < delta - 1e-12).then_some(dp), (pp < p - 1e-12).then_some(pp))
}

/// Constant-1 and closed-form inequalities between Riesz, variation and
/// Nikolskii norms on every grid subinterval of every family member.
pub fn check_explicit_embeddings(family: &PathFamily, delta: f64, p: f64) -> Result<Vec<CheckRecord>> {
    if !(delta > 0.0 && delta < 1.0 && p * delta >= 1.0 && p.is_finite()) {
        return Err(Error::Parameter(format!("need δ ∈ (0,1) and 1/δ ≤ p < ∞, got δ = {delta}, p = {p}")));
    }
    let paths = family.paths()?;
    let (dprime, pprime) = sub_params(delta, p);
    let worst: Vec<[Worst; 5]> = paths
        .par_iter()
        .map(|f| -> Result<[Worst; 5]> {
            let mut w = [Worst::new(); 5];
            let t = f.grid().times();
            let qv = qvar_table(f, 1.0 / delta)?;
            let rz = riesz_table(f, delta, p)?;
            let rz_d = dprime.map(|d| riesz_table(f, d, p)).transpose()?;
            let rz_p = pprime.map(|q| riesz_table(f, delta, q)).transpose()?;
            for s in 0..t.len() {
                for e in s + 1..t.len() {
                    let len = t[e] - t[s];
                    let scale = len.powf(delta - 1.0 / p);
                    w[0].push(qv.get(s, e), rz.get(s, e) * scale, 1.0);
                    w[1].push(f.distance(s, e), rz.get(s, e) * scale, 1.0);
                    if let (Some(d), Some(tab)) = (dprime, &rz_d) {
                        w[2].push(tab.get(s, e), len.powf(delta - d) * rz.get(s, e), 1.0);
                    }
                    if let (Some(q), Some(tab)) = (pprime, &rz_p) {
                        w[3].push(tab.get(s, e), len.powf(1.0 / q - 1.0 / p) * rz.get(s, e), 1.0);
                    }
                }
            }
            let full = GridInterval::full(f.grid());
            let n = nikolskii_norm(f, delta, Exponent::Finite(p), full)?;
            let nh = refined_nikolskii_norm(f, delta, Exponent::Finite(p), full)?;
            w[4].push(n, nh, 1.0);
            Ok(w)
        })
        .collect::<Result<_>>()?;
    let fold = |i: usize| worst.iter().map(|w| w[i]).fold(Worst::new(), Worst::merge);
    let params = CheckParams::dp(delta, p);
    let note = format!("worst case over {} {} paths and all grid subintervals", family.count, family.kind);
    let rec = |id: &str, i: usize| {
        let w = fold(i);
        CheckRecord::inequality(id, params, w.lhs, w.rhs, 1.0, EXACT_TOL).with_notes(note.clone())
    };
    let mut out = vec![rec("embeddings.interpolation_bound", 0), rec("embeddings.riesz_holder_bound", 1)];
    match dprime {
        Some(d) => out.push(rec("embeddings.riesz_delta_monotone", 2).with_notes(format!("δ' = {d}; {note}"))),
        None => log::info!("skipping δ' < δ comparison: no admissible δ' for δ = {delta}, p = {p}"),
    }
    match pprime {
        Some(q) => out.push(rec("embeddings.riesz_p_monotone", 3).with_notes(format!("p' = {q}; {note}"))),
        None => log::info!("skipping p' < p comparison: no admissible p' for δ = {delta}, p = {p}"),
    }
    let mut nn = rec("embeddings.nikolskii_le_refined", 4);
    nn.notes = format!("full interval only; {}", nn.notes);
    out.push(nn);
    Ok(out)
}

/// Largest `lhs/rhs` over the family for a pair of full-interval norms.
fn max_ratio(
    paths: &[EuclideanPath],
    num: impl Fn(&EuclideanPath) -> Result<f64> + Sync,
    den: impl Fn(&EuclideanPath) -> Result<f64> + Sync,
) -> Result<f64> {
    let r: Vec<f64> = paths.par_iter().map(|f| Ok(ratio(num(f)?, den(f)?))).collect::<Result<_>>()?;
    Ok(r.into_iter().fold(0.0, f64::max))
}

/// Empirical constants of the implicit-constant inclusions
/// `W ⊂ V ⊂ N` and `N^{δ+ε} ⊂ N̂`, compared across one grid refinement.
pub fn check_implicit_embeddings(family: &PathFamily, delta: f64, p: f64) -> Result<Vec<CheckRecord>> {
    let eps = (0.1_f64).min((1.0 - delta) / 2.0);
    let pe = Exponent::Finite(p);
    let constants = |intervals: usize| -> Result<[f64; 3]> {
        let paths = family.sample(intervals)?;
        let full = |f: &EuclideanPath| GridInterval::full(f.grid());
        Ok([
            max_ratio(&paths, |f| riesz_norm(f, delta, pe, full(f)), |f| frac_sobolev_norm(f, delta, p, full(f)))?,
            max_ratio(&paths, |f| nikolskii_norm(f, delta, pe, full(f)), |f| riesz_norm(f, delta, pe, full(f)))?,
            max_ratio(
                &paths,
                |f| refined_nikolskii_norm(f, delta, pe, full(f)),
                |f| nikolskii_norm(f, delta + eps, pe, full(f)),
            )?,
        ])
    };
    let coarse = constants(family.intervals)?;
    let fine = constants(2 * family.intervals)?;
    let params = CheckParams::dp(delta, p);
    let ids = ["embeddings.sobolev_in_riesz", "embeddings.riesz_in_nikolskii", "embeddings.nikolskii_in_refined"];
    let notes = [
        "C = max ‖f‖_V / ‖f‖_W".to_string(),
        "C = max ‖f‖_N / ‖f‖_V".to_string(),
        format!("C = max ‖f‖_N̂ / ‖f‖_N^(δ+ε), ε = {eps}"),
    ];
    Ok((0..3)
        .map(|i| {
            CheckRecord::empirical(ids[i], params, fine[i], coarse[i], REFINEMENT_BAND).with_notes(format!(
                "{}; grids {} and {} intervals",
                notes[i],
                family.intervals,
                2 * family.intervals
            ))
        })
        .collect())
}

pub fn check_embedding_chain(family: &PathFamily, delta: f64, p: f64) -> Result<Vec<CheckRecord>> {
    let mut out = check_explicit_embeddings(family, delta, p)?;
    out.extend(check_implicit_embeddings(family, delta, p)?);
    Ok(out)
}

/// Composite Simpson rule for `(∫_0^T |f'|^p)^{1/p}`.
fn derivative_lp(derivative: impl Fn(f64) -> Vec<f64>, horizon: f64, p: f64) -> f64 {
    let n = 20_000;
    let h = horizon / n as f64;
    let g = |t: f64| derivative(t).iter().map(|x| x * x).sum::<f64>().sqrt().powf(p);
    let mut sum = g(0.0) + g(horizon);
    for j in 1..n {
        sum += if j % 2 == 1 { 4.0 } else { 2.0 } * g(j as f64 * h);
    }
    (sum * h / 3.0).powf(1.0 / p)
}

/// At `δ = 1` the Riesz, mixed and refined Nikolskii norms all equal
/// `‖f'‖_{L^p}`; checked against quadrature with relative tolerance `tol`.
pub fn check_bounded_variation_identity(family: &PathFamily, p: f64, tol: f64) -> Result<Vec<CheckRecord>> {
    let grid = TimeGrid::uniform(family.horizon, family.intervals)?;
    let gens = family.generators();
    if gens.iter().any(|g| g.derivative(0.0).is_none()) {
        return Err(Error::Parameter(format!("{} paths have no closed-form derivative", family.kind)));
    }
    let pe = Exponent::Finite(p);
    let errs: Vec<[f64; 3]> = gens
        .par_iter()
        .map(|g| -> Result<[f64; 3]> {
            let f = g.sample(&grid)?;
            let exact = derivative_lp(|t| g.derivative(t).expect("checked above"), family.horizon, p);
            let full = GridInterval::full(&grid);
            Ok([
                rel_err(riesz_norm(&f, 1.0, pe, full)?, exact),
                rel_err(mixed_norm(&f, 1.0, pe, full)?, exact),
                rel_err(refined_nikolskii_norm(&f, 1.0, pe, full)?, exact),
            ])
        })
        .collect::<Result<_>>()?;
    let ids = ["bv_identity.riesz", "bv_identity.mixed", "bv_identity.refined_nikolskii"];
    Ok((0..3)
        .map(|i| {
            let worst = errs.iter().map(|e| e[i]).fold(0.0, f64::max);
            CheckRecord::inequality(ids[i], CheckParams::dp(1.0, p), worst, tol, 1.0, 0.0).with_notes(format!(
                "max relative gap to ‖f'‖_Lp quadrature over {} paths, {} intervals",
                family.count, family.intervals
            ))
        })
        .collect())
}

/// `‖f‖_{W^{δ,p}} ≤ (2/((δ'−δ)p))^{1/p} ‖f‖_{N^{δ',p}} T^{δ'−δ}` with
/// relative slack `slack` for quadrature.
pub fn check_sobolev_nikolskii(
    family: &PathFamily,
    delta: f64,
    delta_prime: f64,
    p: f64,
    slack: f64,
) -> Result<CheckRecord> {
    if !(0.0 < delta && delta < delta_prime && delta_prime <= 1.0) {
        return Err(Error::Parameter(format!("need 0 < δ < δ' ≤ 1, got δ = {delta}, δ' = {delta_prime}")));
    }
    let c = (2.0 / ((delta_prime - delta) * p)).powf(1.0 / p);
    let paths = family.paths()?;
    let worst = paths
        .par_iter()
        .map(|f| -> Result<Worst> {
            let full = GridInterval::full(f.grid());
            let w = frac_sobolev_norm(f, delta, p, full)?;
            let n = nikolskii_norm(f, delta_prime, Exponent::Finite(p), full)?;
            let mut worst = Worst::new();
            worst.push(w, n * f.grid().horizon().powf(delta_prime - delta), c);
            Ok(worst)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(Worst::new(), Worst::merge);
    Ok(CheckRecord::inequality("embeddings.sobolev_nikolskii", CheckParams::dp(delta, p), worst.lhs, worst.rhs, c, slack)
        .with_notes(format!(
            "δ' = {delta_prime}, constant (2/((δ'−δ)p))^(1/p); {} {} paths on {} intervals",
            family.count, family.kind, family.intervals
        )))
}

/// `|‖f‖_{V^{δ,p}} − ‖f‖_{δ-Höl}|` is non-increasing over `ps` and the last
/// gap is below `final_gap` times the Hölder norm.
pub fn check_riesz_limit(family: &PathFamily, delta: f64, ps: &[f64], final_gap: f64) -> Result<Vec<CheckRecord>> {
    let paths = family.paths()?;
    let stats: Vec<(f64, f64, f64)> = paths
        .par_iter()
        .map(|f| -> Result<(f64, f64, f64)> {
            let full = GridInterval::full(f.grid());
            let hol = holder_norm(f, delta, full)?;
            let gaps: Vec<f64> = ps
                .iter()
                .map(|&p| Ok((riesz_norm(f, delta, Exponent::Finite(p), full)? - hol).abs()))
                .collect::<Result<_>>()?;
            let rise = gaps.windows(2).map(|w| w[1] - w[0] - 1e-12 * hol).fold(0.0_f64, f64::max);
            Ok((rise, *gaps.last().unwrap_or(&0.0), hol))
        })
        .collect::<Result<_>>()?;
    let rise = stats.iter().map(|s| s.0).fold(0.0, f64::max);
    let mut worst = Worst::new();
    for &(_, gap, hol) in &stats {
        worst.push(gap, hol, final_gap);
    }
    let params = CheckParams::delta(delta);
    Ok(vec![
        CheckRecord::flag(format!("riesz_limit.monotone.{}", family.kind), params, rise, rise <= 0.0)
            .with_notes(format!("largest increase of the Riesz/Hölder gap over p ∈ {ps:?}")),
        CheckRecord::inequality(format!("riesz_limit.final_gap.{}", family.kind), params, worst.lhs, worst.rhs, final_gap, 0.0)
            .with_notes(format!("gap at p = {} against {final_gap} × Hölder norm", ps.last().copied().unwrap_or(f64::NAN))),
    ])
}

/// `V = Ṽ` on the grid and two-sided empirical constants between `Ṽ` and `N̂`.
pub fn check_riesz_characterization(family: &PathFamily, delta: f64, p: f64) -> Result<Vec<CheckRecord>> {
    let pe = Exponent::Finite(p);
    let paths = family.paths()?;
    let eq = paths
        .par_iter()
        .map(|f| -> Result<(f64, f64, f64)> {
            let full = GridInterval::full(f.grid());
            let v = riesz_norm(f, delta, pe, full)?;
            let vt = mixed_norm(f, delta, pe, full)?;
            Ok((rel_err(v, vt), v, vt))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0.0, 0.0, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    let params = CheckParams::dp(delta, p);
    let mut out = vec![CheckRecord::equality("characterization.riesz_eq_mixed", params, eq.1, eq.2, EXACT_TOL)
        .with_notes(format!("worst relative gap {} over {} {} paths", eq.0, family.count, family.kind))];
    let constants = |intervals: usize| -> Result<(f64, f64)> {
        let paths = family.sample(intervals)?;
        let full = |f: &EuclideanPath| GridInterval::full(f.grid());
        let c1 = max_ratio(&paths, |f| refined_nikolskii_norm(f, delta, pe, full(f)), |f| mixed_norm(f, delta, pe, full(f)))?;
        let c2 = max_ratio(&paths, |f| mixed_norm(f, delta, pe, full(f)), |f| refined_nikolskii_norm(f, delta, pe, full(f)))?;
        Ok((c1, c2))
    };
    let (c1, c2) = constants(family.intervals)?;
    let (f1, f2) = constants(2 * family.intervals)?;
    out.push(
        CheckRecord::empirical("characterization.refined_le_mixed", params, f1, c1, REFINEMENT_BAND)
            .with_notes("C = max ‖f‖_N̂ / ‖f‖_Ṽ on two grids"),
    );
    out.push(
        CheckRecord::empirical("characterization.mixed_le_refined", params, f2, c2, REFINEMENT_BAND)
            .with_notes("C = max ‖f‖_Ṽ / ‖f‖_N̂ on two grids"),
    );
    Ok(out)
}

/// Negative control: the false claim `‖f‖_{1-var} ≤ |f_T − f_0|` on a zigzag family.
pub fn check_reversed_variation_control(family: &PathFamily) -> Result<CheckRecord> {
    let paths = family.paths()?;
    let mut worst = Worst::new();
    for f in &paths {
        let full = GridInterval::full(f.grid());
        worst.push(qvar_norm(f, 1.0, full)?, f.distance(0, f.grid().intervals()), 1.0);
    }
    Ok(CheckRecord::inequality("negative.reversed_variation", CheckParams::p(1.0), worst.lhs, worst.rhs, 1.0, EXACT_TOL)
        .negative_control()
        .with_notes(format!("deliberately false inequality on {} {} paths", family.count, family.kind)))
}

/// Superadditivity of `t − s`, `(t − s)²`, a product, and the negative
/// control `√(t − s)` on a uniform grid.
pub fn check_superadditivity_controls(points: usize) -> Vec<CheckRecord> {
    let len = |s: usize, t: usize| (t - s) as f64 / (points - 1) as f64;
    let mut out = vec![
        check_superadditivity("superadditivity.length", points, len),
        check_superadditivity("superadditivity.length_squared", points, |s, t| len(s, t).powi(2)),
    ];
    for (a, b) in [(0.5, 0.5), (1.0, 0.2)] {
        out.push(check_superadditive_product(
            &format!("superadditivity.product_{a}_{b}"),
            points,
            len,
            |s, t| len(s, t).powi(2),
            a,
            b,
        ));
    }
    out.push(check_superadditivity("negative.sqrt_length", points, |s, t| len(s, t).sqrt()).negative_control());
    out
}

/// Family used by checks that need a non-trivial Hölder-regular member set.
pub fn default_family(kind: FamilyKind, count: usize, intervals: usize, seed: u64) -> PathFamily {
    PathFamily::new(kind, count, intervals, 2, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn superadditivity_controls_behave() {
        let recs = check_superadditivity_controls(12);
        for r in &recs {
            assert!(r.ok(), "{r:?}");
        }
        assert!(recs.iter().any(|r| r.expect_fail && !r.pass));
    }

    #[test]
    fn algebra_small_run_passes() {
        for r in check_algebra(3, 40) {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn oracle_small_run_passes() {
        for r in check_oracle_equivalence(5, 12) {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn explicit_embeddings_hold() {
        let fam = PathFamily::new(FamilyKind::RandomWalk, 4, 24, 2, 9);
        for r in check_explicit_embeddings(&fam, 0.4, 3.0).unwrap() {
            assert!(r.pass, "{r:?}");
        }
    }

    #[test]
    fn reversed_control_fails() {
        let fam = PathFamily::new(FamilyKind::Zigzag, 3, 32, 1, 2);
        let r = check_reversed_variation_control(&fam).unwrap();
        assert!(!r.pass && r.ok());
    }

    #[test]
    fn derivative_quadrature_on_linear_function() {
        let v = derivative_lp(|_| vec![3.0, 4.0], 2.0, 2.0);
        assert!((v - (25.0_f64 * 2.0).sqrt()).abs() < 1e-12);
    }
}
