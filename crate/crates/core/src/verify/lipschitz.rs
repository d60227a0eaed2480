//! Local Lipschitz continuity of the Itô–Lyons map, measured on seeded trials.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::distances::{rho_aggregate, DistanceKind, DistanceSpec};
use crate::error::{Error, Result};
use crate::norms::{mixed_norm, Exponent};
use crate::path::{lift, EuclideanPath, GridInterval, GroupPath, TimeGrid};
use crate::rde::{solve_bv, solve_rough, RdeConfig};
use crate::vector_field::VectorField;
use crate::verify::checks::{ratio, rel_err, REFINEMENT_BAND};
use crate::verify::family::FamilyKind;
use crate::verify::record::{CheckParams, CheckRecord};
use crate::verify::rough::PairFamily;

pub const B_CELLS: [f64; 3] = [0.25, 0.5, 1.0];
pub const L_CELLS: [f64; 2] = [0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LipschitzConfig {
    pub pairs: usize,
    /// Coarse grid; the refinement run uses twice as many intervals.
    pub intervals: usize,
    pub delta: f64,
    pub p: f64,
    pub gamma: f64,
    pub depth: usize,
    pub b: f64,
    pub l: f64,
    pub substeps: usize,
    pub box_radius: f64,
    pub seed: u64,
}

impl LipschitzConfig {
    /// Rough regime: `δ = 0.45`, `p = 4`, `γ = 2.5`, `N = 2`, `b = l = 1`.
    pub fn rough(pairs: usize, intervals: usize, seed: u64) -> Self {
        Self {
            pairs,
            intervals,
            delta: 0.45,
            p: 4.0,
            gamma: 2.5,
            depth: 2,
            b: 1.0,
            l: 1.0,
            substeps: 4,
            box_radius: 10.0,
            seed,
        }
    }

    /// Bounded-variation regime: `δ = 1`, `N = 1`, `Lip¹` fields, EulerBV.
    pub fn bounded_variation(pairs: usize, intervals: usize, seed: u64) -> Self {
        Self { delta: 1.0, gamma: 1.0, depth: 1, ..Self::rough(pairs, intervals, seed) }
    }

    fn is_bv(&self) -> bool {
        self.delta == 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if self.pairs == 0 || self.intervals == 0 || self.substeps == 0 {
            return Err(Error::Parameter("pairs, intervals and substeps must be positive".into()));
        }
        if !(self.delta > 0.0 && self.delta <= 1.0 && self.p.is_finite() && self.delta * self.p > 1.0) {
            return Err(Error::Parameter(format!("need δ ∈ (0,1] and δ > 1/p, got δ = {}, p = {}", self.delta, self.p)));
        }
        if self.is_bv() {
            if self.depth != 1 {
                return Err(Error::Parameter("the δ = 1 regime runs at depth 1".into()));
            }
        } else {
            if self.gamma <= 1.0 / self.delta {
                return Err(Error::Parameter(format!("need γ > 1/δ, got γ = {}, δ = {}", self.gamma, self.delta)));
            }
            if self.depth != (1.0 / self.delta).floor() as usize {
                return Err(Error::Parameter(format!("depth must be ⌊1/δ⌋ = {}", (1.0 / self.delta).floor())));
            }
        }
        if !(self.b > 0.0 && self.l > 0.0 && self.box_radius > 0.0) {
            return Err(Error::Parameter("b, l and the box radius must be positive".into()));
        }
        Ok(())
    }

    fn params(&self) -> CheckParams {
        CheckParams {
            delta: Some(self.delta),
            p: Some(self.p),
            gamma: Some(self.gamma),
            b: Some(self.b),
            l: Some(self.l),
        }
    }
}

/// Inputs of one trial, shared by both grids.
struct Trial {
    lambda: f64,
    driver_norm: f64,
    fields: (VectorField, VectorField),
    field_norm: f64,
    y0: (Vec<f64>, Vec<f64>),
}

#[derive(Debug, Clone, Copy)]
struct Outcome {
    r: f64,
    driver_norm: f64,
    field_norm: f64,
}

fn random_field(rng: &mut ChaCha8Rng, m: usize, n: usize, radius: f64) -> Result<VectorField> {
    let mut draw = |len: usize| -> Vec<Vec<f64>> {
        (0..n).map(|_| (0..len).map(|_| rng.sample::<f64, _>(StandardNormal)).collect()).collect()
    };
    let offsets = draw(m);
    let linear = draw(m * m);
    let quadratic = draw(m * m * m);
    VectorField::polynomial(&offsets, &linear, &quadratic, m, radius)
}

/// `‖V¹ − V²‖` appearing in the bound: `Lip^{γ−1}` in the rough regime,
/// the sampled sup norm in the bounded-variation regime.
fn field_gap(cfg: &LipschitzConfig, v1: &VectorField, v2: &VectorField, center: &[f64]) -> Result<f64> {
    if cfg.is_bv() {
        Ok(v1.difference(v2)?.derivative_bounds(center)?.value)
    } else {
        v1.lip_distance(v2, cfg.gamma - 1.0, center)
    }
}

fn driver_norm(cfg: &LipschitzConfig, x: &GroupPath) -> Result<f64> {
    mixed_norm(x, cfg.delta, Exponent::Finite(cfg.p), GridInterval::full(x.grid()))
}

fn solve(cfg: &LipschitzConfig, y0: &[f64], v: &VectorField, x: &GroupPath) -> Result<EuclideanPath> {
    if cfg.is_bv() {
        solve_bv(y0, v, &x.level_one(), &RdeConfig::euler_bv(cfg.substeps))
    } else {
        solve_rough(y0, v, x, &RdeConfig::rough(cfg.depth, cfg.substeps))
    }
}

/// Lipschitz ratio for one trial on one grid; `Ok(None)` on blow-up.
fn ratio_on_grid(cfg: &LipschitzConfig, trial: &Trial, driver: (&EuclideanPath, &EuclideanPath)) -> Result<Option<f64>> {
    let x1 = lift(&driver.0.scaled(trial.lambda), cfg.depth)?;
    let x2 = lift(&driver.1.scaled(trial.lambda), cfg.depth)?;
    let (v1, v2) = &trial.fields;
    let (y1, y2) = (solve(cfg, &trial.y0.0, v1, &x1), solve(cfg, &trial.y0.1, v2, &x2));
    let (y1, y2) = match (y1, y2) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(Error::BlowUp { .. }), _) | (_, Err(Error::BlowUp { .. })) => return Ok(None),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let full = GridInterval::full(x1.grid());
    let num = mixed_norm(&y1.difference(&y2)?, cfg.delta, Exponent::Finite(cfg.p), full)?;
    let dy0 = trial.y0.0.iter().zip(&trial.y0.1).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
    let rho = if cfg.is_bv() {
        mixed_norm(&x1.level_one().difference(&x2.level_one())?, 1.0, Exponent::Finite(cfg.p), full)?
    } else {
        rho_aggregate(&x1, &x2, &DistanceSpec::new(DistanceKind::MixedDist, cfg.delta, cfg.p), full)?
    };
    let den = field_gap(cfg, v1, v2, &trial.y0.0)? + dy0 + rho;
    Ok(Some(ratio(num, den)))
}

fn build_trial(
    cfg: &LipschitzConfig,
    index: usize,
    pairs: &PairFamily,
    fine: &(EuclideanPath, EuclideanPath),
) -> Result<Trial> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x11b5);
    rng.set_stream(index as u64 + 1);
    let (m, n) = (2, fine.0.dim());
    let eps = pairs.epsilon(index);

    // Drivers: common dilation so that max_i ‖X^i‖_Ṽ = b·u on the fine grid,
    // which bounds the coarse-grid norms as well.
    let u = rng.random_range(0.05..=1.0);
    let norm = |f: &EuclideanPath| driver_norm(cfg, &lift(f, cfg.depth)?);
    let top = norm(&fine.0)?.max(norm(&fine.1)?);
    let lambda = if top > 0.0 { cfg.b * u / top } else { 1.0 };
    let dilated = |f: &EuclideanPath| norm(&f.scaled(lambda));
    let driver_norm = dilated(&fine.0)?.max(dilated(&fine.1)?);

    let center = vec![0.0; m];
    let lip = |v: &VectorField| v.lip_norm(cfg.gamma, &center);
    let target = cfg.l * rng.random_range(0.1..=1.0);
    let base = random_field(&mut rng, m, n, cfg.box_radius)?;
    let v1 = base.scaled(target / lip(&base)?);
    let w = random_field(&mut rng, m, n, cfg.box_radius)?;
    let v2 = v1.difference(&w.scaled(-eps * target / lip(&w)?))?;
    let v2 = match lip(&v2)? {
        x if x > target => v2.scaled(target / x),
        _ => v2,
    };
    let fields = (v1.with_gamma(cfg.gamma.max(1.0))?, v2.with_gamma(cfg.gamma.max(1.0))?);
    let field_norm = lip(&fields.0)?.max(lip(&fields.1)?);

    let y1: Vec<f64> = (0..m).map(|_| rng.random_range(-0.1..0.1)).collect();
    let y2 = y1.iter().map(|y| y + eps * 0.1 * rng.sample::<f64, _>(StandardNormal)).collect();
    Ok(Trial { lambda, driver_norm, fields, field_norm, y0: (y1, y2) })
}

fn run_trials(cfg: &LipschitzConfig, kind: FamilyKind) -> Result<(Vec<Option<Outcome>>, Vec<Option<Outcome>>)> {
    cfg.validate()?;
    let pairs = PairFamily::new(kind, cfg.pairs, cfg.intervals, 2, cfg.seed);
    let coarse = pairs.sample(cfg.intervals)?;
    let fine = pairs.sample(2 * cfg.intervals)?;
    let results: Vec<(Option<Outcome>, Option<Outcome>)> = (0..cfg.pairs)
        .into_par_iter()
        .map(|i| {
            let trial = build_trial(cfg, i, &pairs, &fine[i])?;
            let tol = 1.0 + 1e-9;
            if trial.driver_norm > cfg.b * tol || trial.field_norm > cfg.l * tol {
                return Err(Error::Parameter(format!(
                    "trial {i} violates the ball: ‖X‖ = {}, ‖V‖ = {}",
                    trial.driver_norm, trial.field_norm
                )));
            }
            let wrap = |r: Option<f64>| {
                r.map(|r| Outcome { r, driver_norm: trial.driver_norm, field_norm: trial.field_norm })
            };
            let c = wrap(ratio_on_grid(cfg, &trial, (&coarse[i].0, &coarse[i].1))?);
            let f = wrap(ratio_on_grid(cfg, &trial, (&fine[i].0, &fine[i].1))?);
            Ok((c, f))
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().unzip())
}

/// Ratios `r = ‖Y¹−Y²‖_Ṽ / (‖V¹−V²‖ + |Δy0| + ρ_Ṽ(X¹,X²))` over seeded
/// trials inside the balls `b`, `l`; blow-ups are excluded and counted.
pub fn run_lipschitz_suite(cfg: &LipschitzConfig) -> Result<Vec<CheckRecord>> {
    let kind = if cfg.is_bv() { FamilyKind::SmoothFourier } else { FamilyKind::RandomWalk };
    let prefix = if cfg.is_bv() { "lipschitz_bv" } else { "lipschitz" };
    let (coarse, fine) = run_trials(cfg, kind)?;
    let params = cfg.params();
    let mut out = Vec::new();

    let valid: Vec<Outcome> = coarse.iter().zip(&fine).filter_map(|(c, f)| c.filter(|_| f.is_some())).collect();
    let blowups = cfg.pairs - valid.len();
    let finite = valid.iter().all(|o| o.r.is_finite());
    out.push(
        CheckRecord::flag(format!("{prefix}.ratios_finite"), params, valid.len() as f64, finite && !valid.is_empty())
            .with_notes(format!("{} trials, {blowups} excluded for blow-up", cfg.pairs)),
    );
    out.push(
        CheckRecord::flag(format!("{prefix}.blowups"), params, blowups as f64, 2 * blowups <= cfg.pairs)
            .with_notes("blow-up trials are excluded; passes while at least half the trials remain"),
    );

    let cell_max = |outcomes: &[Option<Outcome>], b: f64, l: f64| {
        outcomes
            .iter()
            .flatten()
            .filter(|o| o.driver_norm <= b * (1.0 + 1e-9) * cfg.b && o.field_norm <= l * (1.0 + 1e-9) * cfg.l)
            .map(|o| o.r)
            .fold(0.0, f64::max)
    };
    for l in L_CELLS {
        let maxes: Vec<f64> = B_CELLS.iter().map(|&b| cell_max(&coarse, b, l)).collect();
        for (b, m) in B_CELLS.iter().zip(&maxes) {
            let p = CheckParams { b: Some(b * cfg.b), l: Some(l * cfg.l), ..params };
            out.push(
                CheckRecord::flag(format!("{prefix}.max_ratio.b{b}.l{l}"), p, *m, m.is_finite())
                    .with_notes("max r over trials inside the (b, l) cell, coarse grid"),
            );
        }
        let monotone = maxes.windows(2).all(|w| w[0] <= w[1]);
        out.push(
            CheckRecord::flag(format!("{prefix}.monotone_in_b.l{l}"), CheckParams { l: Some(l * cfg.l), ..params }, maxes[2], monotone)
                .with_notes(format!("max r over nested balls b ∈ {B_CELLS:?}: {maxes:?}")),
        );
    }
    let max_c = valid.iter().map(|o| o.r).fold(0.0, f64::max);
    let max_f = fine.iter().flatten().map(|o| o.r).fold(0.0, f64::max);
    out.push(
        CheckRecord::empirical(format!("{prefix}.refinement"), params, max_f, max_c, REFINEMENT_BAND).with_notes(format!(
            "max r on {} and {} intervals",
            cfg.intervals,
            2 * cfg.intervals
        )),
    );
    Ok(out)
}

/// Scalar `V(y) = y` driven by `x¹(t) = t` and `x²(t) = t + ε sin(2πt)`:
/// numerator of the Lipschitz ratio from the solver against the closed form
/// `Y^i = y0·exp(x^i)`.
pub fn check_linear_closed_form_ratio() -> Result<CheckRecord> {
    let grid = TimeGrid::uniform(1.0, 256)?;
    let eps = 1e-2;
    let x1 = EuclideanPath::from_fn(grid.clone(), |t| vec![t])?;
    let x2 = EuclideanPath::from_fn(grid.clone(), |t| vec![t + eps * (std::f64::consts::TAU * t).sin()])?;
    let field = VectorField::linear(&[vec![1.0]], 1, 10.0)?;
    let cfg = RdeConfig::euler_bv(256);
    let diff_num = solve_bv(&[1.0], &field, &x1, &cfg)?.difference(&solve_bv(&[1.0], &field, &x2, &cfg)?)?;
    let exact = EuclideanPath::from_fn(grid.clone(), |t| {
        vec![t.exp() - (t + eps * (std::f64::consts::TAU * t).sin()).exp()]
    })?;
    let full = GridInterval::full(&grid);
    let p = 4.0;
    let num = mixed_norm(&diff_num, 1.0, Exponent::Finite(p), full)?;
    let den = mixed_norm(&exact, 1.0, Exponent::Finite(p), full)?;
    Ok(CheckRecord::inequality("lipschitz_bv.linear_closed_form", CheckParams::dp(1.0, p), rel_err(num, den), 0.01, 1.0, 0.0)
        .with_notes(format!("‖Y¹−Y²‖ solver {num} vs closed form {den}")))
}

/// `|Y_1 − e|` for `V(y) = y`, `x(t) = t`, `y0 = 1` with `10⁴` Euler substeps.
pub fn check_exp_closed_form() -> Result<CheckRecord> {
    let grid = TimeGrid::uniform(1.0, 100)?;
    let x = EuclideanPath::from_fn(grid, |t| vec![t])?;
    let field = VectorField::linear(&[vec![1.0]], 1, 10.0)?;
    let y = solve_bv(&[1.0], &field, &x, &RdeConfig::euler_bv(100))?;
    let err = (y.point(100)[0] - std::f64::consts::E).abs();
    Ok(CheckRecord::inequality("rde.exp_closed_form", CheckParams::none(), err, 2e-4, 1.0, 0.0)
        .with_notes("100 grid intervals × 100 substeps"))
}

/// Least-squares slope of `log₂ e` against halvings, and the smallest
/// pairwise order.
fn orders(errors: &[f64]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = errors.iter().enumerate().map(|(i, e)| (i as f64, -e.log2())).collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let min = errors.windows(2).map(|w| (w[0] / w[1]).log2()).fold(f64::INFINITY, f64::min);
    (sxy / sxx, min)
}

fn terminal_gap(a: &EuclideanPath, b: &EuclideanPath) -> f64 {
    let j = a.grid().intervals();
    a.point(j).iter().zip(b.point(j)).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

fn convergence_setup() -> Result<(EuclideanPath, VectorField)> {
    let grid = TimeGrid::uniform(1.0, 8)?;
    let x = EuclideanPath::from_fn(grid, |t| {
        let w = std::f64::consts::TAU * t;
        vec![w.sin() + 0.5 * (2.0 * w).cos() - 0.5, (w.cos() - 1.0) + 0.3 * t]
    })?;
    let field = VectorField::polynomial(
        &[vec![0.2, -0.1], vec![0.0, 0.3]],
        &[vec![0.1, -0.4, 0.3, 0.0], vec![0.2, 0.1, -0.3, 0.2]],
        &[vec![0.05, 0.0, 0.0, -0.05, 0.1, 0.0, 0.0, 0.02], vec![0.0, 0.03, 0.03, 0.0, -0.05, 0.0, 0.0, 0.04]],
        2,
        50.0,
    )?;
    Ok((x, field))
}

/// Observed orders of the step-2 rough Euler and the BV Euler schemes over
/// three substep halvings against a fine reference.
pub fn check_convergence_orders() -> Result<Vec<CheckRecord>> {
    let (x, field) = convergence_setup()?;
    let y0 = [0.1, -0.2];
    let steps = [8, 16, 32, 64];
    let lifted = lift(&x, 2)?;
    let reference = solve_rough(&y0, &field, &lifted, &RdeConfig::rough(2, 8192))?;
    let err2: Vec<f64> = steps
        .iter()
        .map(|&s| Ok(terminal_gap(&solve_rough(&y0, &field, &lifted, &RdeConfig::rough(2, s))?, &reference)))
        .collect::<Result<_>>()?;
    let (slope2, min2) = orders(&err2);
    let reference_bv = solve_bv(&y0, &field, &x, &RdeConfig::euler_bv(1 << 16))?;
    let err1: Vec<f64> = steps
        .iter()
        .map(|&s| Ok(terminal_gap(&solve_bv(&y0, &field, &x, &RdeConfig::euler_bv(s))?, &reference_bv)))
        .collect::<Result<_>>()?;
    let (slope1, min1) = orders(&err1);
    Ok(vec![
        CheckRecord::inequality("rde.step2_order", CheckParams::none(), 1.8, slope2, 1.0, 0.0)
            .with_notes(format!("fitted order {slope2}, smallest pairwise {min2}, errors {err2:?}; passes when order ≥ 1.8")),
        CheckRecord::inequality("rde.bv_order", CheckParams::none(), 0.9, slope1, 1.0, 0.0)
            .with_notes(format!("fitted order {slope1}, smallest pairwise {min1}, errors {err1:?}; passes when order ≥ 0.9")),
    ])
}

/// `X¹ = X²`, `V¹ = V²`, equal `y0`: numerator and denominator vanish and `r = 0`.
pub fn check_trivial_ratio() -> Result<CheckRecord> {
    let cfg = LipschitzConfig::rough(1, 16, 0);
    let grid = TimeGrid::uniform(1.0, 16)?;
    let f = EuclideanPath::from_fn(grid, |t| vec![(3.0 * t).sin(), t * t])?;
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let v = random_field(&mut rng, 2, 2, 10.0)?.scaled(0.1);
    let trial = Trial { lambda: 1.0, driver_norm: 0.0, fields: (v.clone(), v), field_norm: 0.0, y0: (vec![0.0; 2], vec![0.0; 2]) };
    let r = ratio_on_grid(&cfg, &trial, (&f, &f))?.unwrap_or(f64::NAN);
    Ok(CheckRecord::flag("lipschitz.identical_inputs", CheckParams::none(), r, r == 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms_pass() {
        assert!(check_exp_closed_form().unwrap().pass);
        assert!(check_linear_closed_form_ratio().unwrap().pass);
        assert!(check_trivial_ratio().unwrap().pass);
    }

    #[test]
    fn orders_of_exact_sequences() {
        let (s, m) = orders(&[1.0, 0.25, 0.0625, 0.015625]);
        assert!((s - 2.0).abs() < 1e-12 && (m - 2.0).abs() < 1e-12);
    }

    #[test]
    fn small_suites_run() {
        for cfg in [LipschitzConfig::rough(6, 16, 3), LipschitzConfig::bounded_variation(6, 16, 3)] {
            let recs = run_lipschitz_suite(&cfg).unwrap();
            assert!(recs.iter().any(|r| r.id.ends_with("ratios_finite") && r.pass), "{recs:?}");
        }
    }

    #[test]
    fn config_validation() {
        let mut cfg = LipschitzConfig::rough(2, 8, 0);
        cfg.gamma = 2.0;
        assert!(cfg.validate().is_err());
        let mut cfg = LipschitzConfig::rough(2, 8, 0);
        cfg.depth = 3;
        assert!(cfg.validate().is_err());
        assert!(LipschitzConfig::bounded_variation(2, 8, 0).validate().is_ok());
    }
}
