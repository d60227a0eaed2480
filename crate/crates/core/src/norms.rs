//! Path (semi)norms on grid subintervals.
//!
//! Every partition supremum is taken over partitions whose points lie on the
//! grid, which makes the dynamic programs in [`crate::partition`] exact for
//! the discrete definitions.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::partition::{partition_sup, partition_sup_table, shift_table, subinterval_sup, IntervalTable, PairTable};
use crate::path::{GridInterval, MetricPath, TimeGrid};

/// Grid size above which nested norms log a complexity warning.
pub const NESTED_SOFT_CAP: usize = 512;
/// Grid size above which nested norms are refused.
pub const NESTED_HARD_CAP: usize = 4096;

/// Integrability exponent, `p ∈ [1, ∞]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(self) -> Option<f64> {
        match self {
            Exponent::Finite(p) => Some(p),
            Exponent::Infinite => None,
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(p) => write!(f, "{p}"),
            Exponent::Infinite => write!(f, "inf"),
        }
    }
}

impl FromStr for Exponent {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "inf" | "infinity" | "∞" => Ok(Exponent::Infinite),
            other => other
                .parse::<f64>()
                .ok()
                .filter(|p| p.is_finite())
                .map(Exponent::Finite)
                .ok_or_else(|| Error::Parameter(format!("invalid exponent {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NormKind {
    Hoelder,
    QVar,
    RieszV,
    MixedV,
    Nikolskii,
    RefinedNikolskii,
    FracSobolev,
}

impl NormKind {
    pub const ALL: [NormKind; 7] = [
        NormKind::Hoelder,
        NormKind::QVar,
        NormKind::RieszV,
        NormKind::MixedV,
        NormKind::Nikolskii,
        NormKind::RefinedNikolskii,
        NormKind::FracSobolev,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NormKind::Hoelder => "Hoelder",
            NormKind::QVar => "QVar",
            NormKind::RieszV => "RieszV",
            NormKind::MixedV => "MixedV",
            NormKind::Nikolskii => "Nikolskii",
            NormKind::RefinedNikolskii => "RefinedNikolskii",
            NormKind::FracSobolev => "FracSobolev",
        }
    }

    pub fn needs_uniform_grid(self) -> bool {
        matches!(self, NormKind::Nikolskii | NormKind::RefinedNikolskii | NormKind::FracSobolev)
    }
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        let kind = match key.as_str() {
            "hoelder" | "holder" | "hol" => NormKind::Hoelder,
            "qvar" => NormKind::QVar,
            "rieszv" | "riesz" => NormKind::RieszV,
            "mixedv" | "mixed" => NormKind::MixedV,
            "nikolskii" => NormKind::Nikolskii,
            "refinednikolskii" => NormKind::RefinedNikolskii,
            "fracsobolev" | "sobolev" => NormKind::FracSobolev,
            _ => return Err(Error::Parameter(format!("unknown norm kind {s:?}"))),
        };
        Ok(kind)
    }
}

/// Selects one norm family with its regularity `δ` and integrability `p`.
///
/// `QVar` reads its exponent `q` from `p` and ignores `delta`; `Hoelder`
/// ignores `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormSpec {
    pub kind: NormKind,
    pub delta: f64,
    pub p: Exponent,
}

impl NormSpec {
    pub fn new(kind: NormKind, delta: f64, p: Exponent) -> Self {
        Self { kind, delta, p }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            NormKind::Hoelder => check_delta(self.delta),
            NormKind::QVar => match self.p {
                Exponent::Finite(q) => check_q(q),
                Exponent::Infinite => Err(Error::Parameter("QVar needs a finite q ≥ 1".into())),
            },
            NormKind::RieszV | NormKind::MixedV => check_riesz(self.delta, self.p),
            NormKind::Nikolskii | NormKind::RefinedNikolskii => {
                check_delta(self.delta)?;
                check_p(self.p)
            }
            NormKind::FracSobolev => check_sobolev(self.delta, self.p),
        }
    }
}

fn check_delta(delta: f64) -> Result<()> {
    if delta > 0.0 && delta <= 1.0 {
        Ok(())
    } else {
        Err(Error::Parameter(format!("δ must lie in (0, 1], got {delta}")))
    }
}

fn check_q(q: f64) -> Result<()> {
    if q >= 1.0 && q.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter(format!("q must satisfy 1 ≤ q < ∞, got {q}")))
    }
}

fn check_p(p: Exponent) -> Result<()> {
    match p {
        Exponent::Finite(p) if !(p >= 1.0) => Err(Error::Parameter(format!("p must be ≥ 1, got {p}"))),
        _ => Ok(()),
    }
}

pub(crate) fn check_riesz(delta: f64, p: Exponent) -> Result<()> {
    check_delta(delta)?;
    if let Exponent::Finite(p) = p {
        if !(p * delta >= 1.0 - 1e-12) {
            return Err(Error::Parameter(format!("p must satisfy p ≥ 1/δ = {}, got {p}", 1.0 / delta)));
        }
    }
    Ok(())
}

fn check_sobolev(delta: f64, p: Exponent) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Parameter(format!("δ must lie in (0, 1) for FracSobolev, got {delta}")));
    }
    match p {
        Exponent::Finite(p) if p >= 1.0 => Ok(()),
        _ => Err(Error::Parameter(format!("FracSobolev needs a finite p ≥ 1, got {p}"))),
    }
}

fn uniform_mesh(grid: &TimeGrid, kind: &'static str) -> Result<f64> {
    grid.mesh().ok_or(Error::NonUniformGrid(kind))
}

pub(crate) fn check_nested_size(points: usize) -> Result<()> {
    if points > NESTED_HARD_CAP + 1 {
        return Err(Error::Parameter(format!(
            "nested norm on {} grid points exceeds the hard cap of {NESTED_HARD_CAP} intervals",
            points
        )));
    }
    if points > NESTED_SOFT_CAP + 1 {
        log::warn!(
            "nested norm on {} grid points: O(M³) work beyond the recommended {NESTED_SOFT_CAP} intervals",
            points
        );
    }
    Ok(())
}

/// `max d(f_u, f_v) / (v − u)^δ` over grid pairs in `interval`.
pub fn holder_norm<P: MetricPath + ?Sized>(path: &P, delta: f64, interval: GridInterval) -> Result<f64> {
    check_delta(delta)?;
    let grid = path.grid();
    interval.validate(grid)?;
    let t = grid.times();
    Ok(subinterval_sup(interval, |u, v| path.distance(u, v) / (t[v] - t[u]).powf(delta)))
}

/// `q`-variation over grid partitions of `interval`.
pub fn qvar_norm<P: MetricPath + ?Sized>(path: &P, q: f64, interval: GridInterval) -> Result<f64> {
    check_q(q)?;
    interval.validate(path.grid())?;
    Ok(partition_sup(interval, |u, v| path.distance(u, v).powf(q)).powf(1.0 / q))
}

/// Riesz type variation; `p = ∞` is the `δ`-Hölder norm.
pub fn riesz_norm<P: MetricPath + ?Sized>(path: &P, delta: f64, p: Exponent, interval: GridInterval) -> Result<f64> {
    check_riesz(delta, p)?;
    let p = match p {
        Exponent::Infinite => return holder_norm(path, delta, interval),
        Exponent::Finite(p) => p,
    };
    interval.validate(path.grid())?;
    let t = path.grid().times();
    let expo = delta * p - 1.0;
    let sup = partition_sup(interval, |u, v| path.distance(u, v).powf(p) / (t[v] - t[u]).powf(expo));
    Ok(sup.powf(1.0 / p))
}

/// Table of `Σ d^q` partition suprema on every subinterval of `interval`,
/// indexed relative to `interval.start`.
fn qvar_power_table<P: MetricPath + ?Sized>(path: &P, q: f64, interval: GridInterval) -> PairTable {
    let off = interval.start;
    let weights = PairTable::from_fn(interval.len() + 1, |u, v| path.distance(u + off, v + off).powf(q));
    partition_sup_table(&weights)
}

/// `q`-variation of the path on every grid subinterval.
pub fn qvar_table<P: MetricPath + ?Sized>(path: &P, q: f64) -> Result<IntervalTable> {
    check_q(q)?;
    let interval = GridInterval::full(path.grid());
    check_nested_size(interval.len() + 1)?;
    Ok(qvar_power_table(path, q, interval).map(|x| x.powf(1.0 / q)))
}

/// Riesz type variation (finite `p`) of the path on every grid subinterval.
pub fn riesz_table<P: MetricPath + ?Sized>(path: &P, delta: f64, p: f64) -> Result<IntervalTable> {
    if !p.is_finite() {
        return Err(Error::Parameter("riesz_table needs a finite p".into()));
    }
    check_riesz(delta, Exponent::Finite(p))?;
    let points = path.grid().len();
    check_nested_size(points)?;
    let t = path.grid().times();
    let expo = delta * p - 1.0;
    let weights = PairTable::from_fn(points, |u, v| path.distance(u, v).powf(p) / (t[v] - t[u]).powf(expo));
    Ok(partition_sup_table(&weights).map(|x| x.powf(1.0 / p)))
}

/// Mixed Hölder-variation norm with inner `(1/δ)`-variation.
pub fn mixed_norm<P: MetricPath + ?Sized>(path: &P, delta: f64, p: Exponent, interval: GridInterval) -> Result<f64> {
    check_riesz(delta, p)?;
    let grid = path.grid();
    interval.validate(grid)?;
    if interval.is_empty() {
        return Ok(0.0);
    }
    check_nested_size(interval.len() + 1)?;
    let q = 1.0 / delta;
    let inner = qvar_power_table(path, q, interval);
    let t = &grid.times()[interval.start..=interval.end];
    let local = GridInterval::new(0, interval.len());
    match p {
        Exponent::Finite(p) => {
            let expo = delta * p - 1.0;
            let sup = partition_sup(local, |u, v| inner.get(u, v).powf(delta * p) / (t[v] - t[u]).powf(expo));
            Ok(sup.powf(1.0 / p))
        }
        Exponent::Infinite => {
            Ok(subinterval_sup(local, |u, v| inner.get(u, v).powf(delta) / (t[v] - t[u]).powf(delta)))
        }
    }
}

/// Nikolskii norm with shifts restricted to multiples of the mesh and a
/// left Riemann sum in place of the integral.
pub fn nikolskii_norm<P: MetricPath + ?Sized>(path: &P, delta: f64, p: Exponent, interval: GridInterval) -> Result<f64> {
    check_delta(delta)?;
    check_p(p)?;
    let grid = path.grid();
    let dt = uniform_mesh(grid, "Nikolskii")?;
    interval.validate(grid)?;
    let GridInterval { start, end } = interval;
    let mut top = 0.0_f64;
    match p {
        Exponent::Finite(p) => {
            for m in 1..=interval.len() {
                let h = m as f64 * dt;
                let sum: f64 = (start..end - m).map(|r| path.distance(r, r + m).powf(p)).sum();
                top = top.max(h.powf(-delta * p) * dt * sum);
            }
            Ok(top.powf(1.0 / p))
        }
        Exponent::Infinite => {
            for m in 1..=interval.len() {
                let h = m as f64 * dt;
                let sup = (start..=end - m).map(|r| path.distance(r, r + m)).fold(0.0, f64::max);
                top = top.max(h.powf(-delta) * sup);
            }
            Ok(top)
        }
    }
}

/// For `p < ∞` the `p`-th power of the Nikolskii norm on every subinterval
/// of `interval`; for `p = ∞` the norm itself. Indexed relative to
/// `interval.start`.
fn nikolskii_inner_table<P: MetricPath + ?Sized>(
    path: &P,
    delta: f64,
    p: Exponent,
    dt: f64,
    interval: GridInterval,
) -> PairTable {
    let off = interval.start;
    let points = interval.len() + 1;
    match p {
        Exponent::Finite(p) => {
            let pow = PairTable::from_fn(points, |u, v| path.distance(u + off, v + off).powf(p));
            let scale: Vec<f64> = (0..points).map(|m| dt * (m as f64 * dt).powf(-delta * p)).collect();
            shift_table(&pow, &scale, false)
        }
        Exponent::Infinite => {
            let pow = PairTable::from_fn(points, |u, v| path.distance(u + off, v + off));
            let scale: Vec<f64> = (0..points).map(|m| (m as f64 * dt).powf(-delta)).collect();
            shift_table(&pow, &scale, true)
        }
    }
}

/// Nikolskii norm of the path on every grid subinterval (uniform grids only).
pub fn nikolskii_table<P: MetricPath + ?Sized>(path: &P, delta: f64, p: Exponent) -> Result<IntervalTable> {
    check_delta(delta)?;
    check_p(p)?;
    let grid = path.grid();
    let dt = uniform_mesh(grid, "Nikolskii")?;
    let interval = GridInterval::full(grid);
    check_nested_size(interval.len() + 1)?;
    let inner = nikolskii_inner_table(path, delta, p, dt, interval);
    Ok(match p {
        Exponent::Finite(p) => inner.map(|x| x.powf(1.0 / p)),
        Exponent::Infinite => inner,
    })
}

/// Refined Nikolskii norm: partition supremum of blockwise Nikolskii norms.
pub fn refined_nikolskii_norm<P: MetricPath + ?Sized>(
    path: &P,
    delta: f64,
    p: Exponent,
    interval: GridInterval,
) -> Result<f64> {
    check_delta(delta)?;
    check_p(p)?;
    let grid = path.grid();
    let dt = uniform_mesh(grid, "RefinedNikolskii")?;
    interval.validate(grid)?;
    if interval.is_empty() {
        return Ok(0.0);
    }
    check_nested_size(interval.len() + 1)?;
    let inner = nikolskii_inner_table(path, delta, p, dt, interval);
    let local = GridInterval::new(0, interval.len());
    Ok(match p {
        Exponent::Finite(p) => partition_sup(local, |u, v| inner.get(u, v)).powf(1.0 / p),
        Exponent::Infinite => subinterval_sup(local, |u, v| inner.get(u, v)),
    })
}

/// Sobolev–Slobodeckij seminorm by the product midpoint rule on grid pairs,
/// diagonal cells excluded.
pub fn frac_sobolev_norm<P: MetricPath + ?Sized>(path: &P, delta: f64, p: f64, interval: GridInterval) -> Result<f64> {
    check_sobolev(delta, Exponent::Finite(p))?;
    let grid = path.grid();
    let dt = uniform_mesh(grid, "FracSobolev")?;
    interval.validate(grid)?;
    let t = grid.times();
    let expo = 1.0 + delta * p;
    let mut sum = 0.0;
    for u in interval.start..interval.end {
        for v in u + 1..=interval.end {
            sum += path.distance(u, v).powf(p) / (t[v] - t[u]).powf(expo);
        }
    }
    Ok((2.0 * sum * dt * dt).powf(1.0 / p))
}

/// Dispatches on `spec.kind`.
pub fn norm<P: MetricPath + ?Sized>(path: &P, spec: &NormSpec, interval: GridInterval) -> Result<f64> {
    spec.validate()?;
    match spec.kind {
        NormKind::Hoelder => holder_norm(path, spec.delta, interval),
        NormKind::QVar => qvar_norm(path, spec.p.finite().expect("validated"), interval),
        NormKind::RieszV => riesz_norm(path, spec.delta, spec.p, interval),
        NormKind::MixedV => mixed_norm(path, spec.delta, spec.p, interval),
        NormKind::Nikolskii => nikolskii_norm(path, spec.delta, spec.p, interval),
        NormKind::RefinedNikolskii => refined_nikolskii_norm(path, spec.delta, spec.p, interval),
        NormKind::FracSobolev => frac_sobolev_norm(path, spec.delta, spec.p.finite().expect("validated"), interval),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path::EuclideanPath;

    fn linear(c: f64, horizon: f64, m: usize) -> EuclideanPath {
        EuclideanPath::from_fn(TimeGrid::uniform(horizon, m).unwrap(), |t| vec![c * t]).unwrap()
    }

    fn full(p: &EuclideanPath) -> GridInterval {
        GridInterval::full(p.grid())
    }

    #[test]
    fn holder_examples() {
        let f = linear(1.0, 1.0, 10);
        assert!((holder_norm(&f, 0.5, full(&f)).unwrap() - 1.0).abs() < 1e-14);
        let c = linear(0.0, 1.0, 10);
        assert_eq!(holder_norm(&c, 0.5, full(&c)).unwrap(), 0.0);
        let g = EuclideanPath::from_fn(TimeGrid::uniform(1.0, 1000).unwrap(), |t| vec![t.sqrt()]).unwrap();
        assert!((holder_norm(&g, 0.5, full(&g)).unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn qvar_examples() {
        let grid = TimeGrid::new(vec![0.0, 0.1, 0.5, 0.7, 1.0]).unwrap();
        let mono = EuclideanPath::scalar(grid, &[0.0, 0.3, 0.4, 1.0, 2.5]).unwrap();
        for q in [1.0, 1.5, 2.0, 4.0] {
            assert!((qvar_norm(&mono, q, full(&mono)).unwrap() - 2.5).abs() < 1e-12);
        }
        let zig = EuclideanPath::scalar(TimeGrid::uniform(1.0, 2).unwrap(), &[0.0, 1.0, 0.0]).unwrap();
        assert!((qvar_norm(&zig, 1.0, full(&zig)).unwrap() - 2.0).abs() < 1e-14);
        assert!((qvar_norm(&zig, 2.0, full(&zig)).unwrap() - 2f64.sqrt()).abs() < 1e-14);
        assert!(qvar_norm(&zig, 0.5, full(&zig)).is_err());
    }

    #[test]
    fn riesz_linear_closed_form() {
        let (c, horizon) = (1.7, 2.5);
        let f = linear(c, horizon, 16);
        for (delta, p) in [(0.4, 3.0), (0.6, 5.0), (1.0, 2.0), (0.5, 2.0)] {
            let expected = c * horizon.powf(1.0 - delta + 1.0 / p);
            let riesz = riesz_norm(&f, delta, Exponent::Finite(p), full(&f)).unwrap();
            let mixed = mixed_norm(&f, delta, Exponent::Finite(p), full(&f)).unwrap();
            assert!((riesz - expected).abs() < 1e-12 * expected, "{riesz} vs {expected}");
            assert!((mixed - expected).abs() < 1e-12 * expected);
        }
        let unit = linear(1.0, 1.0, 16);
        assert!((riesz_norm(&unit, 1.0, Exponent::Finite(2.0), full(&unit)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn riesz_parameter_error() {
        let f = linear(1.0, 1.0, 4);
        assert!(matches!(riesz_norm(&f, 0.4, Exponent::Finite(2.0), full(&f)), Err(Error::Parameter(_))));
        assert!(matches!(mixed_norm(&f, 0.4, Exponent::Finite(2.0), full(&f)), Err(Error::Parameter(_))));
        let inf = riesz_norm(&f, 0.4, Exponent::Infinite, full(&f)).unwrap();
        assert_eq!(inf, holder_norm(&f, 0.4, full(&f)).unwrap());
    }

    #[test]
    fn constant_path_has_zero_norms() {
        let c = EuclideanPath::from_fn(TimeGrid::uniform(1.0, 12).unwrap(), |_| vec![3.0, -1.0]).unwrap();
        let iv = full(&c);
        for kind in NormKind::ALL {
            let spec = NormSpec::new(kind, 0.5, Exponent::Finite(4.0));
            assert_eq!(norm(&c, &spec, iv).unwrap(), 0.0, "{kind}");
        }
    }

    #[test]
    fn nikolskii_linear_examples() {
        let f = linear(1.0, 1.0, 1000);
        let half = nikolskii_norm(&f, 0.5, Exponent::Finite(2.0), full(&f)).unwrap();
        assert!((half - 0.5).abs() < 2e-3, "{half}");
        let one = nikolskii_norm(&f, 1.0, Exponent::Finite(2.0), full(&f)).unwrap();
        assert!((one - 1.0).abs() < 2e-3, "{one}");
    }

    #[test]
    fn nikolskii_requires_uniform_grid() {
        let f = EuclideanPath::scalar(TimeGrid::new(vec![0.0, 0.3, 1.0]).unwrap(), &[0.0, 1.0, 0.0]).unwrap();
        let iv = full(&f);
        assert!(matches!(nikolskii_norm(&f, 0.5, Exponent::Finite(2.0), iv), Err(Error::NonUniformGrid(_))));
        assert!(matches!(refined_nikolskii_norm(&f, 0.5, Exponent::Finite(2.0), iv), Err(Error::NonUniformGrid(_))));
        assert!(matches!(frac_sobolev_norm(&f, 0.5, 2.0, iv), Err(Error::NonUniformGrid(_))));
    }

    #[test]
    fn refined_dominates_plain_nikolskii() {
        let f = EuclideanPath::from_fn(TimeGrid::uniform(1.0, 40).unwrap(), |t| {
            vec![(7.0 * t).sin(), (3.0 * t * t).cos()]
        })
        .unwrap();
        for p in [Exponent::Finite(2.0), Exponent::Finite(5.0), Exponent::Infinite] {
            let plain = nikolskii_norm(&f, 0.4, p, full(&f)).unwrap();
            let refined = refined_nikolskii_norm(&f, 0.4, p, full(&f)).unwrap();
            assert!(refined >= plain * (1.0 - 1e-12));
        }
    }

    #[test]
    fn nikolskii_table_matches_direct() {
        let f = EuclideanPath::from_fn(TimeGrid::uniform(2.0, 17).unwrap(), |t| vec![(5.0 * t).sin(), t]).unwrap();
        for p in [Exponent::Finite(3.0), Exponent::Infinite] {
            let table = nikolskii_table(&f, 0.35, p).unwrap();
            for u in 0..18 {
                for v in u..18 {
                    let direct = nikolskii_norm(&f, 0.35, p, GridInterval::new(u, v)).unwrap();
                    assert!((table.get(u, v) - direct).abs() <= 1e-12 * (1.0 + direct));
                }
            }
        }
    }

    #[test]
    fn frac_sobolev_linear_converges() {
        let delta: f64 = 0.25;
        let exact = (2.0 * (1.0 / (2.0 - 2.0 * delta) - 1.0 / (3.0 - 2.0 * delta))).sqrt();
        let coarse = frac_sobolev_norm(&linear(1.0, 1.0, 100), delta, 2.0, GridInterval::new(0, 100)).unwrap();
        let fine = frac_sobolev_norm(&linear(1.0, 1.0, 800), delta, 2.0, GridInterval::new(0, 800)).unwrap();
        assert!((fine - exact).abs() < (coarse - exact).abs());
        assert!((fine - exact).abs() < 1e-2 * exact, "{fine} vs {exact}");
        let rough = frac_sobolev_norm(&linear(1.0, 1.0, 200), 0.95, 2.0, GridInterval::new(0, 200)).unwrap();
        assert!(rough.is_finite());
    }

    #[test]
    fn qvar_table_is_monotone() {
        let f = EuclideanPath::from_fn(TimeGrid::uniform(1.0, 20).unwrap(), |t| vec![(9.0 * t).sin()]).unwrap();
        let table = qvar_table(&f, 2.0).unwrap();
        for i in 0..21 {
            assert_eq!(table.get(i, i), 0.0);
            for j in i..21 {
                if i > 0 {
                    assert!(table.get(i - 1, j) >= table.get(i, j));
                }
                if j < 20 {
                    assert!(table.get(i, j + 1) >= table.get(i, j));
                }
            }
        }
    }

    #[test]
    fn kind_names_round_trip() {
        for kind in NormKind::ALL {
            assert_eq!(kind.name().parse::<NormKind>().unwrap(), kind);
        }
        assert!("besov".parse::<NormKind>().is_err());
        assert_eq!("inf".parse::<Exponent>().unwrap(), Exponent::Infinite);
        assert_eq!("2.5".parse::<Exponent>().unwrap(), Exponent::Finite(2.5));
    }
}
