//! Inhomogeneous distances between two group-valued paths on a common grid.
//!
//! Every level-`k` distance is a partition supremum of the Euclidean norms
//! `|π_k(X¹_{u,v} − X²_{u,v})|` raised to an exponent scaled by `1/k`; the
//! aggregate distance is the maximum over levels `k = 1..N`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::norms::{check_nested_size, check_riesz, Exponent};
use crate::partition::{partition_sup, partition_sup_table, shift_table, IntervalTable, PairTable};
use crate::path::{GridInterval, GroupPath};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceKind {
    QVarDist,
    RieszDist,
    MixedDist,
    NikolskiiHatDist,
}

impl DistanceKind {
    pub const ALL: [DistanceKind; 4] =
        [DistanceKind::QVarDist, DistanceKind::RieszDist, DistanceKind::MixedDist, DistanceKind::NikolskiiHatDist];

    pub fn name(self) -> &'static str {
        match self {
            DistanceKind::QVarDist => "QVarDist",
            DistanceKind::RieszDist => "RieszDist",
            DistanceKind::MixedDist => "MixedDist",
            DistanceKind::NikolskiiHatDist => "NikolskiiHatDist",
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DistanceKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        Ok(match key.as_str() {
            "qvardist" | "qvar" => DistanceKind::QVarDist,
            "rieszdist" | "riesz" => DistanceKind::RieszDist,
            "mixeddist" | "mixed" => DistanceKind::MixedDist,
            "nikolskiihatdist" | "nikolskiihat" | "nikolskii" => DistanceKind::NikolskiiHatDist,
            _ => return Err(Error::Parameter(format!("unknown distance kind {s:?}"))),
        })
    }
}

/// Distance family with its parameters; `QVarDist` reads `q` from `p`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistanceSpec {
    pub kind: DistanceKind,
    pub delta: f64,
    pub p: f64,
}

/// A [`DistanceSpec`] pinned to one tensor level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelDistanceSpec {
    pub kind: DistanceKind,
    pub delta: f64,
    pub p: f64,
    pub level: usize,
}

impl DistanceSpec {
    pub fn new(kind: DistanceKind, delta: f64, p: f64) -> Self {
        Self { kind, delta, p }
    }

    pub fn at_level(&self, level: usize) -> LevelDistanceSpec {
        LevelDistanceSpec { kind: self.kind, delta: self.delta, p: self.p, level }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            DistanceKind::QVarDist => {
                if self.p >= 1.0 && self.p.is_finite() {
                    Ok(())
                } else {
                    Err(Error::Parameter(format!("q must satisfy 1 ≤ q < ∞, got {}", self.p)))
                }
            }
            DistanceKind::RieszDist | DistanceKind::MixedDist => {
                if !self.p.is_finite() {
                    return Err(Error::Parameter("distances need a finite p".into()));
                }
                check_riesz(self.delta, Exponent::Finite(self.p))
            }
            DistanceKind::NikolskiiHatDist => {
                if !(self.delta > 0.0 && self.delta <= 1.0) {
                    return Err(Error::Parameter(format!("δ must lie in (0, 1], got {}", self.delta)));
                }
                if !(self.p >= 1.0 && self.p.is_finite()) {
                    return Err(Error::Parameter(format!("p must satisfy 1 ≤ p < ∞, got {}", self.p)));
                }
                Ok(())
            }
        }
    }
}

fn check_pair(x1: &GroupPath, x2: &GroupPath, level: usize, interval: GridInterval) -> Result<()> {
    if x1.grid() != x2.grid() {
        return Err(Error::GridMismatch);
    }
    if x1.dim() != x2.dim() {
        return Err(Error::DimensionMismatch { left: x1.dim(), right: x2.dim() });
    }
    if x1.depth() != x2.depth() {
        return Err(Error::DepthMismatch { left: x1.depth(), right: x2.depth() });
    }
    if level == 0 || level > x1.depth() {
        return Err(Error::Parameter(format!("level must lie in 1..={}, got {level}", x1.depth())));
    }
    interval.validate(x1.grid())
}

/// `|π_k(X¹_{u,v} − X²_{u,v})|` on every pair of `interval`, relative indices.
fn level_difference_table(x1: &GroupPath, x2: &GroupPath, level: usize, interval: GridInterval) -> PairTable {
    let off = interval.start;
    PairTable::from_fn(interval.len() + 1, |u, v| {
        let a = x1.increment_unchecked(u + off, v + off);
        let b = x2.increment_unchecked(u + off, v + off);
        a.level(level)
            .iter()
            .zip(b.level(level))
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    })
}

/// Level-`k` inhomogeneous `q`-variation distance.
pub fn rho_qvar_level(x1: &GroupPath, x2: &GroupPath, q: f64, level: usize, interval: GridInterval) -> Result<f64> {
    DistanceSpec::new(DistanceKind::QVarDist, 1.0, q).validate()?;
    check_pair(x1, x2, level, interval)?;
    let k = level as f64;
    let diffs = level_difference_table(x1, x2, level, interval);
    let local = GridInterval::new(0, interval.len());
    Ok(partition_sup(local, |u, v| diffs.get(u, v).powf(q / k)).powf(k / q))
}

/// Level-`k` `q`-variation distance on every grid subinterval.
pub fn rho_qvar_level_table(x1: &GroupPath, x2: &GroupPath, q: f64, level: usize) -> Result<IntervalTable> {
    DistanceSpec::new(DistanceKind::QVarDist, 1.0, q).validate()?;
    let interval = GridInterval::full(x1.grid());
    check_pair(x1, x2, level, interval)?;
    check_nested_size(interval.len() + 1)?;
    let k = level as f64;
    let weights = level_difference_table(x1, x2, level, interval).map(|d| d.powf(q / k));
    Ok(partition_sup_table(&weights).map(|x| x.powf(k / q)))
}

/// Level-`k` inhomogeneous Riesz type distance.
pub fn rho_riesz_level(
    x1: &GroupPath,
    x2: &GroupPath,
    delta: f64,
    p: f64,
    level: usize,
    interval: GridInterval,
) -> Result<f64> {
    DistanceSpec::new(DistanceKind::RieszDist, delta, p).validate()?;
    check_pair(x1, x2, level, interval)?;
    let k = level as f64;
    let diffs = level_difference_table(x1, x2, level, interval);
    let t = &x1.grid().times()[interval.start..=interval.end];
    let expo = delta * p - 1.0;
    let local = GridInterval::new(0, interval.len());
    let sup = partition_sup(local, |u, v| diffs.get(u, v).powf(p / k) / (t[v] - t[u]).powf(expo));
    Ok(sup.powf(k / p))
}

/// Level-`k` inhomogeneous mixed Hölder-variation distance with inner
/// `(1/δ)`-variation distance.
pub fn rho_mixed_level(
    x1: &GroupPath,
    x2: &GroupPath,
    delta: f64,
    p: f64,
    level: usize,
    interval: GridInterval,
) -> Result<f64> {
    DistanceSpec::new(DistanceKind::MixedDist, delta, p).validate()?;
    check_pair(x1, x2, level, interval)?;
    if interval.is_empty() {
        return Ok(0.0);
    }
    check_nested_size(interval.len() + 1)?;
    let k = level as f64;
    let q = 1.0 / delta;
    let weights = level_difference_table(x1, x2, level, interval).map(|d| d.powf(q / k));
    // inner holds (ρ^{(k)}_{q-var})^{q/k}; raising to δp gives (ρ^{(k)})^{p/k}
    let inner = partition_sup_table(&weights);
    let t = &x1.grid().times()[interval.start..=interval.end];
    let expo = delta * p - 1.0;
    let local = GridInterval::new(0, interval.len());
    let sup = partition_sup(local, |u, v| inner.get(u, v).powf(delta * p) / (t[v] - t[u]).powf(expo));
    Ok(sup.powf(k / p))
}

/// Level-`k` inhomogeneous Nikolskii type distance (uniform grids only).
pub fn rho_nikolskii_hat_level(
    x1: &GroupPath,
    x2: &GroupPath,
    delta: f64,
    p: f64,
    level: usize,
    interval: GridInterval,
) -> Result<f64> {
    DistanceSpec::new(DistanceKind::NikolskiiHatDist, delta, p).validate()?;
    check_pair(x1, x2, level, interval)?;
    let dt = x1.grid().mesh().ok_or(Error::NonUniformGrid("NikolskiiHatDist"))?;
    if interval.is_empty() {
        return Ok(0.0);
    }
    check_nested_size(interval.len() + 1)?;
    let inner = nikolskii_hat_inner(x1, x2, delta, p, level, dt, interval);
    let local = GridInterval::new(0, interval.len());
    Ok(partition_sup(local, |u, v| inner.get(u, v)).powf(level as f64 / p))
}

/// `(ρ^{(k)}_{N^{δ,p};[u,v]})^{p/k}` on every subinterval, relative indices.
fn nikolskii_hat_inner(
    x1: &GroupPath,
    x2: &GroupPath,
    delta: f64,
    p: f64,
    level: usize,
    dt: f64,
    interval: GridInterval,
) -> PairTable {
    let k = level as f64;
    let pow = level_difference_table(x1, x2, level, interval).map(|d| d.powf(p / k));
    let scale: Vec<f64> = (0..=interval.len()).map(|m| dt * (m as f64 * dt).powf(-delta * p)).collect();
    shift_table(&pow, &scale, false)
}

/// Level-`k` distance of the given kind.
pub fn rho_level(x1: &GroupPath, x2: &GroupPath, spec: &LevelDistanceSpec, interval: GridInterval) -> Result<f64> {
    let LevelDistanceSpec { kind, delta, p, level } = *spec;
    match kind {
        DistanceKind::QVarDist => rho_qvar_level(x1, x2, p, level, interval),
        DistanceKind::RieszDist => rho_riesz_level(x1, x2, delta, p, level, interval),
        DistanceKind::MixedDist => rho_mixed_level(x1, x2, delta, p, level, interval),
        DistanceKind::NikolskiiHatDist => rho_nikolskii_hat_level(x1, x2, delta, p, level, interval),
    }
}

/// Level-wise distances for `k = 1..N`.
pub fn rho_levels(x1: &GroupPath, x2: &GroupPath, spec: &DistanceSpec, interval: GridInterval) -> Result<Vec<f64>> {
    spec.validate()?;
    (1..=x1.depth()).map(|k| rho_level(x1, x2, &spec.at_level(k), interval)).collect()
}

/// `max_k ρ^{(k)}`.
pub fn rho_aggregate(x1: &GroupPath, x2: &GroupPath, spec: &DistanceSpec, interval: GridInterval) -> Result<f64> {
    Ok(rho_levels(x1, x2, spec, interval)?.into_iter().fold(0.0, f64::max))
}
