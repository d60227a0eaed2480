//! Seeded families of continuous test paths.
//!
//! Every member is a continuous function of time fixed by the seed, so the
//! same member can be sampled on any grid; refinement studies compare one
//! function on two grids.

use std::f64::consts::TAU;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{EuclideanPath, TimeGrid};

const FOURIER_MODES: usize = 5;
const WALK_KNOTS: usize = 32;
const WEIERSTRASS_TERMS: usize = 13;
const WEIERSTRASS_BASE: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum FamilyKind {
    SmoothFourier,
    RandomWalk,
    /// Weierstrass-type series with Hölder exponent `h ∈ (0, 1)`.
    FractionalLike(f64),
    Zigzag,
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyKind::SmoothFourier => f.write_str("SmoothFourier"),
            FamilyKind::RandomWalk => f.write_str("RandomWalk"),
            FamilyKind::FractionalLike(h) => write!(f, "FractionalLike({h})"),
            FamilyKind::Zigzag => f.write_str("Zigzag"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathFamily {
    pub kind: FamilyKind,
    pub count: usize,
    /// Grid intervals of the default sampling grid.
    pub intervals: usize,
    pub dim: usize,
    pub seed: u64,
    pub horizon: f64,
}

/// One member of a family, evaluable at any time in `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub enum PathGenerator {
    /// `Σ_k (a_k sin(2πkt/T) + b_k (cos(2πkt/T) − 1)) / k²` per coordinate.
    Fourier { horizon: f64, sin: Vec<Vec<f64>>, cos: Vec<Vec<f64>> },
    /// Piecewise-linear interpolation of a Gaussian walk on fixed knots.
    Walk { horizon: f64, knots: Vec<Vec<f64>> },
    /// `Σ_j λ^{−jh} ξ_j (sin(2πλ^j t/T + φ_j) − sin φ_j)` per coordinate.
    Weierstrass { horizon: f64, h: f64, amp: Vec<Vec<f64>>, phase: Vec<Vec<f64>> },
    /// Triangle wave with `teeth` full oscillations of height `amp`.
    Zigzag { horizon: f64, teeth: usize, amp: Vec<f64> },
}

impl PathFamily {
    pub fn new(kind: FamilyKind, count: usize, intervals: usize, dim: usize, seed: u64) -> Self {
        Self { kind, count, intervals, dim, seed, horizon: 1.0 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.intervals == 0 {
            return Err(Error::Parameter("family dimension and grid size must be positive".into()));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::Parameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if let FamilyKind::FractionalLike(h) = self.kind {
            if !(h > 0.0 && h < 1.0) {
                return Err(Error::Parameter(format!("FractionalLike exponent must lie in (0, 1), got {h}")));
            }
        }
        Ok(())
    }

    /// Member `index`, independent of every other member and of the grid.
    pub fn generator(&self, index: usize) -> PathGenerator {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(index as u64 + 1);
        let normal = |rng: &mut ChaCha8Rng| -> f64 { rng.sample(StandardNormal) };
        let horizon = self.horizon;
        let d = self.dim;
        match self.kind {
            FamilyKind::SmoothFourier => {
                let draw = |rng: &mut ChaCha8Rng| (0..d).map(|_| (0..FOURIER_MODES).map(|_| normal(rng)).collect()).collect();
                let sin = draw(&mut rng);
                let cos = draw(&mut rng);
                PathGenerator::Fourier { horizon, sin, cos }
            }
            FamilyKind::RandomWalk => {
                let sd = (horizon / WALK_KNOTS as f64).sqrt();
                let mut pos = vec![0.0; d];
                let mut knots = vec![pos.clone()];
                for _ in 0..WALK_KNOTS {
                    pos.iter_mut().for_each(|x| *x += sd * normal(&mut rng));
                    knots.push(pos.clone());
                }
                PathGenerator::Walk { horizon, knots }
            }
            FamilyKind::FractionalLike(h) => {
                let amp = (0..d).map(|_| (0..WEIERSTRASS_TERMS).map(|_| normal(&mut rng)).collect()).collect();
                let phase =
                    (0..d).map(|_| (0..WEIERSTRASS_TERMS).map(|_| rng.random_range(0.0..TAU)).collect()).collect();
                PathGenerator::Weierstrass { horizon, h, amp, phase }
            }
            FamilyKind::Zigzag => {
                let teeth = rng.random_range(2..=8);
                let amp = (0..d).map(|_| rng.random_range(0.5..2.0)).collect();
                PathGenerator::Zigzag { horizon, teeth, amp }
            }
        }
    }

    pub fn generators(&self) -> Vec<PathGenerator> {
        (0..self.count).map(|i| self.generator(i)).collect()
    }

    /// All members sampled on a uniform grid with `intervals` steps.
    pub fn sample(&self, intervals: usize) -> Result<Vec<EuclideanPath>> {
        self.validate()?;
        let grid = TimeGrid::uniform(self.horizon, intervals)?;
        self.generators().iter().map(|g| g.sample(&grid)).collect()
    }

    /// All members on the default grid.
    pub fn paths(&self) -> Result<Vec<EuclideanPath>> {
        self.sample(self.intervals)
    }
}

impl PathGenerator {
    pub fn dim(&self) -> usize {
        match self {
            PathGenerator::Fourier { sin, .. } => sin.len(),
            PathGenerator::Walk { knots, .. } => knots[0].len(),
            PathGenerator::Weierstrass { amp, .. } => amp.len(),
            PathGenerator::Zigzag { amp, .. } => amp.len(),
        }
    }

    pub fn eval(&self, t: f64) -> Vec<f64> {
        match self {
            PathGenerator::Fourier { horizon, sin, cos } => sin
                .iter()
                .zip(cos)
                .map(|(a, b)| {
                    (0..FOURIER_MODES)
                        .map(|k| {
                            let w = TAU * (k + 1) as f64 / horizon;
                            let k2 = ((k + 1) * (k + 1)) as f64;
                            (a[k] * (w * t).sin() + b[k] * ((w * t).cos() - 1.0)) / k2
                        })
                        .sum()
                })
                .collect(),
            PathGenerator::Walk { horizon, knots } => {
                let x = (t / horizon * WALK_KNOTS as f64).clamp(0.0, WALK_KNOTS as f64);
                let j = (x.floor() as usize).min(WALK_KNOTS - 1);
                let w = x - j as f64;
                knots[j].iter().zip(&knots[j + 1]).map(|(a, b)| a + w * (b - a)).collect()
            }
            PathGenerator::Weierstrass { horizon, h, amp, phase } => amp
                .iter()
                .zip(phase)
                .map(|(a, ph)| {
                    (0..WEIERSTRASS_TERMS)
                        .map(|j| {
                            let freq = WEIERSTRASS_BASE.powi(j as i32);
                            let arg = TAU * freq * t / horizon + ph[j];
                            freq.powf(-h) * a[j] * (arg.sin() - ph[j].sin())
                        })
                        .sum()
                })
                .collect(),
            PathGenerator::Zigzag { horizon, teeth, amp } => {
                let x = t / horizon * *teeth as f64;
                let frac = x - x.floor();
                let tri = 1.0 - (2.0 * frac - 1.0).abs();
                amp.iter().map(|a| a * tri).collect()
            }
        }
    }

    /// Time derivative where available in closed form (smooth members only).
    pub fn derivative(&self, t: f64) -> Option<Vec<f64>> {
        match self {
            PathGenerator::Fourier { horizon, sin, cos } => Some(
                sin.iter()
                    .zip(cos)
                    .map(|(a, b)| {
                        (0..FOURIER_MODES)
                            .map(|k| {
                                let w = TAU * (k + 1) as f64 / horizon;
                                let k2 = ((k + 1) * (k + 1)) as f64;
                                w * (a[k] * (w * t).cos() - b[k] * (w * t).sin()) / k2
                            })
                            .sum()
                    })
                    .collect(),
            ),
            _ => None,
        }
    }

    pub fn sample(&self, grid: &TimeGrid) -> Result<EuclideanPath> {
        EuclideanPath::from_fn(grid.clone(), |t| self.eval(t))
    }
}

/// Slope of `log max_u |f_{u+h} − f_u|` against `log h` over dyadic shifts;
/// a rough diagnostic of the Hölder exponent.
pub fn empirical_holder_exponent(path: &EuclideanPath) -> Option<f64> {
    let grid = path.grid();
    let dt = grid.mesh()?;
    let mut pts = Vec::new();
    let mut m = 1;
    while m * 4 <= grid.intervals() {
        let top = (0..grid.len() - m)
            .map(|u| path.point(u).iter().zip(path.point(u + m)).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
            .fold(0.0_f64, f64::max);
        if top > 0.0 {
            pts.push(((m as f64 * dt).ln(), top.ln()));
        }
        m *= 2;
    }
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Some(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reproducible_and_grid_independent() {
        let fam = PathFamily::new(FamilyKind::RandomWalk, 3, 16, 2, 11);
        let a = fam.sample(16).unwrap();
        let b = fam.sample(16).unwrap();
        assert_eq!(a, b);
        let fine = fam.sample(32).unwrap();
        for (c, f) in a.iter().zip(&fine) {
            for j in 0..=16 {
                let (x, y) = (c.point(j), f.point(2 * j));
                assert!(x.iter().zip(y).all(|(p, q)| (p - q).abs() < 1e-12));
            }
        }
        assert_ne!(fam.generator(0), fam.generator(1));
    }

    #[test]
    fn members_start_at_origin() {
        for kind in [FamilyKind::SmoothFourier, FamilyKind::RandomWalk, FamilyKind::FractionalLike(0.4), FamilyKind::Zigzag] {
            let fam = PathFamily::new(kind, 4, 8, 3, 5);
            for g in fam.generators() {
                assert!(g.eval(0.0).iter().all(|x| x.abs() < 1e-12), "{kind}");
                assert_eq!(g.dim(), 3);
            }
        }
    }

    #[test]
    fn fourier_derivative_matches_difference_quotient() {
        let g = PathFamily::new(FamilyKind::SmoothFourier, 1, 8, 2, 3).generator(0);
        let h = 1e-6;
        for t in [0.1, 0.37, 0.8] {
            let d = g.derivative(t).unwrap();
            let (up, dn) = (g.eval(t + h), g.eval(t - h));
            for a in 0..2 {
                assert!(((up[a] - dn[a]) / (2.0 * h) - d[a]).abs() < 1e-6);
            }
        }
    }

    #[test]
    fn fractional_like_roughness_is_near_h() {
        let fam = PathFamily::new(FamilyKind::FractionalLike(0.35), 6, 2048, 1, 21);
        let est: Vec<f64> = fam.paths().unwrap().iter().map(|p| empirical_holder_exponent(p).unwrap()).collect();
        let mean = est.iter().sum::<f64>() / est.len() as f64;
        assert!((mean - 0.35).abs() < 0.2, "{est:?}");
        let smooth = PathFamily::new(FamilyKind::SmoothFourier, 1, 2048, 1, 21).paths().unwrap();
        assert!(empirical_holder_exponent(&smooth[0]).unwrap() > 0.8);
    }

    #[test]
    fn invalid_families() {
        assert!(PathFamily::new(FamilyKind::FractionalLike(1.5), 1, 8, 1, 0).sample(8).is_err());
        assert!(PathFamily::new(FamilyKind::Zigzag, 1, 8, 0, 0).sample(8).is_err());
    }
}
