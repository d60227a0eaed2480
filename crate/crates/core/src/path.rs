//! Sampled paths on a time grid: Euclidean samples and their signature lifts.

use crate::error::{Error, Result};
use crate::tensor::{GroupElement, MAX_DEPTH};

/// Strictly increasing times `0 = t_0 < ... < t_M`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid {
    times: Vec<f64>,
    uniform: bool,
}

const UNIFORM_RATIO: f64 = 1.0 + 1e-9;

impl TimeGrid {
    pub fn new(times: Vec<f64>) -> Result<Self> {
        if times.len() < 2 {
            return Err(Error::InvalidGrid("a grid needs at least two points".into()));
        }
        if times[0] != 0.0 {
            return Err(Error::InvalidGrid(format!("grid must start at 0, got {}", times[0])));
        }
        if times.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGrid("non-finite time".into()));
        }
        let mut min_step = f64::INFINITY;
        let mut max_step = 0.0_f64;
        for (j, w) in times.windows(2).enumerate() {
            let step = w[1] - w[0];
            if step <= 0.0 {
                return Err(Error::InvalidGrid(format!(
                    "times not strictly increasing at index {}",
                    j + 1
                )));
            }
            min_step = min_step.min(step);
            max_step = max_step.max(step);
        }
        let uniform = max_step / min_step < UNIFORM_RATIO;
        Ok(Self { times, uniform })
    }

    /// Uniform grid on `[0, horizon]` with `intervals` cells.
    pub fn uniform(horizon: f64, intervals: usize) -> Result<Self> {
        if intervals == 0 || !(horizon > 0.0) || !horizon.is_finite() {
            return Err(Error::InvalidGrid(format!(
                "uniform grid needs intervals ≥ 1 and a positive horizon, got {intervals}, {horizon}"
            )));
        }
        let dt = horizon / intervals as f64;
        let mut times: Vec<f64> = (0..=intervals).map(|j| j as f64 * dt).collect();
        times[intervals] = horizon;
        Ok(Self { times, uniform: true })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn time(&self, j: usize) -> f64 {
        self.times[j]
    }

    /// Number of grid points `M + 1`.
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Number of intervals `M`.
    pub fn intervals(&self) -> usize {
        self.times.len() - 1
    }

    pub fn horizon(&self) -> f64 {
        *self.times.last().expect("grid is non-empty")
    }

    pub fn is_uniform(&self) -> bool {
        self.uniform
    }

    /// Uniform mesh size, if the grid is uniform.
    pub fn mesh(&self) -> Option<f64> {
        self.uniform.then(|| self.horizon() / self.intervals() as f64)
    }

    /// Index of the grid point equal to `t` up to `1e-9·T`.
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let tol = 1e-9 * self.horizon();
        let pos = self.times.partition_point(|&s| s < t - tol);
        (pos < self.times.len() && (self.times[pos] - t).abs() <= tol).then_some(pos)
    }

    /// The grid scaled onto `[0, λT]`.
    pub fn dilated(&self, lambda: f64) -> Result<Self> {
        Self::new(self.times.iter().map(|t| t * lambda).collect())
    }
}

/// Closed grid interval `[t_start, t_end]` addressed by indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridInterval {
    pub start: usize,
    pub end: usize,
}

impl GridInterval {
    pub fn new(start: usize, end: usize) -> Self {
        Self { start, end }
    }

    pub fn full(grid: &TimeGrid) -> Self {
        Self { start: 0, end: grid.intervals() }
    }

    pub fn validate(&self, grid: &TimeGrid) -> Result<()> {
        if self.start > self.end || self.end >= grid.len() {
            return Err(Error::InvalidInterval {
                start: self.start,
                end: self.end,
                points: grid.len(),
            });
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.end - self.start
    }

    pub fn is_empty(&self) -> bool {
        self.end == self.start
    }
}

/// A path sampled on a grid together with the metric its norms use.
pub trait MetricPath: Sync {
    fn grid(&self) -> &TimeGrid;
    fn distance(&self, i: usize, j: usize) -> f64;
}

#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanPath {
    grid: TimeGrid,
    dim: usize,
    values: Vec<f64>,
}

impl EuclideanPath {
    /// `values` holds one row of length `dim` per grid point.
    pub fn new(grid: TimeGrid, values: Vec<Vec<f64>>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        let dim = values[0].len();
        if dim == 0 {
            return Err(Error::Parameter("path dimension must be positive".into()));
        }
        let mut flat = Vec::with_capacity(dim * values.len());
        for row in &values {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: row.len() });
            }
            if row.iter().any(|x| !x.is_finite()) {
                return Err(Error::Parameter("non-finite path value".into()));
            }
            flat.extend_from_slice(row);
        }
        Ok(Self { grid, dim, values: flat })
    }

    /// Scalar path from samples.
    pub fn scalar(grid: TimeGrid, values: &[f64]) -> Result<Self> {
        Self::new(grid, values.iter().map(|&x| vec![x]).collect())
    }

    /// Samples `f` on every grid time.
    pub fn from_fn(grid: TimeGrid, f: impl Fn(f64) -> Vec<f64>) -> Result<Self> {
        let values = grid.times().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn point(&self, j: usize) -> &[f64] {
        &self.values[j * self.dim..(j + 1) * self.dim]
    }

    pub fn points(&self) -> std::slice::ChunksExact<'_, f64> {
        self.values.chunks_exact(self.dim)
    }

    pub fn increment(&self, i: usize, j: usize) -> Vec<f64> {
        self.point(j).iter().zip(self.point(i)).map(|(b, a)| b - a).collect()
    }

    pub fn map_values(&self, f: impl Fn(&[f64]) -> Vec<f64>) -> Result<Self> {
        Self::new(self.grid.clone(), self.points().map(f).collect())
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            dim: self.dim,
            values: self.values.iter().map(|x| c * x).collect(),
        }
    }

    /// Pointwise difference `self − other`; both paths must share a grid.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        Ok(Self {
            grid: self.grid.clone(),
            dim: self.dim,
            values: self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect(),
        })
    }

    /// Same values on the grid dilated onto `[0, λT]`.
    pub fn time_dilated(&self, lambda: f64) -> Result<Self> {
        Ok(Self { grid: self.grid.dilated(lambda)?, dim: self.dim, values: self.values.clone() })
    }

    /// `t ↦ f(T − t)`.
    pub fn reversed(&self) -> Self {
        let horizon = self.grid.horizon();
        let mut times: Vec<f64> = self.grid.times().iter().rev().map(|t| horizon - t).collect();
        times[0] = 0.0;
        let grid = TimeGrid::new(times).expect("reversal of a valid grid is valid");
        let values = self.points().rev().flatten().copied().collect();
        Self { grid, dim: self.dim, values }
    }

    /// Value of the piecewise-linear interpolant at time `t`.
    pub fn interpolate(&self, t: f64) -> Vec<f64> {
        let times = self.grid.times();
        if t <= 0.0 {
            return self.point(0).to_vec();
        }
        if t >= self.grid.horizon() {
            return self.point(self.grid.intervals()).to_vec();
        }
        let j = times.partition_point(|&s| s <= t) - 1;
        let w = (t - times[j]) / (times[j + 1] - times[j]);
        self.point(j)
            .iter()
            .zip(self.point(j + 1))
            .map(|(a, b)| a + w * (b - a))
            .collect()
    }
}

impl MetricPath for EuclideanPath {
    fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        self.point(i)
            .iter()
            .zip(self.point(j))
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// Linear interpolation onto the uniform grid with `intervals` cells on `[0, T]`.
pub fn resample_uniform(path: &EuclideanPath, intervals: usize) -> Result<EuclideanPath> {
    let grid = TimeGrid::uniform(path.grid.horizon(), intervals)?;
    let last = path.grid.intervals();
    let values = grid
        .times()
        .iter()
        .enumerate()
        .map(|(j, &t)| match j {
            0 => path.point(0).to_vec(),
            j if j == intervals => path.point(last).to_vec(),
            _ => path.interpolate(t),
        })
        .collect();
    EuclideanPath::new(grid, values)
}

/// Group-valued path storing cumulative signatures `X_{0,t_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupPath {
    grid: TimeGrid,
    values: Vec<GroupElement>,
    inverses: Vec<GroupElement>,
}

impl GroupPath {
    pub fn new(grid: TimeGrid, values: Vec<GroupElement>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidGrid(format!(
                "{} values for {} grid points",
                values.len(),
                grid.len()
            )));
        }
        let (dim, depth) = (values[0].dim(), values[0].depth());
        if values[0] != GroupElement::identity(dim, depth)? {
            return Err(Error::NotGroupElement("first value must be the identity".into()));
        }
        for g in &values {
            if g.dim() != dim {
                return Err(Error::DimensionMismatch { left: dim, right: g.dim() });
            }
            if g.depth() != depth {
                return Err(Error::DepthMismatch { left: depth, right: g.depth() });
            }
        }
        let inverses = values.iter().map(GroupElement::inverse).collect();
        Ok(Self { grid, values, inverses })
    }

    pub fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.values[0].dim()
    }

    pub fn depth(&self) -> usize {
        self.values[0].depth()
    }

    pub fn value(&self, j: usize) -> &GroupElement {
        &self.values[j]
    }

    pub fn values(&self) -> &[GroupElement] {
        &self.values
    }

    /// `X_i⁻¹ ⊗ X_j`.
    pub fn increment(&self, i: usize, j: usize) -> Result<GroupElement> {
        if i > j {
            return Err(Error::IndexOrder { i, j });
        }
        if j >= self.values.len() {
            return Err(Error::InvalidInterval { start: i, end: j, points: self.values.len() });
        }
        Ok(self.increment_unchecked(i, j))
    }

    pub(crate) fn increment_unchecked(&self, i: usize, j: usize) -> GroupElement {
        self.inverses[i].mul_unchecked(&self.values[j])
    }

    /// Level-1 projection as a Euclidean path starting at the origin.
    pub fn level_one(&self) -> EuclideanPath {
        EuclideanPath::new(self.grid.clone(), self.values.iter().map(|g| g.level(1).to_vec()).collect())
            .expect("level-1 projection of a valid group path")
    }

    /// Pointwise dilation `X_t ↦ δ_λ X_t`.
    pub fn dilated(&self, lambda: f64) -> Self {
        let values: Vec<GroupElement> = self.values.iter().map(|g| g.dilate(lambda)).collect();
        let inverses = values.iter().map(GroupElement::inverse).collect();
        Self { grid: self.grid.clone(), values, inverses }
    }
}

impl MetricPath for GroupPath {
    fn grid(&self) -> &TimeGrid {
        &self.grid
    }

    fn distance(&self, i: usize, j: usize) -> f64 {
        let (a, b) = if i <= j { (i, j) } else { (j, i) };
        self.increment_unchecked(a, b).homogeneous_norm()
    }
}

/// Signature lift of the piecewise-linear interpolant via Chen's identity.
pub fn lift(path: &EuclideanPath, depth: usize) -> Result<GroupPath> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthCap { depth, cap: MAX_DEPTH });
    }
    let mut values = Vec::with_capacity(path.grid.len());
    let mut current = GroupElement::identity(path.dim, depth)?;
    values.push(current.clone());
    for j in 1..path.grid.len() {
        let step = GroupElement::segment_exp(&path.increment(j - 1, j), depth)?;
        current = current.mul_unchecked(&step);
        values.push(current.clone());
    }
    GroupPath::new(path.grid.clone(), values)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_validation() {
        assert!(TimeGrid::new(vec![0.0]).is_err());
        assert!(TimeGrid::new(vec![0.1, 0.2]).is_err());
        assert!(TimeGrid::new(vec![0.0, 0.5, 0.5]).is_err());
        let g = TimeGrid::new(vec![0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        assert!(g.is_uniform());
        assert!(!TimeGrid::new(vec![0.0, 0.3, 1.0]).unwrap().is_uniform());
        assert_eq!(g.index_of(0.75), Some(3));
        assert_eq!(g.index_of(0.7), None);
    }

    #[test]
    fn lift_single_segment() {
        let p = EuclideanPath::new(TimeGrid::uniform(1.0, 1).unwrap(), vec![vec![0.0, 0.0], vec![1.0, 0.0]])
            .unwrap();
        let x = lift(&p, 2).unwrap();
        assert_eq!(x.value(1), &GroupElement::segment_exp(&[1.0, 0.0], 2).unwrap());
    }

    #[test]
    fn lift_l_shaped_path() {
        let p = EuclideanPath::new(
            TimeGrid::uniform(2.0, 2).unwrap(),
            vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0]],
        )
        .unwrap();
        let x = lift(&p, 2).unwrap();
        assert_eq!(x.value(2).level(2), &[0.5, 1.0, 0.0, 0.5]);
    }

    #[test]
    fn constant_path_lifts_to_identity() {
        let p = EuclideanPath::scalar(TimeGrid::uniform(1.0, 4).unwrap(), &[2.0; 5]).unwrap();
        let x = lift(&p, 3).unwrap();
        let e = GroupElement::identity(1, 3).unwrap();
        assert!(x.values().iter().all(|g| *g == e));
    }

    #[test]
    fn increment_order_and_telescoping() {
        let p = EuclideanPath::new(
            TimeGrid::uniform(1.0, 3).unwrap(),
            vec![vec![0.0, 0.0], vec![1.0, 0.5], vec![0.2, 1.0], vec![-1.0, 0.0]],
        )
        .unwrap();
        let x = lift(&p, 3).unwrap();
        assert!(matches!(x.increment(2, 1), Err(Error::IndexOrder { .. })));
        assert_eq!(x.increment(1, 1).unwrap(), GroupElement::identity(2, 3).unwrap());
        let full = x.increment(0, 3).unwrap();
        assert!(full.tensor().max_abs_diff(x.value(3).tensor()) < 1e-15);
    }

    #[test]
    fn resample_examples() {
        let grid = TimeGrid::uniform(2.0, 8).unwrap();
        let p = EuclideanPath::from_fn(grid, |t| vec![t * t, -t]).unwrap();
        let same = resample_uniform(&p, 8).unwrap();
        assert_eq!(same, p);
        let lin = EuclideanPath::from_fn(TimeGrid::new(vec![0.0, 0.3, 1.0]).unwrap(), |t| vec![t]).unwrap();
        let r = resample_uniform(&lin, 7).unwrap();
        for (j, &t) in r.grid().times().iter().enumerate() {
            assert!((r.point(j)[0] - t).abs() < 1e-15);
        }
        assert_eq!(r.point(7), lin.point(2));
    }

    #[test]
    fn reversal_flips_time() {
        let p = EuclideanPath::scalar(TimeGrid::new(vec![0.0, 0.2, 1.0]).unwrap(), &[0.0, 1.0, 3.0]).unwrap();
        let r = p.reversed();
        assert_eq!(r.grid().times(), &[0.0, 0.8, 1.0]);
        assert_eq!(r.point(0), &[3.0]);
        assert_eq!(r.point(2), &[0.0]);
    }
}
