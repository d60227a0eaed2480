//! Truncated tensor algebra `T^N(R^n)` and the step-`N` free nilpotent group.
//!
//! Level `k` of a tensor is stored densely as `n^k` coefficients in
//! lexicographic multi-index order, so the entry for the word `(i_1, ..., i_k)`
//! sits at `((i_1 * n + i_2) * n + ...) * n + i_k`.

use crate::error::{Error, Result};

/// Largest supported truncation depth.
pub const MAX_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedTensor {
    dim: usize,
    depth: usize,
    levels: Vec<Vec<f64>>,
}

fn check_shape(dim: usize, depth: usize) -> Result<()> {
    if dim == 0 {
        return Err(Error::InvalidTensor("dimension must be positive".into()));
    }
    if depth == 0 {
        return Err(Error::InvalidTensor("depth must be positive".into()));
    }
    if depth > MAX_DEPTH {
        return Err(Error::DepthCap { depth, cap: MAX_DEPTH });
    }
    Ok(())
}

impl TruncatedTensor {
    pub fn zeros(dim: usize, depth: usize) -> Result<Self> {
        check_shape(dim, depth)?;
        let levels = (0..=depth).map(|k| vec![0.0; dim.pow(k as u32)]).collect();
        Ok(Self { dim, depth, levels })
    }

    /// The unit `(1, 0, ..., 0)`.
    pub fn unit(dim: usize, depth: usize) -> Result<Self> {
        let mut t = Self::zeros(dim, depth)?;
        t.levels[0][0] = 1.0;
        Ok(t)
    }

    pub fn from_levels(dim: usize, depth: usize, levels: Vec<Vec<f64>>) -> Result<Self> {
        check_shape(dim, depth)?;
        if levels.len() != depth + 1 {
            return Err(Error::InvalidTensor(format!(
                "expected {} levels, got {}",
                depth + 1,
                levels.len()
            )));
        }
        for (k, block) in levels.iter().enumerate() {
            let want = dim.pow(k as u32);
            if block.len() != want {
                return Err(Error::InvalidTensor(format!(
                    "level {k} has {} entries, expected {want}",
                    block.len()
                )));
            }
            if block.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidTensor(format!("level {k} has a non-finite entry")));
            }
        }
        Ok(Self { dim, depth, levels })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn level(&self, k: usize) -> &[f64] {
        &self.levels[k]
    }

    pub fn levels(&self) -> &[Vec<f64>] {
        &self.levels
    }

    /// Euclidean norm of level `k`.
    pub fn level_norm(&self, k: usize) -> f64 {
        self.levels[k].iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.levels
            .iter()
            .flatten()
            .fold(0.0_f64, |acc, x| acc.max(x.abs()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.levels
            .iter()
            .flatten()
            .zip(other.levels.iter().flatten())
            .fold(0.0_f64, |acc, (a, b)| acc.max((a - b).abs()))
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch { left: self.dim, right: other.dim });
        }
        if self.depth != other.depth {
            return Err(Error::DepthMismatch { left: self.depth, right: other.depth });
        }
        Ok(())
    }

    /// Tensor product truncated at the common depth.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let n = self.dim;
        let mut levels: Vec<Vec<f64>> =
            (0..=self.depth).map(|k| vec![0.0; n.pow(k as u32)]).collect();
        for (k, out) in levels.iter_mut().enumerate() {
            for i in 0..=k {
                let j = k - i;
                let a = &self.levels[i];
                let b = &other.levels[j];
                let stride = b.len();
                for (ia, &x) in a.iter().enumerate() {
                    if x == 0.0 {
                        continue;
                    }
                    let row = &mut out[ia * stride..(ia + 1) * stride];
                    for (o, &y) in row.iter_mut().zip(b) {
                        *o += x * y;
                    }
                }
            }
        }
        Self { dim: n, depth: self.depth, levels }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.zip_with(other, |a, b| a - b))
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|x| c * x)
    }

    fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        let levels = self.levels.iter().map(|b| b.iter().map(|&x| f(x)).collect()).collect();
        Self { dim: self.dim, depth: self.depth, levels }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        let levels = self
            .levels
            .iter()
            .zip(&other.levels)
            .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| f(x, y)).collect())
            .collect();
        Self { dim: self.dim, depth: self.depth, levels }
    }

    fn add_assign_scaled(&mut self, other: &Self, c: f64) {
        for (a, b) in self.levels.iter_mut().zip(&other.levels) {
            for (x, &y) in a.iter_mut().zip(b) {
                *x += c * y;
            }
        }
    }

    /// Truncated logarithm of a tensor with scalar part 1.
    pub(crate) fn log_unit(&self) -> Self {
        let mut x = self.clone();
        x.levels[0][0] = 0.0;
        let mut out = Self::zeros(self.dim, self.depth).expect("shape already validated");
        let mut power = x.clone();
        for k in 1..=self.depth {
            let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
            out.add_assign_scaled(&power, sign / k as f64);
            power = power.mul_unchecked(&x);
        }
        out
    }

    /// Truncated exponential of a tensor with vanishing scalar part.
    pub(crate) fn exp_nilpotent(&self) -> Self {
        let mut out = Self::unit(self.dim, self.depth).expect("shape already validated");
        let mut power = self.clone();
        let mut factorial = 1.0;
        for k in 1..=self.depth {
            factorial *= k as f64;
            out.add_assign_scaled(&power, 1.0 / factorial);
            power = power.mul_unchecked(self);
        }
        out
    }
}

/// `a ⊗ b` in the truncated tensor algebra.
pub fn tensor_mul(a: &TruncatedTensor, b: &TruncatedTensor) -> Result<TruncatedTensor> {
    a.mul(b)
}

/// Element of the step-`N` free nilpotent group: a truncated tensor whose
/// scalar part is exactly 1 and whose level 2 has symmetric part `½ x⊗x`.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupElement(TruncatedTensor);

impl GroupElement {
    pub const GROUP_LIKE_TOL: f64 = 1e-9;

    pub fn identity(dim: usize, depth: usize) -> Result<Self> {
        TruncatedTensor::unit(dim, depth).map(Self)
    }

    /// Validates the scalar level and, at depth ≥ 2, the level-2 group-like
    /// condition to [`Self::GROUP_LIKE_TOL`].
    pub fn new(tensor: TruncatedTensor) -> Result<Self> {
        if tensor.level(0)[0] != 1.0 {
            return Err(Error::NotGroupElement(format!(
                "scalar level is {}, expected 1",
                tensor.level(0)[0]
            )));
        }
        let g = Self(tensor);
        if !g.is_group_like(Self::GROUP_LIKE_TOL) {
            return Err(Error::NotGroupElement(
                "symmetric part of level 2 differs from ½ x⊗x".into(),
            ));
        }
        Ok(g)
    }

    /// Signature of the straight segment with increment `delta`.
    pub fn segment_exp(delta: &[f64], depth: usize) -> Result<Self> {
        let dim = delta.len();
        let mut t = TruncatedTensor::unit(dim, depth)?;
        if delta.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidTensor("non-finite increment".into()));
        }
        for k in 1..=depth {
            let (prev, rest) = t.levels.split_at_mut(k);
            let prev = &prev[k - 1];
            let cur = &mut rest[0];
            let inv_k = 1.0 / k as f64;
            for (ia, &x) in prev.iter().enumerate() {
                for (b, &d) in delta.iter().enumerate() {
                    cur[ia * dim + b] = x * d * inv_k;
                }
            }
        }
        Ok(Self(t))
    }

    /// `exp(a·[e_i, e_j])`: the element with vanishing level 1 and signed
    /// area `a` in the `(i, j)` plane.
    pub fn pure_area(dim: usize, depth: usize, i: usize, j: usize, a: f64) -> Result<Self> {
        if i >= dim || j >= dim || i == j {
            return Err(Error::Parameter(format!("invalid area plane ({i}, {j}) in dimension {dim}")));
        }
        let mut lie = TruncatedTensor::zeros(dim, depth)?;
        if depth >= 2 {
            lie.levels[2][i * dim + j] = a;
            lie.levels[2][j * dim + i] = -a;
        }
        Ok(Self(lie.exp_nilpotent()))
    }

    pub fn tensor(&self) -> &TruncatedTensor {
        &self.0
    }

    pub fn into_tensor(self) -> TruncatedTensor {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.dim
    }

    pub fn depth(&self) -> usize {
        self.0.depth
    }

    pub fn level(&self, k: usize) -> &[f64] {
        self.0.level(k)
    }

    pub fn is_group_like(&self, tol: f64) -> bool {
        if self.depth() < 2 {
            return true;
        }
        let n = self.dim();
        let x = self.level(1);
        let area = self.level(2);
        let scale = 1.0 + x.iter().map(|v| v * v).sum::<f64>() + self.0.level_norm(2);
        (0..n).all(|a| {
            (0..n).all(|b| {
                let sym = 0.5 * (area[a * n + b] + area[b * n + a]);
                (sym - 0.5 * x[a] * x[b]).abs() <= tol * scale
            })
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.0.mul(&other.0).map(Self)
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        Self(self.0.mul_unchecked(&other.0))
    }

    /// Inverse through the finite Neumann series `Σ_{k=0}^{N} (1 − g)^{⊗k}`.
    pub fn inverse(&self) -> Self {
        let mut one_minus = self.0.scale(-1.0);
        one_minus.levels[0][0] = 0.0;
        let mut acc = TruncatedTensor::unit(self.dim(), self.depth()).expect("valid shape");
        let mut power = acc.clone();
        for _ in 1..=self.depth() {
            power = power.mul_unchecked(&one_minus);
            acc.add_assign_scaled(&power, 1.0);
        }
        Self(acc)
    }

    /// Dilation `π_k ↦ λ^k π_k`.
    pub fn dilate(&self, lambda: f64) -> Self {
        let mut t = self.0.clone();
        let mut factor = 1.0;
        for block in t.levels.iter_mut().skip(1) {
            factor *= lambda;
            for x in block.iter_mut() {
                *x *= factor;
            }
        }
        Self(t)
    }

    /// Symmetric homogeneous norm
    /// `max(max_k |π_k(g)|^{1/k}, max_k |π_k(g⁻¹)|^{1/k})`, equivalent to the
    /// Carnot–Carathéodory norm up to constants.
    pub fn homogeneous_norm(&self) -> f64 {
        let one_sided = |t: &TruncatedTensor| {
            (1..=t.depth)
                .map(|k| t.level_norm(k).powf(1.0 / k as f64))
                .fold(0.0_f64, f64::max)
        };
        one_sided(&self.0).max(one_sided(&self.inverse().0))
    }

    /// `g^{1/s} = exp(log(g)/s)`, the increment of the log-linear
    /// interpolation over one of `s` equal substeps.
    pub(crate) fn root(&self, s: usize) -> Self {
        if s == 1 {
            return self.clone();
        }
        Self(self.0.log_unit().scale(1.0 / s as f64).exp_nilpotent())
    }
}

pub fn group_inverse(g: &GroupElement) -> GroupElement {
    g.inverse()
}

pub fn segment_exp(delta: &[f64], depth: usize) -> Result<GroupElement> {
    GroupElement::segment_exp(delta, depth)
}

pub fn dilate(g: &GroupElement, lambda: f64) -> GroupElement {
    g.dilate(lambda)
}

pub fn homogeneous_norm(g: &GroupElement) -> f64 {
    g.homogeneous_norm()
}

/// Left-invariant surrogate for the Carnot–Carathéodory distance,
/// `homogeneous_norm(g⁻¹ ⊗ h)`.
pub fn group_distance(g: &GroupElement, h: &GroupElement) -> Result<f64> {
    Ok(g.inverse().mul(h)?.homogeneous_norm())
}
