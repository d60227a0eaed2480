//! Polynomial vector fields `V = (V_1, ..., V_n)` on `R^m` of degree at most two.
//!
//! `V_i^a(y) = c[a][i] + Σ_b L[a][i][b] y_b + Σ_{b,c} Q[a][i][b][c] y_b y_c`
//! with `Q` symmetric in `(b, c)`. First and second derivatives are exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points sampled in the box for Lipschitz-type estimates.
pub const LIP_SAMPLES: usize = 256;
const LIP_SEED: u64 = 0x5eed_1ab;
const DEFAULT_GAMMA: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldFamily {
    Linear,
    Affine,
    Polynomial,
}

impl FieldFamily {
    /// Coefficients per component row in the JSON layout.
    fn row_len(self, m: usize) -> usize {
        match self {
            FieldFamily::Linear => m,
            FieldFamily::Affine => 1 + m,
            FieldFamily::Polynomial => 1 + m + m * m,
        }
    }
}

/// On-disk layout: `coefficients[i][a]` is the row of `V_i^a`, holding
/// `[L_a1..L_am]` (linear), `[c, L_a1..L_am]` (affine) or
/// `[c, L_a1..L_am, Q_a11, Q_a12, ..., Q_amm]` (polynomial).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub family: FieldFamily,
    pub m: usize,
    pub n: usize,
    pub coefficients: Vec<Vec<Vec<f64>>>,
    pub box_radius: f64,
    pub lip_gamma: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    family: FieldFamily,
    m: usize,
    n: usize,
    /// `[a][i]`
    constant: Vec<f64>,
    /// `[a][i][b]`
    linear: Vec<f64>,
    /// `[a][i][b][c]`, symmetric in `(b, c)`
    quadratic: Vec<f64>,
    box_radius: f64,
    lip_gamma: f64,
}

/// Sup norms of `V`, `DV`, `D²V` over a sampled box.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeBounds {
    pub value: f64,
    pub first: f64,
    pub second: f64,
}

impl VectorField {
    fn empty(family: FieldFamily, m: usize, n: usize, box_radius: f64) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::Parameter("vector field dimensions must be positive".into()));
        }
        if !(box_radius > 0.0) {
            return Err(Error::Parameter(format!("box radius must be positive, got {box_radius}")));
        }
        Ok(Self {
            family,
            m,
            n,
            constant: vec![0.0; m * n],
            linear: vec![0.0; m * n * m],
            quadratic: vec![0.0; m * n * m * m],
            box_radius,
            lip_gamma: DEFAULT_GAMMA,
        })
    }

    /// `V_i(y) = A_i y` with `matrices[i]` row-major `m × m`.
    pub fn linear(matrices: &[Vec<f64>], m: usize, box_radius: f64) -> Result<Self> {
        let mut field = Self::empty(FieldFamily::Linear, m, matrices.len(), box_radius)?;
        field.set_linear(matrices)?;
        Ok(field)
    }

    /// `V_i(y) = b_i + A_i y`.
    pub fn affine(offsets: &[Vec<f64>], matrices: &[Vec<f64>], m: usize, box_radius: f64) -> Result<Self> {
        if offsets.len() != matrices.len() {
            return Err(Error::DimensionMismatch { left: offsets.len(), right: matrices.len() });
        }
        let mut field = Self::empty(FieldFamily::Affine, m, matrices.len(), box_radius)?;
        field.set_linear(matrices)?;
        field.set_constant(offsets)?;
        Ok(field)
    }

    /// Constant fields `V_i ≡ b_i`, tagged affine.
    pub fn constant(offsets: &[Vec<f64>], m: usize, box_radius: f64) -> Result<Self> {
        let zeros = vec![vec![0.0; m * m]; offsets.len()];
        Self::affine(offsets, &zeros, m, box_radius)
    }

    /// The zero field with driver dimension `n`.
    pub fn zero(m: usize, n: usize, box_radius: f64) -> Result<Self> {
        Self::empty(FieldFamily::Linear, m, n, box_radius)
    }

    /// Quadratic fields; `quadratics[i]` holds `Q[a][b][c]` flattened and is
    /// symmetrized in `(b, c)`.
    pub fn polynomial(
        offsets: &[Vec<f64>],
        matrices: &[Vec<f64>],
        quadratics: &[Vec<f64>],
        m: usize,
        box_radius: f64,
    ) -> Result<Self> {
        if quadratics.len() != matrices.len() {
            return Err(Error::DimensionMismatch { left: quadratics.len(), right: matrices.len() });
        }
        let mut field = Self::affine(offsets, matrices, m, box_radius)?;
        field.family = FieldFamily::Polynomial;
        for (i, q) in quadratics.iter().enumerate() {
            if q.len() != m * m * m {
                return Err(Error::DimensionMismatch { left: q.len(), right: m * m * m });
            }
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        let sym = 0.5 * (q[(a * m + b) * m + c] + q[(a * m + c) * m + b]);
                        let idx = field.q_idx(a, i, b, c);
                        field.quadratic[idx] = sym;
                    }
                }
            }
        }
        field.check_finite()?;
        Ok(field)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        let FieldSpec { family, m, n, ref coefficients, box_radius, lip_gamma } = *spec;
        let mut field = Self::empty(family, m, n, box_radius)?;
        if coefficients.len() != n {
            return Err(Error::DimensionMismatch { left: coefficients.len(), right: n });
        }
        let row_len = family.row_len(m);
        for (i, rows) in coefficients.iter().enumerate() {
            if rows.len() != m {
                return Err(Error::DimensionMismatch { left: rows.len(), right: m });
            }
            for (a, row) in rows.iter().enumerate() {
                if row.len() != row_len {
                    return Err(Error::DimensionMismatch { left: row.len(), right: row_len });
                }
                let (c, rest) = match family {
                    FieldFamily::Linear => (0.0, &row[..]),
                    _ => (row[0], &row[1..]),
                };
                field.constant[a * n + i] = c;
                for b in 0..m {
                    let idx = field.l_idx(a, i, b);
                    field.linear[idx] = rest[b];
                }
                if family == FieldFamily::Polynomial {
                    let q = &rest[m..];
                    for b in 0..m {
                        for cc in 0..m {
                            let idx = field.q_idx(a, i, b, cc);
                            field.quadratic[idx] = 0.5 * (q[b * m + cc] + q[cc * m + b]);
                        }
                    }
                }
            }
        }
        field.check_finite()?;
        field.with_gamma(lip_gamma)
    }

    pub fn to_spec(&self) -> FieldSpec {
        let (m, n) = (self.m, self.n);
        let coefficients = (0..n)
            .map(|i| {
                (0..m)
                    .map(|a| {
                        let mut row = Vec::with_capacity(self.family.row_len(m));
                        if self.family != FieldFamily::Linear {
                            row.push(self.constant[a * n + i]);
                        }
                        row.extend((0..m).map(|b| self.linear[self.l_idx(a, i, b)]));
                        if self.family == FieldFamily::Polynomial {
                            for b in 0..m {
                                row.extend((0..m).map(|c| self.quadratic[self.q_idx(a, i, b, c)]));
                            }
                        }
                        row
                    })
                    .collect()
            })
            .collect();
        FieldSpec { family: self.family, m, n, coefficients, box_radius: self.box_radius, lip_gamma: self.lip_gamma }
    }

    /// Declares the regularity index `γ` carried by the field.
    pub fn with_gamma(mut self, gamma: f64) -> Result<Self> {
        if !(gamma >= 1.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("γ must be a finite number ≥ 1, got {gamma}")));
        }
        self.lip_gamma = gamma;
        Ok(self)
    }

    pub fn with_box_radius(mut self, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Parameter(format!("box radius must be positive, got {radius}")));
        }
        self.box_radius = radius;
        Ok(self)
    }

    fn set_linear(&mut self, matrices: &[Vec<f64>]) -> Result<()> {
        let m = self.m;
        for (i, mat) in matrices.iter().enumerate() {
            if mat.len() != m * m {
                return Err(Error::DimensionMismatch { left: mat.len(), right: m * m });
            }
            for a in 0..m {
                for b in 0..m {
                    let idx = self.l_idx(a, i, b);
                    self.linear[idx] = mat[a * m + b];
                }
            }
        }
        self.check_finite()
    }

    fn set_constant(&mut self, offsets: &[Vec<f64>]) -> Result<()> {
        for (i, b) in offsets.iter().enumerate() {
            if b.len() != self.m {
                return Err(Error::DimensionMismatch { left: b.len(), right: self.m });
            }
            for (a, &v) in b.iter().enumerate() {
                self.constant[a * self.n + i] = v;
            }
        }
        self.check_finite()
    }

    fn check_finite(&self) -> Result<()> {
        let all = self.constant.iter().chain(&self.linear).chain(&self.quadratic);
        if all.into_iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err(Error::Parameter("vector field coefficients must be finite".into()))
        }
    }

    #[inline]
    fn l_idx(&self, a: usize, i: usize, b: usize) -> usize {
        (a * self.n + i) * self.m + b
    }

    #[inline]
    fn q_idx(&self, a: usize, i: usize, b: usize, c: usize) -> usize {
        ((a * self.n + i) * self.m + b) * self.m + c
    }

    pub fn family(&self) -> FieldFamily {
        self.family
    }

    /// State dimension `m`.
    pub fn state_dim(&self) -> usize {
        self.m
    }

    /// Driver dimension `n`.
    pub fn driver_dim(&self) -> usize {
        self.n
    }

    pub fn box_radius(&self) -> f64 {
        self.box_radius
    }

    pub fn lip_gamma(&self) -> f64 {
        self.lip_gamma
    }

    /// `V(y)` as a row-major `m × n` matrix, entry `(a, i) = V_i^a(y)`.
    pub fn eval(&self, y: &[f64]) -> Vec<f64> {
        let (m, n) = (self.m, self.n);
        let mut out = self.constant.clone();
        for a in 0..m {
            for i in 0..n {
                let mut acc = 0.0;
                for b in 0..m {
                    let mut lin = self.linear[self.l_idx(a, i, b)];
                    if self.family == FieldFamily::Polynomial {
                        for c in 0..m {
                            lin += self.quadratic[self.q_idx(a, i, b, c)] * y[c];
                        }
                    }
                    acc += lin * y[b];
                }
                out[a * n + i] += acc;
            }
        }
        out
    }

    /// `DV(y)`, entry `[(a·n + i)·m + b] = ∂_b V_i^a(y)`.
    pub fn jacobian(&self, y: &[f64]) -> Vec<f64> {
        let mut out = self.linear.clone();
        if self.family == FieldFamily::Polynomial {
            let m = self.m;
            for (cell, row) in out.iter_mut().zip(self.quadratic.chunks_exact(m)) {
                *cell += 2.0 * row.iter().zip(y).map(|(q, yc)| q * yc).sum::<f64>();
            }
        }
        out
    }

    /// `D²V`, entry `[((a·n + i)·m + b)·m + c] = ∂_b ∂_c V_i^a`, independent of `y`.
    pub fn hessian(&self) -> Vec<f64> {
        self.quadratic.iter().map(|q| 2.0 * q).collect()
    }

    /// Coefficient-wise `self − other`; the family is the larger of the two.
    pub fn difference(&self, other: &Self) -> Result<Self> {
        if self.m != other.m {
            return Err(Error::DimensionMismatch { left: self.m, right: other.m });
        }
        if self.n != other.n {
            return Err(Error::DimensionMismatch { left: self.n, right: other.n });
        }
        let sub = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x - y).collect::<Vec<_>>();
        let family = [self.family, other.family]
            .into_iter()
            .max_by_key(|f| *f as u8)
            .unwrap_or(FieldFamily::Linear);
        Ok(Self {
            family,
            m: self.m,
            n: self.n,
            constant: sub(&self.constant, &other.constant),
            linear: sub(&self.linear, &other.linear),
            quadratic: sub(&self.quadratic, &other.quadratic),
            box_radius: self.box_radius.min(other.box_radius),
            lip_gamma: self.lip_gamma.min(other.lip_gamma),
        })
    }

    /// Multiplies every coefficient by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        let mul = |v: &[f64]| v.iter().map(|x| c * x).collect::<Vec<_>>();
        Self {
            constant: mul(&self.constant),
            linear: mul(&self.linear),
            quadratic: mul(&self.quadratic),
            ..self.clone()
        }
    }

    /// Deterministic sample of the box `|y − center|_∞ ≤ box_radius`,
    /// always containing the center and the corners' midpoints on each axis.
    fn box_samples(&self, center: &[f64]) -> Vec<Vec<f64>> {
        let r = self.box_radius;
        let mut rng = ChaCha8Rng::seed_from_u64(LIP_SEED);
        let mut pts = vec![center.to_vec()];
        for b in 0..self.m {
            for s in [-1.0, 1.0] {
                let mut y = center.to_vec();
                y[b] += s * r;
                pts.push(y);
            }
        }
        while pts.len() < LIP_SAMPLES {
            pts.push(center.iter().map(|c| c + rng.random_range(-r..=r)).collect());
        }
        pts
    }

    /// Sampled sup norms (Euclidean over all indices) of `V`, `DV`, `D²V`.
    pub fn derivative_bounds(&self, center: &[f64]) -> Result<DerivativeBounds> {
        if center.len() != self.m {
            return Err(Error::DimensionMismatch { left: center.len(), right: self.m });
        }
        let euclid = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut bounds = DerivativeBounds { value: 0.0, first: 0.0, second: euclid(&self.hessian()) };
        for y in self.box_samples(center) {
            bounds.value = bounds.value.max(euclid(&self.eval(&y)));
            bounds.first = bounds.first.max(euclid(&self.jacobian(&y)));
        }
        Ok(bounds)
    }

    /// Sampled `Lip^γ` norm on the box around `center`: the maximum of the
    /// sup norms of `D^k V` for `k ≤ ⌈γ⌉ − 1` and the `(γ − ⌈γ⌉ + 1)`-Hölder
    /// constant of the top derivative.
    pub fn lip_norm(&self, gamma: f64, center: &[f64]) -> Result<f64> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(Error::Parameter(format!("γ must be positive and finite, got {gamma}")));
        }
        let bounds = self.derivative_bounds(center)?;
        let top = (gamma.ceil() as usize).saturating_sub(1);
        let frac = gamma - top as f64;
        let sups = [bounds.value, bounds.first, bounds.second];
        let mut norm = sups.iter().take(top + 1).fold(0.0_f64, |acc, &x| acc.max(x));
        if top <= 1 {
            let pts = self.box_samples(center);
            let eval = |y: &[f64]| if top == 0 { self.eval(y) } else { self.jacobian(y) };
            let vals: Vec<Vec<f64>> = pts.iter().map(|y| eval(y)).collect();
            for u in 0..pts.len() {
                for v in u + 1..pts.len() {
                    let dy = pts[u].iter().zip(&pts[v]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    let dv = vals[u].iter().zip(&vals[v]).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt();
                    if dy > 0.0 {
                        norm = norm.max(dv / dy.powf(frac));
                    }
                }
            }
        }
        // D²V is constant, so its Hölder seminorm vanishes for top ≥ 2.
        Ok(norm)
    }

    /// `‖V¹ − V²‖_{Lip^γ}` sampled on the box around `center`.
    pub fn lip_distance(&self, other: &Self, gamma: f64, center: &[f64]) -> Result<f64> {
        self.difference(other)?.lip_norm(gamma, center)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_field() -> VectorField {
        VectorField::polynomial(
            &[vec![0.1, -0.2], vec![0.3, 0.0]],
            &[vec![0.5, -1.0, 0.25, 0.2], vec![0.0, 0.7, -0.3, 0.1]],
            &[vec![0.1, 0.2, -0.3, 0.4, 0.05, -0.1, 0.2, 0.3], vec![0.0, -0.2, 0.1, 0.3, 0.2, 0.0, -0.1, 0.15]],
            2,
            2.0,
        )
        .unwrap()
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let field = sample_field();
        let (m, n) = (2, 2);
        let h = 1e-5;
        for y in [[0.3, -0.7], [1.2, 0.4], [-0.5, -0.5]] {
            let jac = field.jacobian(&y);
            let hess = field.hessian();
            for b in 0..m {
                let mut up = y;
                let mut dn = y;
                up[b] += h;
                dn[b] -= h;
                let (vu, vd) = (field.eval(&up), field.eval(&dn));
                let (ju, jd) = (field.jacobian(&up), field.jacobian(&dn));
                for a in 0..m {
                    for i in 0..n {
                        let fd = (vu[a * n + i] - vd[a * n + i]) / (2.0 * h);
                        let exact = jac[(a * n + i) * m + b];
                        assert!((fd - exact).abs() <= 1e-6 * (1.0 + exact.abs()));
                        for c in 0..m {
                            let idx = (a * n + i) * m + c;
                            let fd2 = (ju[idx] - jd[idx]) / (2.0 * h);
                            let exact2 = hess[idx * m + b];
                            assert!((fd2 - exact2).abs() <= 1e-6 * (1.0 + exact2.abs()));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn spec_round_trip() {
        let field = sample_field().with_gamma(2.5).unwrap();
        let back = VectorField::from_spec(&field.to_spec()).unwrap();
        assert_eq!(back, field);
        let lin = VectorField::linear(&[vec![1.0]], 1, 3.0).unwrap();
        let spec = lin.to_spec();
        assert_eq!(spec.coefficients, vec![vec![vec![1.0]]]);
        assert_eq!(VectorField::from_spec(&spec).unwrap(), lin);
    }

    #[test]
    fn spec_shape_errors() {
        let mut spec = sample_field().to_spec();
        spec.coefficients[0][1].pop();
        assert!(VectorField::from_spec(&spec).is_err());
        let mut spec = sample_field().to_spec();
        spec.box_radius = 0.0;
        assert!(VectorField::from_spec(&spec).is_err());
    }

    #[test]
    fn lip_norm_of_linear_scalar_field() {
        // V(y) = 2y on [-1, 1]: sup|V| = 2, sup|DV| = 2, Lipschitz constant 2.
        let field = VectorField::linear(&[vec![2.0]], 1, 1.0).unwrap();
        assert!((field.lip_norm(1.0, &[0.0]).unwrap() - 2.0).abs() < 1e-12);
        assert!((field.lip_norm(2.5, &[0.0]).unwrap() - 2.0).abs() < 1e-12);
        let other = VectorField::linear(&[vec![1.5]], 1, 1.0).unwrap();
        assert!((field.lip_distance(&other, 1.5, &[0.0]).unwrap() - 0.5).abs() < 1e-12);
        assert_eq!(field.lip_distance(&field, 1.5, &[0.0]).unwrap(), 0.0);
    }

    #[test]
    fn lip_norm_scales_linearly() {
        let field = sample_field();
        let a = field.lip_norm(2.5, &[0.1, 0.2]).unwrap();
        let b = field.scaled(3.0).lip_norm(2.5, &[0.1, 0.2]).unwrap();
        assert!((b - 3.0 * a).abs() <= 1e-12 * b);
    }
}
