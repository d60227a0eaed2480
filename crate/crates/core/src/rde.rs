//! Euler schemes for `dY = V(Y) dX`.
//!
//! Both solvers return `Y` sampled on the driver grid; substeps refine each
//! grid interval internally. Leaving the box `|Y − y0|_∞ ≤ R` of the vector
//! field is a hard [`Error::BlowUp`].

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::path::{EuclideanPath, GroupPath};
use crate::tensor::GroupElement;
use crate::vector_field::VectorField;

/// Largest signature depth the step-N scheme supports.
pub const RDE_MAX_DEPTH: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    EulerBV,
    RoughEulerStepN,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RdeConfig {
    pub depth: usize,
    pub substeps: usize,
    pub scheme: Scheme,
}

impl RdeConfig {
    pub fn euler_bv(substeps: usize) -> Self {
        Self { depth: 1, substeps, scheme: Scheme::EulerBV }
    }

    pub fn rough(depth: usize, substeps: usize) -> Self {
        Self { depth, substeps, scheme: Scheme::RoughEulerStepN }
    }

    pub fn validate(&self) -> Result<()> {
        if self.depth == 0 || self.depth > RDE_MAX_DEPTH {
            return Err(Error::Parameter(format!("RDE depth must lie in 1..={RDE_MAX_DEPTH}, got {}", self.depth)));
        }
        if self.substeps == 0 {
            return Err(Error::Parameter("substeps must be at least 1".into()));
        }
        if self.scheme == Scheme::EulerBV && self.depth != 1 {
            return Err(Error::Parameter("EulerBV runs at depth 1".into()));
        }
        Ok(())
    }
}

fn check_start(y0: &[f64], field: &VectorField, driver_dim: usize) -> Result<()> {
    if y0.len() != field.state_dim() {
        return Err(Error::DimensionMismatch { left: y0.len(), right: field.state_dim() });
    }
    if driver_dim != field.driver_dim() {
        return Err(Error::DimensionMismatch { left: driver_dim, right: field.driver_dim() });
    }
    if y0.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Parameter("initial condition must be finite".into()))
    }
}

fn inside_box(y: &[f64], y0: &[f64], radius: f64) -> bool {
    y.iter().zip(y0).all(|(a, b)| (a - b).abs() <= radius)
}

/// Left-point Riemann–Stieltjes Euler: `Y ← Y + V(Y)·Δx / s`, `s` times per interval.
pub fn solve_bv(y0: &[f64], field: &VectorField, x: &EuclideanPath, config: &RdeConfig) -> Result<EuclideanPath> {
    config.validate()?;
    check_start(y0, field, x.dim())?;
    let (m, n) = (field.state_dim(), field.driver_dim());
    let s = config.substeps;
    let times = x.grid().times();
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(times.len());
    out.push(y.clone());
    for j in 0..x.grid().intervals() {
        let dx: Vec<f64> = x.increment(j, j + 1).into_iter().map(|d| d / s as f64).collect();
        let dt = (times[j + 1] - times[j]) / s as f64;
        for sub in 0..s {
            let v = field.eval(&y);
            for a in 0..m {
                y[a] += (0..n).map(|i| v[a * n + i] * dx[i]).sum::<f64>();
            }
            if !inside_box(&y, y0, field.box_radius()) {
                return Err(Error::BlowUp { time: times[j] + (sub + 1) as f64 * dt });
            }
        }
        out.push(y.clone());
    }
    EuclideanPath::new(x.grid().clone(), out)
}

/// One step-N Euler update `Σ_k Σ_words (V_{i_1}···V_{i_k} Id)(y) · g^{(i_1..i_k)}`.
fn step_n_update(field: &VectorField, y: &[f64], g: &GroupElement, depth: usize) -> Vec<f64> {
    let (m, n) = (field.state_dim(), field.driver_dim());
    let v = field.eval(y);
    let mut dy = vec![0.0; m];
    let l1 = g.level(1);
    for a in 0..m {
        dy[a] += (0..n).map(|i| v[a * n + i] * l1[i]).sum::<f64>();
    }
    if depth < 2 {
        return dy;
    }
    let jac = field.jacobian(y);
    // dv[j][a][b] = ∂_b V_j^a
    let dv = |j: usize, a: usize, b: usize| jac[(a * n + j) * m + b];
    let col = |i: usize, a: usize| v[a * n + i];
    let l2 = g.level(2);
    for i in 0..n {
        for j in 0..n {
            let c = l2[i * n + j];
            if c == 0.0 {
                continue;
            }
            // V_i V_j Id = DV_j · V_i
            for a in 0..m {
                dy[a] += c * (0..m).map(|b| dv(j, a, b) * col(i, b)).sum::<f64>();
            }
        }
    }
    if depth < 3 {
        return dy;
    }
    let hess = field.hessian();
    let d2v = |k: usize, a: usize, b: usize, c: usize| hess[((a * n + k) * m + b) * m + c];
    let l3 = g.level(3);
    for i in 0..n {
        // w[j][a] = (DV_j · V_i)^a
        let w: Vec<f64> = (0..n)
            .flat_map(|j| (0..m).map(move |a| (j, a)))
            .map(|(j, a)| (0..m).map(|b| dv(j, a, b) * col(i, b)).sum::<f64>())
            .collect();
        for j in 0..n {
            for k in 0..n {
                let c = l3[(i * n + j) * n + k];
                if c == 0.0 {
                    continue;
                }
                // V_i V_j V_k Id = D²V_k[V_j, V_i] + DV_k · DV_j · V_i
                for a in 0..m {
                    let mut term = 0.0;
                    for b in 0..m {
                        term += dv(k, a, b) * w[j * m + b];
                        for cc in 0..m {
                            term += d2v(k, a, b, cc) * col(j, b) * col(i, cc);
                        }
                    }
                    dy[a] += c * term;
                }
            }
        }
    }
    dy
}

/// Step-N Euler driven by a group-valued path; each grid increment is split
/// into `s` equal geodesic pieces `exp(log(X_{j,j+1}) / s)`.
pub fn solve_rough(y0: &[f64], field: &VectorField, x: &GroupPath, config: &RdeConfig) -> Result<EuclideanPath> {
    config.validate()?;
    if config.depth != x.depth() {
        return Err(Error::DepthMismatch { left: config.depth, right: x.depth() });
    }
    check_start(y0, field, x.dim())?;
    if x.depth() >= 2 && field.lip_gamma() <= x.depth() as f64 {
        return Err(Error::Parameter(format!(
            "step-{} scheme needs γ > {}, field declares γ = {}",
            x.depth(),
            x.depth(),
            field.lip_gamma()
        )));
    }
    let s = config.substeps;
    let times = x.grid().times();
    let mut y = y0.to_vec();
    let mut out = Vec::with_capacity(times.len());
    out.push(y.clone());
    for j in 0..x.grid().intervals() {
        let inc = x.increment_unchecked(j, j + 1);
        let piece = if s == 1 { inc } else { inc.root(s) };
        let dt = (times[j + 1] - times[j]) / s as f64;
        for sub in 0..s {
            let dy = step_n_update(field, &y, &piece, x.depth());
            y.iter_mut().zip(&dy).for_each(|(a, d)| *a += d);
            if !inside_box(&y, y0, field.box_radius()) || !y.iter().all(|v| v.is_finite()) {
                return Err(Error::BlowUp { time: times[j] + (sub + 1) as f64 * dt });
            }
        }
        out.push(y.clone());
    }
    EuclideanPath::new(x.grid().clone(), out)
}

/// The Itô–Lyons map `(y0, V, X) ↦ Y`: EulerBV on the first level when
/// `X` has depth 1, step-N Euler otherwise.
pub fn ito_lyons(y0: &[f64], field: &VectorField, x: &GroupPath, substeps: usize) -> Result<EuclideanPath> {
    if x.depth() == 1 {
        solve_bv(y0, field, &x.level_one(), &RdeConfig::euler_bv(substeps))
    } else {
        solve_rough(y0, field, x, &RdeConfig::rough(x.depth(), substeps))
    }
}
