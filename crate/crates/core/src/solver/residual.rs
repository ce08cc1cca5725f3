use std::ops::Range;

use serde::Serialize;

use super::Mesh;
use crate::error::{Error, Result};
use crate::geometry::BoundaryKind;
use crate::nonlinearity::Nonlinearity;
use crate::tridiag::Tridiagonal;

/// Discrete `−L_μ u + f(u)` on a fixed mesh, in flux form.
///
/// At node `i` the radial Laplacian is
/// `c⁺ᵢ (u_{i+1} − uᵢ) − c⁻ᵢ (uᵢ − u_{i−1})` with
/// `c^± = r_{i±1/2}^{N−1} / (h_{i±1/2} Vᵢ)` and `Vᵢ = ∫ r^{N−1} dr` over the
/// dual cell `[r_{i−1/2}, r_{i+1/2}]`. At the ball center this reduces to the
/// ghost reflection `2N(u₁ − u₀)/h²`.
#[derive(Debug, Clone)]
pub struct Operator {
    nl: Nonlinearity,
    lower: Vec<f64>,
    upper: Vec<f64>,
    potential: Vec<f64>,
}

/// `(b^N − a^N) / (N (b − a))` without forming the difference of powers.
fn cell_weight(a: f64, b: f64, dim: usize) -> f64 {
    let mut sum = 0.0;
    for k in 0..dim {
        sum += a.powi(k as i32) * b.powi((dim - 1 - k) as i32);
    }
    sum / dim as f64
}

/// Evaluation error allowed per unit of stencil magnitude `Σ c |u|`. Near
/// the ball center `c ~ 1/h²` while `Δu` stays O(1), so one ulp of `u`
/// already moves the residual by more than `1e-10` of its scale.
const ROUNDOFF_FLOOR: f64 = 16.0 * f64::EPSILON;

impl Operator {
    pub fn new(nl: &Nonlinearity, mu: f64, mesh: &Mesh) -> Result<Self> {
        if !(mu >= 0.0) || !mu.is_finite() {
            return Err(Error::InvalidParameter(format!("mu = {mu}")));
        }
        let n = mesh.len();
        let w = mesh.domain.dim as i32 - 1;
        let mut lower = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut potential = vec![0.0; n];
        for i in 0..n {
            let d = mesh.delta[i];
            potential[i] = if d > 0.0 { mu / (d * d) } else { f64::INFINITY };
            if i == 0 {
                if mesh.domain.left_boundary() == BoundaryKind::Symmetry {
                    let h = mesh.spacing(0);
                    upper[0] = 2.0 * mesh.domain.dim as f64 / (h * h);
                }
                continue;
            }
            if i == n - 1 {
                continue;
            }
            let (hl, hr) = (mesh.spacing(i - 1), mesh.spacing(i));
            let a = 0.5 * (mesh.r[i - 1] + mesh.r[i]);
            let b = 0.5 * (mesh.r[i] + mesh.r[i + 1]);
            let vol = 0.5 * (hl + hr) * cell_weight(a, b, mesh.domain.dim);
            lower[i] = a.powi(w) / (hl * vol);
            upper[i] = b.powi(w) / (hr * vol);
        }
        Ok(Self {
            nl: *nl,
            lower,
            upper,
            potential,
        })
    }

    fn check_nodes(&self, nodes: &Range<usize>) -> Result<()> {
        if !nodes.is_empty() && nodes.end >= self.potential.len() {
            return Err(Error::Mesh(format!("equation range {nodes:?} touches the last node")));
        }
        if let Some(i) = nodes.clone().find(|&i| !self.potential[i].is_finite()) {
            return Err(Error::Mesh(format!("equation node {i} sits on the boundary")));
        }
        Ok(())
    }

    /// Residual, its scale and its round-off allowance at node `i`.
    #[inline]
    fn node(&self, u: &[f64], i: usize) -> (f64, f64, f64) {
        let right = self.upper[i] * (u[i + 1] - u[i]);
        let left = if i > 0 { self.lower[i] * (u[i] - u[i - 1]) } else { 0.0 };
        let absorb = self.nl.f_raw(u[i]);
        let hardy = self.potential[i] * u[i];
        let stencil = self.upper[i] * (u[i + 1].abs() + u[i].abs())
            + if i > 0 { self.lower[i] * (u[i].abs() + u[i - 1].abs()) } else { 0.0 };
        let scale = right.abs() + left.abs() + hardy.abs() + absorb.abs();
        (-(right - left) - hardy + absorb, scale, ROUNDOFF_FLOOR * stencil)
    }

    pub fn residual(&self, u: &[f64], nodes: Range<usize>) -> Result<Residual> {
        self.check_nodes(&nodes)?;
        let mut values = vec![0.0; u.len()];
        let mut scale = vec![0.0; u.len()];
        let mut roundoff = vec![0.0; u.len()];
        for i in nodes.clone() {
            (values[i], scale[i], roundoff[i]) = self.node(u, i);
        }
        Ok(Residual {
            values,
            scale,
            roundoff,
            nodes,
        })
    }

    /// Jacobian of the residual over `nodes`, with Dirichlet data outside.
    pub(crate) fn jacobian(&self, u: &[f64], nodes: Range<usize>) -> Tridiagonal {
        let m = nodes.len();
        let mut j = Tridiagonal::zeros(m);
        for (k, i) in nodes.enumerate() {
            j.diag[k] = self.upper[i] + self.lower[i] - self.potential[i] + self.nl.df_raw(u[i]);
            if k > 0 {
                j.lower[k] = -self.lower[i];
            }
            if k + 1 < m {
                j.upper[k] = -self.upper[i];
            }
        }
        j
    }
}

/// Nodal residual over a node range; entries outside the range are zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Residual {
    pub values: Vec<f64>,
    /// Sum of the magnitudes of the individual terms at each node.
    pub scale: Vec<f64>,
    /// Floating-point evaluation error of the diffusion stencil.
    pub roundoff: Vec<f64>,
    pub nodes: Range<usize>,
}

impl Residual {
    /// Residual beyond round-off, relative to `scale[i]`.
    pub fn scaled(&self, i: usize) -> f64 {
        let v = self.values[i];
        let excess = (v.abs() - self.roundoff[i]).max(0.0).copysign(v);
        let s = self.scale[i];
        if s > 0.0 {
            excess / s
        } else {
            excess
        }
    }

    pub fn scaled_max_norm(&self) -> f64 {
        self.nodes.clone().map(|i| self.scaled(i).abs()).fold(0.0, f64::max)
    }
}

/// Residual of the full-domain equations (every node that is not boundary data).
pub fn assemble_residual(nl: &Nonlinearity, mu: f64, mesh: &Mesh, u: &[f64]) -> Result<Residual> {
    if u.len() != mesh.len() {
        return Err(Error::Usage(format!("{} values for {} nodes", u.len(), mesh.len())));
    }
    Operator::new(nl, mu, mesh)?.residual(u, equation_nodes(mesh))
}

/// Nodes carrying an equation in a full-domain solve.
pub fn equation_nodes(mesh: &Mesh) -> Range<usize> {
    let start = usize::from(mesh.domain.left_boundary() != BoundaryKind::Symmetry);
    start..mesh.len() - 1
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignClass {
    Solution,
    Subsolution,
    Supersolution,
    Neither,
}

/// Sign pattern of the scaled residual over `nodes`, with tolerance band `±band`.
pub fn residual_sign_classify(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    u: &[f64],
    nodes: Range<usize>,
    band: f64,
) -> Result<SignClass> {
    let res = Operator::new(nl, mu, mesh)?.residual(u, nodes.clone())?;
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    for i in nodes {
        let s = res.scaled(i);
        lo = lo.min(s);
        hi = hi.max(s);
    }
    Ok(match (lo >= -band, hi <= band) {
        (true, true) => SignClass::Solution,
        (true, false) => SignClass::Supersolution,
        (false, true) => SignClass::Subsolution,
        (false, false) => SignClass::Neither,
    })
}
