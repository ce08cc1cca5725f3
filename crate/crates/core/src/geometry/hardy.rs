//! Discrete Hardy constant
//!
//! ```text
//! c_H(Ω) = inf ∫|∇v|² / ∫ δ⁻² v²
//! ```
//!
//! over radial trial functions: piecewise-linear elements on a mesh that is
//! geometric toward each blow-up boundary, `δ⁻²` sampled at element
//! midpoints, smallest generalized eigenvalue of (stiffness, weighted mass).
//! Near-minimisers of the Hardy quotient oscillate in `ln δ`, so a geometric
//! grid spanning many decades is what lets the discrete value approach the
//! infimum; the midpoint weight keeps every entry finite and the value above
//! the continuous one.

use serde::Serialize;

use super::{BoundaryKind, RadialDomain};
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::tridiag::Tridiagonal;

/// Innermost nonzero node sits at this fraction of the half-width from the boundary.
pub const HARDY_FLOOR_RATIO: f64 = 1e-100;

const MAX_INVERSE_ITERS: usize = 500;
const EIGEN_RTOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyEstimate {
    pub mesh_points: usize,
    pub value: f64,
    pub bisection_steps: usize,
    pub inverse_iterations: usize,
}

/// Geometric nodes `0, W·ρ, …, W` with `intervals` intervals.
fn geometric_side(width: f64, intervals: usize) -> Vec<f64> {
    let mut d = Vec::with_capacity(intervals + 1);
    d.push(0.0);
    for j in 1..=intervals {
        let e = (intervals - j) as f64 / (intervals - 1) as f64;
        d.push(width * HARDY_FLOOR_RATIO.powf(e));
    }
    d
}

/// A mesh node. Near a boundary the radius rounds to the boundary radius long
/// before the distance does, so element lengths are taken from `delta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HardyNode {
    pub r: f64,
    pub delta: f64,
}

/// Eigen-mesh nodes, ascending in radius.
pub fn hardy_mesh(dom: &RadialDomain, mesh_points: usize) -> Result<Vec<HardyNode>> {
    if mesh_points < 50 {
        return Err(Error::InvalidParameter(format!("hardy mesh needs ≥ 50 points, got {mesh_points}")));
    }
    let (r0, r1) = dom.extent();
    let from_left = |d: f64| HardyNode { r: r0 + d, delta: d };
    let from_right = |d: f64| HardyNode { r: r1 - d, delta: d };
    let nodes = if dom.is_two_sided() {
        let side = geometric_side(0.5 * (r1 - r0), (mesh_points - 1) / 2);
        let mut v: Vec<HardyNode> = side.iter().map(|&d| from_left(d)).collect();
        v.extend(side.iter().rev().skip(1).map(|&d| from_right(d)));
        v
    } else {
        let side = geometric_side(dom.max_delta(), mesh_points - 1);
        match dom.left_boundary() {
            // ball: blow-up at r = R, center free
            BoundaryKind::Symmetry => side.iter().rev().map(|&d| from_right(d)).collect(),
            _ => side.iter().map(|&d| from_left(d)).collect(),
        }
    };
    Ok(nodes)
}

/// Stiffness and midpoint-weighted mass matrices restricted to free nodes.
fn assemble(dom: &RadialDomain, nodes: &[HardyNode]) -> (Tridiagonal, Tridiagonal) {
    let n = nodes.len();
    let mut k = Tridiagonal::zeros(n);
    let mut m = Tridiagonal::zeros(n);
    let power = dom.dim as i32 - 1;
    for e in 0..n - 1 {
        let (a, b) = (nodes[e], nodes[e + 1]);
        let h = (b.delta - a.delta).abs();
        let w = (0.5 * (a.r + b.r)).powi(power);
        let delta = 0.5 * (a.delta + b.delta);
        let ks = w / h;
        let ms = w * h / (delta * delta);
        k.diag[e] += ks;
        k.diag[e + 1] += ks;
        k.upper[e] -= ks;
        k.lower[e + 1] -= ks;
        m.diag[e] += ms / 3.0;
        m.diag[e + 1] += ms / 3.0;
        m.upper[e] += ms / 6.0;
        m.lower[e + 1] += ms / 6.0;
    }
    let lo = usize::from(dom.left_boundary() != BoundaryKind::Symmetry);
    let hi = n - 1; // right end is always Dirichlet (blow-up or far field)
    let restrict = |t: &Tridiagonal| Tridiagonal {
        lower: t.lower[lo..hi].to_vec(),
        diag: t.diag[lo..hi].to_vec(),
        upper: t.upper[lo..hi].to_vec(),
    };
    (restrict(&k), restrict(&m))
}

/// Congruence by `diag(K)^{-1/2}`: leaves the pencil's eigenvalues and inertia unchanged.
fn equilibrate(k: &mut Tridiagonal, m: &mut Tridiagonal) {
    let s: Vec<f64> = k.diag.iter().map(|d| 1.0 / d.sqrt()).collect();
    for t in [k, m] {
        for i in 0..t.len() {
            t.diag[i] *= s[i] * s[i];
            if i > 0 {
                t.lower[i] *= s[i] * s[i - 1];
            }
            if i + 1 < t.len() {
                t.upper[i] *= s[i] * s[i + 1];
            }
        }
    }
}

fn shifted(k: &Tridiagonal, m: &Tridiagonal, sigma: f64) -> Tridiagonal {
    Tridiagonal {
        lower: k.lower.iter().zip(&m.lower).map(|(a, b)| a - sigma * b).collect(),
        diag: k.diag.iter().zip(&m.diag).map(|(a, b)| a - sigma * b).collect(),
        upper: k.upper.iter().zip(&m.upper).map(|(a, b)| a - sigma * b).collect(),
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Smallest eigenvalue of the discrete Hardy pencil.
///
/// Sturm-count bisection brackets the eigenvalue; shifted inverse-power
/// iteration from just below the bracket then converges the Rayleigh
/// quotient to relative tolerance `1e-8`.
pub fn hardy_constant(dom: &RadialDomain, mesh_points: usize) -> Result<HardyEstimate> {
    let nodes = hardy_mesh(dom, mesh_points)?;
    let (mut k, mut m) = assemble(dom, &nodes);
    equilibrate(&mut k, &mut m);

    let count_below = |sigma: f64| shifted(&k, &m, sigma).negative_inertia();
    let mut hi = 1.0;
    while count_below(hi) == 0 {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    let mut bisection_steps = 0;
    while hi - lo > 1e-10 * hi && bisection_steps < 200 {
        let mid = 0.5 * (lo + hi);
        if count_below(mid) == 0 {
            lo = mid;
        } else {
            hi = mid;
        }
        bisection_steps += 1;
    }

    let sigma = lo - 1e-6 * hi;
    let a = shifted(&k, &m, sigma);
    let mut x = vec![1.0; k.len()];
    let mut lambda = f64::NAN;
    for it in 1..=MAX_INVERSE_ITERS {
        let rhs = m.mul_vec(&x);
        let y = a.solve(&rhs).ok_or(Error::EigenNonConvergence { iterations: it })?;
        let norm = dot(&y, &y).sqrt();
        x = y.into_iter().map(|v| v / norm).collect();
        let rq = dot(&x, &k.mul_vec(&x)) / dot(&x, &m.mul_vec(&x));
        if it > 1 && (rq - lambda).abs() <= EIGEN_RTOL * rq {
            return Ok(HardyEstimate {
                mesh_points,
                value: rq,
                bisection_steps,
                inverse_iterations: it,
            });
        }
        lambda = rq;
    }
    Err(Error::EigenNonConvergence {
        iterations: MAX_INVERSE_ITERS,
    })
}

/// `hardy_constant` at each mesh size, in the given order.
pub fn hardy_refinement(dom: &RadialDomain, mesh_points: &[usize], exec: Execution) -> Result<Vec<HardyEstimate>> {
    parallel::map(mesh_points, exec, |&n| hardy_constant(dom, n))
        .into_iter()
        .collect()
}
