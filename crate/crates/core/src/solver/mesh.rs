use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, RadialDomain};

/// Boundary-graded radial mesh.
///
/// Distances are stored next to radii: close to `∂Ω` the radius stops
/// resolving the distance, so every spacing is computed from `delta`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Mesh {
    pub domain: RadialDomain,
    pub gamma: f64,
    pub r: Vec<f64>,
    pub delta: Vec<f64>,
}

/// Node `δ = W·s^γ` for `s` uniform on `[0, 1]` with `intervals` steps.
fn graded_side(width: f64, intervals: usize, gamma: f64) -> Vec<f64> {
    (0..=intervals)
        .map(|j| width * (j as f64 / intervals as f64).powf(gamma))
        .collect()
}

impl Mesh {
    /// Two-sided domains get an odd node count (mirrored halves meeting at
    /// the mid-radius kink of `δ`), so `count` may be rounded down by one.
    pub fn build(dom: &RadialDomain, count: usize, gamma: f64) -> Result<Self> {
        if count < 100 {
            return Err(Error::InvalidParameter(format!("mesh needs ≥ 100 nodes, got {count}")));
        }
        if !(1.0..=4.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!("grading exponent {gamma} outside [1, 4]")));
        }
        let (r0, r1) = dom.extent();
        let (r, delta): (Vec<f64>, Vec<f64>) = if dom.is_two_sided() {
            let side = graded_side(dom.max_delta(), (count - 1) / 2, gamma);
            let left = side.iter().map(|&d| (r0 + d, d));
            let right = side.iter().rev().skip(1).map(|&d| (r1 - d, d));
            left.chain(right).unzip()
        } else {
            let side = graded_side(dom.max_delta(), count - 1, gamma);
            match dom.left_boundary() {
                BoundaryKind::Symmetry => side.iter().rev().map(|&d| (r1 - d, d)).unzip(),
                _ => side.iter().map(|&d| (r0 + d, d)).unzip(),
            }
        };
        let mesh = Self {
            domain: *dom,
            gamma,
            r,
            delta,
        };
        mesh.validate()?;
        Ok(mesh)
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    /// Length of the interval `[i, i+1]`.
    #[inline]
    pub fn spacing(&self, i: usize) -> f64 {
        (self.delta[i + 1] - self.delta[i]).abs()
    }

    /// Smallest positive distance to `∂Ω` over the nodes.
    pub fn delta_min(&self) -> f64 {
        self.delta.iter().copied().filter(|&d| d > 0.0).fold(f64::INFINITY, f64::min)
    }

    /// Node indices carrying `u = k` in a full-domain solve.
    pub fn blow_up_nodes(&self) -> Vec<usize> {
        let last = self.len() - 1;
        match (self.domain.left_boundary(), self.domain.right_boundary()) {
            (BoundaryKind::Symmetry, _) => vec![last],
            (_, BoundaryKind::FarField) => vec![0],
            _ => vec![0, last],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.len();
        if n < 3 || self.delta.len() != n {
            return Err(Error::Mesh("fewer than three nodes".into()));
        }
        for i in 0..n - 1 {
            if !(self.spacing(i) > 0.0) || self.r[i + 1] < self.r[i] {
                return Err(Error::Mesh(format!("nodes {i} and {} coincide or are out of order", i + 1)));
            }
        }
        let blow = self.blow_up_nodes();
        for i in 0..n {
            if !blow.contains(&i) && !(self.delta[i] > 0.0) {
                return Err(Error::Mesh(format!("interior node {i} has δ = {}", self.delta[i])));
            }
        }
        Ok(())
    }
}

pub fn build_mesh(dom: &RadialDomain, count: usize, gamma: f64) -> Result<Mesh> {
    Mesh::build(dom, count, gamma)
}
