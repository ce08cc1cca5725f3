//! Radial large solutions of `−u″ − (N−1)/r u′ − μ u/δ² + f(u) = 0`.
//!
//! Boundary blow-up is realised by Dirichlet data `u = k` on the boundary
//! nodes and a sequence of growing `k`. On a fixed mesh the discrete
//! solutions have no limit as `k → ∞`: the first interior node grows like
//! `k^{1/p}`, the next like `k^{1/p²}`, and so on, which drags the effective
//! boundary inward. The continuation therefore stops at the first level where
//! the node next to each blow-up node has reached the profile `φ` at its
//! distance, i.e. where blow-up is realised at mesh resolution.
//!
//! Nodes whose local spacing is coarse relative to their distance from the
//! blow-up node cannot follow `φ`; every solution carries a `resolved` node
//! range excluding them, and downstream checks look only at that range.

mod large;
mod mesh;
mod newton;
mod residual;

use serde::{Deserialize, Serialize};

pub use large::{
    k_sequence, solve_maximal_large, solve_minimal_large, solve_minimal_large_with,
    solve_mu_zero_large, solve_truncated, solve_truncated_from, RadialSolution, SolutionRole,
};
pub use mesh::{build_mesh, Mesh};
pub use residual::{assemble_residual, equation_nodes, residual_sign_classify, Operator, Residual, SignClass};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolverConfig {
    /// Converged when the scaled max-norm residual drops below this.
    pub newton_tol: f64,
    pub max_iters: usize,
    pub damping_floor: f64,
    pub positivity_floor: f64,
    /// Upper bound on the number of boundary levels `k_j = 10^j·φ̃(δ_min)`.
    pub k_levels: usize,
    /// The continuation stops once `u ≥ blowup_threshold·φ(d)` at the node next
    /// to each blow-up node, `d` being its distance to that node.
    pub blowup_threshold: f64,
    /// A node is resolved once its spacing is at most `1/resolved_ratio` of its
    /// distance to the nearest blow-up node.
    pub resolved_ratio: f64,
    /// Fixed number of unresolved nodes per blow-up side, overriding `resolved_ratio`.
    pub resolved_skip: Option<usize>,
    pub exhaustion_max: u32,
    /// Relative change on `{δ ≥ ρ₀}` that ends the exhaustion.
    pub exhaustion_tol: f64,
    /// Allowed relative increase between consecutive exhaustion profiles.
    pub consistency_tol: f64,
    pub rho0: Option<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-10,
            max_iters: 200,
            damping_floor: 0.5f64.powi(20),
            positivity_floor: 1e-30,
            k_levels: 30,
            blowup_threshold: 1.0,
            resolved_ratio: 8.0,
            resolved_skip: None,
            exhaustion_max: 60,
            exhaustion_tol: 1e-12,
            consistency_tol: 1e-6,
            rho0: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> crate::Result<()> {
        let bad = |what: &str| Err(crate::Error::InvalidParameter(what.to_string()));
        if !(self.newton_tol > 0.0) {
            return bad("newton_tol must be positive");
        }
        if self.max_iters == 0 {
            return bad("max_iters must be positive");
        }
        if !(self.damping_floor > 0.0 && self.damping_floor <= 1.0) {
            return bad("damping_floor must lie in (0, 1]");
        }
        if !(self.positivity_floor > 0.0) {
            return bad("positivity_floor must be positive");
        }
        if self.k_levels < 2 {
            return bad("k_levels must be at least 2");
        }
        if !(self.blowup_threshold > 0.0 && self.resolved_ratio >= 1.0) {
            return bad("blowup_threshold must be positive and resolved_ratio at least 1");
        }
        if !(self.exhaustion_tol > 0.0 && self.consistency_tol >= 0.0) {
            return bad("tolerances must be positive");
        }
        if self.exhaustion_max < 3 {
            return bad("exhaustion_max must be at least 3");
        }
        if let Some(r) = self.rho0 {
            if !(r > 0.0) {
                return bad("rho0 must be positive");
            }
        }
        Ok(())
    }
}
