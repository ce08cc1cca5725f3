use std::ops::Range;

use super::{Operator, SolverConfig};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct NewtonOutcome {
    pub iterations: usize,
    pub residual: f64,
}

fn merit(op: &Operator, u: &[f64], nodes: &Range<usize>, scale: &[f64]) -> Result<f64> {
    let res = op.residual(u, nodes.clone())?;
    Ok(nodes
        .clone()
        .map(|i| {
            let s = if scale[i] > 0.0 { scale[i] } else { 1.0 };
            (res.values[i] / s).powi(2)
        })
        .sum())
}

/// Damped Newton on the equations at `nodes`; `u` outside `nodes` is boundary data.
pub(crate) fn newton(op: &Operator, u: &mut [f64], nodes: Range<usize>, cfg: &SolverConfig) -> Result<NewtonOutcome> {
    let mut residual = f64::INFINITY;
    for it in 0..cfg.max_iters {
        let res = op.residual(u, nodes.clone())?;
        residual = res.scaled_max_norm();
        if residual < cfg.newton_tol {
            return Ok(NewtonOutcome { iterations: it, residual });
        }
        let jac = op.jacobian(u, nodes.clone());
        let rhs: Vec<f64> = nodes.clone().map(|i| -res.values[i]).collect();
        let Some(step) = jac.solve(&rhs) else {
            break;
        };
        let m0 = merit(op, u, &nodes, &res.scale)?;
        let mut lambda = 1.0;
        let mut trial = u.to_vec();
        loop {
            for (k, i) in nodes.clone().enumerate() {
                trial[i] = (u[i] + lambda * step[k]).max(cfg.positivity_floor);
            }
            let m = merit(op, &trial, &nodes, &res.scale)?;
            if m.is_finite() && m <= (1.0 - 1e-4 * lambda) * m0 {
                break;
            }
            if lambda <= cfg.damping_floor {
                if !m.is_finite() {
                    return Err(failure(it + 1, residual, u));
                }
                break;
            }
            lambda *= 0.5;
        }
        u[nodes.clone()].copy_from_slice(&trial[nodes.clone()]);
    }
    Err(failure(cfg.max_iters, residual, u))
}

fn failure(iterations: usize, residual: f64, u: &[f64]) -> Error {
    Error::SolverFailure {
        iterations,
        residual,
        last_iterate: u.to_vec(),
    }
}
