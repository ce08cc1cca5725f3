use serde::Serialize;

use super::checks::{check_limsup_lower, check_uniqueness_gap};
use super::constants::{estimate_constants, SolutionFamily};
use super::CheckSettings;
use crate::error::Result;
use crate::geometry::RadialDomain;
use crate::nonlinearity::{KOProfile, Nonlinearity};
use crate::parallel::{self, Execution};
use crate::solver::{build_mesh, solve_maximal_large, solve_minimal_large, solve_mu_zero_large, SolverConfig};

/// One problem in a parameter sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub domain: RadialDomain,
    pub nonlinearity: Nonlinearity,
    pub mu: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub c1: f64,
    pub c2: f64,
    pub a_bar: f64,
    pub b0: f64,
    pub m: f64,
    /// Relative max/min gap on `{δ ≥ gap_interior_delta}`.
    pub gap: f64,
    /// `max h(u)δ²` over the finest resolved decade of the minimal solution.
    pub limsup: f64,
}

/// Minimal, maximal and `μ = 0` solutions at one point, reduced to fitted constants.
pub fn sweep_point(
    point: &SweepPoint,
    mesh_points: usize,
    gamma: f64,
    solver: &SolverConfig,
    settings: &CheckSettings,
) -> Result<SweepRow> {
    let mesh = build_mesh(&point.domain, mesh_points, gamma)?;
    let nl = &point.nonlinearity;
    let zero = solve_mu_zero_large(nl, &mesh, solver)?;
    let min = solve_minimal_large(nl, point.mu, &mesh, solver)?;
    let max = solve_maximal_large(nl, point.mu, &mesh, solver)?;
    let gap = check_uniqueness_gap(&min, &max, settings.gap_interior_delta, settings.gap_tolerance)?.measured;
    let limsup = check_limsup_lower(&min, settings.limsup_rel_tolerance, settings.limsup_abs_floor)?[0].measured;
    let profile = KOProfile::new(*nl)?;
    let fam = SolutionFamily {
        reference: zero,
        members: vec![min, max],
    };
    let est = estimate_constants(&[fam], &profile, settings.layer_fraction)?;
    Ok(SweepRow {
        c1: est.c1,
        c2: est.c2,
        a_bar: est.a_bar,
        b0: est.b0,
        m: est.m,
        gap,
        limsup,
    })
}

/// [`sweep_point`] over every point, rows in input order.
pub fn sweep(
    points: &[SweepPoint],
    mesh_points: usize,
    gamma: f64,
    solver: &SolverConfig,
    settings: &CheckSettings,
    exec: Execution,
) -> Result<Vec<SweepRow>> {
    parallel::map(points, exec, |p| sweep_point(p, mesh_points, gamma, solver, settings))
        .into_iter()
        .collect()
}
