use std::ops::Range;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::{Check, Comparison, Window};
use crate::error::{Error, Result};
use crate::geometry::DomainKind;
use crate::nonlinearity::{c2_from_c1, KOProfile, Nonlinearity};
use crate::solver::{Operator, RadialSolution, SolutionRole};

/// Relative differences below this are solver noise, not signal.
const NOISE: f64 = 1e-9;

fn same_problem(a: &RadialSolution, b: &RadialSolution, what: &str) -> Result<()> {
    if a.mesh != b.mesh || a.nonlinearity != b.nonlinearity {
        return Err(Error::Usage(format!("{what}: solutions live on different meshes or nonlinearities")));
    }
    Ok(())
}

fn intersect(a: &Range<usize>, b: &Range<usize>) -> Range<usize> {
    a.start.max(b.start)..a.end.min(b.end)
}

/// Resolved nodes of both solutions.
fn common_nodes(a: &RadialSolution, b: &RadialSolution) -> Range<usize> {
    intersect(&a.resolved, &b.resolved)
}

fn window_of(sol: &RadialSolution, nodes: &[usize]) -> Window {
    let (lo, hi) = nodes.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &i| {
        (lo.min(sol.mesh.delta[i]), hi.max(sol.mesh.delta[i]))
    });
    Window::new(lo, hi)
}

fn ball_radius(sol: &RadialSolution) -> Result<f64> {
    match sol.mesh.domain.kind {
        DomainKind::Ball { radius } => Ok(radius),
        _ => Err(Error::Usage("center bound needs a ball".into())),
    }
}

fn center_product(sol: &RadialSolution) -> Result<f64> {
    let radius = ball_radius(sol)?;
    if sol.role != SolutionRole::MuZeroLarge {
        return Err(Error::Usage(format!("center bound needs the μ = 0 large solution, got {}", sol.role.label())));
    }
    Ok(sol.nonlinearity.h(sol.values[0])? * radius * radius)
}

/// `h(u(0))·R² ≤ N(2 + C1)²`.
pub fn check_center_bound(sol: &RadialSolution, c1: f64) -> Result<Check> {
    let measured = center_product(sol)?;
    let bound = c2_from_c1(sol.mesh.domain.dim, c1);
    Ok(Check::new(
        "center_bound",
        "h(V_R(0)) <= C2 R^-2, C2 = N(2 + C1)^2",
        measured,
        bound,
        1e-6 * bound,
        Comparison::AtMost,
    )
    .with_diagnostic("u_center", sol.values[0])
    .with_diagnostic("c1", c1))
}

/// Spread of `h(u(0))·R²` across radii, relative to its smallest value.
pub fn check_center_scaling(sols: &[&RadialSolution], tolerance: f64) -> Result<Check> {
    if sols.len() < 2 {
        return Err(Error::Usage("center scaling needs at least two radii".into()));
    }
    let mut check = Check::new("center_scaling", "h(V_R(0)) R^2 independent of R", 0.0, tolerance, 0.0, Comparison::AtMost);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for s in sols {
        let v = center_product(s)?;
        lo = lo.min(v);
        hi = hi.max(v);
        check = check.with_diagnostic(format!("product_r{}", ball_radius(s)?), v);
    }
    let measured = (hi - lo) / lo;
    Ok(Check {
        measured,
        pass: check.comparison.holds(measured, check.bound, check.tolerance),
        ..check
    })
}

fn max_ratio_deviation(sol: &RadialSolution, profile: &KOProfile, nodes: &[usize]) -> Result<f64> {
    let mut dev = f64::NAN;
    for &i in nodes {
        let d = (sol.values[i] / profile.phi(sol.mesh.delta[i])? - 1.0).abs();
        dev = if dev.is_nan() { d } else { dev.max(d) };
    }
    Ok(dev)
}

/// `max |u/φ(δ) − 1|` over resolved `δ ≤ delta_star`, plus the trend of the
/// same maximum over the decades `[δ*, 10δ*)`, `[10δ*, 100δ*)`, `[100δ*, 1000δ*)`.
pub fn check_asymptotic_ratio(
    sol: &RadialSolution,
    profile: &KOProfile,
    delta_star: f64,
    tolerance: f64,
) -> Result<Vec<Check>> {
    if sol.mu != 0.0 {
        return Err(Error::Usage(format!("asymptotic ratio needs μ = 0, got {}", sol.mu)));
    }
    let dmin = sol.resolved_delta_min();
    let dmax = sol.mesh.domain.max_delta();
    if !(delta_star >= dmin && delta_star <= dmax) {
        return Err(Error::Range {
            what: "delta_star",
            value: delta_star,
            lo: dmin,
            hi: dmax,
        });
    }
    let near = sol.nodes_in_window(0.0, delta_star);
    let ratio = Check::new(
        "asymptotic_ratio",
        "U(x)/phi(delta(x)) -> 1 as x -> boundary",
        max_ratio_deviation(sol, profile, &near)?,
        tolerance,
        0.0,
        Comparison::Below,
    )
    .with_window(window_of(sol, &near))
    .with_diagnostic("nodes", near.len() as f64);

    let mut devs = Vec::new();
    let mut trend = Check::new(
        "asymptotic_ratio_trend",
        "max |u/phi - 1| decreases toward the boundary, decade by decade",
        0.0,
        1.0,
        0.0,
        Comparison::Below,
    );
    for k in 0..3 {
        let lo = delta_star * 10f64.powi(k);
        let nodes: Vec<usize> = sol
            .resolved
            .clone()
            .filter(|&i| sol.mesh.delta[i] >= lo && sol.mesh.delta[i] < 10.0 * lo)
            .collect();
        let d = max_ratio_deviation(sol, profile, &nodes)?;
        trend = trend.with_diagnostic(format!("decade_{lo:e}"), d);
        devs.push(d);
    }
    // finer decade over the next coarser one; NaN (empty decade) fails
    let measured = devs.windows(2).map(|w| w[0] / w[1]).fold(0.0, |a: f64, r| if r.is_nan() { f64::NAN } else { a.max(r) });
    let trend = Check {
        measured,
        pass: trend.comparison.holds(measured, trend.bound, trend.tolerance),
        window: Some(Window::new(delta_star, 1000.0 * delta_star)),
        ..trend
    };
    Ok(vec![ratio, trend])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoSidedFit {
    /// `max u/φ̃` over the boundary layer.
    pub c1: f64,
    /// `min u/φ` over the boundary layer.
    pub c2: f64,
    pub window: Window,
}

/// Boundary layer: resolved nodes with `δ < layer_fraction·width`.
fn layer_nodes(sol: &RadialSolution, layer_fraction: f64) -> Vec<usize> {
    let cut = layer_fraction * sol.mesh.domain.width();
    sol.resolved.clone().filter(|&i| sol.mesh.delta[i] < cut).collect()
}

pub fn fit_two_sided(sol: &RadialSolution, profile: &KOProfile, layer_fraction: f64) -> Result<TwoSidedFit> {
    let nodes = layer_nodes(sol, layer_fraction);
    if nodes.is_empty() {
        return Err(Error::Mesh("no resolved node in the boundary layer".into()));
    }
    let (mut c1, mut c2) = (0.0f64, f64::INFINITY);
    for &i in &nodes {
        let d = sol.mesh.delta[i];
        c1 = c1.max(sol.values[i] / profile.tilde_phi(d)?);
        c2 = c2.min(sol.values[i] / profile.phi(d)?);
    }
    Ok(TwoSidedFit {
        c1,
        c2,
        window: window_of(sol, &nodes),
    })
}

fn stability(name: &str, statement: &str, coarse: f64, fine: f64, tolerance: f64) -> Check {
    let ok = |c: f64| c > 0.0 && c.is_finite();
    let measured = if ok(coarse) && ok(fine) {
        (fine - coarse).abs() / coarse
    } else {
        f64::INFINITY
    };
    Check::new(name, statement, measured, tolerance, 0.0, Comparison::Below)
        .with_diagnostic("coarse", coarse)
        .with_diagnostic("fine", fine)
}

/// Fits `c1`, `c2` on two meshes and checks they are positive, finite and
/// move by less than `tolerance` under refinement.
pub fn check_two_sided_bounds(
    coarse: &RadialSolution,
    fine: &RadialSolution,
    profile: &KOProfile,
    layer_fraction: f64,
    tolerance: f64,
) -> Result<(TwoSidedFit, TwoSidedFit, Vec<Check>)> {
    if coarse.mu != fine.mu || coarse.nonlinearity != fine.nonlinearity || coarse.mesh.domain != fine.mesh.domain {
        return Err(Error::Usage("two-sided bounds compare one problem on two meshes".into()));
    }
    let a = fit_two_sided(coarse, profile, layer_fraction)?;
    let b = fit_two_sided(fine, profile, layer_fraction)?;
    let statement = "c2 phi <= U <= c1 tilde_phi near the boundary";
    let checks = vec![
        stability("two_sided_c1", statement, a.c1, b.c1, tolerance).with_window(b.window),
        stability("two_sided_c2", statement, a.c2, b.c2, tolerance).with_window(b.window),
    ];
    Ok((a, b, checks))
}

/// `u_μ ≥ u_0` at every resolved node, and strictly at a fraction `strict_fraction` of them.
pub fn check_ordering_mu(sol_mu: &RadialSolution, sol_zero: &RadialSolution, strict_fraction: f64) -> Result<Vec<Check>> {
    same_problem(sol_mu, sol_zero, "ordering")?;
    let nodes = common_nodes(sol_mu, sol_zero);
    let mut min_rel = f64::INFINITY;
    let mut strict = 0usize;
    for i in nodes.clone() {
        let rel = (sol_mu.values[i] - sol_zero.values[i]) / sol_zero.values[i];
        min_rel = min_rel.min(rel);
        if rel > NOISE {
            strict += 1;
        }
    }
    let fraction = strict as f64 / nodes.len().max(1) as f64;
    let degenerate = sol_mu.mu == sol_zero.mu;
    let idx: Vec<usize> = nodes.collect();
    let window = window_of(sol_mu, &idx);
    let pointwise = Check::new(
        "ordering_pointwise",
        "U > U_f, the solution without potential",
        min_rel,
        0.0,
        NOISE,
        Comparison::AtLeast,
    )
    .with_window(window)
    .with_diagnostic("mu", sol_mu.mu)
    .with_diagnostic("mu_reference", sol_zero.mu);
    let mut strictness = Check::new(
        "ordering_strict_fraction",
        "U > U_f strictly in the interior",
        fraction,
        if degenerate { 0.0 } else { strict_fraction },
        0.0,
        Comparison::AtLeast,
    )
    .with_window(window)
    .with_diagnostic("nodes", idx.len() as f64);
    if degenerate {
        strictness = strictness.with_note("degenerate: equal μ, strict inequality not expected");
    }
    Ok(vec![pointwise, strictness])
}

/// Max of `h(u)δ²` over the finest resolved decade, against `μ` and `μ − 1/4`.
/// Truncated solutions only get the second comparison.
pub fn check_limsup_lower(sol: &RadialSolution, rel_tolerance: f64, abs_floor: f64) -> Result<Vec<Check>> {
    let lo = sol.resolved_delta_min();
    let nodes = sol.nodes_in_window(lo, 10.0 * lo);
    let mut measured = f64::NEG_INFINITY;
    for &i in &nodes {
        let d = sol.mesh.delta[i];
        measured = measured.max(sol.nonlinearity.h(sol.values[i])? * d * d);
    }
    let mu = sol.mu;
    let tol = (rel_tolerance * mu).max(abs_floor);
    let window = window_of(sol, &nodes);
    let mut out = Vec::new();
    if sol.role.is_large() {
        out.push(
            Check::new("limsup_lower", "mu <= limsup h(U) delta^2", measured, mu, tol, Comparison::AtLeast)
                .with_window(window),
        );
    }
    out.push(
        Check::new(
            "limsup_lower_quarter",
            "mu - 1/4 <= limsup h(U) delta^2 for supersolutions",
            measured,
            mu - 0.25,
            tol,
            Comparison::AtLeast,
        )
        .with_window(window),
    );
    Ok(out)
}

/// `max |u_max − u_min|/u_min` over resolved nodes with `δ ≥ interior_delta`.
pub fn check_uniqueness_gap(
    sol_min: &RadialSolution,
    sol_max: &RadialSolution,
    interior_delta: f64,
    tolerance: f64,
) -> Result<Check> {
    same_problem(sol_min, sol_max, "uniqueness gap")?;
    if sol_min.mu != sol_max.mu {
        return Err(Error::Usage("uniqueness gap needs equal μ".into()));
    }
    let nodes: Vec<usize> = common_nodes(sol_min, sol_max)
        .filter(|&i| sol_min.mesh.delta[i] >= interior_delta)
        .collect();
    if nodes.is_empty() {
        return Err(Error::Range {
            what: "interior_delta",
            value: interior_delta,
            lo: 0.0,
            hi: sol_min.mesh.domain.max_delta(),
        });
    }
    let (mut gap, mut lo, mut hi) = (0.0f64, f64::INFINITY, f64::NEG_INFINITY);
    for &i in &nodes {
        let u = sol_min.values[i];
        if !(u > 0.0) {
            return Err(Error::Domain { what: "minimal solution", value: u });
        }
        let rel = (sol_max.values[i] - u) / u;
        gap = gap.max(rel.abs());
        lo = lo.min(rel);
        hi = hi.max(rel);
    }
    Ok(Check::new(
        "uniqueness_gap",
        "U_max <= M u_min forces U_max = u_min",
        gap,
        tolerance,
        0.0,
        Comparison::Below,
    )
    .with_window(window_of(sol_min, &nodes))
    .with_diagnostic("signed_min", lo)
    .with_diagnostic("signed_max", hi)
    .with_diagnostic("mesh_points", sol_min.mesh.len() as f64))
}

/// The fine-mesh gap is at most half the coarse one, up to `noise_floor`.
pub fn check_gap_refinement(coarse: &Check, fine: &Check, noise_floor: f64) -> Check {
    Check::new(
        "uniqueness_gap_refinement",
        "the max/min gap is a discretization artifact: it halves under mesh doubling",
        fine.measured,
        0.5 * coarse.measured,
        noise_floor,
        Comparison::AtMost,
    )
    .with_diagnostic("coarse", coarse.measured)
    .with_diagnostic("fine", fine.measured)
}

fn scaled_extremes(op: &Operator, w: &[f64], nodes: Range<usize>) -> Result<(f64, f64)> {
    let res = op.residual(w, nodes.clone())?;
    Ok(nodes.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        let s = res.scaled(i);
        (lo.min(s), hi.max(s))
    }))
}

/// Builds `w = u − (U − u)/2M` and `w̃ = (M + 1)u/2M` from the minimal `u`
/// and maximal `U`, and checks their residual signs: `w` must be a
/// supersolution and `w̃` a subsolution, each up to `band`.
pub fn check_convexity_trick(sol_min: &RadialSolution, sol_max: &RadialSolution, m: f64, band: f64) -> Result<Vec<Check>> {
    same_problem(sol_min, sol_max, "convexity trick")?;
    if !(m > 0.0 && m.is_finite()) {
        return Err(Error::InvalidParameter(format!("M = {m}")));
    }
    let nodes = intersect(
        &common_nodes(sol_min, sol_max),
        &intersect(&sol_min.equations, &sol_max.equations),
    );
    let (u, big) = (&sol_min.values, &sol_max.values);
    let dominance = nodes.clone().map(|i| big[i] / (m * u[i])).fold(0.0, f64::max);
    let idx: Vec<usize> = nodes.clone().collect();
    let window = window_of(sol_min, &idx);
    let mut prereq = Check::new(
        "convexity_prerequisite",
        "U_max <= M u_min",
        dominance,
        1.0,
        NOISE,
        Comparison::AtMost,
    )
    .with_window(window)
    .with_diagnostic("m", m);
    if !prereq.pass {
        prereq = prereq.with_note("prerequisite violated: the sign checks below are not meaningful");
    }

    let eps = 1.0 / (2.0 * m);
    let w: Vec<f64> = u.iter().zip(big).map(|(&a, &b)| a - eps * (b - a)).collect();
    let wt: Vec<f64> = u.iter().map(|&a| (m + 1.0) * eps * a).collect();
    let op = Operator::new(&sol_min.nonlinearity, sol_min.mu, &sol_min.mesh)?;
    let (w_lo, w_hi) = scaled_extremes(&op, &w, nodes.clone())?;
    let (t_lo, t_hi) = scaled_extremes(&op, &wt, nodes)?;
    Ok(vec![
        prereq,
        Check::new(
            "convexity_w_supersolution",
            "w = u - (U - u)/2M is a supersolution",
            w_lo,
            0.0,
            band,
            Comparison::AtLeast,
        )
        .with_window(window)
        .with_diagnostic("scaled_residual_max", w_hi),
        Check::new(
            "convexity_w_tilde_subsolution",
            "w~ = (M + 1) u / 2M is a subsolution",
            t_hi,
            0.0,
            band,
            Comparison::AtMost,
        )
        .with_window(window)
        .with_diagnostic("scaled_residual_min", t_lo),
    ])
}

/// Counts violations of `f(a) + f(b) ≤ f(a + b)` over `samples` log-uniform
/// pairs; a relative slack of a few ulps absorbs rounding.
pub fn check_convexity_sampling(nl: &Nonlinearity, samples: usize, seed: u64) -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (1e-3f64.ln(), 50f64.ln());
    let mut violations = 0usize;
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..samples {
        let a = rng.gen_range(lo..hi).exp();
        let b = rng.gen_range(lo..hi).exp();
        let lhs = nl.f_raw(a) + nl.f_raw(b);
        let rhs = nl.f_raw(a + b);
        let excess = (lhs - rhs) / rhs;
        worst = worst.max(excess);
        if excess > 8.0 * f64::EPSILON {
            violations += 1;
        }
    }
    Check::new(
        "convexity_sampling",
        "f(a) + f(b) <= f(a + b)",
        violations as f64,
        0.0,
        0.0,
        Comparison::AtMost,
    )
    .with_diagnostic("samples", samples as f64)
    .with_diagnostic("worst_relative_excess", worst)
}

/// `φ″ = f(φ)` by central differences on a log grid over `window`.
pub fn check_profile_ode(profile: &KOProfile, window: Window, tolerance: f64) -> Result<Check> {
    let nl = profile.nonlinearity();
    let steps = 40;
    let ratio = (window.delta_hi / window.delta_lo).powf(1.0 / steps as f64);
    let mut worst = 0.0f64;
    for j in 0..=steps {
        let d = window.delta_lo * ratio.powi(j);
        let h = 1e-2 * d;
        let (a, b, c) = (profile.phi(d - h)?, profile.phi(d)?, profile.phi(d + h)?);
        let second = (a - 2.0 * b + c) / (h * h);
        let fb = nl.f_raw(b);
        worst = worst.max((second - fb).abs() / fb);
    }
    Ok(Check::new(
        "profile_ode",
        "phi'' = f(phi) with phi -> infinity at 0",
        worst,
        tolerance,
        0.0,
        Comparison::AtMost,
    )
    .with_window(window))
}
