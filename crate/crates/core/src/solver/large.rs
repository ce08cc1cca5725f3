use std::ops::Range;

use serde::Serialize;

use super::newton::newton;
use super::{Mesh, Operator, SolverConfig};
use crate::error::{Error, Result};
use crate::geometry::{BoundaryKind, DomainKind};
use crate::nonlinearity::{KOProfile, Nonlinearity};
use crate::parallel::Execution;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum SolutionRole {
    Truncated { k: f64 },
    MinimalLarge,
    MaximalLarge,
    MuZeroLarge,
}

impl SolutionRole {
    pub fn is_large(&self) -> bool {
        !matches!(self, SolutionRole::Truncated { .. })
    }

    pub fn label(&self) -> &'static str {
        match self {
            SolutionRole::Truncated { .. } => "truncated",
            SolutionRole::MinimalLarge => "minimal_large",
            SolutionRole::MaximalLarge => "maximal_large",
            SolutionRole::MuZeroLarge => "mu_zero_large",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution {
    pub mesh: Mesh,
    pub nonlinearity: Nonlinearity,
    pub mu: f64,
    pub role: SolutionRole,
    /// Nodal values on the whole mesh; outside `equations` they are boundary data.
    pub values: Vec<f64>,
    pub residual_norm: f64,
    /// Newton iterations summed over every level.
    pub newton_iters: usize,
    pub equations: Range<usize>,
    pub resolved: Range<usize>,
    /// Blow-up data on the final level.
    pub boundary_value: f64,
    /// Index of the accepted `k` level.
    pub truncation_level: Option<usize>,
    /// Relative change on resolved nodes between consecutive `k` levels.
    pub level_changes: Vec<f64>,
    pub exhaustion_index: Option<u32>,
    /// Relative change on `{δ ≥ ρ₀}` between consecutive exhaustion levels.
    pub exhaustion_changes: Vec<f64>,
}

impl RadialSolution {
    pub fn resolved_nodes(&self) -> Range<usize> {
        self.resolved.clone()
    }

    /// Resolved nodes with `δ` inside `[lo, hi]`.
    pub fn nodes_in_window(&self, lo: f64, hi: f64) -> Vec<usize> {
        self.resolved
            .clone()
            .filter(|&i| (lo..=hi).contains(&self.mesh.delta[i]))
            .collect()
    }

    /// Smallest `δ` among resolved nodes.
    pub fn resolved_delta_min(&self) -> f64 {
        self.resolved.clone().map(|i| self.mesh.delta[i]).fold(f64::INFINITY, f64::min)
    }

    pub fn center_value(&self) -> Option<f64> {
        matches!(self.mesh.domain.kind, DomainKind::Ball { .. }).then(|| self.values[0])
    }
}

/// Equation nodes and Dirichlet data for one boundary-value problem on a node range.
#[derive(Debug, Clone)]
struct Setup {
    nodes: Range<usize>,
    /// Blow-up nodes, each with its inner neighbour.
    blow: Vec<(usize, usize)>,
    far: Option<(usize, f64)>,
    resolved: Range<usize>,
}

fn far_field_value(nl: &Nonlinearity, mu: f64, delta_out: f64) -> f64 {
    let y = mu / (delta_out * delta_out);
    if mu > 0.0 && y > nl.h_infimum() {
        nl.h_inv(y).unwrap_or(0.0)
    } else {
        0.0
    }
}

/// First node (walking inward from blow-up node `b` in direction `dir`) whose
/// spacing to the next node is at most its distance to `b` over `ratio`.
fn first_resolved(mesh: &Mesh, b: usize, dir: isize, ratio: f64, skip: Option<usize>, limit: usize) -> usize {
    if let Some(s) = skip {
        return (b as isize + dir * (s as isize + 1)) as usize;
    }
    let mut i = (b as isize + dir) as usize;
    while i != limit {
        let next = (i as isize + dir) as usize;
        let dist = (mesh.delta[i] - mesh.delta[b]).abs();
        if (mesh.delta[next] - mesh.delta[i]).abs() * ratio <= dist {
            break;
        }
        i = next;
    }
    i
}

impl Setup {
    /// Problem with blow-up data on `left` / `right` (both `None` means the full domain).
    fn new(nl: &Nonlinearity, mu: f64, mesh: &Mesh, cfg: &SolverConfig, left: Option<usize>, right: Option<usize>) -> Result<Self> {
        let n = mesh.len();
        let dom = &mesh.domain;
        let (mut blow, mut far) = (Vec::new(), None);
        let start = match dom.left_boundary() {
            BoundaryKind::Symmetry => 0,
            _ => {
                let a = left.unwrap_or(0);
                blow.push((a, a + 1));
                a + 1
            }
        };
        let end = match dom.right_boundary() {
            BoundaryKind::FarField => {
                far = Some((n - 1, far_field_value(nl, mu, mesh.delta[n - 1])));
                n - 1
            }
            _ => {
                let b = right.unwrap_or(n - 1);
                blow.push((b, b - 1));
                b
            }
        };
        if start + 1 >= end {
            return Err(Error::Mesh(format!("fewer than two equation nodes between {start} and {end}")));
        }
        let r_start = match dom.left_boundary() {
            BoundaryKind::BlowUp => first_resolved(mesh, start - 1, 1, cfg.resolved_ratio, cfg.resolved_skip, end),
            _ => start,
        };
        let r_end = match dom.right_boundary() {
            BoundaryKind::BlowUp => first_resolved(mesh, end, -1, cfg.resolved_ratio, cfg.resolved_skip, start) + 1,
            _ => end,
        };
        if r_start >= r_end {
            return Err(Error::Mesh(format!("no resolved nodes between {start} and {end}; refine the mesh")));
        }
        Ok(Self {
            nodes: start..end,
            blow,
            far,
            resolved: r_start..r_end,
        })
    }

    /// Distance from each blow-up node to its inner neighbour, minimised.
    fn first_spacing(&self, mesh: &Mesh) -> f64 {
        self.blow
            .iter()
            .map(|&(b, i)| (mesh.delta[i] - mesh.delta[b]).abs())
            .fold(f64::INFINITY, f64::min)
    }

    fn apply_boundary(&self, u: &mut [f64], k: f64) {
        for &(b, _) in &self.blow {
            u[b] = k;
        }
        if let Some((i, v)) = self.far {
            u[i] = v;
        }
    }

    /// Distance to the nearest blow-up node of this problem.
    fn offset(&self, mesh: &Mesh) -> f64 {
        self.blow.iter().map(|&(b, _)| mesh.delta[b]).fold(f64::INFINITY, f64::min)
    }

    /// `(node, threshold)` pairs that signal blow-up at mesh resolution.
    fn blowup_targets(&self, mesh: &Mesh, profile: &KOProfile, factor: f64) -> Result<Vec<(usize, f64)>> {
        self.blow
            .iter()
            .map(|&(b, i)| Ok((i, factor * profile.phi((mesh.delta[i] - mesh.delta[b]).abs())?)))
            .collect()
    }
}

fn tilde_phi_or(nl: &Nonlinearity, d: f64, floor: f64) -> f64 {
    if d > 0.0 && d.powi(-2) > nl.h_infimum() * (1.0 + 1e-9) {
        nl.tilde_phi(d).unwrap_or(floor).max(floor)
    } else {
        floor
    }
}

/// `k_j = 10^j·φ̃(δ_min)` for `j = 0..count`.
pub fn k_sequence(nl: &Nonlinearity, delta_min: f64, count: usize) -> Vec<f64> {
    let base = tilde_phi_or(nl, delta_min, 1.0);
    (0..count).map(|j| base * 10f64.powi(j as i32)).collect()
}

fn initial_guess(nl: &Nonlinearity, mesh: &Mesh, setup: &Setup, k: f64, cfg: &SolverConfig) -> Vec<f64> {
    let off = setup.offset(mesh);
    let off = if off.is_finite() { off } else { 0.0 };
    let mut u = vec![0.0; mesh.len()];
    for i in setup.nodes.clone() {
        u[i] = tilde_phi_or(nl, mesh.delta[i] - off, 1e-3).min(k).max(cfg.positivity_floor);
    }
    setup.apply_boundary(&mut u, k);
    u
}

struct LevelSolve {
    values: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn solve_level(op: &Operator, setup: &Setup, k: f64, mut u: Vec<f64>, cfg: &SolverConfig) -> Result<LevelSolve> {
    setup.apply_boundary(&mut u, k);
    let out = newton(op, &mut u, setup.nodes.clone(), cfg)?;
    Ok(LevelSolve {
        values: u,
        residual: out.residual,
        iterations: out.iterations,
    })
}

fn max_relative_change(old: &[f64], new: &[f64], nodes: impl Iterator<Item = usize>) -> f64 {
    nodes
        .map(|i| (new[i] - old[i]).abs() / new[i].abs().max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn check_inputs(mu: f64, mesh: &Mesh, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    mesh.validate()?;
    if !(mu >= 0.0) || !mu.is_finite() {
        return Err(Error::InvalidParameter(format!("mu = {mu}")));
    }
    Ok(())
}

fn profile_for(nl: &Nonlinearity) -> Result<KOProfile> {
    KOProfile::with_execution(*nl, Execution::Sequential)
}

#[allow(clippy::too_many_arguments)]
fn assemble(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    role: SolutionRole,
    setup: &Setup,
    level: LevelSolve,
    iters: usize,
    k: f64,
) -> RadialSolution {
    RadialSolution {
        mesh: mesh.clone(),
        nonlinearity: *nl,
        mu,
        role,
        values: level.values,
        residual_norm: level.residual,
        newton_iters: iters,
        equations: setup.nodes.clone(),
        resolved: setup.resolved.clone(),
        boundary_value: k,
        truncation_level: None,
        level_changes: Vec::new(),
        exhaustion_index: None,
        exhaustion_changes: Vec::new(),
    }
}

/// Solution with Dirichlet data `u = k` on every blow-up boundary node.
pub fn solve_truncated(nl: &Nonlinearity, mu: f64, mesh: &Mesh, k: f64, cfg: &SolverConfig) -> Result<RadialSolution> {
    check_inputs(mu, mesh, cfg)?;
    let setup = Setup::new(nl, mu, mesh, cfg, None, None)?;
    let guess = initial_guess(nl, mesh, &setup, k, cfg);
    truncated_inner(nl, mu, mesh, k, cfg, &setup, guess)
}

/// As [`solve_truncated`], starting Newton from `initial` (e.g. a solution with smaller `k`).
pub fn solve_truncated_from(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    k: f64,
    cfg: &SolverConfig,
    initial: &[f64],
) -> Result<RadialSolution> {
    check_inputs(mu, mesh, cfg)?;
    if initial.len() != mesh.len() {
        return Err(Error::Usage(format!("{} initial values for {} nodes", initial.len(), mesh.len())));
    }
    let setup = Setup::new(nl, mu, mesh, cfg, None, None)?;
    let guess = initial.iter().map(|v| v.max(cfg.positivity_floor)).collect();
    truncated_inner(nl, mu, mesh, k, cfg, &setup, guess)
}

fn truncated_inner(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    k: f64,
    cfg: &SolverConfig,
    setup: &Setup,
    guess: Vec<f64>,
) -> Result<RadialSolution> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidParameter(format!("boundary value k = {k}")));
    }
    let op = Operator::new(nl, mu, mesh)?;
    let level = solve_level(&op, setup, k, guess, cfg)?;
    let iters = level.iterations;
    Ok(assemble(nl, mu, mesh, SolutionRole::Truncated { k }, setup, level, iters, k))
}

struct Continuation {
    level: LevelSolve,
    index: usize,
    iterations: usize,
    changes: Vec<f64>,
}

/// Continuation in `k` until blow-up is realised at mesh resolution.
#[allow(clippy::too_many_arguments)]
fn continuation(
    nl: &Nonlinearity,
    mesh: &Mesh,
    op: &Operator,
    setup: &Setup,
    profile: &KOProfile,
    ks: &[f64],
    cfg: &SolverConfig,
) -> Result<Continuation> {
    if ks.is_empty() || ks.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("k sequence must be non-empty and increasing".into()));
    }
    let targets = setup.blowup_targets(mesh, profile, cfg.blowup_threshold)?;
    let reached = |u: &[f64]| targets.iter().all(|&(i, t)| u[i] >= t);
    let mut guess = initial_guess(nl, mesh, setup, ks[0], cfg);
    let mut iterations = 0;
    let mut changes = Vec::new();
    for (j, &k) in ks.iter().enumerate() {
        let level = solve_level(op, setup, k, guess.clone(), cfg)?;
        iterations += level.iterations;
        if j > 0 {
            changes.push(max_relative_change(&guess, &level.values, setup.resolved.clone()));
        }
        if reached(&level.values) {
            return Ok(Continuation {
                level,
                index: j,
                iterations,
                changes,
            });
        }
        guess = level.values;
    }
    Err(Error::NonStabilization { deltas: changes })
}

/// Minimal large solution: limit of truncated solutions along the default `k` sequence.
pub fn solve_minimal_large(nl: &Nonlinearity, mu: f64, mesh: &Mesh, cfg: &SolverConfig) -> Result<RadialSolution> {
    check_inputs(mu, mesh, cfg)?;
    let setup = Setup::new(nl, mu, mesh, cfg, None, None)?;
    let ks = k_sequence(nl, setup.first_spacing(mesh), cfg.k_levels);
    minimal_inner(nl, mu, mesh, cfg, &setup, &ks, SolutionRole::MinimalLarge)
}

/// Minimal large solution along a caller-supplied increasing `k` sequence.
pub fn solve_minimal_large_with(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    ks: &[f64],
    cfg: &SolverConfig,
) -> Result<RadialSolution> {
    check_inputs(mu, mesh, cfg)?;
    let setup = Setup::new(nl, mu, mesh, cfg, None, None)?;
    minimal_inner(nl, mu, mesh, cfg, &setup, ks, SolutionRole::MinimalLarge)
}

/// The large solution of the problem without Hardy term.
pub fn solve_mu_zero_large(nl: &Nonlinearity, mesh: &Mesh, cfg: &SolverConfig) -> Result<RadialSolution> {
    check_inputs(0.0, mesh, cfg)?;
    let setup = Setup::new(nl, 0.0, mesh, cfg, None, None)?;
    let ks = k_sequence(nl, setup.first_spacing(mesh), cfg.k_levels);
    minimal_inner(nl, 0.0, mesh, cfg, &setup, &ks, SolutionRole::MuZeroLarge)
}

fn minimal_inner(
    nl: &Nonlinearity,
    mu: f64,
    mesh: &Mesh,
    cfg: &SolverConfig,
    setup: &Setup,
    ks: &[f64],
    role: SolutionRole,
) -> Result<RadialSolution> {
    let op = Operator::new(nl, mu, mesh)?;
    let profile = profile_for(nl)?;
    let c = continuation(nl, mesh, &op, setup, &profile, ks, cfg)?;
    let mut sol = assemble(nl, mu, mesh, role, setup, c.level, c.iterations, ks[c.index]);
    sol.truncation_level = Some(c.index);
    sol.level_changes = c.changes;
    Ok(sol)
}

/// Walk inward from a blow-up node to the first node at distance `≥ rho`.
fn aligned_node(mesh: &Mesh, boundary: usize, rho: f64) -> usize {
    let mut i = boundary;
    if boundary == 0 {
        while mesh.delta[i] < rho && i + 1 < mesh.len() {
            i += 1;
        }
    } else {
        while mesh.delta[i] < rho && i > 0 {
            i -= 1;
        }
    }
    i
}

/// Maximal large solution as the decreasing limit of large solutions on
/// the exhaustion `D_n`, whose boundaries are snapped to mesh nodes.
///
/// Stops once the profile on `{δ ≥ ρ₀}` moves by less than
/// `exhaustion_tol`, or when `D_n` reaches the nodes next to `∂Ω`.
pub fn solve_maximal_large(nl: &Nonlinearity, mu: f64, mesh: &Mesh, cfg: &SolverConfig) -> Result<RadialSolution> {
    check_inputs(mu, mesh, cfg)?;
    let dom = &mesh.domain;
    let rho0 = cfg.rho0.unwrap_or_else(|| dom.default_rho0());
    let outer = Setup::new(nl, mu, mesh, cfg, None, None)?;
    let op = Operator::new(nl, mu, mesh)?;
    let profile = profile_for(nl)?;

    let mut prev: Option<(Vec<usize>, Setup, Vec<f64>)> = None;
    let mut iters = 0;
    let mut changes = Vec::new();
    for n in 1..=cfg.exhaustion_max {
        let sub = dom.exhaustion(n, Some(rho0))?;
        let rho = dom.boundary_gap(&sub).expect("exhaustion keeps the domain kind");
        let ends: Vec<usize> = outer.blow.iter().map(|&(b, _)| aligned_node(mesh, b, rho)).collect();
        if prev.as_ref().is_some_and(|(e, _, _)| *e == ends) {
            continue;
        }
        let reached = ends.iter().zip(&outer.blow).all(|(&e, &(b, _))| e.abs_diff(b) <= 1);
        let (left, right) = match (dom.left_boundary(), dom.right_boundary()) {
            (BoundaryKind::Symmetry, _) => (None, Some(ends[0])),
            (_, BoundaryKind::FarField) => (Some(ends[0]), None),
            _ => (Some(ends[0]), Some(ends[1])),
        };
        let setup = Setup::new(nl, mu, mesh, cfg, left, right)?;
        let ks = k_sequence(nl, setup.first_spacing(mesh), cfg.k_levels);
        let c = continuation(nl, mesh, &op, &setup, &profile, &ks, cfg)?;
        iters += c.iterations;

        match &prev {
            Some((_, prev_setup, prev_values)) => {
                // The edge of the resolved band carries O(1e-3) discretization
                // error that shifts with the sub-boundary, so monotonicity is
                // only enforced where the profile is converged.
                let window = prev_setup.resolved.clone().filter(|&i| mesh.delta[i] >= rho0);
                let excess = window
                    .clone()
                    .map(|i| (c.level.values[i] - prev_values[i]) / prev_values[i])
                    .fold(f64::NEG_INFINITY, f64::max);
                if excess > cfg.consistency_tol {
                    return Err(Error::Consistency {
                        level: n as usize,
                        excess,
                    });
                }
                let change = max_relative_change(prev_values, &c.level.values, window);
                changes.push(change);
                if change < cfg.exhaustion_tol || reached {
                    let mut sol = assemble(nl, mu, mesh, SolutionRole::MaximalLarge, &setup, c.level, iters, ks[c.index]);
                    sol.truncation_level = Some(c.index);
                    sol.level_changes = c.changes;
                    sol.exhaustion_index = Some(n);
                    sol.exhaustion_changes = changes;
                    return Ok(sol);
                }
            }
            None => {
                if !setup.resolved.clone().any(|i| mesh.delta[i] >= rho0) {
                    return Err(Error::Mesh(format!(
                        "no resolved node of the first exhaustion lies at distance ≥ {rho0}; refine the mesh"
                    )));
                }
            }
        }
        prev = Some((ends, setup, c.level.values));
    }
    Err(Error::NonStabilization { deltas: changes })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialDomain;
    use crate::solver::{assemble_residual, build_mesh, residual_sign_classify, SignClass};

    fn cubic() -> Nonlinearity {
        Nonlinearity::power(3.0).unwrap()
    }

    fn ball_mesh(count: usize) -> Mesh {
        build_mesh(&RadialDomain::ball(1.0, 3).unwrap(), count, 3.0).unwrap()
    }

    #[test]
    fn resolved_band_follows_local_spacing() {
        // δ_j ∝ j³ ⇒ spacing/distance ≈ 3/j, first ≤ 1/8 at j = 24
        let mesh = ball_mesh(1000);
        let cfg = SolverConfig::default();
        let setup = Setup::new(&cubic(), 0.0, &mesh, &cfg, None, None).unwrap();
        let n = mesh.len();
        let skipped = n - setup.resolved.end;
        assert!((22..=26).contains(&skipped), "{skipped}");
        assert_eq!(setup.resolved.start, 0);
        let fixed = SolverConfig {
            resolved_skip: Some(5),
            ..cfg
        };
        let setup = Setup::new(&cubic(), 0.0, &mesh, &fixed, None, None).unwrap();
        assert_eq!(setup.resolved.end, n - 6);
    }

    #[test]
    fn truncated_converges_and_is_positive() {
        let mesh = ball_mesh(400);
        let cfg = SolverConfig::default();
        let sol = solve_truncated(&cubic(), 0.1, &mesh, 50.0, &cfg).unwrap();
        assert!(sol.residual_norm < cfg.newton_tol);
        assert!(sol.values.iter().all(|&v| v > 0.0));
        let res = assemble_residual(&cubic(), 0.1, &mesh, &sol.values).unwrap();
        assert!(res.scaled_max_norm() < cfg.newton_tol);
    }

    #[test]
    fn truncated_monotone_in_k() {
        let mesh = ball_mesh(300);
        let cfg = SolverConfig::default();
        let a = solve_truncated(&cubic(), 0.0, &mesh, 10.0, &cfg).unwrap();
        let b = solve_truncated(&cubic(), 0.0, &mesh, 1e3, &cfg).unwrap();
        assert!(a.values.iter().zip(&b.values).all(|(x, y)| x <= y));
    }

    #[test]
    fn center_value_bounded_for_huge_data() {
        let cfg = SolverConfig::default();
        let coarse = solve_truncated(&cubic(), 0.0, &ball_mesh(1000), 1e6, &cfg).unwrap();
        let fine = solve_truncated(&cubic(), 0.0, &ball_mesh(2000), 1e6, &cfg).unwrap();
        let (c, f) = (coarse.center_value().unwrap(), fine.center_value().unwrap());
        assert!(c <= 4.70 && f <= 4.70, "{c} {f}");
        assert!((c - f).abs() < 1e-3 * f);
    }

    #[test]
    fn minimal_large_monotone_in_mu() {
        let mesh = ball_mesh(600);
        let cfg = SolverConfig::default();
        let sols: Vec<_> = [0.0, 0.1, 0.2]
            .iter()
            .map(|&mu| solve_minimal_large(&cubic(), mu, &mesh, &cfg).unwrap())
            .collect();
        for w in sols.windows(2) {
            for i in w[1].resolved.clone() {
                assert!(w[1].values[i] >= w[0].values[i]);
            }
        }
    }

    #[test]
    fn mu_zero_agrees_with_minimal() {
        let mesh = ball_mesh(600);
        let cfg = SolverConfig::default();
        let a = solve_mu_zero_large(&cubic(), &mesh, &cfg).unwrap();
        let b = solve_minimal_large(&cubic(), 0.0, &mesh, &cfg).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.role, SolutionRole::MuZeroLarge);
    }

    #[test]
    fn maximal_matches_minimal_without_hardy_term() {
        let mesh = ball_mesh(800);
        let cfg = SolverConfig::default();
        let min = solve_minimal_large(&cubic(), 0.0, &mesh, &cfg).unwrap();
        let max = solve_maximal_large(&cubic(), 0.0, &mesh, &cfg).unwrap();
        assert!(max.exhaustion_index.is_some());
        let gap = max
            .resolved
            .clone()
            .filter(|i| min.resolved.contains(i))
            .map(|i| (max.values[i] - min.values[i]).abs() / min.values[i])
            .fold(0.0, f64::max);
        assert!(gap < 1e-3, "{gap}");
    }

    #[test]
    fn classification_of_solution_multiples() {
        let mesh = ball_mesh(500);
        let cfg = SolverConfig::default();
        let nl = cubic();
        let sol = solve_minimal_large(&nl, 0.0, &mesh, &cfg).unwrap();
        let band = 10.0 * cfg.newton_tol;
        let classify = |factor: f64| {
            let u: Vec<f64> = sol.values.iter().map(|v| factor * v).collect();
            residual_sign_classify(&nl, 0.0, &mesh, &u, sol.equations.clone(), band).unwrap()
        };
        assert_eq!(classify(1.0), SignClass::Solution);
        assert_eq!(classify(2.0), SignClass::Supersolution);
        assert_eq!(classify(1.01), SignClass::Supersolution);
        assert_eq!(classify(0.5), SignClass::Subsolution);
    }

    #[test]
    fn all_domain_kinds_solve() {
        let cfg = SolverConfig::default();
        for dom in [
            RadialDomain::annulus(1.0, 2.0, 3).unwrap(),
            RadialDomain::interval(1.0).unwrap(),
            RadialDomain::exterior_ball(1.0, 3).unwrap(),
        ] {
            let mesh = build_mesh(&dom, 801, 3.0).unwrap();
            let sol = solve_minimal_large(&cubic(), 0.1, &mesh, &cfg).unwrap();
            assert!(sol.values.iter().all(|v| *v > 0.0), "{}", dom.label());
        }
    }

    #[test]
    fn exp_nonlinearity_solves() {
        let mesh = build_mesh(&RadialDomain::ball(1.0, 3).unwrap(), 800, 3.0).unwrap();
        let sol = solve_minimal_large(&Nonlinearity::exp_minus_one(), 0.1, &mesh, &SolverConfig::default()).unwrap();
        assert!(sol.values[0] > 0.0);
    }
}
