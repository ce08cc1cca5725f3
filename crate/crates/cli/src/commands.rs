use blowup_core::geometry::{hardy_refinement, DomainKind, HardyEstimate, RadialDomain};
use blowup_core::nonlinearity::{c2_from_c1, check_c1, check_con3};
use blowup_core::parallel::Execution;
use blowup_core::solver::{
    build_mesh, solve_maximal_large, solve_minimal_large, solve_mu_zero_large, solve_truncated,
};
use blowup_core::verification::{run_suite, sweep, SuiteInput, SweepPoint, VerificationReport};
use blowup_core::{Error, KOProfile, Nonlinearity, RadialSolution};
use serde::Serialize;

use crate::config::{Format, Role, RunConfig, SweepParameter};
use crate::output::{num, OutDir, Table};

/// Everything that ends a command early, with its exit code.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Numerical(String),
    Verification(Vec<String>),
}

impl Failure {
    pub fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Config(_) => 2,
            Failure::Numerical(_) => 3,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Numerical(m) => write!(f, "numerical failure: {m}"),
            Failure::Verification(names) => write!(f, "verification failed: {}", names.join(", ")),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numerical() {
            Failure::Numerical(e.to_string())
        } else {
            Failure::Config(e.to_string())
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Config(format!("cannot write output: {e}"))
    }
}

pub struct Context {
    pub cfg: RunConfig,
    pub out: OutDir,
    pub exec: Execution,
}

impl Context {
    fn problem(&self) -> Result<(RadialDomain, Nonlinearity), Failure> {
        Ok((self.cfg.domain.build()?, self.cfg.nonlinearity.build()?))
    }

    fn csv(&self, name: &str, t: &Table) -> Result<(), Failure> {
        if self.cfg.output.wants(Format::Csv) {
            self.out.csv(name, t)?;
        }
        Ok(())
    }

    fn json<T: Serialize>(&self, name: &str, v: &T) -> Result<(), Failure> {
        if self.cfg.output.wants(Format::Json) {
            self.out.json(name, v)?;
        }
        Ok(())
    }
}

#[derive(Serialize)]
struct ProfileConstants {
    fingerprint: String,
    nonlinearity: String,
    dim: usize,
    c1: f64,
    c1_stable: bool,
    c2: f64,
    a: f64,
    a_stable: bool,
}

pub fn profile(ctx: &Context) -> Result<(), Failure> {
    let (dom, nl) = ctx.problem()?;
    let profile = KOProfile::with_execution(nl, ctx.exec)?;
    let grid = ctx.cfg.profile;
    let decades = (grid.delta_max / grid.delta_min).log10();
    let steps = (decades * grid.per_decade as f64).round() as usize;

    let mut t = Table::new(&["delta", "psi", "phi", "tilde_phi", "h_phi_d2"]);
    for j in 0..=steps {
        let delta = grid.delta_min * 10f64.powf(j as f64 / grid.per_decade as f64);
        if delta > grid.delta_max * (1.0 + 1e-12) {
            break;
        }
        let phi = profile.phi(delta)?;
        // φ̃ does not exist where δ⁻² is below inf h
        let tilde = match profile.tilde_phi(delta) {
            Ok(v) => v,
            Err(Error::NoSolution(_)) => f64::NAN,
            Err(e) => return Err(e.into()),
        };
        t.row(&[
            num(delta),
            num(profile.psi(phi)?),
            num(phi),
            num(tilde),
            num(nl.h(phi)? * delta * delta),
        ]);
    }
    ctx.csv("profile.csv", &t)?;

    let c1 = check_c1(&nl, 1.0)?;
    let a = check_con3(&profile)?;
    ctx.json(
        "constants.json",
        &ProfileConstants {
            fingerprint: ctx.cfg.fingerprint(),
            nonlinearity: nl.label(),
            dim: dom.dim,
            c1: c1.c1,
            c1_stable: c1.holds,
            c2: c2_from_c1(dom.dim, c1.c1),
            a: a.a,
            a_stable: a.holds,
        },
    )?;
    println!("C1 = {}  C2 = {}  A = {}", num(c1.c1), num(c2_from_c1(dom.dim, c1.c1)), num(a.a));
    Ok(())
}

#[derive(Serialize, Default)]
struct SolveManifest {
    fingerprint: String,
    status: &'static str,
    error: Option<String>,
    role: String,
    nonlinearity: String,
    domain: String,
    mu: f64,
    mesh_points: usize,
    gamma: f64,
    residual_norm: Option<f64>,
    newton_iters: Option<usize>,
    failed_iterations: Option<usize>,
    truncation_level: Option<usize>,
    boundary_value: Option<f64>,
    level_changes: Vec<f64>,
    exhaustion_index: Option<u32>,
    exhaustion_changes: Vec<f64>,
    resolved_start: Option<usize>,
    resolved_end: Option<usize>,
    resolved_delta_min: Option<f64>,
}

fn solution_table(sol: &RadialSolution, profile: &KOProfile) -> Result<Table, Failure> {
    let nl = &sol.nonlinearity;
    let mut t = Table::new(&["r", "delta", "u", "u_over_phi", "u_over_tilde_phi", "h_u_delta2"]);
    for i in sol.resolved_nodes() {
        let (r, d, u) = (sol.mesh.r[i], sol.mesh.delta[i], sol.values[i]);
        let tilde = profile.tilde_phi(d).unwrap_or(f64::NAN);
        let phi = profile.phi(d).unwrap_or(f64::NAN);
        t.row(&[num(r), num(d), num(u), num(u / phi), num(u / tilde), num(nl.h(u)? * d * d)]);
    }
    Ok(t)
}

pub fn solve(ctx: &Context) -> Result<(), Failure> {
    let (dom, nl) = ctx.problem()?;
    let cfg = &ctx.cfg;
    let mesh = build_mesh(&dom, cfg.mesh.points, cfg.mesh.gamma)?;
    let result = match cfg.solve.role {
        Role::Minimal => solve_minimal_large(&nl, cfg.mu, &mesh, &cfg.solver),
        Role::Maximal => solve_maximal_large(&nl, cfg.mu, &mesh, &cfg.solver),
        Role::MuZero => solve_mu_zero_large(&nl, &mesh, &cfg.solver),
        Role::Truncated => solve_truncated(&nl, cfg.mu, &mesh, cfg.solve.k.unwrap_or(1.0), &cfg.solver),
    };
    let mut manifest = SolveManifest {
        fingerprint: cfg.fingerprint(),
        role: serde_json::to_value(cfg.solve.role).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default(),
        nonlinearity: nl.label(),
        domain: dom.label(),
        mu: if cfg.solve.role == Role::MuZero { 0.0 } else { cfg.mu },
        mesh_points: mesh.len(),
        gamma: mesh.gamma,
        ..Default::default()
    };
    match result {
        Ok(sol) => {
            let profile = KOProfile::with_execution(nl, ctx.exec)?;
            ctx.csv("solution.csv", &solution_table(&sol, &profile)?)?;
            manifest.status = "ok";
            manifest.residual_norm = Some(sol.residual_norm);
            manifest.newton_iters = Some(sol.newton_iters);
            manifest.truncation_level = sol.truncation_level;
            manifest.boundary_value = Some(sol.boundary_value);
            manifest.level_changes = sol.level_changes.clone();
            manifest.exhaustion_index = sol.exhaustion_index;
            manifest.exhaustion_changes = sol.exhaustion_changes.clone();
            manifest.resolved_start = Some(sol.resolved.start);
            manifest.resolved_end = Some(sol.resolved.end);
            manifest.resolved_delta_min = Some(sol.resolved_delta_min());
            ctx.json("manifest.json", &manifest)?;
            println!(
                "{} on {}: u = {} at delta = {}, residual {}",
                sol.role.label(),
                dom.label(),
                num(sol.values[sol.resolved.start]),
                num(sol.mesh.delta[sol.resolved.start]),
                num(sol.residual_norm)
            );
            Ok(())
        }
        Err(e) => {
            manifest.status = "failed";
            manifest.error = Some(e.to_string());
            match &e {
                Error::SolverFailure { iterations, residual, .. } => {
                    manifest.failed_iterations = Some(*iterations);
                    manifest.residual_norm = Some(*residual);
                }
                Error::NonStabilization { deltas } => manifest.level_changes = deltas.clone(),
                _ => {}
            }
            if e.is_numerical() {
                ctx.json("manifest.json", &manifest)?;
            }
            Err(e.into())
        }
    }
}

pub fn verify(ctx: &Context) -> Result<(), Failure> {
    let (domain, nonlinearity) = ctx.problem()?;
    let cfg = &ctx.cfg;
    let input = SuiteInput {
        domain,
        nonlinearity,
        mu: cfg.mu,
        mesh_points: cfg.mesh.points,
        gamma: cfg.mesh.gamma,
        solver: cfg.solver,
        settings: cfg.checks.clone(),
    };
    let report: VerificationReport = run_suite(&input, &cfg.fingerprint(), ctx.exec)?;
    ctx.json("report.json", &report)?;
    for c in &report.checks {
        println!("{}", c.summary());
    }
    if report.all_pass {
        Ok(())
    } else {
        Err(Failure::Verification(report.failures().map(|c| c.name.clone()).collect()))
    }
}

#[derive(Serialize)]
struct HardyOutput {
    fingerprint: String,
    domain: String,
    value: f64,
    refinement: Vec<HardyEstimate>,
}

pub fn hardy(ctx: &Context) -> Result<(), Failure> {
    let dom = ctx.cfg.domain.build()?;
    let est = hardy_refinement(&dom, &ctx.cfg.hardy.mesh_points, ctx.exec)?;
    let mut t = Table::new(&["mesh_points", "value", "bisection_steps", "inverse_iterations"]);
    for e in &est {
        println!("{:>8}  {}", e.mesh_points, num(e.value));
        t.row(&[
            e.mesh_points.to_string(),
            num(e.value),
            e.bisection_steps.to_string(),
            e.inverse_iterations.to_string(),
        ]);
    }
    let finest = est.iter().max_by_key(|e| e.mesh_points).expect("validated non-empty");
    println!("c_H({}) = {}", dom.label(), num(finest.value));
    ctx.csv("hardy.csv", &t)?;
    ctx.json(
        "hardy.json",
        &HardyOutput {
            fingerprint: ctx.cfg.fingerprint(),
            domain: dom.label(),
            value: finest.value,
            refinement: est.clone(),
        },
    )
}

fn with_radius(dom: &RadialDomain, r: f64) -> blowup_core::Result<RadialDomain> {
    match dom.kind {
        DomainKind::Ball { .. } => RadialDomain::ball(r, dom.dim),
        DomainKind::ExteriorBall { radius, outer } => RadialDomain::new(
            DomainKind::ExteriorBall {
                radius: r,
                outer: outer / radius * r,
            },
            dom.dim,
        ),
        _ => Err(Error::InvalidParameter("radius sweep needs a ball".into())),
    }
}

pub fn sweep_cmd(ctx: &Context) -> Result<(), Failure> {
    let cfg = &ctx.cfg;
    let sw = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| Failure::Config("sweep needs a [sweep] section".into()))?;
    let (dom, nl) = ctx.problem()?;
    let points = sw
        .values
        .iter()
        .map(|&v| {
            let mut p = SweepPoint {
                domain: dom,
                nonlinearity: nl,
                mu: cfg.mu,
            };
            match sw.parameter {
                SweepParameter::Mu => p.mu = v,
                SweepParameter::P => p.nonlinearity = Nonlinearity::power(v)?,
                SweepParameter::Radius => p.domain = with_radius(&dom, v)?,
            }
            Ok(p)
        })
        .collect::<blowup_core::Result<Vec<_>>>()?;
    if let Some(bad) = points.iter().find(|p| !(p.mu >= 0.0 && p.mu.is_finite())) {
        return Err(Failure::Config(format!("mu = {} in sweep", bad.mu)));
    }
    let rows = sweep(&points, cfg.mesh.points, cfg.mesh.gamma, &cfg.solver, &cfg.checks, ctx.exec)?;
    let name = match sw.parameter {
        SweepParameter::Mu => "mu",
        SweepParameter::P => "p",
        SweepParameter::Radius => "radius",
    };
    let mut t = Table::new(&["parameter", "value", "c1", "c2", "a_bar", "b0", "m", "gap", "limsup"]);
    for (v, r) in sw.values.iter().zip(&rows) {
        t.row(&[
            name.to_string(),
            num(*v),
            num(r.c1),
            num(r.c2),
            num(r.a_bar),
            num(r.b0),
            num(r.m),
            num(r.gap),
            num(r.limsup),
        ]);
    }
    ctx.csv("sweep.csv", &t)?;
    println!("{} rows written", rows.len());
    Ok(())
}
