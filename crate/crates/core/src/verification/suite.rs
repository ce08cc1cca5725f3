use serde::{Deserialize, Serialize};

use super::checks::*;
use super::constants::{estimate_constants, ConstantsEstimate, SolutionFamily};
use super::{Check, Window};
use crate::error::{Error, Result};
use crate::geometry::{DomainKind, RadialDomain};
use crate::nonlinearity::{KOProfile, Nonlinearity};
use crate::parallel::{self, Execution};
use crate::solver::{build_mesh, solve_maximal_large, solve_minimal_large, solve_mu_zero_large, RadialSolution, SolverConfig};

/// Check groups in report order.
pub const CHECK_GROUPS: [&str; 10] = [
    "center_bound",
    "center_scaling",
    "asymptotic_ratio",
    "two_sided_bounds",
    "ordering_mu",
    "limsup_lower",
    "uniqueness_gap",
    "convexity_trick",
    "convexity_sampling",
    "profile_ode",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CheckSettings {
    /// Groups to run; `None` runs every group that applies to the domain.
    pub names: Option<Vec<String>>,
    pub delta_star: f64,
    pub ratio_tolerance: f64,
    pub center_scaling_tolerance: f64,
    pub layer_fraction: f64,
    pub stability_tolerance: f64,
    pub strict_fraction: f64,
    pub limsup_rel_tolerance: f64,
    pub limsup_abs_floor: f64,
    pub gap_interior_delta: f64,
    pub gap_tolerance: f64,
    pub gap_noise_floor: f64,
    pub sign_band: f64,
    pub convexity_samples: usize,
    pub seed: u64,
    pub ode_window: [f64; 2],
    pub ode_tolerance: f64,
}

impl Default for CheckSettings {
    fn default() -> Self {
        Self {
            names: None,
            delta_star: 1e-3,
            ratio_tolerance: 0.05,
            center_scaling_tolerance: 0.01,
            layer_fraction: 0.1,
            stability_tolerance: 0.1,
            strict_fraction: 0.99,
            limsup_rel_tolerance: 0.1,
            limsup_abs_floor: 1e-3,
            gap_interior_delta: 0.05,
            gap_tolerance: 1e-2,
            gap_noise_floor: 1e-9,
            sign_band: 1e-6,
            convexity_samples: 1000,
            seed: 0,
            ode_window: [1e-3, 1e-1],
            ode_tolerance: 1e-3,
        }
    }
}

impl CheckSettings {
    pub fn validate(&self) -> Result<()> {
        if let Some(names) = &self.names {
            if let Some(bad) = names.iter().find(|n| !CHECK_GROUPS.contains(&n.as_str())) {
                return Err(Error::InvalidParameter(format!("unknown check {bad:?}")));
            }
        }
        let nonneg = [
            self.ratio_tolerance,
            self.center_scaling_tolerance,
            self.stability_tolerance,
            self.limsup_rel_tolerance,
            self.limsup_abs_floor,
            self.gap_tolerance,
            self.gap_noise_floor,
            self.sign_band,
            self.ode_tolerance,
        ];
        if nonneg.iter().any(|t| !(*t >= 0.0)) {
            return Err(Error::InvalidParameter("tolerances must be non-negative".into()));
        }
        if !(self.delta_star > 0.0 && self.gap_interior_delta > 0.0) {
            return Err(Error::InvalidParameter("delta windows must be positive".into()));
        }
        if !(self.layer_fraction > 0.0 && self.layer_fraction <= 1.0) {
            return Err(Error::InvalidParameter("layer_fraction must lie in (0, 1]".into()));
        }
        if !(0.0..=1.0).contains(&self.strict_fraction) {
            return Err(Error::InvalidParameter("strict_fraction must lie in [0, 1]".into()));
        }
        let [lo, hi] = self.ode_window;
        if !(lo > 0.0 && hi > lo) {
            return Err(Error::InvalidParameter("ode_window must be 0 < lo < hi".into()));
        }
        Ok(())
    }
}

/// One problem and how to check it. The fine mesh has twice the points.
#[derive(Debug, Clone)]
pub struct SuiteInput {
    pub domain: RadialDomain,
    pub nonlinearity: Nonlinearity,
    pub mu: f64,
    pub mesh_points: usize,
    pub gamma: f64,
    pub solver: SolverConfig,
    pub settings: CheckSettings,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeshStats {
    pub points: usize,
    pub fine_points: usize,
    pub gamma: f64,
    pub delta_min: f64,
    pub resolved_delta_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub fingerprint: String,
    pub mesh: MeshStats,
    pub constants: Option<ConstantsEstimate>,
    pub checks: Vec<Check>,
    pub all_pass: bool,
}

impl VerificationReport {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Job {
    Zero { fine: bool },
    Minimal { fine: bool },
    Maximal { fine: bool },
    ZeroAtRadius(f64),
}

fn applies(group: &str, dom: &RadialDomain) -> bool {
    match group {
        "center_bound" | "center_scaling" => matches!(dom.kind, DomainKind::Ball { .. }),
        _ => true,
    }
}

fn selected(input: &SuiteInput) -> Result<Vec<&'static str>> {
    match &input.settings.names {
        None => Ok(CHECK_GROUPS.iter().copied().filter(|g| applies(g, &input.domain)).collect()),
        Some(names) => CHECK_GROUPS
            .iter()
            .copied()
            .filter(|g| names.iter().any(|n| n == g))
            .map(|g| {
                if applies(g, &input.domain) {
                    Ok(g)
                } else {
                    Err(Error::Usage(format!("check {g} does not apply to {}", input.domain.label())))
                }
            })
            .collect(),
    }
}

fn jobs_for(groups: &[&str], radius: Option<f64>) -> Vec<Job> {
    let has = |g: &str| groups.contains(&g);
    let mut jobs = Vec::new();
    let mut add = |j: Job| {
        if !jobs.contains(&j) {
            jobs.push(j);
        }
    };
    if has("center_bound") || has("center_scaling") || has("asymptotic_ratio") || has("ordering_mu") || has("convexity_trick") {
        add(Job::Zero { fine: false });
    }
    if has("two_sided_bounds") || has("ordering_mu") || has("limsup_lower") || has("uniqueness_gap") || has("convexity_trick") {
        add(Job::Minimal { fine: false });
    }
    if has("two_sided_bounds") || has("uniqueness_gap") {
        add(Job::Minimal { fine: true });
    }
    if has("uniqueness_gap") || has("convexity_trick") {
        add(Job::Maximal { fine: false });
    }
    if has("uniqueness_gap") {
        add(Job::Maximal { fine: true });
    }
    if let (true, Some(r)) = (has("center_scaling"), radius) {
        add(Job::ZeroAtRadius(0.5 * r));
        add(Job::ZeroAtRadius(2.0 * r));
    }
    jobs
}

fn run_job(input: &SuiteInput, job: Job) -> Result<RadialSolution> {
    let (nl, mu, cfg) = (&input.nonlinearity, input.mu, &input.solver);
    let points = |fine: bool| if fine { 2 * input.mesh_points } else { input.mesh_points };
    match job {
        Job::Zero { fine } => solve_mu_zero_large(nl, &build_mesh(&input.domain, points(fine), input.gamma)?, cfg),
        Job::Minimal { fine } => solve_minimal_large(nl, mu, &build_mesh(&input.domain, points(fine), input.gamma)?, cfg),
        Job::Maximal { fine } => solve_maximal_large(nl, mu, &build_mesh(&input.domain, points(fine), input.gamma)?, cfg),
        Job::ZeroAtRadius(r) => {
            let dom = RadialDomain::ball(r, input.domain.dim)?;
            solve_mu_zero_large(nl, &build_mesh(&dom, input.mesh_points, input.gamma)?, cfg)
        }
    }
}

/// Solves every problem the selected groups need (concurrently under
/// `exec`), then evaluates the checks in [`CHECK_GROUPS`] order.
pub fn run_suite(input: &SuiteInput, fingerprint: &str, exec: Execution) -> Result<VerificationReport> {
    input.settings.validate()?;
    input.solver.validate()?;
    input.domain.validate()?;
    let groups = selected(input)?;
    let radius = match input.domain.kind {
        DomainKind::Ball { radius } => Some(radius),
        _ => None,
    };
    let jobs = jobs_for(&groups, radius);
    let solved: Vec<RadialSolution> = parallel::map(&jobs, exec, |&j| run_job(input, j))
        .into_iter()
        .collect::<Result<_>>()?;
    let get = |j: Job| jobs.iter().position(|&x| x == j).map(|k| &solved[k]);
    let profile = KOProfile::with_execution(input.nonlinearity, exec)?;
    let s = &input.settings;

    let coarse_mesh = build_mesh(&input.domain, input.mesh_points, input.gamma)?;
    let resolved_delta_min = solved
        .iter()
        .find(|sol| sol.mesh.len() == coarse_mesh.len() && sol.mesh.domain == input.domain)
        .map_or(f64::NAN, |sol| sol.resolved_delta_min());
    let mesh = MeshStats {
        points: coarse_mesh.len(),
        fine_points: build_mesh(&input.domain, 2 * input.mesh_points, input.gamma)?.len(),
        gamma: input.gamma,
        delta_min: coarse_mesh.delta_min(),
        resolved_delta_min,
    };

    let constants = match (get(Job::Zero { fine: false }), get(Job::Minimal { fine: false })) {
        (Some(zero), Some(min)) => {
            let mut members = vec![min.clone()];
            members.extend(get(Job::Maximal { fine: false }).cloned());
            let fam = SolutionFamily {
                reference: zero.clone(),
                members,
            };
            Some(estimate_constants(&[fam], &profile, s.layer_fraction)?)
        }
        _ => None,
    };

    let mut checks = Vec::new();
    for g in groups {
        match g {
            "center_bound" => {
                let c1 = constants.map_or_else(|| crate::nonlinearity::check_c1(&input.nonlinearity, 1.0).map(|e| e.c1), |c| Ok(c.ko_c1))?;
                checks.push(check_center_bound(get(Job::Zero { fine: false }).unwrap(), c1)?);
            }
            "center_scaling" => {
                let r = radius.unwrap();
                let sols = [
                    get(Job::ZeroAtRadius(0.5 * r)).unwrap(),
                    get(Job::Zero { fine: false }).unwrap(),
                    get(Job::ZeroAtRadius(2.0 * r)).unwrap(),
                ];
                checks.push(check_center_scaling(&sols, s.center_scaling_tolerance)?);
            }
            "asymptotic_ratio" => checks.extend(check_asymptotic_ratio(
                get(Job::Zero { fine: false }).unwrap(),
                &profile,
                s.delta_star,
                s.ratio_tolerance,
            )?),
            "two_sided_bounds" => {
                let (_, _, c) = check_two_sided_bounds(
                    get(Job::Minimal { fine: false }).unwrap(),
                    get(Job::Minimal { fine: true }).unwrap(),
                    &profile,
                    s.layer_fraction,
                    s.stability_tolerance,
                )?;
                checks.extend(c);
            }
            "ordering_mu" => checks.extend(check_ordering_mu(
                get(Job::Minimal { fine: false }).unwrap(),
                get(Job::Zero { fine: false }).unwrap(),
                s.strict_fraction,
            )?),
            "limsup_lower" => checks.extend(check_limsup_lower(
                get(Job::Minimal { fine: false }).unwrap(),
                s.limsup_rel_tolerance,
                s.limsup_abs_floor,
            )?),
            "uniqueness_gap" => {
                let coarse = check_uniqueness_gap(
                    get(Job::Minimal { fine: false }).unwrap(),
                    get(Job::Maximal { fine: false }).unwrap(),
                    s.gap_interior_delta,
                    s.gap_tolerance,
                )?;
                let fine = check_uniqueness_gap(
                    get(Job::Minimal { fine: true }).unwrap(),
                    get(Job::Maximal { fine: true }).unwrap(),
                    s.gap_interior_delta,
                    s.gap_tolerance,
                )?;
                let refinement = check_gap_refinement(&coarse, &fine, s.gap_noise_floor);
                checks.push(coarse);
                checks.push(Check {
                    name: "uniqueness_gap_fine".into(),
                    ..fine
                });
                checks.push(refinement);
            }
            "convexity_trick" => {
                let m = constants.expect("constants are fitted whenever convexity_trick runs").m;
                checks.extend(check_convexity_trick(
                    get(Job::Minimal { fine: false }).unwrap(),
                    get(Job::Maximal { fine: false }).unwrap(),
                    m,
                    s.sign_band,
                )?);
            }
            "convexity_sampling" => checks.push(check_convexity_sampling(&input.nonlinearity, s.convexity_samples, s.seed)),
            "profile_ode" => {
                let [lo, hi] = s.ode_window;
                checks.push(check_profile_ode(&profile, Window::new(lo, hi), s.ode_tolerance)?);
            }
            _ => unreachable!("groups come from CHECK_GROUPS"),
        }
    }
    let all_pass = checks.iter().all(|c| c.pass);
    Ok(VerificationReport {
        fingerprint: fingerprint.to_string(),
        mesh,
        constants,
        checks,
        all_pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn input(domain: RadialDomain) -> SuiteInput {
        SuiteInput {
            domain,
            nonlinearity: Nonlinearity::power(3.0).unwrap(),
            mu: 0.1,
            mesh_points: 600,
            gamma: 3.0,
            solver: SolverConfig::default(),
            settings: CheckSettings::default(),
        }
    }

    #[test]
    fn default_ball_suite_passes() {
        let rep = run_suite(&input(RadialDomain::ball(1.0, 3).unwrap()), "x", Execution::Parallel).unwrap();
        for c in &rep.checks {
            assert!(c.pass, "{}", c.summary());
        }
        assert!(rep.all_pass);
        assert!(rep.checks.iter().any(|c| c.name == "center_scaling"));
        assert!(rep.constants.is_some());
    }

    #[test]
    fn sequential_and_parallel_reports_agree() {
        let mut inp = input(RadialDomain::annulus(1.0, 2.0, 3).unwrap());
        inp.settings.names = Some(vec!["uniqueness_gap".into(), "two_sided_bounds".into()]);
        let a = run_suite(&inp, "x", Execution::Sequential).unwrap();
        let b = run_suite(&inp, "x", Execution::Parallel).unwrap();
        assert_eq!(a, b);
        let names: Vec<_> = a.checks.iter().map(|c| c.name.as_str()).collect();
        assert_eq!(
            names,
            [
                "two_sided_c1",
                "two_sided_c2",
                "uniqueness_gap",
                "uniqueness_gap_fine",
                "uniqueness_gap_refinement"
            ]
        );
    }

    #[test]
    fn zero_tolerance_fails_the_named_check() {
        let mut inp = input(RadialDomain::ball(1.0, 3).unwrap());
        inp.settings.names = Some(vec!["asymptotic_ratio".into()]);
        inp.settings.ratio_tolerance = 0.0;
        let rep = run_suite(&inp, "x", Execution::Parallel).unwrap();
        assert!(!rep.all_pass);
        assert_eq!(rep.failures().next().unwrap().name, "asymptotic_ratio");
    }

    #[test]
    fn bad_settings_are_rejected() {
        let mut inp = input(RadialDomain::interval(1.0).unwrap());
        inp.settings.names = Some(vec!["center_bound".into()]);
        assert!(matches!(run_suite(&inp, "x", Execution::Parallel), Err(Error::Usage(_))));
        inp.settings.names = Some(vec!["nonsense".into()]);
        assert!(matches!(run_suite(&inp, "x", Execution::Parallel), Err(Error::InvalidParameter(_))));
    }
}
