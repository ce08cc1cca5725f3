//! The ten acceptance criteria, one PASS/FAIL line each. Exits non-zero if
//! any criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::Instant;

use blowup_core::geometry::hardy_refinement;
use blowup_core::nonlinearity::{check_c1, ClosedForms};
use blowup_core::parallel::{self, Execution};
use blowup_core::solver::{build_mesh, solve_maximal_large, solve_minimal_large, solve_mu_zero_large};
use blowup_core::verification::{
    check_asymptotic_ratio, check_center_bound, check_center_scaling, check_convexity_sampling, check_convexity_trick,
    check_gap_refinement, check_limsup_lower, check_ordering_mu, check_two_sided_bounds, check_uniqueness_gap,
    estimate_constants, Check, SolutionFamily,
};
use blowup_core::{KOProfile, Nonlinearity, RadialDomain, RadialSolution, SolverConfig};

type Outcome = Result<(bool, String), String>;
/// Name, time budget in seconds, body.
type Criterion = (&'static str, f64, fn() -> Outcome);

fn cubic() -> Nonlinearity {
    Nonlinearity::power(3.0).unwrap()
}

fn ball() -> RadialDomain {
    RadialDomain::ball(1.0, 3).unwrap()
}

fn cfg() -> SolverConfig {
    SolverConfig::default()
}

fn fails(checks: &[Check]) -> String {
    checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.summary())
        .collect::<Vec<_>>()
        .join("; ")
}

fn all_pass(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.pass)
}

fn e<T: std::fmt::Display>(x: T) -> String {
    x.to_string()
}

fn ko_closed_form() -> Outcome {
    let nl = cubic().with_closed_forms(ClosedForms {
        primitive: true,
        psi: false,
        h_inverse: false,
    });
    let profile = KOProfile::new(nl).map_err(e)?;
    let mut worst = 0.0f64;
    for j in 0..=80 {
        let x = 10f64.powf(j as f64 / 20.0);
        let exact = 2f64.sqrt() / x;
        worst = worst.max((profile.psi(x).map_err(e)? - exact).abs() / exact);
        let d = 1e-4 * x;
        let exact = 2f64.sqrt() / d;
        worst = worst.max((profile.phi(d).map_err(e)? - exact).abs() / exact);
    }
    Ok((worst <= 1e-6, format!("max relative error {worst:.2e} over t, delta in 4 decades")))
}

fn center_bound() -> Outcome {
    let radii = [0.5, 1.0, 2.0];
    let sols: Vec<RadialSolution> = parallel::map(&radii, Execution::Parallel, |&r| {
        let mesh = build_mesh(&RadialDomain::ball(r, 3)?, 4000, 3.0)?;
        solve_mu_zero_large(&cubic(), &mesh, &cfg())
    })
    .into_iter()
    .collect::<Result<_, _>>()
    .map_err(e)?;
    let c1 = check_c1(&cubic(), 1.0).map_err(e)?.c1;
    let mut checks = Vec::new();
    for s in &sols {
        checks.push(check_center_bound(s, c1).map_err(e)?);
    }
    let refs: Vec<&RadialSolution> = sols.iter().collect();
    checks.push(check_center_scaling(&refs, 0.01).map_err(e)?);
    Ok((
        all_pass(&checks),
        format!(
            "h(u(0))R^2 = {:.4} <= {:.4}, spread across R {:.2e} {}",
            checks[1].measured,
            checks[1].bound,
            checks[3].measured,
            fails(&checks)
        ),
    ))
}

fn asymptotic_ratio() -> Outcome {
    let profile = KOProfile::new(cubic()).map_err(e)?;
    let mut detail = Vec::new();
    let mut ok = true;
    for dom in [ball(), RadialDomain::interval(1.0).unwrap()] {
        let mesh = build_mesh(&dom, 4000, 3.0).map_err(e)?;
        let sol = solve_mu_zero_large(&cubic(), &mesh, &cfg()).map_err(e)?;
        let checks = check_asymptotic_ratio(&sol, &profile, 1e-3, 0.05).map_err(e)?;
        ok &= all_pass(&checks);
        let decades: Vec<String> = checks[1].diagnostics.values().map(|v| format!("{v:.2e}")).collect();
        detail.push(format!(
            "{}: max|u/phi-1| = {:.2e}, decades [{}] {}",
            dom.label(),
            checks[0].measured,
            decades.join(", "),
            fails(&checks)
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn ordering() -> Outcome {
    let mesh = build_mesh(&ball(), 4000, 3.0).map_err(e)?;
    let zero = solve_mu_zero_large(&cubic(), &mesh, &cfg()).map_err(e)?;
    let mus = [0.1, 0.25, 1.0];
    let sols = parallel::map(&mus, Execution::Parallel, |&mu| solve_minimal_large(&cubic(), mu, &mesh, &cfg()));
    let mut ok = true;
    let mut detail = Vec::new();
    for (mu, sol) in mus.iter().zip(sols) {
        let checks = check_ordering_mu(&sol.map_err(e)?, &zero, 0.99).map_err(e)?;
        ok &= all_pass(&checks);
        detail.push(format!(
            "mu={mu}: min rel diff {:.2e}, strict {:.4} {}",
            checks[0].measured,
            checks[1].measured,
            fails(&checks)
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn two_sided() -> Outcome {
    let mut ok = true;
    let mut detail = Vec::new();
    for nl in [cubic(), Nonlinearity::exp_minus_one()] {
        let profile = KOProfile::new(nl).map_err(e)?;
        let pts = [4000, 8000];
        let sols: Vec<RadialSolution> = parallel::map(&pts, Execution::Parallel, |&n| {
            solve_minimal_large(&nl, 0.1, &build_mesh(&ball(), n, 3.0)?, &cfg())
        })
        .into_iter()
        .collect::<Result<_, _>>()
        .map_err(e)?;
        let (a, b, checks) = check_two_sided_bounds(&sols[0], &sols[1], &profile, 0.1, 0.1).map_err(e)?;
        ok &= all_pass(&checks);
        detail.push(format!(
            "{}: c1 {:.4} -> {:.4}, c2 {:.4} -> {:.4} {}",
            nl.label(),
            a.c1,
            b.c1,
            a.c2,
            b.c2,
            fails(&checks)
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn uniqueness_gap() -> Outcome {
    let cases: Vec<(RadialDomain, f64)> = [ball(), RadialDomain::annulus(1.0, 2.0, 3).unwrap()]
        .into_iter()
        .flat_map(|d| [(d, 0.1), (d, 1.0)])
        .collect();
    let results = parallel::map(&cases, Execution::Parallel, |&(dom, mu)| {
        let mut gaps = Vec::new();
        for n in [4000, 8000] {
            let mesh = build_mesh(&dom, n, 3.0)?;
            let min = solve_minimal_large(&cubic(), mu, &mesh, &cfg())?;
            let max = solve_maximal_large(&cubic(), mu, &mesh, &cfg())?;
            gaps.push(check_uniqueness_gap(&min, &max, 0.05, 1e-2)?);
        }
        let refinement = check_gap_refinement(&gaps[0], &gaps[1], 1e-9);
        gaps.push(refinement);
        Ok::<_, blowup_core::Error>(gaps)
    });
    let mut ok = true;
    let mut detail = Vec::new();
    for ((dom, mu), r) in cases.iter().zip(results) {
        let checks = r.map_err(e)?;
        ok &= all_pass(&checks);
        detail.push(format!(
            "{} mu={mu}: {:.1e} -> {:.1e} {}",
            dom.label(),
            checks[0].measured,
            checks[1].measured,
            fails(&checks)
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn limsup() -> Outcome {
    let mesh = build_mesh(&ball(), 4000, 3.0).map_err(e)?;
    let sol = solve_minimal_large(&cubic(), 0.2, &mesh, &cfg()).map_err(e)?;
    let checks = check_limsup_lower(&sol, 0.1, 1e-3).map_err(e)?;
    let c = &checks[0];
    let w = c.window.unwrap();
    Ok((
        c.pass && c.measured >= 0.18,
        format!(
            "max h(u) delta^2 = {:.4} over delta in [{:.2e}, {:.2e}] (need >= 0.18)",
            c.measured, w.delta_lo, w.delta_hi
        ),
    ))
}

fn hardy() -> Outcome {
    let dom = RadialDomain::interval(1.0).unwrap();
    let est = hardy_refinement(&dom, &[1000, 2000, 4000, 8000], Execution::Parallel).map_err(e)?;
    let values: Vec<f64> = est.iter().map(|x| x.value).collect();
    let last = *values.last().unwrap();
    let monotone = values.windows(2).all(|w| w[1] < w[0]) && values.iter().all(|&v| v >= 0.25);
    let close = (last - 0.25).abs() <= 0.02 * 0.25;
    let shown: Vec<String> = values.iter().map(|v| format!("{v:.5}")).collect();
    Ok((monotone && close, format!("values [{}] at 1000..8000 nodes", shown.join(", "))))
}

fn convexity() -> Outcome {
    let mesh = build_mesh(&ball(), 4000, 3.0).map_err(e)?;
    let zero = solve_mu_zero_large(&cubic(), &mesh, &cfg()).map_err(e)?;
    let min = solve_minimal_large(&cubic(), 0.1, &mesh, &cfg()).map_err(e)?;
    let max = solve_maximal_large(&cubic(), 0.1, &mesh, &cfg()).map_err(e)?;
    let profile = KOProfile::new(cubic()).map_err(e)?;
    let fam = SolutionFamily {
        reference: zero,
        members: vec![min.clone(), max.clone()],
    };
    let est = estimate_constants(&[fam], &profile, 0.1).map_err(e)?;
    let mut checks = check_convexity_trick(&min, &max, est.m, 1e-6).map_err(e)?;
    checks.push(check_convexity_sampling(&cubic(), 1000, 0));
    checks.push(check_convexity_sampling(&Nonlinearity::exp_minus_one(), 1000, 0));
    Ok((
        all_pass(&checks),
        format!(
            "M = {:.4}; w min scaled residual {:.1e}, w~ max {:.1e}; sampled violations {} + {} {}",
            est.m,
            checks[1].measured,
            checks[2].measured,
            checks[3].measured,
            checks[4].measured,
            fails(&checks)
        ),
    ))
}

const DETERMINISM_CONFIG: &str = r#"
mu = 0.1

[domain]
kind = "annulus"
inner = 1.0
outer = 2.0
dim = 3

[nonlinearity]
kind = "power"
p = 3.0

[mesh]
points = 1000
gamma = 3.0

[hardy]
mesh_points = [500, 1000]

[sweep]
parameter = "mu"
values = [0.0, 0.25, 1.0]
"#;

fn run_all(dir: &Path, cfg: &Path, threads: &str) -> Result<(), String> {
    for cmd in ["profile", "solve", "verify", "hardy", "sweep"] {
        let out = Command::new(env!("CARGO_BIN_EXE_blowup"))
            .args([cmd, "--config"])
            .arg(cfg)
            .arg("--out")
            .arg(dir)
            .args(["--threads", threads])
            .output()
            .map_err(e)?;
        if !out.status.success() {
            return Err(format!("{cmd} exited {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr)));
        }
    }
    Ok(())
}

fn determinism() -> Outcome {
    let tmp = tempfile::TempDir::new().map_err(e)?;
    let cfg = tmp.path().join("run.toml");
    fs::write(&cfg, DETERMINISM_CONFIG).map_err(e)?;
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    run_all(&a, &cfg, "4")?;
    run_all(&b, &cfg, "4")?;
    let mut names: Vec<String> = fs::read_dir(&a)
        .map_err(e)?
        .map(|d| d.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let differing: Vec<&String> = names
        .iter()
        .filter(|n| fs::read(a.join(n)).ok() != fs::read(b.join(n)).ok())
        .collect();
    Ok((
        differing.is_empty() && names.len() == 8,
        format!("{} files compared, {} differ {:?}", names.len(), differing.len(), differing),
    ))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("KO closed-form oracle", 1.0, ko_closed_form),
        ("center bound", 30.0, center_bound),
        ("asymptotic ratio", 60.0, asymptotic_ratio),
        ("existence ordering", f64::INFINITY, ordering),
        ("two-sided bounds", f64::INFINITY, two_sided),
        ("uniqueness gap", 300.0, uniqueness_gap),
        ("limsup lower bound", f64::INFINITY, limsup),
        ("Hardy constant", f64::INFINITY, hardy),
        ("convexity trick", f64::INFINITY, convexity),
        ("determinism", f64::INFINITY, determinism),
    ];
    let mut failed = 0;
    for (k, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let secs = start.elapsed().as_secs_f64();
        let (pass, detail) = match outcome {
            Ok((p, d)) => (p && secs < *budget, d),
            Err(msg) => (false, format!("error: {msg}")),
        };
        let budget = if budget.is_finite() { format!(" / {budget:.0} s") } else { String::new() };
        println!(
            "criterion {:>2} {:<22} {}  ({secs:.2} s{budget})  {detail}",
            k + 1,
            name,
            if pass { "PASS" } else { "FAIL" }
        );
        if !pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
