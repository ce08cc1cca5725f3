use blowup_core::parallel::Execution;
use blowup_core::verification::{run_suite, sweep, CheckSettings, SuiteInput, SweepPoint};
use blowup_core::{Nonlinearity, RadialDomain, SolverConfig};

fn input(mu: f64) -> SuiteInput {
    SuiteInput {
        domain: RadialDomain::ball(1.0, 3).unwrap(),
        nonlinearity: Nonlinearity::power(3.0).unwrap(),
        mu,
        mesh_points: 600,
        gamma: 3.0,
        solver: SolverConfig::default(),
        settings: CheckSettings::default(),
    }
}

#[test]
fn suite_passes_and_report_is_reproducible() {
    let inp = input(0.1);
    let a = run_suite(&inp, "abc", Execution::Parallel).unwrap();
    let b = run_suite(&inp, "abc", Execution::Sequential).unwrap();
    assert!(a.all_pass, "{:?}", a.failures().map(|c| c.summary()).collect::<Vec<_>>());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    let c = a.constants.as_ref().expect("constants for a ball");
    assert!(c.b0 > 0.0 && c.a_bar >= c.b0 && c.m >= 1.0);
    assert!((c.m - c.a_bar / c.b0).abs() <= 1e-12 * c.m);
    for check in &a.checks {
        assert_eq!(check.pass, check.comparison.holds(check.measured, check.bound, check.tolerance), "{}", check.name);
    }
}

#[test]
fn sweep_keeps_point_order() {
    let mus = [0.2, 0.0, 0.1];
    let points: Vec<SweepPoint> = mus
        .iter()
        .map(|&mu| SweepPoint {
            domain: RadialDomain::ball(1.0, 3).unwrap(),
            nonlinearity: Nonlinearity::power(3.0).unwrap(),
            mu,
        })
        .collect();
    let settings = CheckSettings::default();
    let rows = sweep(&points, 400, 3.0, &SolverConfig::default(), &settings, Execution::Parallel).unwrap();
    assert_eq!(rows.len(), 3);
    // larger μ gives a larger center value, so c1 orders with μ
    assert!(rows[1].c1 < rows[2].c1 && rows[2].c1 < rows[0].c1);
    for r in &rows {
        assert!(r.gap < settings.gap_tolerance, "{r:?}");
    }
}
