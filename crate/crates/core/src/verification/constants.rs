use serde::Serialize;

use super::Window;
use crate::error::{Error, Result};
use crate::nonlinearity::{c2_from_c1, check_c1, check_con3, KOProfile};
use crate::solver::RadialSolution;

/// Large solutions on one mesh together with the `μ = 0` solution there.
#[derive(Debug, Clone)]
pub struct SolutionFamily {
    pub reference: RadialSolution,
    pub members: Vec<RadialSolution>,
}

/// Fitted values of the existential constants.
///
/// Ratios against `φ̃` and `U_f` are taken over the boundary layer
/// `δ < layer_fraction·width`, where the bounds are asserted; `a0` is taken
/// over every resolved node. `m = a_bar / b0` exactly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConstantsEstimate {
    /// `sup ψ(2s)·h(s)^{1/2}`
    pub ko_c1: f64,
    /// `N(2 + C1)²`
    pub center_c2: f64,
    /// `sup h(φ(δ))·δ²`
    pub profile_a: f64,
    pub a1: f64,
    /// `sup h(u/a1)·δ²`
    pub a0: f64,
    /// `sup u/φ̃`
    pub a_bar: f64,
    /// `inf u/φ̃`
    pub b0: f64,
    /// `(b0/C)·inf φ/U_f` with `C = sup φ/φ̃`
    pub b_bar: f64,
    /// `inf u/U_f`, for comparison with `b_bar`.
    pub b_bar_direct: f64,
    pub m: f64,
    /// `max u/φ̃`, same as `a_bar` restricted to the layer.
    pub c1: f64,
    /// `min u/φ`
    pub c2: f64,
    pub layer: Window,
    pub a0_window: Window,
}

struct Extremes {
    lo: f64,
    hi: f64,
}

impl Extremes {
    fn new() -> Self {
        Self {
            lo: f64::INFINITY,
            hi: f64::NEG_INFINITY,
        }
    }

    fn push(&mut self, v: f64) {
        self.lo = self.lo.min(v);
        self.hi = self.hi.max(v);
    }
}

pub fn estimate_constants(families: &[SolutionFamily], profile: &KOProfile, layer_fraction: f64) -> Result<ConstantsEstimate> {
    if families.iter().all(|f| f.members.is_empty()) {
        return Err(Error::Usage("estimate_constants needs at least one solution".into()));
    }
    let nl = profile.nonlinearity();
    let ko_c1 = check_c1(nl, 1.0)?.c1;
    let dim = families[0].reference.mesh.domain.dim;

    let (mut over_tilde, mut over_phi, mut over_ref, mut slope) =
        (Extremes::new(), Extremes::new(), Extremes::new(), Extremes::new());
    let (mut layer, mut all) = (Extremes::new(), Extremes::new());
    let mut b_bar = f64::INFINITY;
    for fam in families {
        let reference = &fam.reference;
        if reference.mu != 0.0 {
            return Err(Error::Usage("family reference must have μ = 0".into()));
        }
        let cut = layer_fraction * reference.mesh.domain.width();
        let (mut phi_over_tilde, mut phi_over_ref) = (Extremes::new(), Extremes::new());
        for i in reference.resolved.clone().filter(|&i| reference.mesh.delta[i] < cut) {
            let d = reference.mesh.delta[i];
            let phi = profile.phi(d)?;
            phi_over_tilde.push(phi / profile.tilde_phi(d)?);
            phi_over_ref.push(phi / reference.values[i]);
        }
        let mut fam_b0 = f64::INFINITY;
        for sol in &fam.members {
            if sol.mesh != reference.mesh || sol.nonlinearity != *nl {
                return Err(Error::Usage("family members must share the reference mesh and f".into()));
            }
            let nodes = sol.resolved.start.max(reference.resolved.start)..sol.resolved.end.min(reference.resolved.end);
            for i in nodes {
                let d = sol.mesh.delta[i];
                let u = sol.values[i];
                slope.push(nl.h(u)? * d * d);
                all.push(d);
                if d < cut {
                    layer.push(d);
                    let r = u / profile.tilde_phi(d)?;
                    over_tilde.push(r);
                    fam_b0 = fam_b0.min(r);
                    over_phi.push(u / profile.phi(d)?);
                    over_ref.push(u / reference.values[i]);
                }
            }
        }
        if fam_b0.is_finite() {
            b_bar = b_bar.min(fam_b0 / phi_over_tilde.hi * phi_over_ref.lo);
        }
    }
    if !over_tilde.lo.is_finite() {
        return Err(Error::Mesh("no resolved node in the boundary layer".into()));
    }
    let a_bar = over_tilde.hi;
    let b0 = over_tilde.lo;
    Ok(ConstantsEstimate {
        ko_c1,
        center_c2: c2_from_c1(dim, ko_c1),
        profile_a: check_con3(profile)?.a,
        a1: 1.0,
        a0: slope.hi,
        a_bar,
        b0,
        b_bar,
        b_bar_direct: over_ref.lo,
        m: a_bar / b0,
        c1: over_tilde.hi,
        c2: over_phi.lo,
        layer: Window::new(layer.lo, layer.hi),
        a0_window: Window::new(all.lo, all.hi),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::RadialDomain;
    use crate::nonlinearity::Nonlinearity;
    use crate::solver::{build_mesh, solve_maximal_large, solve_minimal_large, solve_mu_zero_large, SolverConfig};

    #[test]
    fn cubic_ball_family() {
        let nl = Nonlinearity::power(3.0).unwrap();
        let cfg = SolverConfig::default();
        let mesh = build_mesh(&RadialDomain::ball(1.0, 3).unwrap(), 600, 3.0).unwrap();
        let reference = solve_mu_zero_large(&nl, &mesh, &cfg).unwrap();
        let members: Vec<_> = [0.0, 0.1, 0.25, 1.0]
            .iter()
            .map(|&mu| solve_minimal_large(&nl, mu, &mesh, &cfg).unwrap())
            .chain(std::iter::once(solve_maximal_large(&nl, 0.1, &mesh, &cfg).unwrap()))
            .collect();
        let fam = SolutionFamily { reference, members };
        let profile = KOProfile::new(nl).unwrap();
        let est = estimate_constants(std::slice::from_ref(&fam), &profile, 0.1).unwrap();

        assert_eq!(est.m, est.a_bar / est.b0);
        assert!((est.ko_c1 - 0.5f64.sqrt()).abs() < 1e-3, "{est:?}");
        assert!((est.profile_a - 2.0).abs() < 1e-3);
        assert!(est.b_bar > 0.0 && est.b_bar < 1.0, "{est:?}");
        assert!(est.b_bar_direct >= 1.0 - 1e-9);
        for v in [est.a0, est.a_bar, est.b0, est.c1, est.c2, est.m] {
            assert!(v > 0.0 && v.is_finite(), "{est:?}");
        }
        // M u_min dominates every member on the layer
        let min = &fam.members[1];
        let max = &fam.members[4];
        for i in min.resolved.clone() {
            assert!(max.values[i] <= est.m * min.values[i]);
        }
    }

    #[test]
    fn empty_family_is_usage_error() {
        let nl = Nonlinearity::power(3.0).unwrap();
        let mesh = build_mesh(&RadialDomain::ball(1.0, 3).unwrap(), 200, 3.0).unwrap();
        let reference = solve_mu_zero_large(&nl, &mesh, &SolverConfig::default()).unwrap();
        let fam = SolutionFamily {
            reference,
            members: vec![],
        };
        let profile = KOProfile::new(nl).unwrap();
        assert!(matches!(estimate_constants(&[fam], &profile, 0.1), Err(Error::Usage(_))));
        assert!(matches!(estimate_constants(&[], &profile, 0.1), Err(Error::Usage(_))));
    }
}
