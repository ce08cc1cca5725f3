//! Finite-grid checkers for the growth conditions on `f`.
//!
//! These certify numerical consistency on doubling grids, not a proof: each
//! condition quantifies over all large arguments.

use serde::Serialize;

use super::{KOProfile, Nonlinearity};
use crate::error::Result;
use crate::quadrature;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KoStatus {
    Holds,
    Fails,
}

/// Convergence test for `∫_1^∞ g`: the dyadic block integrals `∫_{2^m}^{2^{m+1}} g`
/// must contract geometrically over the last blocks.
pub fn ko_tail_converges<G: Fn(f64) -> f64>(g: G) -> KoStatus {
    const BLOCKS: i32 = 60;
    const WINDOW: usize = 10;
    let blocks: Vec<f64> = (0..BLOCKS)
        .map(|m| {
            let a = 2f64.powi(m);
            quadrature::integrate(|x| x.exp() * g(x.exp()), a.ln(), (2.0 * a).ln(), 0.0, 1e-10).value
        })
        .collect();
    let tail = &blocks[blocks.len() - WINDOW..];
    let contracting = tail.windows(2).all(|w| w[1] == 0.0 || (w[0] > 0.0 && w[1] / w[0] <= 0.95));
    if contracting && tail.iter().all(|b| b.is_finite()) {
        KoStatus::Holds
    } else {
        KoStatus::Fails
    }
}

/// Checks that `ψ(1)` converges.
pub fn check_ko(nl: &Nonlinearity) -> KoStatus {
    ko_tail_converges(|s| nl.ko_integrand(s))
}

/// Supremum estimate of `ψ(2s)·h(s)^{1/2}` over `h(s) ≥ c0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct C1Estimate {
    pub c0: f64,
    pub c1: f64,
    pub s_start: f64,
    pub doublings: usize,
    pub holds: bool,
}

const C1_STABLE_RTOL: f64 = 1e-4;
const C1_STABLE_RUN: usize = 3;
const C1_MAX_DOUBLINGS: usize = 200;

pub fn check_c1(nl: &Nonlinearity, c0: f64) -> Result<C1Estimate> {
    let s_start = if c0 > nl.h_infimum() { nl.h_inv(c0)? } else { 1e-6 };
    let mut s = s_start;
    let mut sup = 0.0f64;
    let mut run = 0;
    let mut doublings = 0;
    let mut holds = false;
    while doublings < C1_MAX_DOUBLINGS {
        // ln-space product keeps e^s from overflowing
        let v = (nl.psi(2.0 * s)?.ln() + 0.5 * nl.log_h(s)?).exp();
        let next = sup.max(v);
        if doublings > 0 && (next - sup).abs() <= C1_STABLE_RTOL * next {
            run += 1;
        } else {
            run = 0;
        }
        sup = next;
        doublings += 1;
        if run >= C1_STABLE_RUN {
            holds = true;
            break;
        }
        s *= 2.0;
        if nl.exponent().is_none() && 2.0 * s > 1000.0 {
            // ψ(2s) underflows past here; the product is already decaying
            holds = run > 0;
            break;
        }
    }
    Ok(C1Estimate {
        c0,
        c1: sup,
        s_start,
        doublings,
        holds,
    })
}

/// Constant of the center bound `h(V_R(0)) ≤ C2 R⁻²` in dimension `n`.
pub fn c2_from_c1(dim: usize, c1: f64) -> f64 {
    dim as f64 * (2.0 + c1).powi(2)
}

/// Result of a search for `(c, t0)` in a scaling inequality for `h`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GrowthSearch {
    pub a: f64,
    pub c: Option<f64>,
    pub t0: Option<f64>,
    pub holds: bool,
}

const C_GRID_STEPS: i32 = 80;
const T0_EXPONENTS: std::ops::RangeInclusive<i32> = -20..=40;
/// Doublings spanning the test window `[t0, 10⁶·t0]`.
const TEST_DOUBLINGS: i32 = 20;
const SLACK: f64 = 1e-12;

fn search<I>(nl: &Nonlinearity, a: f64, candidates: I, holds_at: impl Fn(f64, f64) -> bool) -> GrowthSearch
where
    I: Iterator<Item = f64>,
{
    for c in candidates {
        for e in T0_EXPONENTS {
            let t0 = 2f64.powi(e);
            if (0..=TEST_DOUBLINGS).all(|j| holds_at(c, t0 * 2f64.powi(j))) {
                return GrowthSearch {
                    a,
                    c: Some(c),
                    t0: Some(t0),
                    holds: true,
                };
            }
        }
    }
    let _ = nl;
    GrowthSearch {
        a,
        c: None,
        t0: None,
        holds: false,
    }
}

/// Growth condition `a·h(t) ≤ h(c·t)` for `t > t0`, `a > 1`; returns the smallest grid `c > 1`.
pub fn check_con2(nl: &Nonlinearity, a: f64) -> Result<GrowthSearch> {
    if !(a > 1.0) {
        return Err(crate::Error::InvalidParameter(format!("con2 needs a > 1, got {a}")));
    }
    let la = a.ln();
    Ok(search(
        nl,
        a,
        (1..=C_GRID_STEPS).map(|j| 2f64.powf(j as f64 / 4.0)),
        |c, t| la + nl.log_h(t).unwrap() <= nl.log_h(c * t).unwrap() + SLACK,
    ))
}

/// Decay condition `h(c·t) ≤ a·h(t)` for `t > t0`, `0 < a < 1`; returns the largest grid `c < 1`.
pub fn check_con2_0(nl: &Nonlinearity, a: f64) -> Result<GrowthSearch> {
    if !(a > 0.0 && a < 1.0) {
        return Err(crate::Error::InvalidParameter(format!("con2.0 needs 0 < a < 1, got {a}")));
    }
    let la = a.ln();
    Ok(search(
        nl,
        a,
        (1..=C_GRID_STEPS).map(|j| 2f64.powf(-(j as f64) / 4.0)),
        |c, t| nl.log_h(c * t).unwrap() <= la + nl.log_h(t).unwrap() + SLACK,
    ))
}

/// Supremum estimate of `h(φ(δ))·δ²`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Con3Estimate {
    pub a: f64,
    pub delta_start: f64,
    pub halvings: usize,
    pub holds: bool,
}

pub fn check_con3(profile: &KOProfile) -> Result<Con3Estimate> {
    let nl = profile.nonlinearity();
    let delta_start = profile.delta_max().min(1.0);
    let mut delta = delta_start;
    let mut sup = 0.0f64;
    let mut run = 0;
    let mut halvings = 0;
    let mut holds = false;
    while halvings < C1_MAX_DOUBLINGS {
        let phi = profile.phi(delta)?;
        let v = (nl.log_h(phi)? + 2.0 * delta.ln()).exp();
        let next = sup.max(v);
        if halvings > 0 && (next - sup).abs() <= C1_STABLE_RTOL * next {
            run += 1;
        } else {
            run = 0;
        }
        sup = next;
        halvings += 1;
        if run >= C1_STABLE_RUN {
            holds = true;
            break;
        }
        delta *= 0.5;
        if delta < 1e-250 {
            break;
        }
    }
    Ok(Con3Estimate {
        a: sup,
        delta_start,
        halvings,
        holds,
    })
}
