//! The absorption term `f` and everything derived from it.
//!
//! Two families are supported: powers `f(t) = t^p` with `p > 1`, and
//! `f(t) = e^t − 1`. Both are convex with `f(0) = 0`, so the slope
//! `h(t) = f(t)/t` is non-decreasing and tends to infinity.

mod conditions;
mod profile;

pub use conditions::{
    c2_from_c1, check_c1, check_con2, check_con2_0, check_con3, check_ko, ko_tail_converges, C1Estimate,
    Con3Estimate, GrowthSearch, KoStatus,
};
pub use profile::{KOProfile, TailModel};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NonlinearityKind {
    Power { p: f64 },
    ExpMinusOne,
}

/// Which derived quantities use a closed form instead of the numerical route.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClosedForms {
    pub primitive: bool,
    pub psi: bool,
    pub h_inverse: bool,
}

impl Default for ClosedForms {
    fn default() -> Self {
        Self {
            primitive: true,
            psi: false,
            h_inverse: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nonlinearity {
    kind: NonlinearityKind,
    closed_forms: ClosedForms,
}

/// Relative tolerance of the bisection behind [`Nonlinearity::h_inv`].
pub const H_INV_RTOL: f64 = 1e-12;

impl Nonlinearity {
    pub fn power(p: f64) -> Result<Self> {
        if !(p.is_finite() && p > 1.0) {
            return Err(Error::InvalidParameter(format!("power exponent must exceed 1, got {p}")));
        }
        Ok(Self {
            kind: NonlinearityKind::Power { p },
            closed_forms: ClosedForms::default(),
        })
    }

    pub fn exp_minus_one() -> Self {
        Self {
            kind: NonlinearityKind::ExpMinusOne,
            closed_forms: ClosedForms::default(),
        }
    }

    pub fn from_kind(kind: NonlinearityKind) -> Result<Self> {
        match kind {
            NonlinearityKind::Power { p } => Self::power(p),
            NonlinearityKind::ExpMinusOne => Ok(Self::exp_minus_one()),
        }
    }

    /// Switches closed-form evaluation of `ψ` and `h⁻¹` on or off (powers only).
    pub fn with_closed_forms(mut self, closed_forms: ClosedForms) -> Self {
        self.closed_forms = closed_forms;
        self
    }

    pub fn kind(&self) -> NonlinearityKind {
        self.kind
    }

    pub fn closed_forms(&self) -> ClosedForms {
        self.closed_forms
    }

    /// Exponent `p` for powers, `None` for `e^t − 1`.
    pub fn exponent(&self) -> Option<f64> {
        match self.kind {
            NonlinearityKind::Power { p } => Some(p),
            NonlinearityKind::ExpMinusOne => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            NonlinearityKind::Power { p } => format!("power(p={p})"),
            NonlinearityKind::ExpMinusOne => "exp_minus_one".to_string(),
        }
    }

    fn check_nonneg(what: &'static str, t: f64) -> Result<()> {
        if t >= 0.0 && !t.is_nan() {
            Ok(())
        } else {
            Err(Error::Domain { what, value: t })
        }
    }

    fn check_pos(what: &'static str, t: f64) -> Result<()> {
        if t > 0.0 {
            Ok(())
        } else {
            Err(Error::Domain { what, value: t })
        }
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        Self::check_nonneg("f", t)?;
        Ok(self.f_raw(t))
    }

    /// `f(t)` without the domain check; callers guarantee `t ≥ 0`.
    #[inline]
    pub fn f_raw(&self, t: f64) -> f64 {
        match self.kind {
            NonlinearityKind::Power { p } => t.powf(p),
            NonlinearityKind::ExpMinusOne => t.exp_m1(),
        }
    }

    pub fn df(&self, t: f64) -> Result<f64> {
        Self::check_nonneg("f'", t)?;
        Ok(self.df_raw(t))
    }

    #[inline]
    pub fn df_raw(&self, t: f64) -> f64 {
        match self.kind {
            NonlinearityKind::Power { p } => p * t.powf(p - 1.0),
            NonlinearityKind::ExpMinusOne => t.exp(),
        }
    }

    /// Primitive `F(t) = ∫₀ᵗ f`.
    pub fn primitive(&self, t: f64) -> Result<f64> {
        Self::check_nonneg("F", t)?;
        Ok(self.primitive_raw(t))
    }

    pub(crate) fn primitive_raw(&self, t: f64) -> f64 {
        match self.kind {
            NonlinearityKind::Power { p } => t.powf(p + 1.0) / (p + 1.0),
            NonlinearityKind::ExpMinusOne => exp_minus_linear(t),
        }
    }

    /// Slope `h(t) = f(t)/t`, `t > 0`.
    pub fn h(&self, t: f64) -> Result<f64> {
        Self::check_pos("h", t)?;
        Ok(self.h_raw(t))
    }

    #[inline]
    pub fn h_raw(&self, t: f64) -> f64 {
        match self.kind {
            NonlinearityKind::Power { p } => t.powf(p - 1.0),
            NonlinearityKind::ExpMinusOne => t.exp_m1() / t,
        }
    }

    /// `ln h(t)`, finite even where `h` itself overflows.
    pub fn log_h(&self, t: f64) -> Result<f64> {
        Self::check_pos("log h", t)?;
        Ok(match self.kind {
            NonlinearityKind::Power { p } => (p - 1.0) * t.ln(),
            NonlinearityKind::ExpMinusOne => {
                if t > 30.0 {
                    t + (-(-t).exp()).ln_1p() - t.ln()
                } else {
                    (t.exp_m1() / t).ln()
                }
            }
        })
    }

    /// `lim_{t→0⁺} h(t)`; `h⁻¹(y)` exists exactly for `y` at or above this value.
    pub fn h_infimum(&self) -> f64 {
        match self.kind {
            NonlinearityKind::Power { .. } => 0.0,
            NonlinearityKind::ExpMinusOne => 1.0,
        }
    }

    /// Monotone inverse of `h` by bracketing bisection.
    pub fn h_inv(&self, y: f64) -> Result<f64> {
        if !(y > 0.0) || !y.is_finite() {
            return Err(Error::Domain { what: "h^-1", value: y });
        }
        let inf = self.h_infimum();
        if y < inf {
            return Err(Error::NoSolution(format!("h(t) = {y} has no solution: inf h = {inf}")));
        }
        if let (NonlinearityKind::Power { p }, true) = (self.kind, self.closed_forms.h_inverse) {
            return Ok(y.powf(1.0 / (p - 1.0)));
        }
        let target = y.ln();
        let g = |t: f64| self.log_h(t).expect("positive argument");
        let mut hi = 1.0f64;
        while g(hi) < target {
            hi *= 2.0;
        }
        let mut lo = 0.0f64;
        if g(hi) > target {
            lo = hi * 0.5;
            while lo > 0.0 && g(lo) > target {
                hi = lo;
                lo *= 0.5;
                if lo < 1e-300 {
                    lo = 0.0;
                }
            }
        }
        for _ in 0..2000 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let v = g(mid);
            if (v - target).abs() <= 0.1 * H_INV_RTOL {
                return Ok(mid);
            }
            if v < target {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo <= H_INV_RTOL * hi {
                break;
            }
        }
        Ok(0.5 * (lo + hi))
    }

    /// `φ̃(δ) = h⁻¹(δ⁻²)`.
    pub fn tilde_phi(&self, delta: f64) -> Result<f64> {
        Self::check_pos("tilde phi", delta)?;
        self.h_inv(delta.powi(-2))
    }

    /// Keller–Osserman integrand `(2F(s))^{-1/2}`.
    #[inline]
    pub fn ko_integrand(&self, s: f64) -> f64 {
        match self.kind {
            NonlinearityKind::Power { p } => ((p + 1.0) / 2.0).sqrt() * s.powf(-(p + 1.0) / 2.0),
            NonlinearityKind::ExpMinusOne => {
                if s > 40.0 {
                    (-0.5 * s).exp() / (2.0 * (1.0 - (1.0 + s) * (-s).exp())).sqrt()
                } else {
                    1.0 / (2.0 * exp_minus_linear(s)).sqrt()
                }
            }
        }
    }
}

/// `e^t − t − 1` without cancellation for small `t`.
pub(crate) fn exp_minus_linear(t: f64) -> f64 {
    if t.abs() < 1.0 {
        let mut term = t * t / 2.0;
        let mut sum = term;
        let mut k = 2.0;
        while term.abs() > 1e-18 * sum.abs() {
            k += 1.0;
            term *= t / k;
            sum += term;
        }
        sum
    } else {
        t.exp_m1() - t
    }
}
