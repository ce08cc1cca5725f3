//! Keller–Osserman transform `ψ(t) = ∫_t^∞ (2F(s))^{-1/2} ds` and its inverse `φ`.
//!
//! `φ` is the one-dimensional blow-up profile: it solves `φ'' = f(φ)` on
//! `(0, ∞)` with `φ(0⁺) = ∞`, and every large solution of the absorption
//! equation behaves like `φ(δ)` at the boundary of a smooth domain.

use super::{Nonlinearity, NonlinearityKind};
use crate::error::{Error, Result};
use crate::parallel::{self, Execution};
use crate::quadrature;

/// Relative accuracy requested from each quadrature segment of `ψ`.
const PSI_QUAD_RTOL: f64 = 1e-13;
/// Integrand ratio defining the split point `s*`.
const SPLIT_RATIO: f64 = 1e-3;
/// The exponential tail is integrated until its bound drops below this fraction of the total.
const TAIL_FRACTION: f64 = 1e-12;

impl Nonlinearity {
    /// `ψ(t)` by adaptive quadrature up to a split point plus a tail model.
    pub fn psi(&self, t: f64) -> Result<f64> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain { what: "psi", value: t });
        }
        match self.kind {
            NonlinearityKind::Power { p } => {
                if self.closed_forms.psi {
                    return Ok((2.0 * (p + 1.0)).sqrt() / (p - 1.0) * t.powf(-(p - 1.0) / 2.0));
                }
                // integrand ∝ s^{-(p+1)/2}: drops by SPLIT_RATIO at s* = t·SPLIT_RATIO^{-2/(p+1)}
                let split = t * SPLIT_RATIO.powf(-2.0 / (p + 1.0));
                let head = self.log_quad(t, split);
                let coef = ((p + 1.0) / 2.0).sqrt();
                let tail = coef * 2.0 / (p - 1.0) * split.powf(-(p - 1.0) / 2.0);
                Ok(head + tail)
            }
            NonlinearityKind::ExpMinusOne => {
                let g0 = self.ko_integrand(t);
                let mut split = t;
                while self.ko_integrand(split) > SPLIT_RATIO * g0 {
                    split = (2.0 * split).max(split + 1.0);
                }
                let mut total = self.log_quad(t, split);
                // beyond s*: integrand ≤ √2 e^{-s/2}, whose tail integral is 2√2 e^{-s/2}
                let mut a = split;
                while 2.0 * std::f64::consts::SQRT_2 * (-0.5 * a).exp() > TAIL_FRACTION * total {
                    let b = a + 10.0;
                    total += quadrature::integrate(|s| self.ko_integrand(s), a, b, 0.0, PSI_QUAD_RTOL).value;
                    a = b;
                }
                // leading-order remainder, integrand ≈ e^{-s/2}/√2
                total += std::f64::consts::SQRT_2 * (-0.5 * a).exp();
                Ok(total)
            }
        }
    }

    /// `∫_a^b g(s) ds` in the variable `x = ln s`.
    fn log_quad(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        quadrature::integrate(
            |x| {
                let s = x.exp();
                s * self.ko_integrand(s)
            },
            a.ln(),
            b.ln(),
            0.0,
            PSI_QUAD_RTOL,
        )
        .value
    }
}

/// Local power-law model `ψ(t) ≈ coefficient · t^{-exponent}` past the end of the table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailModel {
    pub exponent: f64,
    pub coefficient: f64,
}

/// Tabulation of `ψ` on a geometric grid, used to invert it quickly.
#[derive(Debug, Clone)]
pub struct KOProfile {
    nl: Nonlinearity,
    t_grid: Vec<f64>,
    psi_values: Vec<f64>,
    tail: TailModel,
    inversion_tol: f64,
}

/// Largest argument for which `φ` is sought for `e^t − 1`; beyond it `e^t` overflows.
const EXP_T_CEILING: f64 = 700.0;

impl KOProfile {
    pub fn new(nl: Nonlinearity) -> Result<Self> {
        Self::with_execution(nl, Execution::Sequential)
    }

    pub fn with_execution(nl: Nonlinearity, exec: Execution) -> Result<Self> {
        let (t_min, t_max): (f64, f64) = match nl.kind() {
            NonlinearityKind::Power { .. } => (1e-6, 1e12),
            NonlinearityKind::ExpMinusOne => (1e-6, EXP_T_CEILING),
        };
        let per_decade = 16.0;
        let n = ((t_max / t_min).log10() * per_decade).ceil() as usize;
        let ratio = (t_max / t_min).powf(1.0 / n as f64);
        let t_grid: Vec<f64> = (0..=n).map(|i| t_min * ratio.powi(i as i32)).collect();
        let psi_values = parallel::map(&t_grid, exec, |&t| nl.psi(t))
            .into_iter()
            .collect::<Result<Vec<_>>>()?;
        let m = t_grid.len();
        let exponent = -(psi_values[m - 1] / psi_values[m - 2]).ln() / (t_grid[m - 1] / t_grid[m - 2]).ln();
        let coefficient = psi_values[m - 1] * t_grid[m - 1].powf(exponent);
        Ok(Self {
            nl,
            t_grid,
            psi_values,
            tail: TailModel { exponent, coefficient },
            inversion_tol: 1e-14,
        })
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    pub fn t_grid(&self) -> &[f64] {
        &self.t_grid
    }

    pub fn psi_values(&self) -> &[f64] {
        &self.psi_values
    }

    pub fn tail_model(&self) -> TailModel {
        self.tail
    }

    pub fn inversion_tolerance(&self) -> f64 {
        self.inversion_tol
    }

    /// Largest `δ` for which `φ(δ)` is available.
    pub fn delta_max(&self) -> f64 {
        self.psi_values[0]
    }

    pub fn psi(&self, t: f64) -> Result<f64> {
        self.nl.psi(t)
    }

    /// `φ(δ)`: the unique `t` with `ψ(t) = δ`.
    pub fn phi(&self, delta: f64) -> Result<f64> {
        let dmax = self.delta_max();
        if !(delta > 0.0) || delta > dmax || !delta.is_finite() {
            return Err(Error::Range {
                what: "phi",
                value: delta,
                lo: 0.0,
                hi: dmax,
            });
        }
        if delta == dmax {
            return Ok(self.t_grid[0]);
        }
        let m = self.t_grid.len();
        let (mut lo, mut hi);
        let guess;
        if delta >= self.psi_values[m - 1] {
            // psi_values decreasing: first index with ψ ≤ δ
            let k = self.psi_values.partition_point(|&v| v > delta);
            lo = self.t_grid[k - 1];
            hi = self.t_grid[k];
            let (p0, p1) = (self.psi_values[k - 1].ln(), self.psi_values[k].ln());
            let w = (delta.ln() - p0) / (p1 - p0);
            guess = (lo.ln() + w * (hi.ln() - lo.ln())).exp();
        } else {
            let TailModel { exponent, coefficient } = self.tail;
            let g = (coefficient / delta).powf(1.0 / exponent);
            lo = self.t_grid[m - 1];
            hi = g.max(lo) * 2.0;
            while self.nl.psi(hi)? > delta {
                lo = hi;
                hi *= 2.0;
                if self.nl.exponent().is_none() && hi > 2.0 * EXP_T_CEILING {
                    return Err(Error::Range {
                        what: "phi",
                        value: delta,
                        lo: self.nl.psi(2.0 * EXP_T_CEILING)?,
                        hi: dmax,
                    });
                }
            }
            guess = g.clamp(lo, hi);
        }
        self.refine(delta, lo, hi, guess)
    }

    /// Safeguarded Newton on `ln ψ(e^x) = ln δ` inside the bracket `[lo, hi]`.
    fn refine(&self, delta: f64, lo: f64, hi: f64, guess: f64) -> Result<f64> {
        let target = delta.ln();
        let (mut xl, mut xh) = (lo.ln(), hi.ln());
        let mut x = guess.ln().clamp(xl, xh);
        for _ in 0..200 {
            let t = x.exp();
            let psi = self.nl.psi(t)?;
            let r = psi.ln() - target;
            if r == 0.0 {
                return Ok(t);
            }
            if r > 0.0 {
                xl = x;
            } else {
                xh = x;
            }
            // d ln ψ / dx = −t g(t) / ψ(t)
            let slope = -t * self.nl.ko_integrand(t) / psi;
            let mut next = x - r / slope;
            if !(next > xl && next < xh) || !next.is_finite() {
                next = 0.5 * (xl + xh);
            }
            let step = (next - x).abs();
            x = next;
            if step <= self.inversion_tol || xh - xl <= self.inversion_tol {
                return Ok(x.exp());
            }
        }
        Ok(x.exp())
    }

    /// `φ̃(δ) = h⁻¹(δ⁻²)`.
    pub fn tilde_phi(&self, delta: f64) -> Result<f64> {
        self.nl.tilde_phi(delta)
    }
}
