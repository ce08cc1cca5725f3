//! Quantitative checks over computed solutions.
//!
//! Every check is a [`Check`] record: a measured number, a bound, a tolerance
//! and a comparison, with `pass` computed from those four alone. Compound
//! statements (a value plus its trend under refinement, say) are split into
//! separate records so that this stays true.

mod checks;
mod constants;
mod suite;
mod sweep;

use std::collections::BTreeMap;

use serde::Serialize;

pub use checks::{
    check_asymptotic_ratio, check_center_bound, check_center_scaling, check_convexity_sampling,
    check_convexity_trick, check_gap_refinement, check_limsup_lower, check_ordering_mu, check_profile_ode,
    check_two_sided_bounds, check_uniqueness_gap, fit_two_sided, TwoSidedFit,
};
pub use constants::{estimate_constants, ConstantsEstimate, SolutionFamily};
pub use suite::{run_suite, CheckSettings, MeshStats, SuiteInput, VerificationReport, CHECK_GROUPS};
pub use sweep::{sweep, sweep_point, SweepPoint, SweepRow};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// `measured < bound + tolerance`
    Below,
    /// `measured ≤ bound + tolerance`
    AtMost,
    /// `measured ≥ bound − tolerance`
    AtLeast,
}

impl Comparison {
    /// NaN never passes.
    pub fn holds(self, measured: f64, bound: f64, tolerance: f64) -> bool {
        match self {
            Comparison::Below => measured < bound + tolerance,
            Comparison::AtMost => measured <= bound + tolerance,
            Comparison::AtLeast => measured >= bound - tolerance,
        }
    }
}

/// Closed `δ` range a quantity was measured over.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Window {
    pub delta_lo: f64,
    pub delta_hi: f64,
}

impl Window {
    pub fn new(delta_lo: f64, delta_hi: f64) -> Self {
        Self { delta_lo, delta_hi }
    }

    pub fn contains(&self, delta: f64) -> bool {
        (self.delta_lo..=self.delta_hi).contains(&delta)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement under test.
    pub statement: String,
    pub measured: f64,
    pub bound: f64,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
    pub window: Option<Window>,
    pub diagnostics: BTreeMap<String, f64>,
    pub note: Option<String>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        statement: impl Into<String>,
        measured: f64,
        bound: f64,
        tolerance: f64,
        comparison: Comparison,
    ) -> Self {
        Self {
            name: name.into(),
            statement: statement.into(),
            measured,
            bound,
            tolerance,
            comparison,
            pass: comparison.holds(measured, bound, tolerance),
            window: None,
            diagnostics: BTreeMap::new(),
            note: None,
        }
    }

    pub fn with_window(mut self, window: Window) -> Self {
        self.window = Some(window);
        self
    }

    pub fn with_diagnostic(mut self, key: impl Into<String>, value: f64) -> Self {
        self.diagnostics.insert(key.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    /// One-line summary, `PASS name: measured <op> bound ± tol`.
    pub fn summary(&self) -> String {
        let op = match self.comparison {
            Comparison::Below => "<",
            Comparison::AtMost => "<=",
            Comparison::AtLeast => ">=",
        };
        format!(
            "{} {}: {:.6e} {} {:.6e} (tol {:.1e})",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.measured,
            op,
            self.bound,
            self.tolerance
        )
    }
}
