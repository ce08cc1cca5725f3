//! Run configuration, read from a single TOML file.

use std::path::{Path, PathBuf};

use blowup_core::geometry::{DomainKind, EXTERIOR_TRUNCATION_FACTOR};
use blowup_core::verification::CheckSettings;
use blowup_core::{Nonlinearity, RadialDomain, SolverConfig};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Ball {
        radius: f64,
        dim: usize,
    },
    ExteriorBall {
        radius: f64,
        dim: usize,
        /// Computational truncation radius; defaults to 20·radius.
        outer: Option<f64>,
    },
    Annulus {
        inner: f64,
        outer: f64,
        dim: usize,
    },
    Interval {
        length: f64,
    },
}

impl DomainSpec {
    pub fn build(&self) -> blowup_core::Result<RadialDomain> {
        match *self {
            DomainSpec::Ball { radius, dim } => RadialDomain::ball(radius, dim),
            DomainSpec::ExteriorBall { radius, dim, outer } => RadialDomain::new(
                DomainKind::ExteriorBall {
                    radius,
                    outer: outer.unwrap_or(EXTERIOR_TRUNCATION_FACTOR * radius),
                },
                dim,
            ),
            DomainSpec::Annulus { inner, outer, dim } => RadialDomain::annulus(inner, outer, dim),
            DomainSpec::Interval { length } => RadialDomain::interval(length),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NonlinearitySpec {
    Power { p: f64 },
    ExpMinusOne,
}

impl NonlinearitySpec {
    pub fn build(&self) -> blowup_core::Result<Nonlinearity> {
        match *self {
            NonlinearitySpec::Power { p } => Nonlinearity::power(p),
            NonlinearitySpec::ExpMinusOne => Ok(Nonlinearity::exp_minus_one()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MeshSpec {
    pub points: usize,
    pub gamma: f64,
}

impl Default for MeshSpec {
    fn default() -> Self {
        Self {
            points: 4000,
            gamma: 3.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Minimal,
    Maximal,
    MuZero,
    Truncated,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SolveSpec {
    pub role: Role,
    /// Boundary value for `role = "truncated"`.
    pub k: Option<f64>,
}

impl Default for SolveSpec {
    fn default() -> Self {
        Self {
            role: Role::Minimal,
            k: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ProfileSpec {
    pub delta_min: f64,
    pub delta_max: f64,
    pub per_decade: usize,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        Self {
            delta_min: 1e-6,
            delta_max: 1e-1,
            per_decade: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardySpec {
    pub mesh_points: Vec<usize>,
}

impl Default for HardySpec {
    fn default() -> Self {
        Self {
            mesh_points: vec![1000, 2000, 4000, 8000],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Mu,
    P,
    Radius,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSpec {
    pub directory: Option<PathBuf>,
    pub formats: Vec<Format>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self {
            directory: None,
            formats: vec![Format::Csv, Format::Json],
        }
    }
}

impl OutputSpec {
    pub fn wants(&self, f: Format) -> bool {
        self.formats.contains(&f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub mu: f64,
    pub domain: DomainSpec,
    pub nonlinearity: NonlinearitySpec,
    #[serde(default)]
    pub mesh: MeshSpec,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub solve: SolveSpec,
    #[serde(default)]
    pub checks: CheckSettings,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default)]
    pub hardy: HardySpec,
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub output: OutputSpec,
}

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<blowup_core::Error> for ConfigError {
    fn from(e: blowup_core::Error) -> Self {
        ConfigError(e.to_string())
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| ConfigError(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|e| ConfigError(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError(m));
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be a finite non-negative number, got {}", self.mu));
        }
        self.domain.build()?;
        self.nonlinearity.build()?;
        self.solver.validate()?;
        self.checks.validate()?;
        if self.mesh.points < 100 || !(1.0..=4.0).contains(&self.mesh.gamma) {
            return bad("mesh needs points ≥ 100 and gamma in [1, 4]".into());
        }
        let ProfileSpec {
            delta_min,
            delta_max,
            per_decade,
        } = self.profile;
        if !(delta_min > 0.0 && delta_max > delta_min && per_decade > 0) {
            return bad("profile grid needs 0 < delta_min < delta_max and per_decade > 0".into());
        }
        if self.hardy.mesh_points.is_empty() || self.hardy.mesh_points.iter().any(|&n| n < 50) {
            return bad("hardy.mesh_points must be a non-empty list of sizes ≥ 50".into());
        }
        if self.solve.role == Role::Truncated && !self.solve.k.is_some_and(|k| k > 0.0) {
            return bad("role = \"truncated\" needs a positive k".into());
        }
        if let Some(s) = &self.sweep {
            if s.values.is_empty() {
                return bad("sweep.values is empty".into());
            }
            match s.parameter {
                SweepParameter::P if !matches!(self.nonlinearity, NonlinearitySpec::Power { .. }) => {
                    return bad("a p sweep needs a power nonlinearity".into())
                }
                SweepParameter::Radius if !matches!(self.domain, DomainSpec::Ball { .. } | DomainSpec::ExteriorBall { .. }) => {
                    return bad("a radius sweep needs a ball or exterior ball".into())
                }
                _ => {}
            }
        }
        if self.output.formats.is_empty() {
            return bad("output.formats is empty".into());
        }
        Ok(())
    }

    /// SHA-256 over the canonical JSON form, so comments and key order in
    /// the file do not matter.
    pub fn fingerprint(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serialises");
        hex::encode(Sha256::digest(canonical))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
mu = 0.1
[domain]
kind = "ball"
radius = 1.0
dim = 3
[nonlinearity]
kind = "power"
p = 3.0
"#;

    #[test]
    fn parses_with_defaults() {
        let cfg = RunConfig::parse(MINIMAL).unwrap();
        assert_eq!(cfg.mesh, MeshSpec::default());
        assert_eq!(cfg.domain.build().unwrap(), RadialDomain::ball(1.0, 3).unwrap());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        for extra in ["colour = 1\n", "[mesh]\npoints = 500\nfoo = 2\n", "[solver]\nnewton_toll = 1e-9\n"] {
            let text = format!("{extra}{MINIMAL}");
            let text = if extra.starts_with('[') { format!("{MINIMAL}{extra}") } else { text };
            assert!(RunConfig::parse(&text).is_err(), "{text}");
        }
        let text = MINIMAL.replace("dim = 3", "dim = 3\nwidth = 2");
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn invalid_values_are_rejected() {
        assert!(RunConfig::parse(&MINIMAL.replace("p = 3.0", "p = 0.5")).is_err());
        assert!(RunConfig::parse(&MINIMAL.replace("mu = 0.1", "mu = -1")).is_err());
        assert!(RunConfig::parse(&MINIMAL.replace("radius = 1.0", "radius = 0.0")).is_err());
        assert!(RunConfig::parse(&format!("{MINIMAL}[sweep]\nparameter = \"p\"\nvalues = []\n")).is_err());
    }

    #[test]
    fn fingerprint_ignores_formatting() {
        let a = RunConfig::parse(MINIMAL).unwrap();
        let b = RunConfig::parse(&format!("# comment\n{}", MINIMAL.replace("radius = 1.0", "radius = 1.00"))).unwrap();
        assert_eq!(a.fingerprint(), b.fingerprint());
        let c = RunConfig::parse(&MINIMAL.replace("mu = 0.1", "mu = 0.2")).unwrap();
        assert_ne!(a.fingerprint(), c.fingerprint());
    }
}
