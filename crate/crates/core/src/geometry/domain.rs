use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default outer truncation of an exterior ball, in units of its radius.
pub const EXTERIOR_TRUNCATION_FACTOR: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DomainKind {
    Ball { radius: f64 },
    /// `|x| > radius`, truncated at `outer` for computation.
    ExteriorBall { radius: f64, outer: f64 },
    Annulus { inner: f64, outer: f64 },
    Interval { left: f64, right: f64 },
}

/// What happens at one end of the radial coordinate range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryKind {
    /// Part of `∂Ω`: large solutions blow up here.
    BlowUp,
    /// Center of a ball, `u'(0) = 0`.
    Symmetry,
    /// Artificial outer radius of an exterior ball.
    FarField,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadialDomain {
    pub kind: DomainKind,
    pub dim: usize,
}

impl RadialDomain {
    pub fn new(kind: DomainKind, dim: usize) -> Result<Self> {
        let dom = Self { kind, dim };
        dom.validate()?;
        Ok(dom)
    }

    pub fn ball(radius: f64, dim: usize) -> Result<Self> {
        Self::new(DomainKind::Ball { radius }, dim)
    }

    pub fn exterior_ball(radius: f64, dim: usize) -> Result<Self> {
        Self::new(
            DomainKind::ExteriorBall {
                radius,
                outer: EXTERIOR_TRUNCATION_FACTOR * radius,
            },
            dim,
        )
    }

    pub fn annulus(inner: f64, outer: f64, dim: usize) -> Result<Self> {
        Self::new(DomainKind::Annulus { inner, outer }, dim)
    }

    /// The interval `(0, length)`; always one-dimensional.
    pub fn interval(length: f64) -> Result<Self> {
        Self::new(DomainKind::Interval { left: 0.0, right: length }, 1)
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParameter(msg));
        if self.dim == 0 {
            return bad("dimension must be at least 1".into());
        }
        let finite = |x: f64| x.is_finite();
        match self.kind {
            DomainKind::Ball { radius } if !(radius > 0.0 && finite(radius)) => bad(format!("ball radius {radius}")),
            DomainKind::ExteriorBall { radius, outer } if !(radius > 0.0 && outer > radius && finite(outer)) => {
                bad(format!("exterior ball radius {radius}, truncation {outer}"))
            }
            DomainKind::Annulus { inner, outer } if !(inner > 0.0 && outer > inner && finite(outer)) => {
                bad(format!("annulus radii {inner}, {outer}"))
            }
            DomainKind::Interval { left, right } if !(left >= 0.0 && right > left && finite(right)) => {
                bad(format!("interval ({left}, {right})"))
            }
            DomainKind::Interval { .. } if self.dim != 1 => bad("an interval is one-dimensional".into()),
            _ => Ok(()),
        }
    }

    /// Computational range of the radial coordinate.
    pub fn extent(&self) -> (f64, f64) {
        match self.kind {
            DomainKind::Ball { radius } => (0.0, radius),
            DomainKind::ExteriorBall { radius, outer } => (radius, outer),
            DomainKind::Annulus { inner, outer } => (inner, outer),
            DomainKind::Interval { left, right } => (left, right),
        }
    }

    pub fn left_boundary(&self) -> BoundaryKind {
        match self.kind {
            DomainKind::Ball { .. } => BoundaryKind::Symmetry,
            _ => BoundaryKind::BlowUp,
        }
    }

    pub fn right_boundary(&self) -> BoundaryKind {
        match self.kind {
            DomainKind::ExteriorBall { .. } => BoundaryKind::FarField,
            _ => BoundaryKind::BlowUp,
        }
    }

    /// Whether both ends of the radial range are blow-up boundaries.
    pub fn is_two_sided(&self) -> bool {
        matches!(self.kind, DomainKind::Annulus { .. } | DomainKind::Interval { .. })
    }

    /// Length scale used for exhaustions and boundary-layer windows.
    pub fn width(&self) -> f64 {
        match self.kind {
            DomainKind::Ball { radius } => radius,
            DomainKind::ExteriorBall { radius, .. } => radius,
            DomainKind::Annulus { inner, outer } => outer - inner,
            DomainKind::Interval { left, right } => right - left,
        }
    }

    /// Largest distance to the blow-up boundary reached inside the computational range.
    pub fn max_delta(&self) -> f64 {
        match self.kind {
            DomainKind::Ball { radius } => radius,
            DomainKind::ExteriorBall { radius, outer } => outer - radius,
            DomainKind::Annulus { inner, outer } => 0.5 * (outer - inner),
            DomainKind::Interval { left, right } => 0.5 * (right - left),
        }
    }

    /// Distance `δ(r)` to the boundary; `r` must be strictly inside.
    pub fn delta_of_r(&self, r: f64) -> Result<f64> {
        let inside = match self.kind {
            DomainKind::Ball { radius } => (0.0..radius).contains(&r),
            DomainKind::ExteriorBall { radius, .. } => r > radius && r.is_finite(),
            DomainKind::Annulus { inner, outer } | DomainKind::Interval { left: inner, right: outer } => {
                r > inner && r < outer
            }
        };
        if inside {
            Ok(self.delta_unchecked(r))
        } else {
            Err(Error::Domain { what: "delta", value: r })
        }
    }

    #[inline]
    pub fn delta_unchecked(&self, r: f64) -> f64 {
        match self.kind {
            DomainKind::Ball { radius } => radius - r,
            DomainKind::ExteriorBall { radius, .. } => r - radius,
            DomainKind::Annulus { inner, outer } | DomainKind::Interval { left: inner, right: outer } => {
                (r - inner).min(outer - r)
            }
        }
    }

    /// Default exhaustion offset: a quarter of the width.
    pub fn default_rho0(&self) -> f64 {
        0.25 * self.width()
    }

    /// The subdomain `D_n` whose blow-up boundary is pulled inward by `ρ₀·2⁻ⁿ`.
    pub fn exhaustion(&self, n: u32, rho0: Option<f64>) -> Result<RadialDomain> {
        if n == 0 {
            return Err(Error::InvalidParameter("exhaustion index starts at 1".into()));
        }
        let rho0 = rho0.unwrap_or_else(|| self.default_rho0());
        if !(rho0 > 0.0) {
            return Err(Error::InvalidParameter(format!("exhaustion offset {rho0}")));
        }
        let rho = rho0 * 0.5f64.powi(n as i32);
        let too_wide = |span: f64| Err(Error::InvalidParameter(format!("offset {rho} exceeds domain width {span}")));
        let kind = match self.kind {
            DomainKind::Ball { radius } => {
                if rho >= radius {
                    return too_wide(radius);
                }
                DomainKind::Ball { radius: radius - rho }
            }
            DomainKind::ExteriorBall { radius, outer } => {
                if rho >= outer - radius {
                    return too_wide(outer - radius);
                }
                DomainKind::ExteriorBall {
                    radius: radius + rho,
                    outer,
                }
            }
            DomainKind::Annulus { inner, outer } => {
                if 2.0 * rho >= outer - inner {
                    return too_wide(outer - inner);
                }
                DomainKind::Annulus {
                    inner: inner + rho,
                    outer: outer - rho,
                }
            }
            DomainKind::Interval { left, right } => {
                if 2.0 * rho >= right - left {
                    return too_wide(right - left);
                }
                DomainKind::Interval {
                    left: left + rho,
                    right: right - rho,
                }
            }
        };
        Ok(RadialDomain { kind, dim: self.dim })
    }

    /// `other ⊂⊂ self` along the blow-up boundary components.
    pub fn compactly_contains(&self, other: &RadialDomain) -> bool {
        match (self.kind, other.kind) {
            (DomainKind::Ball { radius: a }, DomainKind::Ball { radius: b }) => b < a,
            (DomainKind::ExteriorBall { radius: a, .. }, DomainKind::ExteriorBall { radius: b, .. }) => b > a,
            (DomainKind::Annulus { inner: a0, outer: a1 }, DomainKind::Annulus { inner: b0, outer: b1 })
            | (DomainKind::Interval { left: a0, right: a1 }, DomainKind::Interval { left: b0, right: b1 }) => {
                b0 > a0 && b1 < a1
            }
            _ => false,
        }
    }

    /// Distance between the blow-up boundaries of `self` and a subdomain.
    pub fn boundary_gap(&self, sub: &RadialDomain) -> Option<f64> {
        match (self.kind, sub.kind) {
            (DomainKind::Ball { radius: a }, DomainKind::Ball { radius: b }) => Some(a - b),
            (DomainKind::ExteriorBall { radius: a, .. }, DomainKind::ExteriorBall { radius: b, .. }) => Some(b - a),
            (DomainKind::Annulus { inner: a0, outer: a1 }, DomainKind::Annulus { inner: b0, outer: b1 })
            | (DomainKind::Interval { left: a0, right: a1 }, DomainKind::Interval { left: b0, right: b1 }) => {
                Some((b0 - a0).min(a1 - b1))
            }
            _ => None,
        }
    }

    pub fn label(&self) -> String {
        match self.kind {
            DomainKind::Ball { radius } => format!("ball(R={radius}, N={})", self.dim),
            DomainKind::ExteriorBall { radius, outer } => {
                format!("exterior_ball(R={radius}, R_out={outer}, N={})", self.dim)
            }
            DomainKind::Annulus { inner, outer } => format!("annulus({inner}, {outer}, N={})", self.dim),
            DomainKind::Interval { left, right } => format!("interval({left}, {right})"),
        }
    }
}
