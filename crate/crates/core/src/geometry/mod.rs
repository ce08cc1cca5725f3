//! Radially symmetric domains and the Hardy constant.

mod domain;
mod hardy;

pub use domain::{BoundaryKind, DomainKind, RadialDomain, EXTERIOR_TRUNCATION_FACTOR};
pub use hardy::{hardy_constant, hardy_mesh, hardy_refinement, HardyEstimate, HardyNode, HARDY_FLOOR_RATIO};
