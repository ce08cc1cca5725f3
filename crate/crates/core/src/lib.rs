//! Large (boundary blow-up) solutions of
//!
//! ```text
//! -Δu - μ δ(x)^{-2} u + f(u) = 0
//! ```
//!
//! on radially symmetric domains, where `δ` is the distance to the boundary.
//!
//! * [`nonlinearity`]: the absorption term `f`, the Keller–Osserman transform
//!   `ψ` with its inverse `φ`, and the Hardy-scaled profile `φ̃ = h⁻¹(δ⁻²)`.
//! * [`geometry`]: radial domains, exhaustions, the discrete Hardy constant.
//! * [`solver`]: graded meshes and damped Newton for the radial problem.
//! * [`verification`]: quantitative checks over computed solutions.

// `!(x > 0.0)` guards are meant to reject NaN too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod geometry;
pub mod nonlinearity;
pub mod parallel;
pub mod quadrature;
pub mod solver;
pub mod tridiag;
pub mod verification;

pub use error::{Error, Result};

pub use geometry::{DomainKind, RadialDomain};
pub use nonlinearity::{KOProfile, Nonlinearity};
pub use solver::{Mesh, RadialSolution, SolutionRole, SolverConfig};

