//! Higher-order derivatives of rotation fields on SO(3).
//!
//! A frame `ξ ↦ Q(ξ)` given by a rotation-vector field `θ(ξ)` is pushed through
//! the Gibbs parametrization to get the spatial curvature `κ` and its
//! derivatives in closed form. From there the crate derives material and
//! co-rotational derivatives and updates the curvature under an incremental
//! rotation. [`oracle`] holds the finite-difference and brute-force checks.

pub mod corotational;
pub mod curvature;
pub mod error;
pub mod field;
pub mod jets;
pub mod oracle;
pub mod so3;
pub mod updating;

pub use error::{Error, Result};
