//! Classical (high-temperature) Casimir interactions between dielectric media
//! that contain free charges.
//!
//! All results are multiplied by `beta = 1 / k_B T`, so temperature never
//! appears past [`medium_from_inputs`]. Units are Gaussian.
//!
//! Geometries:
//! - two identical half-spaces across a vacuum gap ([`planar`]),
//! - a polarizable particle in front of one half-space ([`planar`]),
//! - a ball inside a concentric spherical cavity ([`spherical`]).
//!
//! Every physical quantity has at least one independent cross-check path:
//! closed forms against linear solves, quadrature against series, and the
//! finite-difference solvers in [`bvp_oracle`].

pub mod bvp_oracle;
mod dd;
mod error;
mod medium;
pub mod planar;
pub mod quadrature;
mod scaled;
pub mod special_fn;
pub mod spherical;

pub use error::{Error, Result};
pub use medium::{
    medium_from_inputs, Medium, MediumInputs, PlanarSetup, SphericalSetup, TransverseMode,
};
pub use scaled::ExpScaled;

/// Default relative tolerance used by every integral and series.
pub const DEFAULT_TOL: f64 = 1e-10;
