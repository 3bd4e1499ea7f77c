//! Numerical laboratory for the Bonnesen-type strengthening of Pu's systolic
//! inequality on the real projective plane.
//!
//! The crate works with centrally symmetric convex surfaces in R³ (the
//! orientable double cover of a positively curved RP²) and computes the
//! quantities entering the inequality
//!
//! ```text
//! area / sys² − 2/π  ≥  λ((R − r) / sys)
//! ```
//!
//! together with the integral-geometric machinery on the round sphere
//! (great-circle averaging, Hölder chain, Green potentials, variance
//! remainder) and parametric sweeps estimating the remainder function λ.
//!
//! Module map:
//!
//! * [`geom`]: symmetric convex meshes, hulls, refinement, planar shadows and
//!   planar Bonnesen inequalities.
//! * [`radii`]: circumradius, inradius, John ellipsoid and sandwich checks.
//! * [`geodesic`]: Steiner-point geodesic graphs, systole, systolic loop and
//!   the per-body [`geodesic::PuReport`].
//! * [`conformal`]: conformal metrics on the round sphere.
//! * [`experiments`]: family sweeps, envelope estimation, collapse study.

pub mod conformal;
pub mod error;
pub mod experiments;
pub mod geodesic;
pub mod geom;
mod par;
pub mod radii;
pub mod tolerances;

pub use error::{Error, Result};

/// 3-vector used for all points and directions.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Crate version embedded into every serialized report.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema version for JSON reports.
pub const SCHEMA: u32 = 1;
