//! Centrally symmetric convex meshes and planar convex bodies.

pub mod bodies;
mod hull;
mod lp;
pub mod mesh;
pub mod off;
pub mod planar;
pub mod refine;

pub use bodies::Support;
pub use mesh::{build_symmetric_hull, SymmetricConvexMesh};
pub use planar::{project_shadow, BonnesenDeficits, PlanarConvexBody, PlanarRadii, ShadowReport};
