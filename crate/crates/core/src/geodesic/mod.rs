//! Intrinsic distances on symmetric convex surfaces.

pub mod graph;
pub mod report;
pub mod systole;

pub use graph::{DistanceField, GeodesicGraph};
pub use report::{pu_report, Check, PuChecks, PuReport};
pub use systole::{antipodal_distance, intrinsic_diameter, max_distance_to_loop, systole, systolic_loop, Systole};
