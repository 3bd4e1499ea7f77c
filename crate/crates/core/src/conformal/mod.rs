//! Conformal metrics `f² g₀` on the round sphere: Santaló's formula, the
//! Hölder chain proof of Pu's inequality, Green-potential cone metrics and
//! the variance remainder.
//!
//! Conventions: `f = s·e^u`, so the area form is `e^{2u}` times the round
//! one, and `G(x, y) = −(1/2π)·log(|x − y|/2)`. An atom of mass `a` is then a
//! cone point of angle `2π − a`.

pub mod grid;
pub mod harmonics;
pub mod metric;
pub mod santalo;
pub mod systole;

pub use grid::SphericalGrid;
pub use metric::{green_kernel, green_potential, ConformalMetric, Harmonic, RadonMassSpec};
pub use santalo::{holder_chain, santalo_sides, CircleRecord, GreatCircleSpace, HolderChain, SantaloSides};
pub use systole::{
    conformal_area, conformal_systole, normalized_variance, variance_remainder, ConformalSystole, SphereGraph,
    VarianceReport,
};
