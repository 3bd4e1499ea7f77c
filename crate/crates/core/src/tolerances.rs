//! Tolerances and discretization defaults shared by every module.
//!
//! Each constant here is also mirrored in `crates/cli/defaults.toml`; a test
//! in the CLI crate keeps the two in sync.

/// Relative hull tolerance: coplanarity and containment tests use
/// `HULL_REL_TOL × (bounding-box diagonal)`.
pub const HULL_REL_TOL: f64 = 1e-9;

/// Default relative tolerance for the John ellipsoid iteration.
pub const JOHN_EPS: f64 = 1e-6;

/// Iteration cap of the John ellipsoid iteration.
pub const JOHN_MAX_ITER: usize = 100_000;

/// Default number of Steiner points per mesh edge.
pub const STEINER: usize = 3;

/// Default refinement target: max mesh edge < sys / EDGE_FACTOR.
pub const EDGE_FACTOR: f64 = 20.0;

/// `τ_geo = GEO_EDGE_MULT × (max graph edge length)`.
pub const GEO_EDGE_MULT: f64 = 3.0;

/// Duality-gap target of the planar inradius LP, relative to R₂.
pub const PLANAR_LP_GAP: f64 = 1e-9;

/// Number of seeds used by the anchored systole search.
pub const SYSTOLE_SEEDS: usize = 16;

/// Graphs with at most this many nodes use the exhaustive systole search.
pub const EXHAUSTIVE_NODES: usize = 3_000;

/// Farthest-point iterations used for the intrinsic diameter.
pub const DIAMETER_SAMPLES: usize = 4;

/// Arc quadrature points per great circle.
pub const CIRCLE_POINTS: usize = 256;

/// Gauss–Legendre nodes in the polar direction of the default sphere grid.
pub const GRID_POLAR: usize = 48;

/// Icosphere level of the geodesic graph used for conformal systoles.
pub const CONFORMAL_GRAPH_LEVEL: u32 = 4;

/// Sample points on the inner John ellipsoid for the sandwich check.
pub const SANDWICH_SAMPLES: usize = 10_000;

/// Path-discretization tolerance of a geodesic graph.
pub fn tau_geo(max_graph_edge: f64) -> f64 {
    GEO_EDGE_MULT * max_graph_edge
}

/// Discretization budget for the normalized Pu deficit `area/sys² − 2/π`.
///
/// The graph systole overestimates the surface systole by at most `τ_geo`,
/// so the deficit can be underestimated by at most the change caused by
/// replacing `sys` with `sys − τ_geo`.
pub fn tau_pu(area: f64, sys: f64, tau_geo: f64) -> f64 {
    let lower = (sys - tau_geo).max(0.5 * sys);
    area / (lower * lower) - area / (sys * sys)
}

/// Hull tolerance for a point cloud with the given bounding-box diagonal.
pub fn tau_hull(diagonal: f64) -> f64 {
    HULL_REL_TOL * diagonal
}

/// Bins of the empirical λ envelope.
pub const ENVELOPE_BINS: usize = 16;

/// Thicknesses of the collapse study, from thick to thin.
pub const COLLAPSE_THICKNESS: [f64; 4] = [0.4, 0.2, 0.1, 0.05];
