//! Systole and variance remainder of conformal metrics on RP².
//!
//! The systole is read off a geodesic graph on an icosphere whose nodes are
//! pushed to the unit sphere. An arc `(p, q)` gets weight `θ(p, q)·f̄`, with
//! `θ` the great-circle angle and `f̄` the Simpson mean of `f` along the arc
//! (the midpoint value for cone metrics, whose factor blows up at atoms).
//! Arc lengths of the underlying graph over-estimate great-circle distances
//! by a factor `1 + δ`; `δ` is measured once on the round metric and turns
//! into the tolerance of every comparison.

use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use super::grid::SphericalGrid;
use super::metric::ConformalMetric;
use crate::geodesic::{self, GeodesicGraph};
use crate::geom::bodies::icosphere;
use crate::{Error, Result, Vec3};

/// Geodesic graph on the round sphere, calibrated against `sys = π`.
#[derive(Clone, Debug)]
pub struct SphereGraph {
    graph: GeodesicGraph,
    round_sys: f64,
    /// Worst relative overestimate of `d(x, −x) = π` over sampled nodes.
    delta: f64,
}

/// Nodes sampled for the calibration of `δ`.
const CALIBRATION_NODES: usize = 64;

fn angle(p: &Vec3, q: &Vec3) -> f64 {
    p.cross(q).norm().atan2(p.dot(q))
}

impl SphereGraph {
    pub fn new(level: u32, steiner: usize) -> Result<Self> {
        let g = GeodesicGraph::build(&icosphere(level), steiner)?;
        let positions: Vec<Vec3> = g.positions().iter().map(|p| p.normalize()).collect();
        let g = g.with_positions(positions)?;
        let g = {
            let pos = g.positions().to_vec();
            g.reweighted(|u, v, _| angle(&pos[u], &pos[v]))
        };
        let round_sys = geodesic::systole(&g)?.sys;
        let n = g.node_count();
        let samples: Vec<usize> = (0..CALIBRATION_NODES.min(n)).map(|k| k * n / CALIBRATION_NODES.min(n)).collect();
        let worst = crate::par::map(&samples, |&x| {
            geodesic::antipodal_distance(&g, x, f64::INFINITY).map_or(f64::INFINITY, |(d, _)| d)
        })
        .into_iter()
        .fold(round_sys, f64::max);
        Ok(SphereGraph { graph: g, round_sys, delta: (worst / PI - 1.0).max(0.0) })
    }

    /// Default level and Steiner count.
    pub fn standard() -> Result<Self> {
        Self::new(crate::tolerances::CONFORMAL_GRAPH_LEVEL, crate::tolerances::STEINER)
    }

    pub fn graph(&self) -> &GeodesicGraph {
        &self.graph
    }

    /// Graph systole of the round metric (`≥ π`).
    pub fn round_systole(&self) -> f64 {
        self.round_sys
    }

    /// Relative overestimate `δ`: the largest `d(x, −x)/π − 1` over a
    /// spread of sample nodes of the round graph.
    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// The graph with arcs weighted by `f`.
    pub fn weighted(&self, c: &ConformalMetric) -> GeodesicGraph {
        let pos = self.graph.positions();
        let singular = c.is_singular();
        self.graph.reweighted(|u, v, theta| {
            let (p, q) = (&pos[u], &pos[v]);
            let mid = (p + q).normalize();
            let mean = if singular {
                c.even_factor(&mid)
            } else {
                ((c.even_factor(p) + c.even_factor(q)) + 4.0 * c.even_factor(&mid)) / 6.0
            };
            let w = theta * mean;
            if w.is_finite() {
                w
            } else {
                f64::INFINITY
            }
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConformalSystole {
    /// Quotient systole estimate (an upper bound up to quadrature error).
    pub sys: f64,
    /// Calibrated lower estimate `sys/(1 + 2δ)`.
    pub sys_lower: f64,
    pub delta: f64,
    pub witness: [f64; 3],
    pub nodes: usize,
}

impl ConformalSystole {
    /// Length tolerance `2·(sys − sys_lower)` for closed curves of length `2·sys`.
    pub fn length_tolerance(&self) -> f64 {
        2.0 * (self.sys - self.sys_lower)
    }
}

pub fn conformal_systole(c: &ConformalMetric, sg: &SphereGraph) -> Result<ConformalSystole> {
    c.require_even()?;
    let g = sg.weighted(c);
    let s = geodesic::systole(&g)?;
    if !s.sys.is_finite() {
        return Err(Error::Internal("no finite antipodal path in the weighted graph".into()));
    }
    let w = g.position(s.witness);
    Ok(ConformalSystole {
        sys: s.sys,
        sys_lower: s.sys / (1.0 + 2.0 * sg.delta()),
        delta: sg.delta(),
        witness: [w.x, w.y, w.z],
        nodes: g.node_count(),
    })
}

/// `∫_{S²} f²`.
pub fn conformal_area(c: &ConformalMetric, grid: &SphericalGrid) -> f64 {
    grid.integrate(|x| c.factor(x).powi(2))
}

/// Variance of `f` for the normalized measure `w/4π`.
pub fn normalized_variance(c: &ConformalMetric, grid: &SphericalGrid) -> f64 {
    let total: f64 = grid.weights().iter().sum();
    let mean = grid.integrate(|x| c.factor(x)) / total;
    grid.integrate(|x| (c.factor(x) - mean).powi(2)) / total
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VarianceReport {
    /// Area of the quotient RP².
    pub area: f64,
    pub sys: f64,
    /// `area − (2/π) sys²`.
    pub deficit: f64,
    pub variance: f64,
    /// `2π·Var(f)`.
    pub bound: f64,
    /// `(2/π)(sys² − sys_lower²)`, the deficit lost to the graph overestimate.
    pub tau: f64,
    pub holds: bool,
}

/// Checks `area − (2/π) sys² ≥ 2π·Var(f) − τ` for an even metric.
pub fn variance_remainder(c: &ConformalMetric, grid: &SphericalGrid, sg: &SphereGraph) -> Result<VarianceReport> {
    let s = conformal_systole(c, sg)?;
    let area = 0.5 * conformal_area(c, grid);
    let deficit = area - 2.0 / PI * s.sys * s.sys;
    let variance = normalized_variance(c, grid);
    let bound = TAU * variance;
    let tau = 2.0 / PI * (s.sys * s.sys - s.sys_lower * s.sys_lower);
    Ok(VarianceReport { area, sys: s.sys, deficit, variance, bound, tau, holds: deficit >= bound - tau })
}
