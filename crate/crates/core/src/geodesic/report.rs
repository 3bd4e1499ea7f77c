//! Per-body report assembling area, systole, radii and the second-proof
//! checks.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::graph::GeodesicGraph;
use super::systole::{diameter, max_distance_to_loop, systole, systolic_loop};
use crate::geom::SymmetricConvexMesh;
use crate::radii::{Ellipsoid, RadiiReport};
use crate::tolerances::{tau_geo, tau_pu};
use crate::{Result, Vec3, SCHEMA, VERSION};

/// One inequality `lhs ≤ rhs + tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub lhs: f64,
    pub rhs: f64,
    pub tolerance: f64,
    pub holds: bool,
}

impl Check {
    pub fn le(lhs: f64, rhs: f64, tolerance: f64) -> Self {
        Check { lhs, rhs, tolerance, holds: lhs <= rhs + tolerance }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuChecks {
    /// `0 ≤ deficit + τ_pu`.
    pub pu_inequality: Check,
    /// `2·sys ≤ L` and `L ≤ 2·sys`, by construction.
    pub loop_length: Check,
    /// `2πr ≤ L + τ_geo`.
    pub inradius_loop: Check,
    /// `2R ≤ diam + τ_geo`.
    pub circumradius_diameter: Check,
    /// `diam ≤ 2D + L/2 + τ_geo`.
    pub diameter_chain: Check,
}

impl PuChecks {
    pub fn all(&self) -> [(&'static str, &Check); 5] {
        [
            ("pu_inequality", &self.pu_inequality),
            ("loop_length", &self.loop_length),
            ("inradius_loop", &self.inradius_loop),
            ("circumradius_diameter", &self.circumradius_diameter),
            ("diameter_chain", &self.diameter_chain),
        ]
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.all().into_iter().filter(|(_, c)| !c.holds).map(|(n, _)| n).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub tau_geo: f64,
    pub tau_pu: f64,
    pub tau_hull: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Discretization {
    pub mesh_vertices: usize,
    pub mesh_triangles: usize,
    pub max_mesh_edge: f64,
    pub steiner: usize,
    pub graph_nodes: usize,
    pub graph_arcs: usize,
    pub max_arc: f64,
    pub exhaustive_systole: bool,
}

/// Everything measured on one body. Area, `sys` and the deficit refer to
/// the quotient RP².
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PuReport {
    pub schema: u32,
    pub version: String,
    pub sys: f64,
    pub area: f64,
    #[serde(rename = "R")]
    pub circumradius: f64,
    #[serde(rename = "r")]
    pub inradius: f64,
    /// `area/sys² − 2/π`.
    pub deficit: f64,
    /// `(R − r)/sys`.
    pub t: f64,
    #[serde(rename = "L")]
    pub loop_length: f64,
    #[serde(rename = "D")]
    pub loop_distance: f64,
    pub diam: f64,
    pub john: Ellipsoid,
    pub checks: PuChecks,
    pub tolerances: Tolerances,
    pub discretization: Discretization,
    /// Positions along the systolic loop, closed.
    #[serde(skip)]
    pub loop_points: Vec<Vec3>,
}

impl PuReport {
    pub fn checks_hold(&self) -> bool {
        self.checks.failures().is_empty()
    }

    /// Systolic loop as an OBJ polyline.
    pub fn loop_obj(&self) -> String {
        let mut s = String::from("# systolic loop\n");
        for p in &self.loop_points {
            writeln!(s, "v {:.16e} {:.16e} {:.16e}", p.x, p.y, p.z).unwrap();
        }
        s.push('l');
        for i in 1..=self.loop_points.len() {
            write!(s, " {i}").unwrap();
        }
        s.push('\n');
        s
    }
}

/// Full analysis of one body with `steiner` points per mesh edge.
pub fn pu_report(m: &SymmetricConvexMesh, steiner: usize) -> Result<PuReport> {
    let radii = RadiiReport::compute(m)?;
    let g = GeodesicGraph::build(m, steiner)?;
    pu_report_on(m, &g, radii)
}

pub(crate) fn pu_report_on(m: &SymmetricConvexMesh, g: &GeodesicGraph, radii: RadiiReport) -> Result<PuReport> {
    let area = m.area() / 2.0;
    let s = systole(g)?;
    let lp = systolic_loop(g, &s);
    let loop_length = 2.0 * s.sys;
    let walked = g.path_length(&lp).unwrap_or(f64::NAN);
    let (loop_distance, _) = max_distance_to_loop(g, &lp)?;
    let diam = diameter(g)?;
    let max_arc = g.max_arc_length();
    let tg = tau_geo(max_arc);
    let tp = tau_pu(area, s.sys, tg);
    let deficit = area / (s.sys * s.sys) - 2.0 / std::f64::consts::PI;
    let (big, small) = (radii.circumradius, radii.inradius);
    let checks = PuChecks {
        pu_inequality: Check::le(0.0, deficit, tp),
        loop_length: Check::le((walked - loop_length).abs(), 0.0, 1e-12 * loop_length),
        inradius_loop: Check::le(2.0 * std::f64::consts::PI * small, loop_length, tg),
        circumradius_diameter: Check::le(2.0 * big, diam, tg),
        diameter_chain: Check::le(diam, 2.0 * loop_distance + loop_length / 2.0, tg),
    };
    Ok(PuReport {
        schema: SCHEMA,
        version: VERSION.to_string(),
        sys: s.sys,
        area,
        circumradius: big,
        inradius: small,
        deficit,
        t: (big - small) / s.sys,
        loop_length,
        loop_distance,
        diam,
        john: radii.john,
        checks,
        tolerances: Tolerances { tau_geo: tg, tau_pu: tp, tau_hull: m.tau_hull() },
        discretization: Discretization {
            mesh_vertices: m.vertices().len(),
            mesh_triangles: m.triangles().len(),
            max_mesh_edge: m.max_edge_length(),
            steiner: g.steiner(),
            graph_nodes: g.node_count(),
            graph_arcs: g.arc_count(),
            max_arc,
            exhaustive_systole: s.exhaustive,
        },
        loop_points: lp.iter().map(|&v| g.position(v as usize)).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::bodies;

    #[test]
    fn round_sphere_is_nearly_extremal() {
        let r = pu_report(&bodies::icosphere(3), 3).unwrap();
        assert!(r.deficit.abs() < 0.05, "{}", r.deficit);
        assert!(r.t < 0.01);
        assert!(r.checks_hold(), "{:?}", r.checks.failures());
    }

    #[test]
    fn report_is_scale_invariant() {
        let m = bodies::ellipsoid_icosphere([1.0, 1.0, 2.0], 2);
        let a = pu_report(&m, 2).unwrap();
        let b = pu_report(&m.scaled(3.0), 2).unwrap();
        assert!((a.deficit - b.deficit).abs() < 1e-9);
        assert!((a.t - b.t).abs() < 1e-9);
    }

    #[test]
    fn json_has_the_documented_keys() {
        let r = pu_report(&bodies::icosphere(1), 1).unwrap();
        let v = serde_json::to_value(&r).unwrap();
        for key in ["schema", "sys", "area", "R", "r", "deficit", "t", "L", "D", "diam", "checks"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(r.loop_obj().starts_with("# systolic loop\nv "));
    }
}
