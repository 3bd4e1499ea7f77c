//! Browser bindings. Each exported function takes plain numbers and returns
//! a JSON string; the `*_json` twins are the same computations callable from
//! native code.

use serde::Serialize;
use systole_lab::conformal::{
    conformal_systole, holder_chain, variance_remainder, ConformalMetric, GreatCircleSpace, SphereGraph, SphericalGrid,
    VarianceReport,
};
use systole_lab::geodesic::pu_report;
use systole_lab::geom::bodies::{smooth_body, Support};
use systole_lab::geom::project_shadow;
use systole_lab::{Error, Result, Vec3};
use wasm_bindgen::prelude::*;

/// Coarser than the CLI defaults so a click answers in well under a second.
const STEINER: usize = 2;
const GRID_POLAR: usize = 24;
const CIRCLE_POINTS: usize = 128;
const GRAPH_LEVEL: u32 = 3;

fn check(ok: bool, msg: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidArgument(msg.into()))
    }
}

#[derive(Serialize)]
struct EllipsoidView {
    sys: f64,
    area: f64,
    #[serde(rename = "R")]
    circumradius: f64,
    r: f64,
    deficit: f64,
    t: f64,
    john: [f64; 3],
    checks_hold: bool,
    vertices: usize,
    /// Closed systolic loop.
    path: Vec<[f64; 3]>,
}

pub fn analyze_ellipsoid_json(a: f64, b: f64, c: f64, max_edge: f64) -> Result<String> {
    check([a, b, c].iter().all(|&x| x > 0.0 && x <= 20.0), "semi-axes must lie in (0, 20]")?;
    check(max_edge >= 0.02 * a.max(b).max(c) && max_edge <= 1.0, "max_edge out of range")?;
    let m = smooth_body(&Support::Ellipsoid { semi_axes: [a, b, c] }, max_edge)?;
    let r = pu_report(&m, STEINER)?;
    Ok(serde_json::to_string(&EllipsoidView {
        sys: r.sys,
        area: r.area,
        circumradius: r.circumradius,
        r: r.inradius,
        deficit: r.deficit,
        t: r.t,
        john: r.john.semi_axes,
        checks_hold: r.checks_hold(),
        vertices: m.vertices().len(),
        path: r.loop_points.iter().map(|p| [p.x, p.y, p.z]).collect(),
    })?)
}

#[derive(Serialize)]
struct ChainView {
    t: f64,
    area: f64,
    santalo: f64,
    holder: f64,
    pu_bound: f64,
    sys: f64,
    holds: bool,
    variance: VarianceReport,
    /// `(z of pole, circle length)` for every great circle.
    circles: Vec<[f64; 2]>,
}

pub fn holder_chain_json(t: f64) -> Result<String> {
    check(t.abs() <= 2.0, "t must lie in [-2, 2]")?;
    let c = ConformalMetric::exp_y20(t);
    let grid = SphericalGrid::new(GRID_POLAR)?;
    let gs = GreatCircleSpace::new(grid.clone(), CIRCLE_POINTS);
    let sg = SphereGraph::new(GRAPH_LEVEL, STEINER)?;
    let s = conformal_systole(&c, &sg)?;
    let h = holder_chain(&c, &gs, s.sys, s.length_tolerance());
    Ok(serde_json::to_string(&ChainView {
        t,
        area: h.area,
        santalo: h.santalo,
        holder: h.holder,
        pu_bound: h.pu_bound,
        sys: s.sys,
        holds: h.holds(),
        variance: variance_remainder(&c, &grid, &sg)?,
        circles: h.circles.iter().map(|r| [r.pole[2], r.length]).collect(),
    })?)
}

#[derive(Serialize)]
struct ShadowView {
    a: f64,
    sys: f64,
    width: f64,
    area: f64,
    shadow_area: f64,
    deficit: f64,
    limit: f64,
    outline: Vec<[f64; 2]>,
}

/// The oblate ellipsoid `(1, 1, a)` next to its shadow on the `xy` plane.
pub fn collapse_shadow_json(a: f64) -> Result<String> {
    check((0.05..=1.0).contains(&a), "thickness must lie in [0.05, 1]")?;
    let m = smooth_body(&Support::Ellipsoid { semi_axes: [1.0, 1.0, a] }, 0.2 * a.max(0.25))?;
    let r = pu_report(&m, STEINER)?;
    let shadow = project_shadow(&m, &Vec3::z())?;
    let s = shadow.metrics();
    Ok(serde_json::to_string(&ShadowView {
        a,
        sys: r.sys,
        width: s.width,
        area: r.area,
        shadow_area: s.area,
        deficit: r.area - 2.0 / std::f64::consts::PI * r.sys * r.sys,
        limit: s.area * (1.0 - 8.0 / (std::f64::consts::PI * std::f64::consts::PI)),
        outline: shadow.boundary().to_vec(),
    })?)
}

fn js(r: Result<String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e.to_string()))
}

#[wasm_bindgen]
pub fn analyze_ellipsoid(a: f64, b: f64, c: f64, max_edge: f64) -> Result<String, JsError> {
    js(analyze_ellipsoid_json(a, b, c, max_edge))
}

#[wasm_bindgen]
pub fn holder_chain_y20(t: f64) -> Result<String, JsError> {
    js(holder_chain_json(t))
}

#[wasm_bindgen]
pub fn collapse_shadow(a: f64) -> Result<String, JsError> {
    js(collapse_shadow_json(a))
}
