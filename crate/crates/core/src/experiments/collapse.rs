//! Oblate ellipsoids `(1, 1, a)` collapsing to the unit disk as `a → 0`.
//!
//! In the limit the double cover is the disk glued to itself, the quotient
//! area tends to the shadow area `A`, the systole tends to the shadow width
//! `W`, and the unnormalized deficit tends to `A − (2/π)W² ≥ A(1 − 8/π²)`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::family::{BodySpec, FamilySpec};
use crate::geodesic::pu_report;
use crate::geom::bodies::Support;
use crate::geom::project_shadow;
use crate::{par, Result, Vec3};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollapseRow {
    /// Thickness: semi-axes `(1, 1, a)`.
    pub a: f64,
    pub sys: f64,
    /// Width of the shadow on the `xy` plane.
    pub width: f64,
    /// `|sys − W|/W`.
    pub sys_error: f64,
    /// Quotient area.
    pub area: f64,
    pub shadow_area: f64,
    /// `|area − A|/A`.
    pub area_error: f64,
    /// `area − (2/π)·sys²`.
    pub deficit: f64,
    /// `A(1 − 8/π²)`.
    pub limit: f64,
    pub status: String,
}

fn row(a: f64, steiner: usize, edge_factor: f64) -> Result<CollapseRow> {
    let body = BodySpec::Smooth(Support::Ellipsoid { semi_axes: [1.0, 1.0, a] });
    let spec = FamilySpec {
        steiner,
        edge_factor,
        ..FamilySpec::new("collapse", super::FamilyKind::Ellipsoid { axes: vec![[1.0, 1.0, a]] })
    };
    let m = body.mesh_for(&spec)?;
    let r = pu_report(&m, steiner)?;
    let shadow = project_shadow(&m, &Vec3::z())?.metrics();
    let limit = shadow.area * (1.0 - 8.0 / (PI * PI));
    Ok(CollapseRow {
        a,
        sys: r.sys,
        width: shadow.width,
        sys_error: (r.sys - shadow.width).abs() / shadow.width,
        area: r.area,
        shadow_area: shadow.area,
        area_error: (r.area - shadow.area).abs() / shadow.area,
        deficit: r.area - 2.0 / PI * r.sys * r.sys,
        limit,
        status: if r.checks_hold() { "ok".into() } else { format!("fail:{}", r.checks.failures().join("|")) },
    })
}

/// One row per thickness, in the given order; a body that cannot be meshed
/// yields an `error:` row.
pub fn collapse_study(thickness: &[f64], steiner: usize, edge_factor: f64) -> Vec<CollapseRow> {
    par::map(thickness, |&a| {
        row(a, steiner, edge_factor).unwrap_or_else(|e| CollapseRow {
            a,
            sys: f64::NAN,
            width: f64::NAN,
            sys_error: f64::NAN,
            area: f64::NAN,
            shadow_area: f64::NAN,
            area_error: f64::NAN,
            deficit: f64::NAN,
            limit: f64::NAN,
            status: format!("error:{e}"),
        })
    })
}

pub const COLLAPSE_CSV_HEADER: &str = "a,sys,W,sys_error,area,A,area_error,deficit,limit,status";

pub fn collapse_csv(rows: &[CollapseRow]) -> String {
    let mut s = String::from(COLLAPSE_CSV_HEADER);
    s.push('\n');
    for r in rows {
        let nums = [r.a, r.sys, r.width, r.sys_error, r.area, r.shadow_area, r.area_error, r.deficit, r.limit];
        let body: Vec<String> = nums.iter().map(|x| format!("{x:.16e}")).collect();
        s.push_str(&format!("{},{}\n", body.join(","), r.status.replace([',', '\n'], ";")));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_limit_constant() {
        // A(1 − 8/π²) for the unit disk equals π − 8/π.
        assert!((PI * (1.0 - 8.0 / (PI * PI)) - (PI - 8.0 / PI)).abs() < 1e-15);
        assert!((PI - 8.0 / PI - 0.59511).abs() < 1e-5);
    }

    #[test]
    fn round_member_matches_plain_report() {
        let rows = collapse_study(&[1.0], 2, 8.0);
        let r = &rows[0];
        assert_eq!(r.status, "ok");
        // The unit sphere: W = 2, A = π, sys ≈ π.
        assert!((r.width - 2.0).abs() < 0.02 && (r.shadow_area - PI).abs() < 0.05);
        assert!((r.sys - PI).abs() < 0.05);
    }
}
