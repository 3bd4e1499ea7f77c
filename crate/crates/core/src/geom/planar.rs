//! Planar convex bodies: shadows of meshes, width, radii and the classical
//! Bonnesen-type strengthenings of the isoperimetric inequality.

use std::f64::consts::PI;

use rand::seq::SliceRandom;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::lp;
use super::mesh::SymmetricConvexMesh;
use crate::tolerances::PLANAR_LP_GAP;
use crate::{Error, Result, Vec3};

pub type Point2 = [f64; 2];

/// Convex polygon, counterclockwise, without repeated or collinear vertices.
/// Serializes as a bare JSON array of `[x, y]` pairs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point2>", into = "Vec<Point2>")]
pub struct PlanarConvexBody {
    boundary: Vec<Point2>,
}

impl TryFrom<Vec<Point2>> for PlanarConvexBody {
    type Error = Error;
    fn try_from(v: Vec<Point2>) -> Result<Self> {
        PlanarConvexBody::new(v)
    }
}

impl From<PlanarConvexBody> for Vec<Point2> {
    fn from(b: PlanarConvexBody) -> Self {
        b.boundary
    }
}

/// Width, area and perimeter of a planar body.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShadowReport {
    pub width: f64,
    pub area: f64,
    pub perimeter: f64,
}

impl ShadowReport {
    /// `W² ≤ (4/π)·A`, valid for centrally symmetric bodies.
    pub fn width_area_slack(&self) -> f64 {
        4.0 / PI * self.area - self.width * self.width
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarRadii {
    pub circumradius: f64,
    pub circumcenter: Point2,
    pub inradius: f64,
    pub incenter: Point2,
    /// Duality gap of the inradius linear program.
    pub lp_gap: f64,
}

/// Isoperimetric deficit together with the three remainder candidates.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BonnesenDeficits {
    /// `L² − 4πA`.
    pub deficit: f64,
    /// `π²(R − r)²`.
    pub radii_gap: f64,
    /// `A²(1/r − 1/R)²`.
    pub area_weighted: f64,
    /// `L²((R − r)/(R + r))²`.
    pub length_weighted: f64,
    /// Every remainder is at most the deficit (up to rounding).
    pub holds: bool,
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

fn dist(a: Point2, b: Point2) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl PlanarConvexBody {
    /// Validates a counterclockwise convex vertex list.
    pub fn new(boundary: Vec<Point2>) -> Result<Self> {
        if boundary.len() < 3 {
            return Err(Error::FlatBody(format!("{} vertices do not bound a region", boundary.len())));
        }
        if boundary.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite vertex".into()));
        }
        let n = boundary.len();
        let scale = boundary.iter().map(|p| p[0].abs().max(p[1].abs())).fold(0.0, f64::max);
        let tol = 1e-12 * scale * scale;
        let mut turning = 0.0;
        for i in 0..n {
            let (a, b, c) = (boundary[i], boundary[(i + 1) % n], boundary[(i + 2) % n]);
            if cross(a, b, c) < -tol {
                return Err(Error::InvalidArgument(format!("vertex {} is reflex or order is clockwise", (i + 1) % n)));
            }
            let e1 = [b[0] - a[0], b[1] - a[1]];
            let e2 = [c[0] - b[0], c[1] - b[1]];
            turning += (e1[0] * e2[1] - e1[1] * e2[0]).atan2(e1[0] * e2[0] + e1[1] * e2[1]);
        }
        if (turning - 2.0 * PI).abs() > 1e-6 {
            return Err(Error::InvalidArgument("boundary is not a simple convex polygon".into()));
        }
        let body = PlanarConvexBody { boundary };
        if body.area() <= tol {
            return Err(Error::FlatBody("polygon has no area".into()));
        }
        Ok(body)
    }

    /// Convex hull (Andrew's monotone chain), collinear points removed.
    pub fn from_points(points: &[Point2]) -> Result<Self> {
        let mut pts: Vec<Point2> = points.to_vec();
        pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
        pts.dedup();
        if pts.len() < 3 {
            return Err(Error::FlatBody("fewer than three distinct points".into()));
        }
        let mut hull: Vec<Point2> = Vec::with_capacity(2 * pts.len());
        for pass in 0..2 {
            let start = hull.len();
            let iter: Box<dyn Iterator<Item = &Point2>> =
                if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
            for &p in iter {
                while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                    hull.pop();
                }
                hull.push(p);
            }
            hull.pop();
        }
        PlanarConvexBody::new(hull)
    }

    /// Regular `n`-gon inscribed in the circle of the given radius.
    pub fn regular(n: usize, radius: f64) -> Result<Self> {
        PlanarConvexBody::ellipse(radius, radius, n)
    }

    /// Polygon inscribed in the ellipse with semi-axes `a` (x) and `b` (y).
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        let pts = (0..n)
            .map(|k| {
                let t = 2.0 * PI * k as f64 / n as f64;
                [a * t.cos(), b * t.sin()]
            })
            .collect();
        PlanarConvexBody::new(pts)
    }

    pub fn boundary(&self) -> &[Point2] {
        &self.boundary
    }

    pub fn area(&self) -> f64 {
        let n = self.boundary.len();
        0.5 * (0..n)
            .map(|i| {
                let (a, b) = (self.boundary[i], self.boundary[(i + 1) % n]);
                a[0] * b[1] - a[1] * b[0]
            })
            .sum::<f64>()
    }

    pub fn perimeter(&self) -> f64 {
        let n = self.boundary.len();
        (0..n).map(|i| dist(self.boundary[i], self.boundary[(i + 1) % n])).sum()
    }

    /// Minimal width by rotating calipers over edge normals.
    pub fn width(&self) -> f64 {
        let p = &self.boundary;
        let n = p.len();
        let height = |i: usize, j: usize| {
            let (a, b) = (p[i], p[(i + 1) % n]);
            cross(a, b, p[j % n]) / dist(a, b)
        };
        let mut j = 1;
        let mut best = f64::INFINITY;
        for i in 0..n {
            if j <= i {
                j = i + 1;
            }
            while height(i, j + 1) >= height(i, j) && j < i + n {
                j += 1;
            }
            best = best.min(height(i, j));
        }
        best
    }

    pub fn metrics(&self) -> ShadowReport {
        ShadowReport { width: self.width(), area: self.area(), perimeter: self.perimeter() }
    }

    /// Whether `−p` is a vertex for every vertex `p`, within `tol`.
    pub fn is_centrally_symmetric(&self, tol: f64) -> bool {
        self.boundary
            .iter()
            .all(|p| self.boundary.iter().any(|q| (p[0] + q[0]).abs() <= tol && (p[1] + q[1]).abs() <= tol))
    }

    /// Minimum enclosing circle and maximum inscribed circle.
    pub fn radii(&self) -> Result<PlanarRadii> {
        let (circumcenter, circumradius) = min_enclosing_circle(&self.boundary);
        let (incenter, inradius, lp_gap) = self.max_inscribed_circle()?;
        if lp_gap.abs() > PLANAR_LP_GAP * circumradius {
            return Err(Error::Convergence(format!("inradius LP duality gap {lp_gap:e}")));
        }
        Ok(PlanarRadii { circumradius, circumcenter, inradius, incenter, lp_gap })
    }

    /// Chebyshev center: `max r  s.t.  nᵢ·c + r ≤ dᵢ` over the edge lines.
    fn max_inscribed_circle(&self) -> Result<(Point2, f64, f64)> {
        let p = &self.boundary;
        let n = p.len();
        let g = p.iter().fold([0.0, 0.0], |acc, q| [acc[0] + q[0] / n as f64, acc[1] + q[1] / n as f64]);
        let mut rows = Vec::with_capacity(n);
        let mut rhs = Vec::with_capacity(n);
        for i in 0..n {
            let (a, b) = (p[i], p[(i + 1) % n]);
            let len = dist(a, b);
            let normal = [(b[1] - a[1]) / len, -(b[0] - a[0]) / len];
            let d = normal[0] * (a[0] - g[0]) + normal[1] * (a[1] - g[1]);
            rows.push(vec![normal[0], -normal[0], normal[1], -normal[1], 1.0]);
            rhs.push(d.max(0.0));
        }
        let sol = lp::maximize(&[0.0, 0.0, 0.0, 0.0, 1.0], &rows, &rhs)?;
        let center = [g[0] + sol.x[0] - sol.x[1], g[1] + sol.x[2] - sol.x[3]];
        Ok((center, sol.value, sol.duality_gap(&rhs)))
    }

    pub fn bonnesen(&self) -> Result<BonnesenDeficits> {
        let l = self.perimeter();
        let a = self.area();
        let radii = self.radii()?;
        let (big, small) = (radii.circumradius, radii.inradius);
        let deficit = l * l - 4.0 * PI * a;
        let radii_gap = PI * PI * (big - small).powi(2);
        let area_weighted = (a * (1.0 / small - 1.0 / big)).powi(2);
        let length_weighted = (l * (big - small) / (big + small)).powi(2);
        let tol = 1e-9 * l * l;
        let holds = [radii_gap, area_weighted, length_weighted].iter().all(|&f| f <= deficit + tol);
        Ok(BonnesenDeficits { deficit, radii_gap, area_weighted, length_weighted, holds })
    }
}

fn circle_two(a: Point2, b: Point2) -> (Point2, f64) {
    ([(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0], dist(a, b) / 2.0)
}

fn circle_three(a: Point2, b: Point2, c: Point2) -> (Point2, f64) {
    let (bx, by) = (b[0] - a[0], b[1] - a[1]);
    let (cx, cy) = (c[0] - a[0], c[1] - a[1]);
    let d = 2.0 * (bx * cy - by * cx);
    if d.abs() < 1e-300 {
        let pairs = [circle_two(a, b), circle_two(a, c), circle_two(b, c)];
        return pairs.into_iter().max_by(|x, y| x.1.total_cmp(&y.1)).unwrap();
    }
    let b2 = bx * bx + by * by;
    let c2 = cx * cx + cy * cy;
    let ux = (cy * b2 - by * c2) / d;
    let uy = (bx * c2 - cx * b2) / d;
    ([a[0] + ux, a[1] + uy], ux.hypot(uy))
}

/// Welzl's algorithm on a seeded shuffle.
pub fn min_enclosing_circle(points: &[Point2]) -> (Point2, f64) {
    let mut pts = points.to_vec();
    pts.shuffle(&mut ChaCha8Rng::seed_from_u64(0x5eed));
    let inside = |c: &(Point2, f64), p: Point2| dist(c.0, p) <= c.1 * (1.0 + 1e-12) + 1e-300;
    let mut circle = (pts[0], 0.0);
    for i in 1..pts.len() {
        if inside(&circle, pts[i]) {
            continue;
        }
        circle = (pts[i], 0.0);
        for j in 0..i {
            if inside(&circle, pts[j]) {
                continue;
            }
            circle = circle_two(pts[i], pts[j]);
            for k in 0..j {
                if !inside(&circle, pts[k]) {
                    circle = circle_three(pts[i], pts[j], pts[k]);
                }
            }
        }
    }
    circle
}

/// Orthonormal basis `(e1, e2)` of the plane orthogonal to `normal`.
pub fn plane_basis(normal: &Vec3) -> (Vec3, Vec3) {
    let n = normal.normalize();
    let helper = if n.x.abs() < 0.9 { Vec3::x() } else { Vec3::y() };
    let e1 = (helper - n * helper.dot(&n)).normalize();
    let e2 = n.cross(&e1);
    (e1, e2)
}

/// Orthogonal projection of the mesh onto the plane orthogonal to `normal`.
pub fn project_shadow(m: &SymmetricConvexMesh, normal: &Vec3) -> Result<PlanarConvexBody> {
    if !(normal.norm() > 0.0) {
        return Err(Error::InvalidArgument("shadow normal must be nonzero".into()));
    }
    let (e1, e2) = plane_basis(normal);
    let pts: Vec<Point2> = m.vertices().iter().map(|v| [v.dot(&e1), v.dot(&e2)]).collect();
    PlanarConvexBody::from_points(&pts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::bodies;

    fn unit_square() -> PlanarConvexBody {
        PlanarConvexBody::new(vec![[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]]).unwrap()
    }

    #[test]
    fn square_side_two_metrics() {
        let sq = PlanarConvexBody::new(vec![[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]]).unwrap();
        let m = sq.metrics();
        assert_eq!((m.width, m.area, m.perimeter), (2.0, 4.0, 8.0));
    }

    #[test]
    fn unit_square_radii() {
        let r = unit_square().radii().unwrap();
        assert!((r.circumradius - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((r.inradius - 0.5).abs() < 1e-12);
        assert!((r.incenter[0] - 0.5).abs() < 1e-12 && (r.incenter[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn right_triangle_radii_match_classical_formulas() {
        // Oracle: R = hypotenuse / 2, r = (a + b − c) / 2.
        let t = PlanarConvexBody::new(vec![[0.0, 0.0], [3.0, 0.0], [0.0, 4.0]]).unwrap();
        let r = t.radii().unwrap();
        assert!((r.circumradius - 2.5).abs() < 1e-12);
        assert!((r.inradius - (3.0 + 4.0 - 5.0) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn unit_square_bonnesen_values() {
        let b = unit_square().bonnesen().unwrap();
        assert!((b.deficit - (16.0 - 4.0 * PI)).abs() < 1e-12);
        let oracle = PI * PI * (0.5f64.sqrt() - 0.5).powi(2);
        assert!((b.radii_gap - oracle).abs() < 1e-12);
        assert!((b.radii_gap - 0.4233).abs() < 1e-4);
        assert!(b.holds);
    }

    #[test]
    fn disk_polygon_is_nearly_extremal() {
        let disk = PlanarConvexBody::regular(2048, 1.0).unwrap();
        let m = disk.metrics();
        assert!((m.width - 2.0).abs() < 1e-5);
        assert!((m.area - PI).abs() < 1e-5);
        assert!(m.width_area_slack() >= 0.0 && m.width_area_slack() < 1e-5);
        let r = disk.radii().unwrap();
        assert!((r.circumradius - 1.0).abs() < 1e-12 && (r.inradius - 1.0).abs() < 1e-5);
        let b = disk.bonnesen().unwrap();
        assert!(b.deficit.abs() < 1e-4 && b.radii_gap < 1e-8 && b.holds);
    }

    #[test]
    fn ellipse_width_is_twice_minor_axis() {
        let e = PlanarConvexBody::ellipse(2.0, 1.0, 4096).unwrap();
        let m = e.metrics();
        assert!((m.width - 2.0).abs() < 1e-5);
        assert!((m.area - 2.0 * PI).abs() < 1e-5);
        assert!(m.width * m.width <= 4.0 / PI * m.area);
    }

    #[test]
    fn clockwise_order_is_rejected() {
        assert!(PlanarConvexBody::new(vec![[0.0, 0.0], [0.0, 1.0], [1.0, 1.0], [1.0, 0.0]]).is_err());
    }

    #[test]
    fn octahedron_shadow_is_square() {
        let s = project_shadow(&bodies::octahedron(), &Vec3::z()).unwrap();
        assert_eq!(s.boundary().len(), 4);
        let m = s.metrics();
        assert!((m.area - 2.0).abs() < 1e-15);
        assert!(s.boundary().iter().all(|p| ((p[0] * p[0] + p[1] * p[1]) - 1.0).abs() < 1e-15));
    }

    #[test]
    fn sphere_shadow_is_disk() {
        let s = project_shadow(&bodies::icosphere(4), &Vec3::new(0.3, -0.2, 0.9)).unwrap();
        let r = s.radii().unwrap();
        assert!(r.circumradius <= 1.0 + 1e-12);
        assert!(r.inradius >= 1.0 - 5e-3);
    }

    #[test]
    fn json_is_bare_pairs() {
        let sq = unit_square();
        let json = serde_json::to_string(&sq).unwrap();
        assert_eq!(json, "[[0.0,0.0],[1.0,0.0],[1.0,1.0],[0.0,1.0]]");
        let back: PlanarConvexBody = serde_json::from_str(&json).unwrap();
        assert_eq!(back, sq);
    }
}
