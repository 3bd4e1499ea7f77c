//! Quickhull in R³ with a fixed absolute tolerance.
//!
//! Points closer than `tol` to a face plane are never considered outside that
//! face, so nearly coplanar points on a facet are dropped unless some other
//! face sees them.

use std::collections::HashMap;

use crate::{Error, Result, Vec3};

struct Face {
    v: [usize; 3],
    normal: Vec3,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

impl Face {
    fn new(points: &[Vec3], v: [usize; 3]) -> Self {
        let (a, b, c) = (points[v[0]], points[v[1]], points[v[2]]);
        let n = (b - a).cross(&(c - a));
        let len = n.norm();
        let normal = if len > 0.0 { n / len } else { n };
        Face { v, normal, offset: normal.dot(&a), outside: Vec::new(), alive: true }
    }

    fn distance(&self, p: &Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Triangles (outward oriented, indices into `points`) of the convex hull.
pub(crate) fn convex_hull(points: &[Vec3], tol: f64) -> Result<Vec<[usize; 3]>> {
    if points.len() < 4 {
        return Err(Error::FlatBody(format!("{} points cannot span R³", points.len())));
    }
    let simplex = initial_simplex(points, tol)?;
    let mut faces: Vec<Face> = Vec::new();
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();

    let centroid = simplex.iter().map(|&i| points[i]).sum::<Vec3>() / 4.0;
    for skip in 0..4 {
        let mut v = [0usize; 3];
        let mut k = 0;
        for (j, &s) in simplex.iter().enumerate() {
            if j != skip {
                v[k] = s;
                k += 1;
            }
        }
        let mut face = Face::new(points, v);
        if face.distance(&centroid) > 0.0 {
            v.swap(1, 2);
            face = Face::new(points, v);
        }
        push_face(&mut faces, &mut edges, face);
    }

    let in_simplex = |i: usize| simplex.contains(&i);
    for i in 0..points.len() {
        if !in_simplex(i) {
            assign(&mut faces, &(0..4).collect::<Vec<_>>(), points, i, tol);
        }
    }

    let mut stack: Vec<usize> = (0..4).collect();
    while let Some(fi) = stack.pop() {
        if !faces[fi].alive || faces[fi].outside.is_empty() {
            continue;
        }
        let eye = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                faces[fi].distance(&points[a]).total_cmp(&faces[fi].distance(&points[b])).then(b.cmp(&a))
            })
            .expect("non-empty");
        let eye_p = points[eye];

        // Flood the visible region from the seed face.
        let mut visible = vec![fi];
        let mut is_visible: HashMap<usize, bool> = HashMap::new();
        is_visible.insert(fi, true);
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let Some(&nb) = edges.get(&(b, a)) else {
                    return Err(Error::Internal("hull lost an edge twin".into()));
                };
                let vis = match is_visible.get(&nb) {
                    Some(&v) => v,
                    None => {
                        let v = faces[nb].distance(&eye_p) > tol;
                        is_visible.insert(nb, v);
                        if v {
                            visible.push(nb);
                        }
                        v
                    }
                };
                if !vis {
                    horizon.push((a, b));
                }
            }
        }

        let mut orphans = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            let v = faces[f].v;
            for e in 0..3 {
                edges.remove(&(v[e], v[(e + 1) % 3]));
            }
            orphans.append(&mut faces[f].outside);
        }

        let mut created = Vec::with_capacity(horizon.len());
        for (a, b) in horizon {
            let face = Face::new(points, [a, b, eye]);
            created.push(push_face(&mut faces, &mut edges, face));
        }
        for p in orphans {
            if p != eye {
                assign(&mut faces, &created, points, p, tol);
            }
        }
        stack.extend(created);
    }

    Ok(faces.iter().filter(|f| f.alive).map(|f| f.v).collect())
}

fn push_face(faces: &mut Vec<Face>, edges: &mut HashMap<(usize, usize), usize>, face: Face) -> usize {
    let id = faces.len();
    for e in 0..3 {
        edges.insert((face.v[e], face.v[(e + 1) % 3]), id);
    }
    faces.push(face);
    id
}

fn assign(faces: &mut [Face], candidates: &[usize], points: &[Vec3], p: usize, tol: f64) {
    let mut best: Option<(usize, f64)> = None;
    for &f in candidates {
        let d = faces[f].distance(&points[p]);
        if d > tol && best.is_none_or(|(_, bd)| d > bd) {
            best = Some((f, d));
        }
    }
    if let Some((f, _)) = best {
        faces[f].outside.push(p);
    }
}

fn initial_simplex(points: &[Vec3], tol: f64) -> Result<[usize; 4]> {
    // Farthest pair among the axis extremes.
    let mut extremes = Vec::with_capacity(6);
    for axis in 0..3 {
        let lo = (0..points.len()).min_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis])).unwrap();
        let hi = (0..points.len()).max_by(|&a, &b| points[a][axis].total_cmp(&points[b][axis])).unwrap();
        extremes.push(lo);
        extremes.push(hi);
    }
    let mut p0 = extremes[0];
    let mut p1 = extremes[1];
    let mut best = -1.0;
    for &a in &extremes {
        for &b in &extremes {
            let d = (points[a] - points[b]).norm_squared();
            if d > best {
                best = d;
                p0 = a;
                p1 = b;
            }
        }
    }
    if best.sqrt() <= tol {
        return Err(Error::FlatBody("all points coincide".into()));
    }
    let dir = (points[p1] - points[p0]).normalize();
    let line_dist = |i: usize| {
        let w = points[i] - points[p0];
        (w - dir * w.dot(&dir)).norm()
    };
    let p2 = (0..points.len()).max_by(|&a, &b| line_dist(a).total_cmp(&line_dist(b))).unwrap();
    if line_dist(p2) <= tol {
        return Err(Error::FlatBody("points are collinear".into()));
    }
    let n = (points[p1] - points[p0]).cross(&(points[p2] - points[p0])).normalize();
    let plane_dist = |i: usize| n.dot(&(points[i] - points[p0])).abs();
    let p3 = (0..points.len()).max_by(|&a, &b| plane_dist(a).total_cmp(&plane_dist(b))).unwrap();
    if plane_dist(p3) <= tol {
        return Err(Error::FlatBody("points are coplanar".into()));
    }
    Ok([p0, p1, p2, p3])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tetrahedron_is_its_own_hull() {
        let pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
        let tris = convex_hull(&pts, 1e-12).unwrap();
        assert_eq!(tris.len(), 4);
    }

    #[test]
    fn interior_point_is_dropped() {
        let mut pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::z()];
        pts.push(Vec3::new(0.1, 0.1, 0.1));
        let tris = convex_hull(&pts, 1e-12).unwrap();
        assert_eq!(tris.len(), 4);
        assert!(tris.iter().all(|t| !t.contains(&4)));
    }

    #[test]
    fn coplanar_input_is_flat() {
        let pts = vec![Vec3::zeros(), Vec3::x(), Vec3::y(), Vec3::new(1.0, 1.0, 0.0)];
        assert!(matches!(convex_hull(&pts, 1e-12), Err(Error::FlatBody(_))));
    }
}
