//! Mesh refinement that preserves exact central symmetry.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use super::mesh::{sorted_edge, SymmetricConvexMesh};
use crate::{Error, Result, Vec3};

/// Loop-style 1-to-4 subdivision applied `level` times.
///
/// New vertices sit at edge midpoints, pushed to the support surface when
/// the mesh has one. Midpoints of antipodal edges are exact negations of each
/// other because both the midpoint and the gauge are computed symmetrically.
pub fn refine(m: &SymmetricConvexMesh, level: u32) -> SymmetricConvexMesh {
    let mut mesh = m.clone();
    for _ in 0..level {
        mesh = subdivide_once(&mesh);
    }
    mesh
}

fn subdivide_once(m: &SymmetricConvexMesh) -> SymmetricConvexMesh {
    let mut vertices = m.vertices().to_vec();
    let mut antipode = m.antipodes().to_vec();
    let mut mid: HashMap<[u32; 2], u32> = HashMap::new();
    for [a, b] in m.edges() {
        let p = midpoint(m, a, b);
        mid.insert([a, b], vertices.len() as u32);
        vertices.push(p);
        antipode.push(u32::MAX);
    }
    for ([a, b], &i) in &mid {
        let anti = sorted_edge(m.antipode(*a as usize) as u32, m.antipode(*b as usize) as u32);
        antipode[i as usize] = mid[&anti];
    }
    let mut triangles = Vec::with_capacity(4 * m.triangles().len());
    for &[a, b, c] in m.triangles() {
        let ab = mid[&sorted_edge(a, b)];
        let bc = mid[&sorted_edge(b, c)];
        let ca = mid[&sorted_edge(c, a)];
        triangles.extend([[a, ab, ca], [ab, b, bc], [ca, bc, c], [ab, bc, ca]]);
    }
    let support = m.support().cloned();
    let mut soup = Soup::new(vertices, triangles, antipode);
    if support.is_some() {
        soup.make_locally_convex(m.tau_hull());
    }
    soup.into_mesh(support)
}

fn midpoint(m: &SymmetricConvexMesh, a: u32, b: u32) -> Vec3 {
    let p = 0.5 * (m.vertex(a as usize) + m.vertex(b as usize));
    match m.support() {
        Some(s) => s.project(&p),
        None => p,
    }
}

#[derive(PartialEq)]
struct EdgeLen(f64, u32, u32);

impl Eq for EdgeLen {}

impl PartialOrd for EdgeLen {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for EdgeLen {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0).then_with(|| (other.1, other.2).cmp(&(self.1, self.2)))
    }
}

/// Longest-edge bisection until no edge exceeds `max_edge`.
///
/// The globally longest edge is always the longest edge of both triangles it
/// borders, so every split is a conforming Rivara bisection. Each split is
/// mirrored on the antipodal edge. Reflex edges created by projecting
/// midpoints onto a curved support are flipped away at the end.
pub fn refine_to_max_edge(m: &SymmetricConvexMesh, max_edge: f64) -> Result<SymmetricConvexMesh> {
    if !(max_edge > 0.0) {
        return Err(Error::InvalidArgument(format!("max edge {max_edge} must be positive")));
    }
    let support = m.support().cloned();
    let tol = m.tau_hull();
    let mut soup = Soup::new(m.vertices().to_vec(), m.triangles().to_vec(), m.antipodes().to_vec());
    // Flips can lengthen a diagonal, so bisect and flip until both settle.
    for _ in 0..6 {
        soup.bisect_longer_than(max_edge, support.as_ref())?;
        let flips = if support.is_some() { soup.make_locally_convex(tol) } else { 0 };
        if flips == 0 {
            break;
        }
    }
    Ok(soup.into_mesh(support))
}

impl Soup {
    fn bisect_longer_than(&mut self, max_edge: f64, support: Option<&super::bodies::Support>) -> Result<()> {
        let soup = self;
        let mut heap: BinaryHeap<EdgeLen> = soup.edges.keys().map(|&(a, b)| EdgeLen(soup.len(a, b), a, b)).collect();
        while let Some(EdgeLen(len, a, b)) = heap.pop() {
            if len <= max_edge {
                break;
            }
            if !soup.edges.contains_key(&(a, b)) {
                continue;
            }
            let p = 0.5 * (soup.vertices[a as usize] + soup.vertices[b as usize]);
            let p = support.map_or(p, |s| s.project(&p));
            let (aa, ab) = (soup.antipode[a as usize], soup.antipode[b as usize]);
            let (m1, n1) = soup.split(a, b, p)?;
            let (m2, n2) = soup.split(aa.min(ab), aa.max(ab), -p)?;
            soup.antipode.extend([m2, m1]);
            for (mv, nbs) in [(m1, n1), (m2, n2)] {
                for nb in nbs {
                    let (x, y) = (mv.min(nb), mv.max(nb));
                    heap.push(EdgeLen(soup.len(x, y), x, y));
                }
            }
        }
        Ok(())
    }
}

/// Editable triangle list with an undirected edge → triangles index.
struct Soup {
    vertices: Vec<Vec3>,
    triangles: Vec<[u32; 3]>,
    antipode: Vec<u32>,
    edges: HashMap<(u32, u32), Vec<u32>>,
}

impl Soup {
    fn new(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>, antipode: Vec<u32>) -> Self {
        let mut soup = Soup { vertices, triangles: Vec::new(), antipode, edges: HashMap::new() };
        for t in triangles {
            soup.add(t);
        }
        soup
    }

    fn len(&self, a: u32, b: u32) -> f64 {
        (self.vertices[a as usize] - self.vertices[b as usize]).norm()
    }

    fn add(&mut self, t: [u32; 3]) -> u32 {
        let id = self.triangles.len() as u32;
        self.triangles.push(t);
        self.index(id);
        id
    }

    fn index(&mut self, id: u32) {
        let t = self.triangles[id as usize];
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            self.edges.entry((a.min(b), a.max(b))).or_default().push(id);
        }
    }

    fn unindex(&mut self, id: u32) {
        let t = self.triangles[id as usize];
        for e in 0..3 {
            let (a, b) = (t[e], t[(e + 1) % 3]);
            let key = (a.min(b), a.max(b));
            if let Some(list) = self.edges.get_mut(&key) {
                list.retain(|&x| x != id);
                if list.is_empty() {
                    self.edges.remove(&key);
                }
            }
        }
    }

    fn replace(&mut self, id: u32, t: [u32; 3]) {
        self.unindex(id);
        self.triangles[id as usize] = t;
        self.index(id);
    }

    /// Rotates `t` so that it reads `(a, b, w)` with `a → b` in its
    /// orientation, if it has that directed edge.
    fn rotate_to(t: [u32; 3], a: u32, b: u32) -> Option<[u32; 3]> {
        (0..3).map(|k| [t[k], t[(k + 1) % 3], t[(k + 2) % 3]]).find(|r| r[0] == a && r[1] == b)
    }

    /// Splits edge `(a, b)` at `p`, returning the new vertex index and its
    /// neighbours.
    fn split(&mut self, a: u32, b: u32, p: Vec3) -> Result<(u32, Vec<u32>)> {
        let tris = self
            .edges
            .get(&(a, b))
            .cloned()
            .ok_or_else(|| Error::Internal(format!("edge ({a}, {b}) missing during bisection")))?;
        let m = self.vertices.len() as u32;
        self.vertices.push(p);
        let mut nbs = vec![a, b];
        for t in tris {
            let tri = self.triangles[t as usize];
            let r = Soup::rotate_to(tri, a, b)
                .or_else(|| Soup::rotate_to(tri, b, a))
                .ok_or_else(|| Error::Internal("triangle lost its edge".into()))?;
            let [x, y, w] = r;
            self.replace(t, [x, m, w]);
            self.add([m, y, w]);
            nbs.push(w);
        }
        Ok((m, nbs))
    }

    /// Flips reflex edges until every edge is convex within `tol`; returns
    /// the number of flips. Each flip is mirrored on the antipodal edge.
    fn make_locally_convex(&mut self, tol: f64) -> usize {
        let mut flips = 0;
        let mut queue: Vec<(u32, u32)> = self.edges.keys().copied().collect();
        queue.sort_unstable();
        let cap = 20 * queue.len() + 100;
        let mut steps = 0;
        while let Some((a, b)) = queue.pop() {
            steps += 1;
            if steps > cap {
                break;
            }
            let Some(touched) = self.flip_if_reflex(a, b, tol) else { continue };
            let (aa, ab) = (self.antipode[a as usize], self.antipode[b as usize]);
            let mirrored = self.flip_if_reflex(aa.min(ab), aa.max(ab), tol);
            flips += 1;
            queue.extend(touched);
            queue.extend(mirrored.into_iter().flatten());
        }
        flips
    }

    /// Flips `(a, b)` when the opposite vertex of one side lies above the
    /// other side's plane; returns the four surrounding edges.
    fn flip_if_reflex(&mut self, a: u32, b: u32, tol: f64) -> Option<[(u32, u32); 4]> {
        let list = self.edges.get(&(a, b))?;
        if list.len() != 2 {
            return None;
        }
        let (t1, t2) = (list[0], list[1]);
        let [x, y, w] = Soup::rotate_to(self.triangles[t1 as usize], a, b)
            .or_else(|| Soup::rotate_to(self.triangles[t1 as usize], b, a))?;
        let [_, _, z] = Soup::rotate_to(self.triangles[t2 as usize], y, x)?;
        let (px, py, pw, pz) = (
            self.vertices[x as usize],
            self.vertices[y as usize],
            self.vertices[w as usize],
            self.vertices[z as usize],
        );
        let n = (py - px).cross(&(pw - px));
        let len = n.norm();
        if len == 0.0 || n.dot(&(pz - px)) / len <= tol || self.edges.contains_key(&(w.min(z), w.max(z))) {
            return None;
        }
        self.replace(t1, [x, z, w]);
        self.replace(t2, [z, y, w]);
        Some([(x.min(z), x.max(z)), (z.min(y), z.max(y)), (y.min(w), y.max(w)), (w.min(x), w.max(x))])
    }

    fn into_mesh(self, support: Option<super::bodies::Support>) -> SymmetricConvexMesh {
        SymmetricConvexMesh::from_parts_unchecked(self.vertices, self.triangles, self.antipode, support)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::bodies;

    #[test]
    fn level_zero_is_identity() {
        let m = bodies::octahedron();
        let r = refine(&m, 0);
        assert_eq!(r.vertices(), m.vertices());
        assert_eq!(r.triangles(), m.triangles());
    }

    #[test]
    fn octahedron_level_one_counts() {
        let r = refine(&bodies::octahedron(), 1);
        assert_eq!(r.vertices().len(), 18);
        assert_eq!(r.triangles().len(), 32);
        r.validate().unwrap();
    }

    #[test]
    fn icosphere_edge_length_halves() {
        let mut prev = bodies::icosphere(1).max_edge_length();
        for level in 2..=4 {
            let cur = bodies::icosphere(level).max_edge_length();
            let ratio = cur / prev;
            assert!((ratio - 0.5).abs() < 0.06, "level {level}: ratio {ratio}");
            prev = cur;
        }
    }

    #[test]
    fn refined_meshes_stay_valid_and_symmetric() {
        bodies::icosphere(3).validate().unwrap();
        let e = bodies::ellipsoid_icosphere([1.0, 1.0, 2.0], 2);
        refine(&e, 1).validate().unwrap();
    }

    #[test]
    fn bisection_keeps_polytope_faces_flat() {
        let cube = bodies::cube(1.0);
        let fine = refine_to_max_edge(&cube, 0.4).unwrap();
        fine.validate().unwrap();
        assert!(fine.max_edge_length() <= 0.4);
        assert!((fine.area() - 24.0).abs() < 1e-12);
        assert!(fine.vertices().iter().all(|v| (v.amax() - 1.0).abs() < 1e-15));
    }
}
