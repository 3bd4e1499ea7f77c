use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::bodies::Support;
use super::hull::convex_hull;
use crate::tolerances::tau_hull;
use crate::{Error, Result, Vec3};

/// Triangulated, centrally symmetric convex surface in R³.
///
/// Every vertex `x` has its exact negation `-x` among the vertices, paired by
/// the fixed-point-free involution [`antipode`](Self::antipode). Triangles are
/// oriented with outward normals and form a closed genus-0 surface whose
/// edges are all locally convex.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SymmetricConvexMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[u32; 3]>,
    antipode: Vec<u32>,
    support: Option<Support>,
}

/// Bit key of a point; `+0.0` and `-0.0` share a key.
pub(crate) fn point_key(p: &Vec3) -> [u64; 3] {
    [(p.x + 0.0).to_bits(), (p.y + 0.0).to_bits(), (p.z + 0.0).to_bits()]
}

impl SymmetricConvexMesh {
    /// Assembles a mesh from raw parts, orienting triangles outward and
    /// checking every invariant.
    pub fn from_parts(vertices: Vec<Vec3>, triangles: Vec<[u32; 3]>, support: Option<Support>) -> Result<Self> {
        if vertices.is_empty() || triangles.is_empty() {
            return Err(Error::Empty("mesh without vertices or triangles".into()));
        }
        if vertices.iter().any(|v| !v.iter().all(|c| c.is_finite())) {
            return Err(Error::InvalidMesh("non-finite vertex coordinate".into()));
        }
        let antipode = antipode_map(&vertices)?;
        let mut mesh = SymmetricConvexMesh { vertices, triangles, antipode, support };
        mesh.orient_outward()?;
        mesh.edge_triangles()?;
        mesh.triangles = symmetrize_facets(&mesh.vertices, &mesh.triangles, &mesh.antipode, mesh.tau_hull())?;
        mesh.validate()?;
        Ok(mesh)
    }

    pub(crate) fn from_parts_unchecked(
        vertices: Vec<Vec3>,
        triangles: Vec<[u32; 3]>,
        antipode: Vec<u32>,
        support: Option<Support>,
    ) -> Self {
        SymmetricConvexMesh { vertices, triangles, antipode, support }
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    pub fn antipode(&self, v: usize) -> usize {
        self.antipode[v] as usize
    }

    pub fn antipodes(&self) -> &[u32] {
        &self.antipode
    }

    /// Analytic surface the mesh approximates, used when refining.
    pub fn support(&self) -> Option<&Support> {
        self.support.as_ref()
    }

    pub fn with_support(mut self, support: Option<Support>) -> Self {
        self.support = support;
        self
    }

    pub fn vertex(&self, v: usize) -> Vec3 {
        self.vertices[v]
    }

    /// Undirected edges `(a, b)` with `a < b`, sorted.
    pub fn edges(&self) -> Vec<[u32; 2]> {
        let mut edges: Vec<[u32; 2]> =
            self.triangles.iter().flat_map(|t| (0..3).map(move |e| sorted_edge(t[e], t[(e + 1) % 3]))).collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges().len() as i64 + self.triangles.len() as i64
    }

    pub fn max_edge_length(&self) -> f64 {
        self.edges()
            .iter()
            .map(|&[a, b]| (self.vertices[a as usize] - self.vertices[b as usize]).norm())
            .fold(0.0, f64::max)
    }

    /// Diagonal of the axis-aligned bounding box.
    pub fn diagonal(&self) -> f64 {
        bbox_diagonal(&self.vertices)
    }

    pub fn tau_hull(&self) -> f64 {
        tau_hull(self.diagonal())
    }

    /// Surface area (the double cover; the quotient area is half of this).
    pub fn area(&self) -> f64 {
        self.triangles.iter().map(|t| self.triangle_area(t)).sum()
    }

    pub(crate) fn triangle_area(&self, t: &[u32; 3]) -> f64 {
        let [a, b, c] = t.map(|i| self.vertices[i as usize]);
        0.5 * (b - a).cross(&(c - a)).norm()
    }

    /// Outward unit normal and plane offset of every triangle.
    pub fn face_planes(&self) -> Vec<(Vec3, f64)> {
        self.triangles
            .iter()
            .map(|t| {
                let [a, b, c] = t.map(|i| self.vertices[i as usize]);
                let n = (b - a).cross(&(c - a)).normalize();
                (n, n.dot(&a))
            })
            .collect()
    }

    /// Uniformly scaled copy. Scaling by a power of two is exact.
    pub fn scaled(&self, s: f64) -> Self {
        let support = self.support.as_ref().map(|sp| sp.scaled(s));
        let mut m = self.clone();
        m.vertices.iter_mut().for_each(|v| *v *= s);
        m.support = support;
        m
    }

    /// Copy with every vertex mapped by `rot` (assumed orthogonal). The
    /// antipodal pairing is rebuilt from the rotated coordinates.
    pub fn rotated(&self, rot: &nalgebra::Matrix3<f64>) -> Result<Self> {
        let mut vertices = Vec::with_capacity(self.vertices.len());
        let mut done = vec![false; self.vertices.len()];
        vertices.resize(self.vertices.len(), Vec3::zeros());
        for v in 0..self.vertices.len() {
            if done[v] {
                continue;
            }
            let w = self.antipode(v);
            let p = rot * self.vertices[v];
            vertices[v] = p;
            vertices[w] = -p;
            done[v] = true;
            done[w] = true;
        }
        SymmetricConvexMesh::from_parts(vertices, self.triangles.clone(), None)
    }

    /// Rebuilds the triangulation as the convex hull of the vertex set.
    pub fn rehull(&self) -> Result<Self> {
        let m = build_symmetric_hull(&self.vertices)?;
        Ok(m.with_support(self.support.clone()))
    }

    fn orient_outward(&mut self) -> Result<()> {
        for t in self.triangles.iter_mut() {
            if t.iter().any(|&i| i as usize >= self.vertices.len()) {
                return Err(Error::InvalidMesh(format!("triangle {t:?} references a missing vertex")));
            }
            let [a, b, c] = t.map(|i| self.vertices[i as usize]);
            let n = (b - a).cross(&(c - a));
            if n.dot(&(a + b + c)) < 0.0 {
                t.swap(1, 2);
            }
        }
        Ok(())
    }

    /// Checks symmetry, manifoldness, genus and local convexity.
    pub fn validate(&self) -> Result<()> {
        let n = self.vertices.len();
        for v in 0..n {
            let w = self.antipode[v] as usize;
            if w == v || self.antipode[w] as usize != v {
                return Err(Error::Asymmetric(format!("antipode map is not a fixed-point-free involution at {v}")));
            }
            if self.vertices[w] != -self.vertices[v] {
                return Err(Error::Asymmetric(format!("vertex {w} is not the negation of vertex {v}")));
            }
        }

        let mut volume = 0.0;
        for t in &self.triangles {
            let [a, b, c] = t.map(|i| self.vertices[i as usize]);
            volume += a.dot(&b.cross(&c)) / 6.0;
        }
        let diag = self.diagonal();
        if volume <= tau_hull(diag) * diag * diag {
            return Err(Error::FlatBody(format!("enclosed volume {volume:e} is negligible")));
        }

        let keys: std::collections::HashSet<[u32; 3]> = self.triangles.iter().map(|t| sorted_triangle(*t)).collect();
        if let Some(t) =
            self.triangles.iter().find(|t| !keys.contains(&sorted_triangle(t.map(|v| self.antipode[v as usize]))))
        {
            return Err(Error::Asymmetric(format!("triangle {t:?} has no antipodal triangle")));
        }

        let adjacency = self.edge_triangles()?;
        let mut used = vec![false; n];
        self.triangles.iter().flatten().for_each(|&i| used[i as usize] = true);
        if let Some(v) = used.iter().position(|u| !u) {
            return Err(Error::InvalidMesh(format!("vertex {v} is not used by any triangle")));
        }
        let chi = n as i64 - adjacency.len() as i64 + self.triangles.len() as i64;
        if chi != 2 {
            return Err(Error::InvalidMesh(format!("Euler characteristic {chi}, expected 2")));
        }

        let tol = tau_hull(diag);
        for (&(a, b), &[t1, t2]) in &adjacency {
            let w = self.opposite(t2 as usize, a, b);
            let tri = self.triangles[t1 as usize];
            let [p, q, r] = tri.map(|i| self.vertices[i as usize]);
            let normal = (q - p).cross(&(r - p));
            let len = normal.norm();
            if len == 0.0 {
                continue;
            }
            let height = normal.dot(&(self.vertices[w as usize] - p)) / len;
            if height > tol {
                return Err(Error::InvalidMesh(format!("edge ({a}, {b}) is reflex by {height:e}")));
            }
        }
        Ok(())
    }

    /// Map from undirected edge to its two triangles; errors unless every
    /// edge borders exactly two consistently oriented triangles.
    pub(crate) fn edge_triangles(&self) -> Result<HashMap<(u32, u32), [u32; 2]>> {
        let mut directed: HashMap<(u32, u32), u32> = HashMap::with_capacity(3 * self.triangles.len());
        for (ti, t) in self.triangles.iter().enumerate() {
            for e in 0..3 {
                let key = (t[e], t[(e + 1) % 3]);
                if directed.insert(key, ti as u32).is_some() {
                    return Err(Error::InvalidMesh(format!("directed edge {key:?} appears twice")));
                }
            }
        }
        let mut out = HashMap::with_capacity(directed.len() / 2);
        for (&(a, b), &t) in &directed {
            if a < b {
                let Some(&u) = directed.get(&(b, a)) else {
                    return Err(Error::InvalidMesh(format!("edge ({a}, {b}) is on a boundary")));
                };
                out.insert((a, b), [t, u]);
            } else if !directed.contains_key(&(b, a)) {
                return Err(Error::InvalidMesh(format!("edge ({b}, {a}) is on a boundary")));
            }
        }
        Ok(out)
    }

    pub(crate) fn opposite(&self, t: usize, a: u32, b: u32) -> u32 {
        *self.triangles[t].iter().find(|&&v| v != a && v != b).expect("triangle has three vertices")
    }
}

pub(crate) fn sorted_edge(a: u32, b: u32) -> [u32; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

pub(crate) fn bbox_diagonal(points: &[Vec3]) -> f64 {
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in points {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    (hi - lo).norm()
}

fn sorted_triangle(mut t: [u32; 3]) -> [u32; 3] {
    t.sort_unstable();
    t
}

/// Retriangulates coplanar facets so that the triangulation commutes with the
/// antipodal map: each facet's triangles are replaced by the mirror image of
/// the antipodal facet's, whichever comes first.
fn symmetrize_facets(vertices: &[Vec3], triangles: &[[u32; 3]], antipode: &[u32], tol: f64) -> Result<Vec<[u32; 3]>> {
    let keys: std::collections::HashSet<[u32; 3]> = triangles.iter().map(|t| sorted_triangle(*t)).collect();
    let mirror = |t: &[u32; 3]| [antipode[t[0] as usize], antipode[t[2] as usize], antipode[t[1] as usize]];
    if triangles.iter().all(|t| keys.contains(&sorted_triangle(mirror(t)))) {
        return Ok(triangles.to_vec());
    }

    // Union triangles across flat edges.
    let mut parent: Vec<usize> = (0..triangles.len()).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut directed: HashMap<(u32, u32), usize> = HashMap::new();
    for (ti, t) in triangles.iter().enumerate() {
        for e in 0..3 {
            directed.insert((t[e], t[(e + 1) % 3]), ti);
        }
    }
    for (ti, t) in triangles.iter().enumerate() {
        let [p, q, r] = t.map(|i| vertices[i as usize]);
        let n = (q - p).cross(&(r - p));
        let len = n.norm();
        for e in 0..3 {
            let Some(&tj) = directed.get(&(t[(e + 1) % 3], t[e])) else { continue };
            let w = *triangles[tj].iter().find(|&&v| v != t[e] && v != t[(e + 1) % 3]).unwrap();
            if len == 0.0 || (n.dot(&(vertices[w as usize] - p)) / len).abs() <= tol {
                let (a, b) = (find(&mut parent, ti), find(&mut parent, tj));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); triangles.len()];
    for ti in 0..triangles.len() {
        let root = find(&mut parent, ti);
        groups[root].push(ti);
    }
    let vertex_set = |g: &[usize]| {
        let mut vs: Vec<u32> = g.iter().flat_map(|&t| triangles[t]).collect();
        vs.sort_unstable();
        vs.dedup();
        vs
    };
    let by_vertices: HashMap<Vec<u32>, usize> =
        (0..groups.len()).filter(|&g| !groups[g].is_empty()).map(|g| (vertex_set(&groups[g]), g)).collect();

    let mut out: Vec<Option<Vec<[u32; 3]>>> = vec![None; groups.len()];
    for g in 0..groups.len() {
        if groups[g].is_empty() || out[g].is_some() {
            continue;
        }
        let mut anti: Vec<u32> = vertex_set(&groups[g]).iter().map(|&v| antipode[v as usize]).collect();
        anti.sort_unstable();
        let h = *by_vertices.get(&anti).ok_or_else(|| Error::Asymmetric("a facet has no antipodal facet".into()))?;
        let own: Vec<[u32; 3]> = groups[g].iter().map(|&t| triangles[t]).collect();
        out[h] = Some(own.iter().map(mirror).collect());
        out[g] = Some(own);
    }
    Ok(out.into_iter().flatten().flatten().collect())
}

fn antipode_map(vertices: &[Vec3]) -> Result<Vec<u32>> {
    let index: HashMap<[u64; 3], u32> = vertices.iter().enumerate().map(|(i, v)| (point_key(v), i as u32)).collect();
    if index.len() != vertices.len() {
        return Err(Error::InvalidMesh("duplicate vertices".into()));
    }
    vertices
        .iter()
        .enumerate()
        .map(|(i, v)| {
            index
                .get(&point_key(&-v))
                .copied()
                .ok_or_else(|| Error::Asymmetric(format!("vertex {i} at {v:?} has no antipodal partner")))
        })
        .collect()
}

/// Triangulated boundary of `conv(points ∪ −points)`.
///
/// Interior points are discarded; ties within `τ_hull` of a face are resolved
/// so that the retained vertex set stays closed under negation.
pub fn build_symmetric_hull(points: &[Vec3]) -> Result<SymmetricConvexMesh> {
    if points.is_empty() {
        return Err(Error::Empty("no points to hull".into()));
    }
    let mut seen = HashMap::new();
    let mut cloud: Vec<Vec3> = Vec::with_capacity(2 * points.len());
    for p in points.iter().flat_map(|&p| [p, -p]) {
        if !p.iter().all(|c| c.is_finite()) {
            return Err(Error::InvalidArgument("non-finite point".into()));
        }
        if let std::collections::hash_map::Entry::Vacant(e) = seen.entry(point_key(&p)) {
            e.insert(cloud.len());
            cloud.push(p);
        }
    }
    let tol = tau_hull(bbox_diagonal(&cloud));

    for _ in 0..8 {
        let tris = convex_hull(&cloud, tol)?;
        let mut used = vec![false; cloud.len()];
        tris.iter().flatten().for_each(|&i| used[i] = true);
        let partner = |i: usize| seen[&point_key(&-cloud[i])];
        let unmatched: Vec<usize> = (0..cloud.len()).filter(|&i| used[i] && !used[partner(i)]).collect();
        if unmatched.is_empty() {
            let mut remap = vec![u32::MAX; cloud.len()];
            let mut vertices = Vec::new();
            for i in 0..cloud.len() {
                if used[i] {
                    remap[i] = vertices.len() as u32;
                    vertices.push(cloud[i]);
                }
            }
            let triangles = tris.iter().map(|t| t.map(|i| remap[i])).collect();
            return SymmetricConvexMesh::from_parts(vertices, triangles, None);
        }
        // Marginal points sit within tolerance of a face; drop both members
        // of each unmatched pair and hull again.
        let mut drop = vec![false; cloud.len()];
        for i in unmatched {
            drop[i] = true;
            drop[partner(i)] = true;
        }
        cloud = cloud.iter().enumerate().filter(|(i, _)| !drop[*i]).map(|(_, p)| *p).collect();
        seen = cloud.iter().enumerate().map(|(i, p)| (point_key(p), i)).collect();
    }
    Err(Error::Internal("symmetric hull did not stabilise".into()))
}
