//! Steiner-point graph approximating the intrinsic metric of a polyhedral
//! surface from above.
//!
//! Nodes are the mesh vertices plus `s` equally spaced points on every mesh
//! edge. Arcs join any two nodes of a triangle that do not lie on one edge
//! (a straight chord through the triangle), consecutive nodes along an edge,
//! and — when `s ≥ 1` — nodes of two adjacent triangles whose unfolded chord
//! crosses the shared edge. Every arc is the length of an actual surface path,
//! so graph distances never undercut geodesic distances.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::geom::SymmetricConvexMesh;
use crate::{par, Error, Result, Vec3};

/// Immutable weighted graph in compressed sparse row form.
#[derive(Clone, Debug)]
pub struct GeodesicGraph {
    positions: Vec<Vec3>,
    antipode: Vec<u32>,
    offsets: Vec<usize>,
    targets: Vec<u32>,
    weights: Vec<f64>,
    mesh_vertices: usize,
    steiner: usize,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry(f64, u32);

impl Eq for Entry {}

impl Ord for Entry {
    // Min-heap on (distance, node).
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortest-path tree from a set of sources.
#[derive(Clone, Debug)]
pub struct DistanceField {
    pub dist: Vec<f64>,
    /// Predecessor on a shortest path, `u32::MAX` at sources and unreached
    /// nodes.
    pub pred: Vec<u32>,
}

impl DistanceField {
    /// Node path from the nearest source to `target`.
    pub fn path_to(&self, target: usize) -> Vec<u32> {
        let mut path = vec![target as u32];
        let mut v = target;
        while self.pred[v] != u32::MAX {
            v = self.pred[v] as usize;
            path.push(v as u32);
        }
        path.reverse();
        path
    }
}

impl GeodesicGraph {
    /// Builds the graph with `steiner` points per mesh edge.
    pub fn build(m: &SymmetricConvexMesh, steiner: usize) -> Result<Self> {
        let adjacency = m.edge_triangles()?;
        let edges = m.edges();
        let nv = m.vertices().len();
        let s = steiner;
        let edge_index: std::collections::HashMap<[u32; 2], usize> =
            edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();

        // Steiner positions; the antipodal edge's points are exact negations.
        let mut positions = m.vertices().to_vec();
        positions.resize(nv + s * edges.len(), Vec3::zeros());
        let mut antipode: Vec<u32> = m.antipodes().to_vec();
        antipode.resize(nv + s * edges.len(), u32::MAX);
        for (ei, &[a, b]) in edges.iter().enumerate() {
            let (aa, ab) = (m.antipode(a as usize) as u32, m.antipode(b as usize) as u32);
            let anti_edge = [aa.min(ab), aa.max(ab)];
            let ej = edge_index[&anti_edge];
            let reversed = aa > ab;
            for k in 0..s {
                let kj = if reversed { s - 1 - k } else { k };
                antipode[nv + ei * s + k] = (nv + ej * s + kj) as u32;
                if ei < ej {
                    let t = (k + 1) as f64 / (s + 1) as f64;
                    let p = m.vertex(a as usize) * (1.0 - t) + m.vertex(b as usize) * t;
                    positions[nv + ei * s + k] = p;
                    positions[nv + ej * s + kj] = -p;
                }
            }
        }

        // Nodes along an edge in order from its smaller to its larger vertex.
        let edge_nodes = |a: u32, b: u32| -> Vec<u32> {
            let ei = edge_index[&[a.min(b), a.max(b)]];
            let mut v: Vec<u32> = std::iter::once(a.min(b))
                .chain((0..s).map(|k| (nv + ei * s + k) as u32))
                .chain(std::iter::once(a.max(b)))
                .collect();
            if a > b {
                v.reverse();
            }
            v
        };

        // Arcs inside each triangle.
        let tri_arcs = par::map(m.triangles(), |&[a, b, c]| {
            let sides = [edge_nodes(a, b), edge_nodes(b, c), edge_nodes(c, a)];
            let mut out: Vec<(u32, u32, f64)> = Vec::new();
            for side in &sides {
                for w in side.windows(2) {
                    out.push(arc(&positions, w[0], w[1]));
                }
            }
            for i in 0..3 {
                for j in i + 1..3 {
                    for &p in &sides[i] {
                        for &q in &sides[j] {
                            if p != q && !sides[i].contains(&q) && !sides[j].contains(&p) {
                                out.push(arc(&positions, p, q));
                            }
                        }
                    }
                }
            }
            out
        });

        // Unfolded chords across each interior edge.
        let pairs: Vec<((u32, u32), [u32; 2])> = if s == 0 {
            Vec::new()
        } else {
            let mut v: Vec<_> = adjacency.iter().map(|(&k, &t)| (k, t)).collect();
            v.sort_unstable_by_key(|(k, _)| *k);
            v
        };
        let cross_arcs = par::map(&pairs, |&((a, b), [t1, t2])| {
            let w = m.opposite(t1 as usize, a, b);
            let z = m.opposite(t2 as usize, a, b);
            let near: Vec<u32> = [edge_nodes(b, w), edge_nodes(w, a)].concat();
            let far: Vec<u32> = [edge_nodes(a, z), edge_nodes(z, b)].concat();
            let pa = positions[a as usize];
            let axis = positions[b as usize] - pa;
            let len = axis.norm();
            let e = axis / len;
            let flat = |p: u32, sign: f64| {
                let d = positions[p as usize] - pa;
                let x = d.dot(&e);
                (x, sign * (d - e * x).norm())
            };
            let mut out = Vec::new();
            for &p in near.iter().filter(|&&p| p != a && p != b) {
                let (xp, yp) = flat(p, 1.0);
                for &q in far.iter().filter(|&&q| q != a && q != b) {
                    let (xq, yq) = flat(q, -1.0);
                    if yp <= 0.0 || yq >= 0.0 {
                        continue;
                    }
                    let cross = xp + (xq - xp) * yp / (yp - yq);
                    if cross > 0.0 && cross < len {
                        let (u, v) = (p.min(q), p.max(q));
                        out.push((u, v, (xp - xq).hypot(yp - yq)));
                    }
                }
            }
            out
        });

        let mut arcs: Vec<(u32, u32, f64)> = tri_arcs.into_iter().chain(cross_arcs).flatten().collect();
        arcs.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
        arcs.dedup_by(|later, first| (later.0, later.1) == (first.0, first.1));

        // Make the antipodal map an exact automorphism. Chords through a
        // vertex sit on the boundary of the crossing test and may survive on
        // one side only; they are valid paths, so the mirror is added. Each
        // arc then takes the smaller of its own weight and its mirror's.
        let key_of = |u: u32, v: u32| (u.min(v), u.max(v));
        if antipode.contains(&u32::MAX) {
            return Err(Error::Asymmetric("triangulation is not invariant under the antipodal map".into()));
        }
        let missing: Vec<(u32, u32, f64)> = arcs
            .iter()
            .filter_map(|&(u, v, w)| {
                let k = key_of(antipode[u as usize], antipode[v as usize]);
                arcs.binary_search_by(|x| (x.0, x.1).cmp(&k)).is_err().then_some((k.0, k.1, w))
            })
            .collect();
        if !missing.is_empty() {
            arcs.extend(missing);
            arcs.sort_unstable_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)).then(x.2.total_cmp(&y.2)));
            arcs.dedup_by(|later, first| (later.0, later.1) == (first.0, first.1));
        }
        let mirrored: Vec<f64> = arcs
            .iter()
            .map(|&(u, v, w)| {
                let k = key_of(antipode[u as usize], antipode[v as usize]);
                let i = arcs.binary_search_by(|x| (x.0, x.1).cmp(&k)).expect("mirror arc present");
                w.min(arcs[i].2)
            })
            .collect();
        for (arc, w) in arcs.iter_mut().zip(mirrored) {
            arc.2 = w;
        }

        let n = positions.len();
        let mut degree = vec![0usize; n + 1];
        for &(u, v, _) in &arcs {
            degree[u as usize + 1] += 1;
            degree[v as usize + 1] += 1;
        }
        for i in 0..n {
            degree[i + 1] += degree[i];
        }
        let offsets = degree;
        let mut fill = offsets.clone();
        let mut targets = vec![0u32; 2 * arcs.len()];
        let mut weights = vec![0.0; 2 * arcs.len()];
        for &(u, v, w) in &arcs {
            for (x, y) in [(u, v), (v, u)] {
                let slot = fill[x as usize];
                targets[slot] = y;
                weights[slot] = w;
                fill[x as usize] += 1;
            }
        }
        Ok(GeodesicGraph { positions, antipode, offsets, targets, weights, mesh_vertices: nv, steiner: s })
    }

    pub fn node_count(&self) -> usize {
        self.positions.len()
    }

    /// Number of undirected arcs.
    pub fn arc_count(&self) -> usize {
        self.targets.len() / 2
    }

    pub fn mesh_vertex_count(&self) -> usize {
        self.mesh_vertices
    }

    pub fn steiner(&self) -> usize {
        self.steiner
    }

    pub fn position(&self, v: usize) -> Vec3 {
        self.positions[v]
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn antipode(&self, v: usize) -> usize {
        self.antipode[v] as usize
    }

    /// `(neighbour, weight)` pairs of `v`.
    pub fn neighbours(&self, v: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let r = self.offsets[v]..self.offsets[v + 1];
        self.targets[r.clone()].iter().zip(&self.weights[r]).map(|(&t, &w)| (t as usize, w))
    }

    pub fn max_arc_length(&self) -> f64 {
        self.weights.iter().copied().fold(0.0, f64::max)
    }

    pub fn arc_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.neighbours(u).find(|&(t, _)| t == v).map(|(_, w)| w)
    }

    /// Same topology with new weights `f(u, v, old)`. The map must be
    /// symmetric in `u, v` for the result to be a valid undirected graph.
    pub fn reweighted(&self, f: impl Fn(usize, usize, f64) -> f64 + Sync) -> Self {
        let nodes: Vec<usize> = (0..self.node_count()).collect();
        let rows = par::map(&nodes, |&u| self.neighbours(u).map(|(v, w)| f(u, v, w)).collect::<Vec<f64>>());
        let mut g = self.clone();
        g.weights = rows.into_iter().flatten().collect();
        g
    }

    /// Same topology with node positions replaced (used to push nodes onto a
    /// curved surface).
    pub fn with_positions(mut self, positions: Vec<Vec3>) -> Result<Self> {
        if positions.len() != self.positions.len() {
            return Err(Error::InvalidArgument("position count mismatch".into()));
        }
        self.positions = positions;
        Ok(self)
    }

    /// Multi-source Dijkstra.
    pub fn distance_field(&self, sources: &[usize]) -> Result<DistanceField> {
        if sources.is_empty() {
            return Err(Error::Empty("distance field needs at least one source".into()));
        }
        Ok(self.dijkstra(sources, None, f64::INFINITY))
    }

    /// Dijkstra that stops once `target` is settled or every remaining
    /// distance reaches `bound`.
    pub(crate) fn dijkstra(&self, sources: &[usize], target: Option<usize>, bound: f64) -> DistanceField {
        let n = self.node_count();
        let mut dist = vec![f64::INFINITY; n];
        let mut pred = vec![u32::MAX; n];
        let mut done = vec![false; n];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Entry(0.0, s as u32));
        }
        while let Some(Entry(d, u)) = heap.pop() {
            let u = u as usize;
            if done[u] {
                continue;
            }
            if d >= bound {
                break;
            }
            done[u] = true;
            if Some(u) == target {
                break;
            }
            for (v, w) in self.neighbours(u) {
                let nd = d + w;
                if nd < dist[v] || (nd == dist[v] && (u as u32) < pred[v] && !done[v]) {
                    dist[v] = nd;
                    pred[v] = u as u32;
                    heap.push(Entry(nd, v as u32));
                }
            }
        }
        DistanceField { dist, pred }
    }

    /// `d(u, v)`.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.dijkstra(&[u], Some(v), f64::INFINITY).dist[v]
    }

    /// Total weight of a node path; `None` if two consecutive nodes are not
    /// adjacent.
    pub fn path_length(&self, path: &[u32]) -> Option<f64> {
        path.windows(2).map(|w| self.arc_weight(w[0] as usize, w[1] as usize)).sum()
    }

    /// Whether every node is reachable from node 0.
    pub fn is_connected(&self) -> bool {
        self.dijkstra(&[0], None, f64::INFINITY).dist.iter().all(|d| d.is_finite())
    }
}

fn arc(positions: &[Vec3], p: u32, q: u32) -> (u32, u32, f64) {
    (p.min(q), p.max(q), (positions[p as usize] - positions[q as usize]).norm())
}
