//! Systole of the quotient, the systolic loop, and the distances of the
//! second proof.
//!
//! A non-contractible loop on the quotient lifts to a path from some `x` to
//! `−x`, so `sys = min_x d(x, −x)`.

use std::collections::BinaryHeap;

use serde::{Deserialize, Serialize};

use super::graph::GeodesicGraph;
use crate::tolerances::{DIAMETER_SAMPLES, EXHAUSTIVE_NODES, SYSTOLE_SEEDS};
use crate::{par, Error, Result};

/// Seeds whose antipodal paths are re-anchored in the anchored search.
const REANCHORED_SEEDS: usize = 4;
const REANCHOR_ROUNDS: usize = 12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Systole {
    pub sys: f64,
    pub witness: usize,
    /// Shortest path from the witness to its antipode.
    pub path: Vec<u32>,
    /// Whether every node was tried.
    pub exhaustive: bool,
}

/// `d(x, −x)` and a shortest path, or `None` if it is at least `bound`.
///
/// Uses `d(y, −x) = d(−y, x)`: a shortest path `x → −x` has an arc `(y, z)`
/// straddling its midpoint, and then `d(x, −x) = d(x, y) + w(y, z) + d(x, −z)`
/// with both terms at most `d/2`. One search from `x` up to radius `d/2`
/// therefore suffices.
pub fn antipodal_distance(g: &GeodesicGraph, x: usize, bound: f64) -> Option<(f64, Vec<u32>)> {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred = vec![u32::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    dist[x] = 0.0;
    heap.push(HeapEntry(0.0, x as u32));
    let mut best = bound;
    let mut bridge: Option<(usize, usize)> = None;
    while let Some(HeapEntry(d, u)) = heap.pop() {
        let u = u as usize;
        if done[u] {
            continue;
        }
        if 2.0 * d > best {
            break;
        }
        done[u] = true;
        for (v, w) in g.neighbours(u) {
            let av = g.antipode(v);
            if done[av] {
                let cand = d + w + dist[av];
                if cand < best || (cand == best && bridge.is_some_and(|(bu, bv)| (u, v) < (bu, bv))) {
                    best = cand;
                    bridge = Some((u, v));
                }
            }
            let nd = d + w;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = u as u32;
                heap.push(HeapEntry(nd, v as u32));
            }
        }
    }
    let (y, z) = bridge?;
    let chain = |mut v: usize| {
        let mut p = vec![v as u32];
        while pred[v] != u32::MAX {
            v = pred[v] as usize;
            p.push(v as u32);
        }
        p.reverse();
        p
    };
    // x → y, then z, then the mirror of (x → −z) walked backwards.
    let mut path = chain(y);
    let tail = chain(g.antipode(z));
    path.extend(tail.iter().rev().map(|&v| g.antipode(v as usize) as u32));
    Some((best, path))
}

#[derive(Clone, Copy, PartialEq)]
struct HeapEntry(f64, u32);

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other.0.total_cmp(&self.0).then_with(|| other.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Systole with the default search strategy: exhaustive on small graphs,
/// anchored otherwise.
pub fn systole(g: &GeodesicGraph) -> Result<Systole> {
    if g.node_count() <= EXHAUSTIVE_NODES {
        systole_exhaustive(g)
    } else {
        systole_anchored(g, SYSTOLE_SEEDS)
    }
}

/// Tries every antipodal pair, pruning with the best value so far.
pub fn systole_exhaustive(g: &GeodesicGraph) -> Result<Systole> {
    let mut best: Option<(f64, usize, Vec<u32>)> = None;
    for x in 0..g.node_count() {
        if g.antipode(x) < x {
            continue;
        }
        let bound = best.as_ref().map_or(f64::INFINITY, |b| b.0);
        if let Some((d, path)) = antipodal_distance(g, x, bound) {
            if d < bound {
                best = Some((d, x, path));
            }
        }
    }
    let (sys, witness, path) = best.ok_or_else(|| Error::Internal("graph has no antipodal path".into()))?;
    Ok(Systole { sys, witness, path, exhaustive: true })
}

/// Anchored search.
///
/// Starts from `seeds` nodes spread out in the quotient (farthest-point
/// sampling with the distance `min(|p − q|, |p + q|)`). For the best few
/// seeds, the search re-anchors at the nodes a quarter, half and three
/// quarters along the current antipodal path: every node on the closed loop
/// `path ∪ −path` has an antipodal distance no larger than the current
/// value, so each round can only decrease it. Converges to a loop whose
/// points are all locally optimal among these anchors.
pub fn systole_anchored(g: &GeodesicGraph, seeds: usize) -> Result<Systole> {
    let seeds = quotient_farthest_points(g, seeds.max(1));
    let first = par::map(&seeds, |&x| antipodal_distance(g, x, f64::INFINITY).map(|(d, p)| (d, x, p)));
    let mut starts: Vec<(f64, usize, Vec<u32>)> = first.into_iter().flatten().collect();
    if starts.is_empty() {
        return Err(Error::Internal("graph has no antipodal path".into()));
    }
    starts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    starts.truncate(REANCHORED_SEEDS);
    let finals = par::map(&starts, |start| {
        let mut cur = start.clone();
        for _ in 0..REANCHOR_ROUNDS {
            let anchors = anchors_along(g, &cur.2);
            let mut improved = false;
            for c in anchors {
                if let Some((d, p)) = antipodal_distance(g, c, cur.0) {
                    if d < cur.0 {
                        cur = (d, c, p);
                        improved = true;
                    }
                }
            }
            if !improved {
                break;
            }
        }
        cur
    });
    let (sys, witness, path) =
        finals.into_iter().min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1))).expect("at least one start");
    // Report the lower-index member of the antipodal pair.
    let (witness, path) = if g.antipode(witness) < witness {
        (g.antipode(witness), path.iter().map(|&v| g.antipode(v as usize) as u32).collect())
    } else {
        (witness, path)
    };
    Ok(Systole { sys, witness, path, exhaustive: false })
}

fn anchors_along(g: &GeodesicGraph, path: &[u32]) -> Vec<usize> {
    let mut cum = vec![0.0];
    for w in path.windows(2) {
        let step = g.arc_weight(w[0] as usize, w[1] as usize).unwrap_or(0.0);
        cum.push(cum.last().unwrap() + step);
    }
    let total = *cum.last().unwrap();
    let mut out: Vec<usize> = [0.5, 0.25, 0.75]
        .iter()
        .map(|f| {
            let i = cum.partition_point(|&c| c < f * total).min(path.len() - 1);
            path[i] as usize
        })
        .collect();
    out.dedup();
    out
}

fn quotient_farthest_points(g: &GeodesicGraph, k: usize) -> Vec<usize> {
    let pos = g.positions();
    let n = pos.len();
    let start = (0..n).max_by(|&a, &b| pos[a].norm().total_cmp(&pos[b].norm()).then(b.cmp(&a))).unwrap();
    let start = start.min(g.antipode(start));
    let mut chosen = vec![start];
    let qdist = |a: usize, b: usize| (pos[a] - pos[b]).norm().min((pos[a] + pos[b]).norm());
    let mut gap: Vec<f64> = (0..n).map(|v| qdist(v, start)).collect();
    while chosen.len() < k.min(n / 2) {
        let next =
            (0..n).filter(|&v| v < g.antipode(v)).max_by(|&a, &b| gap[a].total_cmp(&gap[b]).then(b.cmp(&a))).unwrap();
        if gap[next] == 0.0 {
            break;
        }
        chosen.push(next);
        for v in 0..n {
            gap[v] = gap[v].min(qdist(v, next));
        }
    }
    chosen
}

/// Closed loop `path ∪ −path`, starting and ending at the witness. Its
/// length is `2·sys` because the antipodal map preserves arc weights.
pub fn systolic_loop(g: &GeodesicGraph, s: &Systole) -> Vec<u32> {
    let mut lp = s.path.clone();
    lp.extend(s.path.iter().skip(1).map(|&v| g.antipode(v as usize) as u32));
    lp
}

/// `D`: the largest distance from the loop, and a node attaining it.
pub fn max_distance_to_loop(g: &GeodesicGraph, lp: &[u32]) -> Result<(f64, usize)> {
    let sources: Vec<usize> = lp.iter().map(|&v| v as usize).collect();
    let f = g.distance_field(&sources)?;
    let (far, &d) =
        f.dist.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))).expect("non-empty graph");
    Ok((d, far))
}

/// Lower bound on the graph diameter.
///
/// Small graphs: the exact maximum eccentricity. Otherwise `samples`
/// farthest-point iterations starting at a vertex of largest norm, whose
/// eccentricity is already at least `d(v, −v) ≥ 2|v| = 2R`.
pub fn intrinsic_diameter(g: &GeodesicGraph, samples: usize) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidArgument("diameter needs at least one sample".into()));
    }
    let n = g.node_count();
    if n <= EXHAUSTIVE_NODES {
        let nodes: Vec<usize> = (0..n).filter(|&v| v < g.antipode(v)).collect();
        let ecc = par::map(&nodes, |&v| eccentricity(g, v).0);
        return Ok(ecc.into_iter().fold(0.0, f64::max));
    }
    let pos = g.positions();
    let mut v = (0..n).max_by(|&a, &b| pos[a].norm().total_cmp(&pos[b].norm()).then(b.cmp(&a))).unwrap();
    let mut diam: f64 = 0.0;
    for _ in 0..samples {
        let (e, far) = eccentricity(g, v);
        diam = diam.max(e);
        if far == v {
            break;
        }
        v = far;
    }
    Ok(diam)
}

/// Default-sample diameter.
pub fn diameter(g: &GeodesicGraph) -> Result<f64> {
    intrinsic_diameter(g, DIAMETER_SAMPLES)
}

fn eccentricity(g: &GeodesicGraph, v: usize) -> (f64, usize) {
    let f = g.dijkstra(&[v], None, f64::INFINITY);
    let (far, &d) = f.dist.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0))).unwrap();
    (d, far)
}
