//! Approximate medial axis of the covered part of a shadow.

use std::collections::{HashMap, HashSet};

use log::warn;
use spade::{DelaunayTriangulation, Point2, Triangulation};

use crate::geometry::grid::BoxGrid;
use crate::geometry::{point_segment_distance, P2};
use crate::UnionFind;

use super::{ShadowComplex, ShadowError};

/// Planar graph approximating the medial axis.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SkeletonGraph {
    pub nodes: Vec<P2>,
    pub edges: Vec<(usize, usize)>,
    pub prune: f64,
    /// Set when the shadow had no covered faces.
    pub warning: Option<String>,
}

impl SkeletonGraph {
    pub fn betti(&self) -> (usize, usize) {
        let mut uf = UnionFind::new(self.nodes.len());
        for &(a, b) in &self.edges {
            uf.union(a, b);
        }
        let b0 = uf.labels().1;
        (b0, self.edges.len() + b0 - self.nodes.len())
    }

    fn add_node(&mut self, p: P2) -> usize {
        self.nodes.push(p);
        self.nodes.len() - 1
    }
}

/// Whether a point lies in the interior of the covered region.
struct Interior {
    tris: Vec<[P2; 3]>,
    tri_grid: BoxGrid,
    bounds: Vec<(P2, P2)>,
    bound_grid: BoxGrid,
    tol: f64,
}

impl Interior {
    fn new(sc: &ShadowComplex, tol: f64) -> Self {
        let pos = sc.positions();
        let tris: Vec<[P2; 3]> = sc
            .triangles()
            .iter()
            .map(|t| t.vertices.map(|v| pos[v]))
            .collect();
        let boxes: Vec<(P2, P2)> = tris.iter().map(|t| super::bbox(t)).collect();
        let cell = boxes
            .iter()
            .map(|b| (b.1.x - b.0.x).max(b.1.y - b.0.y))
            .sum::<f64>()
            / boxes.len().max(1) as f64;
        let vpos = |v: usize| sc.vertices()[v].pos;
        let bounds: Vec<(P2, P2)> = sc
            .boundary_half_edges()
            .into_iter()
            .map(|(a, b)| (vpos(a), vpos(b)))
            .collect();
        let bound_boxes: Vec<(P2, P2)> =
            bounds.iter().map(|&(a, b)| super::bbox(&[a, b])).collect();
        Interior {
            tri_grid: BoxGrid::build(&boxes, cell.max(1e-9)),
            bound_grid: BoxGrid::build(&bound_boxes, cell.max(1e-9)),
            tris,
            bounds,
            tol,
        }
    }

    fn contains(&self, p: P2) -> bool {
        let in_closed = self.tri_grid.candidates(p).iter().any(|&i| {
            let [a, b, c] = self.tris[i];
            b.sub(a).cross(p.sub(a)) >= 0.0
                && c.sub(b).cross(p.sub(b)) >= 0.0
                && a.sub(c).cross(p.sub(c)) >= 0.0
        });
        if !in_closed {
            return false;
        }
        let t = P2::new(self.tol, self.tol);
        let mut clear = true;
        self.bound_grid.for_each_near(p.sub(t), p.add(t), |i| {
            let (a, b) = self.bounds[i];
            if point_segment_distance(p, a, b) <= self.tol {
                clear = false;
            }
        });
        clear
    }
}

/// Medial axis of the covered region from the Voronoi diagram of boundary
/// samples at the given spacing, with leaf branches shorter than `prune`
/// removed. Bare arrangement edges are appended unchanged.
pub fn medial_axis(
    sc: &ShadowComplex,
    spacing: f64,
    prune: f64,
) -> Result<SkeletonGraph, ShadowError> {
    if !(spacing > 0.0) {
        return Err(ShadowError::Parameter("spacing"));
    }
    if !(prune >= 0.0) {
        return Err(ShadowError::Parameter("prune"));
    }
    let mut sk = SkeletonGraph {
        prune,
        ..Default::default()
    };
    if sc.covered_faces().next().is_none() {
        let msg = "shadow has no covered faces; skeleton is the bare 1-skeleton".to_string();
        warn!("{msg}");
        sk.warning = Some(msg);
        append_edges(&mut sk, sc, &(0..sc.edges().len()).collect::<Vec<_>>());
        return Ok(sk);
    }

    // boundary samples and their adjacency along the boundary
    let mut samples: Vec<P2> = Vec::new();
    let mut vertex_sample: HashMap<usize, usize> = HashMap::new();
    let mut adjacent: HashSet<(usize, usize)> = HashSet::new();
    let mut link = |a: usize, b: usize| {
        adjacent.insert((a.min(b), a.max(b)));
    };
    for (tail, head) in sc.boundary_half_edges() {
        let mut sample_of = |v: usize, samples: &mut Vec<P2>| {
            *vertex_sample.entry(v).or_insert_with(|| {
                samples.push(sc.vertices()[v].pos);
                samples.len() - 1
            })
        };
        let a = sample_of(tail, &mut samples);
        let b = sample_of(head, &mut samples);
        let (pa, pb) = (samples[a], samples[b]);
        let k = (pa.dist(pb) / spacing).ceil().max(1.0) as usize;
        let mut prev = a;
        for j in 1..k {
            samples.push(pa.lerp(pb, j as f64 / k as f64));
            let cur = samples.len() - 1;
            link(prev, cur);
            prev = cur;
        }
        link(prev, b);
    }

    let mut dt: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    let mut handle_sample: HashMap<usize, usize> = HashMap::new();
    for (i, p) in samples.iter().enumerate() {
        if let Ok(h) = dt.insert(Point2::new(p.x, p.y)) {
            handle_sample.entry(h.index()).or_insert(i);
        }
    }

    let (lo, hi) = super::bbox(&samples);
    let tol = 1e-9 * (hi.x - lo.x).max(hi.y - lo.y).max(1e-12);
    let inside = Interior::new(sc, tol);
    // co-circular samples give several Delaunay faces with one circumcenter
    let key = |p: P2| ((p.x / tol).round() as i64, (p.y / tol).round() as i64);
    let mut face_node: HashMap<(i64, i64), usize> = HashMap::new();
    let mut edges = Vec::new();
    for e in dt.undirected_edges() {
        let [v0, v1] = e.vertices();
        let (g0, g1) = (
            handle_sample[&v0.fix().index()],
            handle_sample[&v1.fix().index()],
        );
        if adjacent.contains(&(g0.min(g1), g0.max(g1))) {
            continue;
        }
        let d = e.as_directed();
        let (Some(f0), Some(f1)) = (d.face().as_inner(), d.rev().face().as_inner()) else {
            continue;
        };
        let c0 = f0.circumcenter();
        let c1 = f1.circumcenter();
        let (p0, p1) = (P2::new(c0.x, c0.y), P2::new(c1.x, c1.y));
        if !(inside.contains(p0) && inside.contains(p1) && inside.contains(p0.lerp(p1, 0.5))) {
            continue;
        }
        let mut node = |p: P2, sk: &mut SkeletonGraph| {
            *face_node.entry(key(p)).or_insert_with(|| sk.add_node(p))
        };
        let a = node(p0, &mut sk);
        let b = node(p1, &mut sk);
        if a != b {
            edges.push((a.min(b), a.max(b)));
        }
    }
    edges.sort_unstable();
    edges.dedup();
    sk.edges = edges;
    prune_leaves(&mut sk, prune);
    compact(&mut sk);
    append_edges(&mut sk, sc, &sc.bare_edges());
    Ok(sk)
}

fn append_edges(sk: &mut SkeletonGraph, sc: &ShadowComplex, edges: &[usize]) {
    let mut node_of: HashMap<usize, usize> = HashMap::new();
    for &e in edges {
        let (a, b) = (sc.edges()[e].a, sc.edges()[e].b);
        let na = *node_of
            .entry(a)
            .or_insert_with(|| sk.add_node(sc.vertices()[a].pos));
        let nb = *node_of
            .entry(b)
            .or_insert_with(|| sk.add_node(sc.vertices()[b].pos));
        sk.edges.push((na, nb));
    }
}

/// Repeatedly removes leaf branches (leaf to junction) shorter than `lambda`.
fn prune_leaves(sk: &mut SkeletonGraph, lambda: f64) {
    if lambda <= 0.0 {
        return;
    }
    loop {
        let n = sk.nodes.len();
        let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &(a, b)) in sk.edges.iter().enumerate() {
            adj[a].push(i);
            adj[b].push(i);
        }
        let mut dead = vec![false; sk.edges.len()];
        let mut changed = false;
        for leaf in 0..n {
            if adj[leaf].len() != 1 || dead[adj[leaf][0]] {
                continue;
            }
            let mut path = Vec::new();
            let mut len = 0.0;
            let (mut cur, mut via) = (leaf, adj[leaf][0]);
            let junction = loop {
                path.push(via);
                let (a, b) = sk.edges[via];
                let next = if a == cur { b } else { a };
                len += sk.nodes[cur].dist(sk.nodes[next]);
                if adj[next].len() != 2 {
                    break adj[next].len() >= 3;
                }
                let other = if adj[next][0] == via {
                    adj[next][1]
                } else {
                    adj[next][0]
                };
                cur = next;
                via = other;
                if path.len() > sk.edges.len() {
                    break false;
                }
            };
            if junction && len < lambda && path.iter().all(|&e| !dead[e]) {
                for e in path {
                    dead[e] = true;
                }
                changed = true;
                // degrees changed; rebuild before the next branch
                break;
            }
        }
        if !changed {
            return;
        }
        let mut k = 0;
        sk.edges.retain(|_| {
            k += 1;
            !dead[k - 1]
        });
    }
}

/// Drops isolated nodes and renumbers.
fn compact(sk: &mut SkeletonGraph) {
    let mut used = vec![false; sk.nodes.len()];
    for &(a, b) in &sk.edges {
        used[a] = true;
        used[b] = true;
    }
    let mut map = vec![usize::MAX; sk.nodes.len()];
    let mut nodes = Vec::new();
    for (i, p) in sk.nodes.iter().enumerate() {
        if used[i] {
            map[i] = nodes.len();
            nodes.push(*p);
        }
    }
    sk.nodes = nodes;
    for e in sk.edges.iter_mut() {
        *e = (map[e.0], map[e.1]);
    }
}
