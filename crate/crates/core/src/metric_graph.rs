//! Embedded metric graphs.
//!
//! Edges are polylines between vertices, so `d_G` is a shortest-path metric
//! over the graph whose nodes are vertices plus bend points. Points in the
//! interior of an edge are addressed by arclength and measured through the
//! two polyline nodes around them, which is the same as splitting the edge.

use std::cmp::Ordering;
use std::collections::{BinaryHeap, HashMap};

use thiserror::Error;

use crate::geometry::exact::{relate, SegmentRelation, Snapper};
use crate::geometry::{GeometryError, Point, P2};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate vertex id `{0}`")]
    DuplicateVertex(String),
    #[error("duplicate edge id `{0}`")]
    DuplicateEdge(String),
    #[error("unknown vertex id `{0}`")]
    UnknownVertex(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("A4 violated at vertex `{vertex}`: edges `{e1}` and `{e2}` meet at zero angle, Θ would be 1")]
    Cusp {
        vertex: String,
        e1: String,
        e2: String,
    },
    #[error("arclength {t} outside [0, {len}] on edge {edge}")]
    Parameter { edge: usize, t: f64, len: f64 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Vertex {
    pub id: String,
    pub pos: Point,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Edge {
    pub id: String,
    pub u: usize,
    pub v: usize,
    pub bends: Vec<Point>,
    length: f64,
}

impl Edge {
    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }
}

/// A finite graph embedded in `R^N` with polyline edges.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct EmbeddedGraph {
    dim: usize,
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    vertex_index: HashMap<String, usize>,
}

impl EmbeddedGraph {
    pub fn new(dim: usize) -> Self {
        EmbeddedGraph {
            dim,
            ..Default::default()
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_by_id(&self, id: &str) -> Option<usize> {
        self.vertex_index.get(id).copied()
    }

    pub fn add_vertex(&mut self, id: impl Into<String>, pos: Point) -> Result<usize, GraphError> {
        let id = id.into();
        if self.dim == 0 {
            self.dim = pos.dim();
        }
        if pos.dim() != self.dim {
            return Err(GraphError::Dimension {
                expected: self.dim,
                got: pos.dim(),
            });
        }
        if self.vertex_index.contains_key(&id) {
            return Err(GraphError::DuplicateVertex(id));
        }
        let k = self.vertices.len();
        self.vertex_index.insert(id.clone(), k);
        self.vertices.push(Vertex { id, pos });
        Ok(k)
    }

    pub fn add_edge(
        &mut self,
        id: impl Into<String>,
        u: &str,
        v: &str,
        bends: Vec<Point>,
    ) -> Result<usize, GraphError> {
        let id = id.into();
        if self.edges.iter().any(|e| e.id == id) {
            return Err(GraphError::DuplicateEdge(id));
        }
        let ui = self
            .vertex_by_id(u)
            .ok_or_else(|| GraphError::UnknownVertex(u.to_string()))?;
        let vi = self
            .vertex_by_id(v)
            .ok_or_else(|| GraphError::UnknownVertex(v.to_string()))?;
        if let Some(b) = bends.iter().find(|b| b.dim() != self.dim) {
            return Err(GraphError::Dimension {
                expected: self.dim,
                got: b.dim(),
            });
        }
        let mut e = Edge {
            id,
            u: ui,
            v: vi,
            bends,
            length: 0.0,
        };
        e.length = self
            .polyline_of(&e)
            .windows(2)
            .map(|w| w[0].distance(w[1]))
            .sum();
        self.edges.push(e);
        Ok(self.edges.len() - 1)
    }

    fn polyline_of<'a>(&'a self, e: &'a Edge) -> Vec<&'a Point> {
        let mut out = Vec::with_capacity(e.bends.len() + 2);
        out.push(&self.vertices[e.u].pos);
        out.extend(e.bends.iter());
        out.push(&self.vertices[e.v].pos);
        out
    }

    /// Vertex, bends, vertex.
    pub fn polyline(&self, edge: usize) -> Vec<&Point> {
        self.polyline_of(&self.edges[edge])
    }

    /// Planar copy of an edge polyline. Panics when `N != 2`.
    pub fn polyline2(&self, edge: usize) -> Vec<P2> {
        self.polyline(edge)
            .into_iter()
            .map(|p| p.planar().expect("planar graph"))
            .collect()
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    /// Realization of a graph point in `R^N`.
    pub fn locate(&self, p: GraphPoint) -> Point {
        match p {
            GraphPoint::Vertex(v) => self.vertices[v].pos.clone(),
            GraphPoint::OnEdge { edge, t } => {
                let line = self.polyline(edge);
                let mut acc = 0.0;
                for (k, w) in line.windows(2).enumerate() {
                    let l = w[0].distance(w[1]);
                    if t <= acc + l || k + 2 == line.len() {
                        let s = if l > 0.0 {
                            ((t - acc) / l).clamp(0.0, 1.0)
                        } else {
                            0.0
                        };
                        let c = w[0]
                            .coords()
                            .iter()
                            .zip(w[1].coords())
                            .map(|(a, b)| a + (b - a) * s)
                            .collect();
                        return Point::new(c);
                    }
                    acc += l;
                }
                line[0].clone()
            }
        }
    }

    pub fn graph_point(&self, edge: usize, t: f64) -> Result<GraphPoint, GraphError> {
        let len = self.edges[edge].length;
        if !(0.0..=len).contains(&t) {
            return Err(GraphError::Parameter { edge, t, len });
        }
        Ok(GraphPoint::OnEdge { edge, t })
    }

    /// Points at equal arclength steps of at most `h` along every edge, with
    /// each vertex emitted exactly once. Vertices come first, in index order.
    pub fn sample_points(&self, h: f64) -> Vec<GraphPoint> {
        assert!(h > 0.0);
        let mut out: Vec<GraphPoint> = (0..self.vertices.len()).map(GraphPoint::Vertex).collect();
        for (ei, e) in self.edges.iter().enumerate() {
            let k = (e.length / h).ceil().max(1.0) as usize;
            for j in 1..k {
                out.push(GraphPoint::OnEdge {
                    edge: ei,
                    t: e.length * j as f64 / k as f64,
                });
            }
        }
        out
    }

    /// Vertex-level components as a label per vertex plus the count.
    pub fn components(&self) -> (Vec<usize>, usize) {
        let mut uf = crate::UnionFind::new(self.vertices.len());
        for e in &self.edges {
            uf.union(e.u, e.v);
        }
        uf.labels()
    }

    pub fn is_connected(&self) -> bool {
        !self.vertices.is_empty() && self.components().1 == 1
    }
}

/// A point of `G`: a vertex, or an arclength position along an edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GraphPoint {
    Vertex(usize),
    OnEdge { edge: usize, t: f64 },
}

#[derive(Clone, Copy, PartialEq)]
struct HeapItem(f64, usize);

impl Eq for HeapItem {}

impl Ord for HeapItem {
    fn cmp(&self, o: &Self) -> Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Dijkstra over an adjacency list; unreachable nodes stay at infinity.
pub(crate) fn dijkstra(adj: &[Vec<(usize, f64)>], src: usize) -> Vec<f64> {
    let mut d = vec![f64::INFINITY; adj.len()];
    let mut heap = BinaryHeap::new();
    d[src] = 0.0;
    heap.push(HeapItem(0.0, src));
    while let Some(HeapItem(du, u)) = heap.pop() {
        if du > d[u] {
            continue;
        }
        for &(v, w) in &adj[u] {
            let nd = du + w;
            if nd < d[v] {
                d[v] = nd;
                heap.push(HeapItem(nd, v));
            }
        }
    }
    d
}

/// The intrinsic metric `d_G`.
#[derive(Clone, Debug)]
pub struct GraphMetric {
    /// Polyline node index of every edge vertex/bend, per edge.
    edge_nodes: Vec<Vec<usize>>,
    /// Cumulative arclength at each polyline node, per edge.
    edge_cum: Vec<Vec<f64>>,
    n_nodes: usize,
    dist: Vec<f64>,
}

/// Builds the all-pairs length metric of `G`.
pub fn length_metric(g: &EmbeddedGraph) -> GraphMetric {
    let nv = g.vertices.len();
    let mut n_nodes = nv;
    let mut edge_nodes = Vec::with_capacity(g.edges.len());
    let mut edge_cum = Vec::with_capacity(g.edges.len());
    let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nv];
    for e in &g.edges {
        let line = g.polyline_of(e);
        let mut nodes = vec![e.u];
        for _ in &e.bends {
            nodes.push(n_nodes);
            n_nodes += 1;
            adj.push(Vec::new());
        }
        nodes.push(e.v);
        let mut cum = vec![0.0];
        for (k, w) in line.windows(2).enumerate() {
            let l = w[0].distance(w[1]);
            cum.push(cum[k] + l);
            adj[nodes[k]].push((nodes[k + 1], l));
            adj[nodes[k + 1]].push((nodes[k], l));
        }
        edge_nodes.push(nodes);
        edge_cum.push(cum);
    }
    use rayon::prelude::*;
    let rows: Vec<Vec<f64>> = (0..n_nodes)
        .into_par_iter()
        .map(|s| dijkstra(&adj, s))
        .collect();
    GraphMetric {
        edge_nodes,
        edge_cum,
        n_nodes,
        dist: rows.concat(),
    }
}

impl GraphMetric {
    fn node_dist(&self, a: usize, b: usize) -> f64 {
        self.dist[a * self.n_nodes + b]
    }

    /// Polyline segment index containing `t` and the offsets to its two ends.
    fn anchors(&self, p: GraphPoint) -> ([(usize, f64); 2], Option<(usize, usize, f64)>) {
        match p {
            GraphPoint::Vertex(v) => ([(v, 0.0), (v, 0.0)], None),
            GraphPoint::OnEdge { edge, t } => {
                let cum = &self.edge_cum[edge];
                let k = match cum.binary_search_by(|c| c.total_cmp(&t)) {
                    Ok(i) => i.min(cum.len() - 2),
                    Err(i) => i.clamp(1, cum.len() - 1) - 1,
                };
                let nodes = &self.edge_nodes[edge];
                (
                    [(nodes[k], t - cum[k]), (nodes[k + 1], cum[k + 1] - t)],
                    Some((edge, k, t)),
                )
            }
        }
    }

    /// `d_G(a, b)`; infinite across components.
    pub fn distance(&self, a: GraphPoint, b: GraphPoint) -> f64 {
        let (aa, sa) = self.anchors(a);
        let (ab, sb) = self.anchors(b);
        let mut best = f64::INFINITY;
        if let (Some((ea, ka, ta)), Some((eb, kb, tb))) = (sa, sb) {
            if ea == eb && ka == kb {
                best = (ta - tb).abs();
            }
        }
        for (na, da) in aa {
            for (nb, db) in ab {
                best = best.min(da + self.node_dist(na, nb) + db);
            }
        }
        best
    }

    /// Distance between two graph vertices.
    pub fn vertex_distance(&self, u: usize, v: usize) -> f64 {
        self.node_dist(u, v)
    }

    /// Maximum of `d_G` over pairs of polyline nodes and vertices.
    /// Points interior to polyline segments can exceed it by at most the
    /// longest polyline segment.
    pub fn node_diameter(&self) -> f64 {
        self.dist.iter().copied().fold(0.0, f64::max)
    }

    /// Pairwise distances of `pts`, row-major.
    pub fn pairwise(&self, pts: &[GraphPoint]) -> Vec<f64> {
        use rayon::prelude::*;
        let n = pts.len();
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).map(|j| self.distance(pts[i], pts[j])).collect())
            .collect();
        rows.concat()
    }
}

/// Geodesic diameter estimated on a sample of spacing `h`; exact up to `h`.
pub fn geodesic_diameter(g: &EmbeddedGraph, h: f64) -> f64 {
    let m = length_metric(g);
    let pts = g.sample_points(h);
    let mut best = 0.0f64;
    for (i, &a) in pts.iter().enumerate() {
        for &b in &pts[i + 1..] {
            best = best.max(m.distance(a, b));
        }
    }
    best
}

/// Length of the shortest simple cycle, or infinity for a forest.
pub fn systole(g: &EmbeddedGraph) -> f64 {
    let nv = g.vertices.len();
    let mut best = f64::INFINITY;
    for (skip, e) in g.edges.iter().enumerate() {
        if e.is_loop() {
            best = best.min(e.length);
            continue;
        }
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); nv];
        for (k, f) in g.edges.iter().enumerate() {
            if k != skip && !f.is_loop() {
                adj[f.u].push((f.v, f.length));
                adj[f.v].push((f.u, f.length));
            }
        }
        best = best.min(e.length + dijkstra(&adj, e.u)[e.v]);
    }
    best
}

/// Unit tangent directions of every edge end at each vertex.
fn edge_end_tangents(g: &EmbeddedGraph) -> Vec<Vec<(usize, P2)>> {
    let mut ends: Vec<Vec<(usize, P2)>> = vec![Vec::new(); g.vertices.len()];
    for (ei, _) in g.edges.iter().enumerate() {
        let line = g.polyline2(ei);
        let n = line.len();
        let e = &g.edges[ei];
        let d0 = line[1].sub(line[0]);
        let d1 = line[n - 2].sub(line[n - 1]);
        ends[e.u].push((ei, d0.scale(1.0 / d0.norm())));
        ends[e.v].push((ei, d1.scale(1.0 / d1.norm())));
    }
    ends
}

/// Smallest angle between two edge ends sharing a vertex, or `None` when no
/// vertex has two edge ends. Planar graphs only.
pub fn min_incident_angle(g: &EmbeddedGraph) -> Result<Option<f64>, GraphError> {
    let mut best: Option<f64> = None;
    for (vi, ends) in edge_end_tangents(g).into_iter().enumerate() {
        for i in 0..ends.len() {
            for j in i + 1..ends.len() {
                let (a, b) = (ends[i].1, ends[j].1);
                let ang = a.cross(b).abs().atan2(a.dot(b));
                if ang <= 0.0 {
                    return Err(GraphError::Cusp {
                        vertex: g.vertices[vi].id.clone(),
                        e1: g.edges[ends[i].0].id.clone(),
                        e2: g.edges[ends[j].0].id.clone(),
                    });
                }
                best = Some(best.map_or(ang, |b: f64| b.min(ang)));
            }
        }
    }
    Ok(best)
}

/// `Θ = max{1/2, cos²(½·min angle)}`; `1/2` when no two edge ends meet.
pub fn theta(g: &EmbeddedGraph) -> Result<f64, GraphError> {
    Ok(match min_incident_angle(g)? {
        None => 0.5,
        Some(a) => theta_of_angle(a),
    })
}

pub fn theta_of_angle(angle: f64) -> f64 {
    let c = (0.5 * angle).cos();
    (c * c).max(0.5)
}

/// `(β0, β1)` of the graph as a 1-complex.
pub fn betti_graph(g: &EmbeddedGraph) -> (usize, usize) {
    let b0 = g.components().1;
    (b0, g.edges.len() + b0 - g.vertices.len())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Homotopy,
    Geometric,
}

impl std::str::FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "homotopy" => Ok(Mode::Homotopy),
            "geometric" => Ok(Mode::Geometric),
            _ => Err(format!(
                "unknown mode `{s}` (expected homotopy or geometric)"
            )),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Homotopy => "homotopy",
            Mode::Geometric => "geometric",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A1: no vertices.
    Empty,
    /// A1: a non-finite coordinate.
    NonFinite { vertex_or_edge: String },
    /// A1: an edge of zero total length.
    ZeroLength { edge: String },
    /// A1: more than one component.
    Disconnected { components: usize },
    /// Geometric mode needs `N = 2`.
    NotPlanar { dim: usize },
    /// A2: two edges sharing two vertices.
    SharedVertices { e1: String, e2: String },
    /// A3: consecutive coincident polyline points.
    DegeneratePiece { edge: String },
    /// A4: zero angle between edges at a vertex.
    ZeroAngle {
        vertex: String,
        e1: String,
        e2: String,
    },
    /// The drawing is not an embedding.
    EdgesIntersect { e1: String, e2: String },
    /// Exact predicates could not represent the coordinates.
    Geometry(GeometryError),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Empty => write!(f, "A1: graph has no vertices"),
            Violation::NonFinite { vertex_or_edge } => {
                write!(f, "A1: non-finite coordinate in `{vertex_or_edge}`")
            }
            Violation::ZeroLength { edge } => write!(f, "A1: edge `{edge}` has zero length"),
            Violation::Disconnected { components } => {
                write!(f, "A1: graph has {components} components")
            }
            Violation::NotPlanar { dim } => write!(f, "geometric mode needs N = 2, got {dim}"),
            Violation::SharedVertices { e1, e2 } => {
                write!(f, "A2: edges `{e1}` and `{e2}` share two vertices")
            }
            Violation::DegeneratePiece { edge } => {
                write!(f, "A3: edge `{edge}` has a zero-length polyline piece")
            }
            Violation::ZeroAngle { vertex, e1, e2 } => write!(
                f,
                "A4: edges `{e1}` and `{e2}` meet at zero angle at vertex `{vertex}`"
            ),
            Violation::EdgesIntersect { e1, e2 } => {
                write!(
                    f,
                    "edges `{e1}` and `{e2}` intersect away from a shared vertex"
                )
            }
            Violation::Geometry(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct AssumptionReport {
    pub violations: Vec<Violation>,
}

impl AssumptionReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the standing assumptions for the requested mode.
pub fn validate_assumptions(g: &EmbeddedGraph, mode: Mode) -> AssumptionReport {
    let mut v = Vec::new();
    if g.vertices.is_empty() {
        v.push(Violation::Empty);
        return AssumptionReport { violations: v };
    }
    for x in &g.vertices {
        if !x.pos.is_finite() {
            v.push(Violation::NonFinite {
                vertex_or_edge: x.id.clone(),
            });
        }
    }
    for e in &g.edges {
        if e.bends.iter().any(|b| !b.is_finite()) {
            v.push(Violation::NonFinite {
                vertex_or_edge: e.id.clone(),
            });
        }
        if !(e.length > 0.0) {
            v.push(Violation::ZeroLength { edge: e.id.clone() });
        }
    }
    let comps = g.components().1;
    if comps > 1 {
        v.push(Violation::Disconnected { components: comps });
    }
    if mode == Mode::Geometric && v.is_empty() {
        if g.dim != 2 {
            v.push(Violation::NotPlanar { dim: g.dim });
        } else {
            geometric_checks(g, &mut v);
        }
    }
    AssumptionReport { violations: v }
}

fn geometric_checks(g: &EmbeddedGraph, v: &mut Vec<Violation>) {
    for (i, a) in g.edges.iter().enumerate() {
        for b in &g.edges[i + 1..] {
            let mut sa = [a.u, a.v];
            let mut sb = [b.u, b.v];
            sa.sort_unstable();
            sb.sort_unstable();
            if sa[0] != sa[1] && sa == sb {
                v.push(Violation::SharedVertices {
                    e1: a.id.clone(),
                    e2: b.id.clone(),
                });
            }
        }
    }
    let mut degenerate = vec![false; g.edges.len()];
    for (ei, e) in g.edges.iter().enumerate() {
        if g.polyline2(ei).windows(2).any(|w| w[0] == w[1]) {
            degenerate[ei] = true;
            v.push(Violation::DegeneratePiece { edge: e.id.clone() });
        }
    }
    if degenerate.iter().any(|d| *d) {
        return;
    }
    if let Err(GraphError::Cusp { vertex, e1, e2 }) = min_incident_angle(g) {
        v.push(Violation::ZeroAngle { vertex, e1, e2 });
    }
    match embedding_conflicts(g) {
        Ok(pairs) => v.extend(pairs.into_iter().map(|(a, b)| Violation::EdgesIntersect {
            e1: g.edges[a].id.clone(),
            e2: g.edges[b].id.clone(),
        })),
        Err(e) => v.push(Violation::Geometry(e)),
    }
}

/// Graph vertex at end `end` (0 or 1) of piece `k` of `n`, if it is one.
fn piece_end_vertex(g: &EmbeddedGraph, e: usize, k: usize, n: usize, end: usize) -> Option<usize> {
    match end {
        0 if k == 0 => Some(g.edges[e].u),
        1 if k + 1 == n => Some(g.edges[e].v),
        _ => None,
    }
}

/// Pairs of edges whose polylines meet other than at a common graph vertex.
fn embedding_conflicts(g: &EmbeddedGraph) -> Result<Vec<(usize, usize)>, GeometryError> {
    let sn = Snapper::default();
    // (edge, piece index, number of pieces, endpoints)
    let mut pieces = Vec::new();
    for ei in 0..g.edges.len() {
        let line = g.polyline2(ei);
        let n = line.len() - 1;
        for k in 0..n {
            let a = sn.snap_point(line[k].x, line[k].y)?;
            let b = sn.snap_point(line[k + 1].x, line[k + 1].y)?;
            pieces.push((ei, k, n, a, b));
        }
    }
    pieces.sort_by_key(|p| p.3.x.min(p.4.x));
    let mut out = Vec::new();
    for i in 0..pieces.len() {
        let (ea, ka, na, p, q) = pieces[i];
        let max_x = p.x.max(q.x);
        for &(eb, kb, nb, r, s) in &pieces[i + 1..] {
            if r.x.min(s.x) > max_x {
                break;
            }
            let rel = relate(p, q, r, s);
            if rel == SegmentRelation::Disjoint {
                continue;
            }
            let allowed = match rel {
                SegmentRelation::Contact {
                    on_pq: [None, None],
                    on_rs: [None, None],
                    ..
                } if (p == r) as u8 + (p == s) as u8 + (q == r) as u8 + (q == s) as u8 == 1 => {
                    // The only contact is a shared endpoint. It is fine between
                    // consecutive pieces of one polyline, or at a graph vertex.
                    let shared = [p, q]
                        .into_iter()
                        .enumerate()
                        .find_map(|(ia, x)| [r, s].iter().position(|y| *y == x).map(|ib| (ia, ib)));
                    match shared {
                        None => false,
                        Some((ia, ib)) => {
                            let neighbors = ea == eb
                                && ((kb == ka + 1 && ia == 1 && ib == 0)
                                    || (ka == kb + 1 && ia == 0 && ib == 1));
                            let va = piece_end_vertex(g, ea, ka, na, ia);
                            let vb = piece_end_vertex(g, eb, kb, nb, ib);
                            neighbors || (va.is_some() && va == vb)
                        }
                    }
                }
                _ => false,
            };
            if !allowed {
                let pair = (ea.min(eb), ea.max(eb));
                if !out.contains(&pair) {
                    out.push(pair);
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn triangle345() -> EmbeddedGraph {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(3., 0.)).unwrap();
        g.add_vertex("c", pt(3., 4.)).unwrap();
        g.add_edge("ab", "a", "b", vec![]).unwrap();
        g.add_edge("bc", "b", "c", vec![]).unwrap();
        g.add_edge("ca", "c", "a", vec![]).unwrap();
        g
    }

    #[test]
    fn length_metric_examples() {
        let g = triangle345();
        let m = length_metric(&g);
        assert_eq!(
            m.distance(GraphPoint::Vertex(0), GraphPoint::Vertex(1)),
            3.0
        );
        assert_eq!(
            m.distance(GraphPoint::Vertex(2), GraphPoint::Vertex(2)),
            0.0
        );
        let p = GraphPoint::OnEdge { edge: 0, t: 1.0 };
        assert_eq!(m.distance(p, p), 0.0);
        let q = GraphPoint::OnEdge { edge: 2, t: 4.0 };
        assert!((m.distance(p, q) - 2.0).abs() < 1e-12);

        let mut path = EmbeddedGraph::new(2);
        path.add_vertex("a", pt(0., 0.)).unwrap();
        path.add_vertex("b", pt(1., 0.)).unwrap();
        path.add_vertex("c", pt(1., 1.)).unwrap();
        path.add_edge("1", "a", "b", vec![]).unwrap();
        path.add_edge("2", "b", "c", vec![]).unwrap();
        let m = length_metric(&path);
        assert_eq!(
            m.distance(GraphPoint::Vertex(0), GraphPoint::Vertex(2)),
            2.0
        );
    }

    #[test]
    fn distances_across_components_are_infinite() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(5., 0.)).unwrap();
        let m = length_metric(&g);
        assert!(m
            .distance(GraphPoint::Vertex(0), GraphPoint::Vertex(1))
            .is_infinite());
    }

    #[test]
    fn systole_examples() {
        assert_eq!(systole(&triangle345()), 12.0);
        let mut tree = EmbeddedGraph::new(2);
        tree.add_vertex("a", pt(0., 0.)).unwrap();
        tree.add_vertex("b", pt(1., 0.)).unwrap();
        tree.add_edge("e", "a", "b", vec![]).unwrap();
        assert!(systole(&tree).is_infinite());
    }

    #[test]
    fn systole_of_a_loop_is_its_length() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("o", pt(0., 0.)).unwrap();
        g.add_edge("l", "o", "o", vec![pt(1., 0.), pt(1., 1.), pt(0., 1.)])
            .unwrap();
        assert_eq!(systole(&g), 4.0);
        assert_eq!(betti_graph(&g), (1, 1));
    }

    #[test]
    fn theta_examples() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(1., 0.)).unwrap();
        g.add_edge("e", "a", "b", vec![]).unwrap();
        assert_eq!(theta(&g).unwrap(), 0.5);
        g.add_vertex("c", pt(0., 1.)).unwrap();
        g.add_edge("f", "a", "c", vec![]).unwrap();
        assert!((theta(&g).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn cusp_is_an_error() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(2., 0.)).unwrap();
        g.add_vertex("c", pt(1., 1.)).unwrap();
        g.add_edge("e", "a", "b", vec![]).unwrap();
        g.add_edge("f", "a", "c", vec![pt(1., 0.)]).unwrap();
        assert!(matches!(theta(&g), Err(GraphError::Cusp { .. })));
    }

    #[test]
    fn betti_examples() {
        assert_eq!(betti_graph(&triangle345()), (1, 1));
        let mut fig8 = EmbeddedGraph::new(2);
        fig8.add_vertex("o", pt(0., 0.)).unwrap();
        fig8.add_edge("l", "o", "o", vec![pt(-1., 1.), pt(-1., -1.)])
            .unwrap();
        fig8.add_edge("r", "o", "o", vec![pt(1., 1.), pt(1., -1.)])
            .unwrap();
        assert_eq!(betti_graph(&fig8), (1, 2));
    }

    #[test]
    fn double_edge_violates_a2() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(1., 0.)).unwrap();
        g.add_edge("e", "a", "b", vec![pt(0.5, 0.5)]).unwrap();
        g.add_edge("f", "a", "b", vec![pt(0.5, -0.5)]).unwrap();
        let r = validate_assumptions(&g, Mode::Geometric);
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::SharedVertices { .. })));
        assert!(validate_assumptions(&g, Mode::Homotopy).ok());
    }

    #[test]
    fn crossing_edges_are_not_an_embedding() {
        let mut g = EmbeddedGraph::new(2);
        for (id, x, y) in [("a", -1., 0.), ("b", 1., 0.), ("c", 0., -1.), ("d", 0., 1.)] {
            g.add_vertex(id, pt(x, y)).unwrap();
        }
        g.add_edge("ab", "a", "b", vec![]).unwrap();
        g.add_edge("cd", "c", "d", vec![]).unwrap();
        g.add_edge("bd", "b", "d", vec![]).unwrap();
        let r = validate_assumptions(&g, Mode::Geometric);
        assert_eq!(
            r.violations,
            vec![Violation::EdgesIntersect {
                e1: "ab".into(),
                e2: "cd".into()
            }]
        );
    }

    #[test]
    fn self_crossing_polyline_is_reported() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(0., 2.)).unwrap();
        g.add_edge("e", "a", "b", vec![pt(2., 2.), pt(2., 0.)])
            .unwrap();
        let r = validate_assumptions(&g, Mode::Geometric);
        assert!(matches!(r.violations[0], Violation::EdgesIntersect { .. }));
    }

    #[test]
    fn disconnected_graph_fails_a1() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(1., 0.)).unwrap();
        let r = validate_assumptions(&g, Mode::Homotopy);
        assert_eq!(
            r.violations,
            vec![Violation::Disconnected { components: 2 }]
        );
    }

    #[test]
    fn sample_points_emit_each_vertex_once() {
        let g = triangle345();
        let pts = g.sample_points(1.0);
        assert_eq!(pts.len(), 12);
        assert_eq!(
            pts.iter()
                .filter(|p| matches!(p, GraphPoint::Vertex(_)))
                .count(),
            3
        );
    }

    #[test]
    fn locate_interpolates_along_bends() {
        let mut g = EmbeddedGraph::new(2);
        g.add_vertex("a", pt(0., 0.)).unwrap();
        g.add_vertex("b", pt(1., 1.)).unwrap();
        g.add_edge("e", "a", "b", vec![pt(1., 0.)]).unwrap();
        assert_eq!(
            g.locate(GraphPoint::OnEdge { edge: 0, t: 1.5 }),
            pt(1.0, 0.5)
        );
        assert_eq!(
            g.locate(GraphPoint::OnEdge { edge: 0, t: 2.0 }),
            pt(1.0, 1.0)
        );
    }
}
