//! Exact arrangement of lattice segments.
//!
//! Every vertex is either an input node (a lattice point) or a crossing of
//! two segment interiors, represented by its parameter on one parent
//! segment. Coincident event points are merged by comparing parameters
//! along each segment, so concurrent crossings and crossings through nodes
//! collapse to a single vertex without ever computing coordinates.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::HashMap;

use crate::geometry::exact::{cmp_products, orient, relate, IPoint, IVec, Ratio, SegmentRelation};
use crate::geometry::grid::BoxGrid;
use crate::geometry::P2;
use crate::UnionFind;

/// Input segment between two distinct nodes.
#[derive(Clone, Debug)]
pub(crate) struct Seg {
    pub a: usize,
    pub b: usize,
}

/// Where an arrangement vertex sits.
#[derive(Clone, Copy, Debug)]
pub(crate) enum XVertex {
    Node(usize),
    /// Point at parameter `t` along segment `seg`, crossing segment `other`.
    Crossing {
        seg: usize,
        other: usize,
        t: Ratio,
    },
}

#[derive(Clone, Debug)]
pub(crate) struct Arrangement {
    pub nodes: Vec<IPoint>,
    pub segs: Vec<Seg>,
    pub verts: Vec<XVertex>,
    /// Pieces as `(tail, head, parent segment)`; the direction from tail to
    /// head agrees with the parent segment.
    pub edges: Vec<(usize, usize, usize)>,
    /// Further segments carrying a piece, as `(edge, segment, same
    /// direction)`, for collinear overlaps.
    pub shared: Vec<(usize, usize, bool)>,
    /// Transversely crossing segment pairs.
    pub crossings: Vec<(usize, usize)>,
    /// Outgoing half-edges of every vertex in counter-clockwise order.
    pub out: Vec<Vec<u32>>,
    pub next: Vec<u32>,
    /// Cycle index of every half-edge.
    pub cycle_of: Vec<u32>,
    /// First half-edge of every cycle.
    pub cycles: Vec<u32>,
    /// Component label of every vertex.
    pub comp_of: Vec<usize>,
    pub n_comp: usize,
    /// Outer cycle of every component; `None` for an isolated vertex.
    pub outer: Vec<Option<u32>>,
    /// Lexicographically smallest node of every component.
    pub comp_anchor: Vec<usize>,
}

impl Arrangement {
    pub fn seg_points(&self, s: usize) -> (IPoint, IPoint) {
        (self.nodes[self.segs[s].a], self.nodes[self.segs[s].b])
    }

    pub fn origin(&self, h: u32) -> usize {
        let (a, b, _) = self.edges[(h / 2) as usize];
        if h.is_multiple_of(2) {
            a
        } else {
            b
        }
    }

    pub fn head(&self, h: u32) -> usize {
        self.origin(h ^ 1)
    }

    /// Exact direction of a half-edge.
    pub fn dir(&self, h: u32) -> IVec {
        let (_, _, s) = self.edges[(h / 2) as usize];
        let (p, q) = self.seg_points(s);
        let d = q.sub(p);
        if h.is_multiple_of(2) {
            d
        } else {
            d.neg()
        }
    }

    /// A lattice point on the line carrying half-edge `h`.
    pub fn line_point(&self, h: u32) -> IPoint {
        self.seg_points(self.edges[(h / 2) as usize].2).0
    }

    /// Floating-point position of a vertex, in lattice units.
    pub fn approx(&self, v: usize) -> P2 {
        match self.verts[v] {
            XVertex::Node(n) => P2::new(self.nodes[n].x as f64, self.nodes[n].y as f64),
            XVertex::Crossing { seg, t, .. } => {
                let (p, q) = self.seg_points(seg);
                let tf = t.to_f64();
                P2::new(
                    p.x as f64 + (q.x - p.x) as f64 * tf,
                    p.y as f64 + (q.y - p.y) as f64 * tf,
                )
            }
        }
    }

    /// Sign of `orient(a, b, v)` for lattice `a`, `b`.
    pub fn orient_vertex(&self, a: IPoint, b: IPoint, v: usize) -> Ordering {
        match self.verts[v] {
            XVertex::Node(n) => orient(a, b, self.nodes[n]).cmp(&0),
            XVertex::Crossing { seg, t, .. } => {
                let (p, q) = self.seg_points(seg);
                let ab = b.sub(a);
                let x = ab.cross(p.sub(a));
                let y = ab.cross(q.sub(p));
                // sign(x + t*y) with t = num/den, den > 0
                cmp_products(x, t.den, -t.num, y)
            }
        }
    }

    /// Sign of `v.y - y0`.
    pub fn cmp_y(&self, v: usize, y0: i64) -> Ordering {
        match self.verts[v] {
            XVertex::Node(n) => self.nodes[n].y.cmp(&y0),
            XVertex::Crossing { seg, t, .. } => {
                let (p, q) = self.seg_points(seg);
                cmp_products((p.y - y0) as i128, t.den, -t.num, (q.y - p.y) as i128)
            }
        }
    }

    /// Half-edges of a cycle in traversal order.
    pub fn cycle_half_edges(&self, c: usize) -> Vec<u32> {
        let start = self.cycles[c];
        let mut out = vec![start];
        let mut h = self.next[start as usize];
        while h != start {
            out.push(h);
            h = self.next[h as usize];
        }
        out
    }

    /// Winding number of the cycle around lattice point `p`, which must not
    /// lie on the cycle.
    pub fn winding(&self, c: usize, p: IPoint) -> i64 {
        let mut wn = 0;
        for h in self.cycle_half_edges(c) {
            let (a, b) = (self.origin(h), self.head(h));
            let side = self.dir(h).cross(p.sub(self.line_point(h))).cmp(&0);
            let ay = self.cmp_y(a, p.y);
            let by = self.cmp_y(b, p.y);
            if ay != Ordering::Greater {
                if by == Ordering::Greater && side == Ordering::Greater {
                    wn += 1;
                }
            } else if by != Ordering::Greater && side == Ordering::Less {
                wn -= 1;
            }
        }
        wn
    }

    /// Approximate signed area of a cycle, in squared lattice units.
    pub fn cycle_area(&self, c: usize) -> f64 {
        let hs = self.cycle_half_edges(c);
        let o = self.approx(self.origin(hs[0]));
        hs.iter()
            .map(|&h| {
                let a = self.approx(self.origin(h)).sub(o);
                let b = self.approx(self.head(h)).sub(o);
                a.cross(b)
            })
            .sum::<f64>()
            * 0.5
    }
}

/// Builds the arrangement of `segs` over `nodes`. Nodes not on any segment
/// become isolated vertices unless they lie inside a segment.
pub(crate) fn build(nodes: Vec<IPoint>, segs: Vec<Seg>) -> Arrangement {
    let n_nodes = nodes.len();
    let mut events: Vec<Vec<(Ratio, u32)>> = segs
        .iter()
        .map(|s| vec![(Ratio::ZERO, s.a as u32), (Ratio::ONE, s.b as u32)])
        .collect();
    let mut crossings: Vec<(usize, usize)> = Vec::new();
    let mut crossing_param: Vec<Ratio> = Vec::new();

    let boxes: Vec<(P2, P2)> = segs
        .iter()
        .map(|s| {
            let (p, q) = (nodes[s.a], nodes[s.b]);
            (
                P2::new(p.x.min(q.x) as f64, p.y.min(q.y) as f64),
                P2::new(p.x.max(q.x) as f64, p.y.max(q.y) as f64),
            )
        })
        .collect();
    let mean_len = if segs.is_empty() {
        1.0
    } else {
        boxes
            .iter()
            .map(|b| (b.1.x - b.0.x).max(b.1.y - b.0.y))
            .sum::<f64>()
            / segs.len() as f64
    };
    let grid = BoxGrid::build(&boxes, mean_len.max(1.0));
    let mut stamp = vec![usize::MAX; segs.len()];
    let mut near = Vec::new();
    for (i, bi) in boxes.iter().enumerate() {
        near.clear();
        grid.for_each_near(bi.0, bi.1, |j| {
            if j > i && stamp[j] != i {
                stamp[j] = i;
                let bj = &boxes[j];
                if bj.0.x <= bi.1.x && bi.0.x <= bj.1.x && bj.0.y <= bi.1.y && bi.0.y <= bj.1.y {
                    near.push(j);
                }
            }
        });
        near.sort_unstable();
        for &j in &near {
            let (p, q) = (nodes[segs[i].a], nodes[segs[i].b]);
            let (r, s) = (nodes[segs[j].a], nodes[segs[j].b]);
            match relate(p, q, r, s) {
                SegmentRelation::Disjoint => {}
                SegmentRelation::Crossing { t, u } => {
                    let id = (n_nodes + crossings.len()) as u32;
                    crossings.push((i, j));
                    crossing_param.push(t);
                    events[i].push((t, id));
                    events[j].push((u, id));
                }
                SegmentRelation::Contact { on_pq, on_rs, .. } => {
                    for (k, t) in on_pq.into_iter().enumerate() {
                        if let Some(t) = t {
                            let v = if k == 0 { segs[j].a } else { segs[j].b };
                            events[i].push((t, v as u32));
                        }
                    }
                    for (k, t) in on_rs.into_iter().enumerate() {
                        if let Some(t) = t {
                            let v = if k == 0 { segs[i].a } else { segs[i].b };
                            events[j].push((t, v as u32));
                        }
                    }
                }
            }
        }
    }

    // Nodes without segments may still sit inside a segment.
    let mut has_seg = vec![false; n_nodes];
    for s in &segs {
        has_seg[s.a] = true;
        has_seg[s.b] = true;
    }
    let lonely: Vec<usize> = (0..n_nodes).filter(|&v| !has_seg[v]).collect();
    if !lonely.is_empty() && !segs.is_empty() {
        for &v in &lonely {
            let x = nodes[v];
            let pt = P2::new(x.x as f64, x.y as f64);
            let mut hits = Vec::new();
            grid.for_each_near(pt, pt, |s| hits.push(s));
            hits.sort_unstable();
            hits.dedup();
            for s in hits {
                let (p, q) = (nodes[segs[s].a], nodes[segs[s].b]);
                if orient(p, q, x) == 0 {
                    let d = q.sub(p);
                    let num = x.sub(p).dot(d);
                    let den = d.dot(d);
                    if num > 0 && num < den {
                        events[s].push((Ratio::new(num, den), v as u32));
                    }
                }
            }
        }
    }

    let n_cross = crossings.len();
    let mut uf = UnionFind::new(n_nodes + n_cross);
    for ev in events.iter_mut() {
        ev.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        for w in ev.windows(2) {
            if w[0].0 == w[1].0 {
                uf.union(w[0].1 as usize, w[1].1 as usize);
            }
        }
    }
    // Vertex ids: nodes keep theirs, crossing classes follow in id order.
    let mut rep_vertex = vec![u32::MAX; n_nodes + n_cross];
    let mut verts: Vec<XVertex> = (0..n_nodes).map(XVertex::Node).collect();
    for v in 0..n_nodes {
        let r = uf.find(v);
        rep_vertex[r] = v as u32;
    }
    for c in 0..n_cross {
        let r = uf.find(n_nodes + c);
        if rep_vertex[r] == u32::MAX {
            rep_vertex[r] = verts.len() as u32;
            let (seg, other) = crossings[c];
            verts.push(XVertex::Crossing {
                seg,
                other,
                t: crossing_param[c],
            });
        }
    }
    let vertex_of = |uf: &mut UnionFind, x: u32| rep_vertex[uf.find(x as usize)] as usize;

    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut edge_index: HashMap<(usize, usize), usize> = HashMap::new();
    let mut shared = Vec::new();
    for (s, ev) in events.iter().enumerate() {
        let mut prev: Option<usize> = None;
        for &(_, x) in ev {
            let v = vertex_of(&mut uf, x);
            if let Some(p) = prev {
                if p != v {
                    match edge_index.entry((p.min(v), p.max(v))) {
                        Entry::Vacant(slot) => {
                            slot.insert(edges.len());
                            edges.push((p, v, s));
                        }
                        Entry::Occupied(e) => {
                            let e = *e.get();
                            shared.push((e, s, edges[e].0 == p));
                        }
                    }
                }
            }
            prev = Some(v);
        }
    }
    drop(events);

    let nv = verts.len();
    let mut arr = Arrangement {
        nodes,
        segs,
        verts,
        edges,
        shared,
        crossings,
        out: vec![Vec::new(); nv],
        next: Vec::new(),
        cycle_of: Vec::new(),
        cycles: Vec::new(),
        comp_of: Vec::new(),
        n_comp: 0,
        outer: Vec::new(),
        comp_anchor: Vec::new(),
    };
    for (e, &(a, b, _)) in arr.edges.iter().enumerate() {
        arr.out[a].push(2 * e as u32);
        arr.out[b].push(2 * e as u32 + 1);
    }
    let mut out = std::mem::take(&mut arr.out);
    for list in out.iter_mut() {
        list.sort_by(|&x, &y| arr.dir(x).angle_cmp(arr.dir(y)));
    }
    arr.out = out;
    let nh = arr.edges.len() * 2;
    let mut pos = vec![0u32; nh];
    for list in &arr.out {
        for (k, &h) in list.iter().enumerate() {
            pos[h as usize] = k as u32;
        }
    }
    let mut next = vec![0u32; nh];
    for h in 0..nh as u32 {
        let v = arr.head(h);
        let list = &arr.out[v];
        let deg = list.len();
        let twin_pos = pos[(h ^ 1) as usize] as usize;
        next[h as usize] = list[(twin_pos + deg - 1) % deg];
    }
    arr.next = next;
    let mut cycle_of = vec![u32::MAX; nh];
    let mut cycles = Vec::new();
    for h in 0..nh {
        if cycle_of[h] != u32::MAX {
            continue;
        }
        let c = cycles.len() as u32;
        cycles.push(h as u32);
        let mut x = h;
        while cycle_of[x] == u32::MAX {
            cycle_of[x] = c;
            x = arr.next[x] as usize;
        }
    }
    arr.cycle_of = cycle_of;
    arr.cycles = cycles;

    let mut cuf = UnionFind::new(nv);
    for &(a, b, _) in &arr.edges {
        cuf.union(a, b);
    }
    let (comp_of, n_comp) = cuf.labels();
    let mut anchor = vec![usize::MAX; n_comp];
    for v in 0..nv {
        if let XVertex::Node(n) = arr.verts[v] {
            let c = comp_of[v];
            let better = anchor[c] == usize::MAX || {
                let cur = arr.nodes[anchor[c]];
                let p = arr.nodes[n];
                (p.x, p.y) < (cur.x, cur.y)
            };
            if better {
                anchor[c] = v;
            }
        }
    }
    let mut outer = vec![None; n_comp];
    for c in 0..n_comp {
        let v = anchor[c];
        let list = &arr.out[v];
        if list.is_empty() {
            continue;
        }
        // The outside of the component lies in direction -x from its
        // lexicographically smallest vertex; the half-edge just clockwise of
        // that direction has the outer face on its left.
        let upper: Vec<u32> = list
            .iter()
            .copied()
            .filter(|&h| {
                let d = arr.dir(h);
                d.y > 0 || (d.y == 0 && d.x > 0)
            })
            .collect();
        let h = *upper.last().unwrap_or_else(|| list.last().unwrap());
        outer[c] = Some(arr.cycle_of[h as usize]);
    }
    arr.comp_of = comp_of;
    arr.n_comp = n_comp;
    arr.outer = outer;
    arr.comp_anchor = anchor;
    arr
}
