//! Planar shadows of complexes.
//!
//! [`project`] builds the exact arrangement of the projected edges and tags
//! every bounded face as covered or not. Betti numbers come straight from the
//! arrangement counts; [`triangulate`] offers an independent Euler
//! characteristic through ear clipping.

mod arrangement;
pub mod hausdorff;
pub mod lifting;
pub mod medial_axis;
pub mod svg;
pub mod triangulate;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::complex::{BettiVector, FlagComplex};
use crate::geometry::exact::{orient, IPoint, Ratio, Snapper};
use crate::geometry::grid::BoxGrid;
use crate::geometry::{GeometryError, DEFAULT_SNAP_DIGITS, P2};
use crate::sampling::PointCloud;
use crate::UnionFind;

use arrangement::{Arrangement, Seg, XVertex};

pub use hausdorff::{shadow_hausdorff, shadow_hausdorff_detail, HausdorffEstimate};
pub use lifting::{check_lifting, check_lifting_projected, LiftingReport};
pub use medial_axis::{medial_axis, SkeletonGraph};
pub use svg::{render_svg, Overlays};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ShadowError {
    #[error("shadow needs planar coordinates, got dimension {0}")]
    NotPlanar(usize),
    #[error("complex has {complex} vertices but {coords} coordinates were given")]
    VertexCount { complex: usize, coords: usize },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error("{0} must be positive")]
    Parameter(&'static str),
}

/// Arrangement vertex origin.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum VertexKind {
    /// Projection of a complex vertex.
    Original(usize),
    /// Transverse crossing of two projected edges. `t` is the exact
    /// parameter along `first`, measured from its lower-indexed endpoint.
    Crossing {
        first: (usize, usize),
        second: (usize, usize),
        t: Ratio,
    },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowVertex {
    pub kind: VertexKind,
    pub pos: P2,
}

/// Piece of a projected edge between consecutive arrangement vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowEdge {
    pub a: usize,
    pub b: usize,
    pub parent: (usize, usize),
}

/// Bounded face of the arrangement.
#[derive(Clone, Debug, PartialEq)]
pub struct ShadowFace {
    /// Boundary vertex cycle, counter-clockwise.
    pub boundary: Vec<usize>,
    /// Index of a 2-simplex whose projection contains the face.
    pub covered_by: Option<usize>,
    /// Outer boundary cycles of components nested directly inside the face.
    pub holes: Vec<Vec<usize>>,
    pub component: usize,
}

impl ShadowFace {
    pub fn is_covered(&self) -> bool {
        self.covered_by.is_some()
    }
}

/// Projected triangle in counter-clockwise order, with its simplex index.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ShadowTriangle {
    pub simplex: usize,
    pub vertices: [usize; 3],
}

#[derive(Clone, Debug)]
pub struct ShadowComplex {
    snapper: Snapper,
    positions: Vec<P2>,
    arr: Arrangement,
    seg_edges: Vec<Vec<(usize, usize)>>,
    vertices: Vec<ShadowVertex>,
    edges: Vec<ShadowEdge>,
    faces: Vec<ShadowFace>,
    face_of_cycle: Vec<Option<usize>>,
    /// Face enclosing each component, if any.
    hole_parent: Vec<Option<usize>>,
    triangles: Vec<ShadowTriangle>,
}

/// Projects `k` with the given planar vertex coordinates.
pub fn project(k: &FlagComplex, coords: &PointCloud) -> Result<ShadowComplex, ShadowError> {
    project_with(k, coords, Snapper::new(DEFAULT_SNAP_DIGITS))
}

pub fn project_with(
    k: &FlagComplex,
    coords: &PointCloud,
    snapper: Snapper,
) -> Result<ShadowComplex, ShadowError> {
    if coords.dim() != 2 {
        return Err(ShadowError::NotPlanar(coords.dim()));
    }
    if coords.len() != k.vertex_count() {
        return Err(ShadowError::VertexCount {
            complex: k.vertex_count(),
            coords: coords.len(),
        });
    }
    let positions = coords.planar();
    let mut nodes: Vec<IPoint> = Vec::new();
    let mut node_at: HashMap<IPoint, usize> = HashMap::new();
    let mut node_of = Vec::with_capacity(positions.len());
    let mut node_rep = Vec::new();
    for (v, p) in positions.iter().enumerate() {
        let ip = snapper.snap_point(p.x, p.y)?;
        let id = *node_at.entry(ip).or_insert_with(|| {
            nodes.push(ip);
            node_rep.push(v);
            nodes.len() - 1
        });
        node_of.push(id);
    }

    let mut segs = Vec::new();
    let mut seg_edges: Vec<Vec<(usize, usize)>> = Vec::new();
    let mut seg_at: HashMap<(usize, usize), usize> = HashMap::new();
    for (u, v) in k.edges() {
        let (a, b) = (node_of[u], node_of[v]);
        if a == b {
            continue;
        }
        let s = *seg_at.entry((a.min(b), a.max(b))).or_insert_with(|| {
            segs.push(Seg { a, b });
            seg_edges.push(Vec::new());
            segs.len() - 1
        });
        seg_edges[s].push((u, v));
    }

    let mut triangles = Vec::new();
    if k.top_dim() >= 2 {
        for (t, s) in k.simplices(2).enumerate() {
            let [a, b, c] = [s[0] as usize, s[1] as usize, s[2] as usize];
            let o = orient(nodes[node_of[a]], nodes[node_of[b]], nodes[node_of[c]]);
            match o.cmp(&0) {
                Ordering::Greater => triangles.push(ShadowTriangle {
                    simplex: t,
                    vertices: [a, b, c],
                }),
                Ordering::Less => triangles.push(ShadowTriangle {
                    simplex: t,
                    vertices: [a, c, b],
                }),
                Ordering::Equal => {}
            }
        }
    }

    let arr = arrangement::build(nodes, segs);

    let vertices: Vec<ShadowVertex> = (0..arr.verts.len())
        .map(|v| {
            let a = arr.approx(v);
            let pos = P2::new(a.x / snapper.scale(), a.y / snapper.scale());
            let kind = match arr.verts[v] {
                XVertex::Node(n) => VertexKind::Original(node_rep[n]),
                XVertex::Crossing { seg, other, t } => VertexKind::Crossing {
                    first: seg_edges[seg][0],
                    second: seg_edges[other][0],
                    t,
                },
            };
            ShadowVertex { kind, pos }
        })
        .collect();
    let edges: Vec<ShadowEdge> = arr
        .edges
        .iter()
        .map(|&(a, b, s)| ShadowEdge {
            a,
            b,
            parent: seg_edges[s][0],
        })
        .collect();

    let mut is_outer = vec![false; arr.cycles.len()];
    for c in arr.outer.iter().flatten() {
        is_outer[*c as usize] = true;
    }
    let mut face_of_cycle = vec![None; arr.cycles.len()];
    let mut faces = Vec::new();
    let mut face_cycle = Vec::new();
    for c in 0..arr.cycles.len() {
        if is_outer[c] {
            continue;
        }
        face_of_cycle[c] = Some(faces.len());
        face_cycle.push(c);
        let hs = arr.cycle_half_edges(c);
        faces.push(ShadowFace {
            boundary: hs.iter().map(|&h| arr.origin(h)).collect(),
            covered_by: None,
            holes: Vec::new(),
            component: arr.comp_of[arr.origin(hs[0])],
        });
    }

    let tri_pts: Vec<[IPoint; 3]> = triangles
        .iter()
        .map(|t| t.vertices.map(|v| arr.nodes[node_of[v]]))
        .collect();
    let tri_boxes: Vec<(P2, P2)> = tri_pts
        .iter()
        .map(|p| {
            let xs = p.map(|q| q.x as f64);
            let ys = p.map(|q| q.y as f64);
            let lo = P2::new(
                xs.iter().copied().fold(f64::INFINITY, f64::min),
                ys.iter().copied().fold(f64::INFINITY, f64::min),
            );
            let hi = P2::new(
                xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
                ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            );
            let pad = 1.0 + 1e-9 * (lo.x.abs() + lo.y.abs() + hi.x.abs() + hi.y.abs());
            (
                P2::new(lo.x - pad, lo.y - pad),
                P2::new(hi.x + pad, hi.y + pad),
            )
        })
        .collect();
    if !triangles.is_empty() {
        let cell = tri_boxes
            .iter()
            .map(|b| (b.1.x - b.0.x).max(b.1.y - b.0.y))
            .sum::<f64>()
            / tri_boxes.len() as f64;
        let grid = BoxGrid::build(&tri_boxes, cell.max(1.0));
        let covering = |h: u32| -> Vec<u32> {
            let at = arr.approx(arr.origin(h));
            grid.candidates(at)
                .iter()
                .map(|&t| t as u32)
                .filter(|&t| left_face_in_triangle(&arr, h, &tri_pts[t as usize]))
                .collect()
        };
        let cover = coverage(&arr, &triangles, &node_of, &seg_at, covering);
        for (f, &c) in face_cycle.iter().enumerate() {
            faces[f].covered_by = cover[c].map(|t| triangles[t as usize].simplex);
        }
    }

    let mut hole_parent = vec![None; arr.n_comp];
    if arr.n_comp > 1 {
        let boxes: Vec<(P2, P2)> = face_cycle
            .iter()
            .map(|&c| {
                let pts: Vec<P2> = arr
                    .cycle_half_edges(c)
                    .iter()
                    .map(|&h| arr.approx(arr.origin(h)))
                    .collect();
                bbox(&pts)
            })
            .collect();
        let areas: Vec<f64> = face_cycle
            .iter()
            .map(|&c| arr.cycle_area(c).abs())
            .collect();
        let cell = boxes
            .iter()
            .map(|b| (b.1.x - b.0.x).max(b.1.y - b.0.y))
            .sum::<f64>()
            / boxes.len().max(1) as f64;
        let grid = BoxGrid::build(&boxes, cell.max(1.0));
        for comp in 0..arr.n_comp {
            let anchor = arr.comp_anchor[comp];
            let p = match arr.verts[anchor] {
                XVertex::Node(n) => arr.nodes[n],
                XVertex::Crossing { .. } => unreachable!("anchors are nodes"),
            };
            let pf = P2::new(p.x as f64, p.y as f64);
            let mut best: Option<usize> = None;
            for &f in grid.candidates(pf) {
                if faces[f].component == comp {
                    continue;
                }
                let (lo, hi) = boxes[f];
                if pf.x < lo.x - 1.0 || pf.x > hi.x + 1.0 || pf.y < lo.y - 1.0 || pf.y > hi.y + 1.0
                {
                    continue;
                }
                if best.is_some_and(|b| areas[b] <= areas[f]) {
                    continue;
                }
                if arr.winding(face_cycle[f], p) != 0 {
                    best = Some(f);
                }
            }
            hole_parent[comp] = best;
        }
        for comp in 0..arr.n_comp {
            if let (Some(f), Some(c)) = (hole_parent[comp], arr.outer[comp]) {
                let hs = arr.cycle_half_edges(c as usize);
                faces[f]
                    .holes
                    .push(hs.iter().map(|&h| arr.origin(h)).collect());
            } else if let Some(f) = hole_parent[comp] {
                faces[f].holes.push(vec![arr.comp_anchor[comp]]);
            }
        }
    }

    Ok(ShadowComplex {
        snapper,
        positions,
        arr,
        seg_edges,
        vertices,
        edges,
        faces,
        face_of_cycle,
        hole_parent,
        triangles,
    })
}

pub(crate) fn bbox(pts: &[P2]) -> (P2, P2) {
    let mut lo = P2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = P2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for p in pts {
        lo = P2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = P2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    (lo, hi)
}

/// A covering triangle for every cycle of the arrangement, by index into
/// `triangles`.
///
/// The number of triangles containing a face changes across a piece only
/// by the triangles having that piece on a side, so counts propagate from
/// the outer cycle of each component, which is counted directly with
/// `covering`. Witnesses carry over while they stay valid.
fn coverage(
    arr: &Arrangement,
    triangles: &[ShadowTriangle],
    node_of: &[usize],
    seg_at: &HashMap<(usize, usize), usize>,
    covering: impl Fn(u32) -> Vec<u32>,
) -> Vec<Option<u32>> {
    // triangles to the left and right of each segment's direction
    let mut left: Vec<Vec<u32>> = vec![Vec::new(); arr.segs.len()];
    let mut right: Vec<Vec<u32>> = vec![Vec::new(); arr.segs.len()];
    for (t, tri) in triangles.iter().enumerate() {
        for i in 0..3 {
            let x = node_of[tri.vertices[i]];
            let y = node_of[tri.vertices[(i + 1) % 3]];
            let s = seg_at[&(x.min(y), x.max(y))];
            if arr.segs[s].a == x {
                left[s].push(t as u32);
            } else {
                right[s].push(t as u32);
            }
        }
    }
    let mut carriers: Vec<Vec<(usize, bool)>> =
        arr.edges.iter().map(|&(_, _, s)| vec![(s, true)]).collect();
    for &(e, s, same) in &arr.shared {
        carriers[e].push((s, same));
    }
    // triangles with half-edge `h` on a side, lying to its left
    let on_left = |h: u32| -> Vec<u32> {
        let forward = h.is_multiple_of(2);
        let mut out = Vec::new();
        for &(s, same) in &carriers[(h / 2) as usize] {
            out.extend_from_slice(if same == forward { &left[s] } else { &right[s] });
        }
        out
    };

    let n_cycles = arr.cycles.len();
    let mut count: Vec<Option<usize>> = vec![None; n_cycles];
    let mut witness: Vec<Option<u32>> = vec![None; n_cycles];
    let mut queue = std::collections::VecDeque::new();
    for c in arr.outer.iter().flatten() {
        let found = covering(arr.cycles[*c as usize]);
        count[*c as usize] = Some(found.len());
        witness[*c as usize] = found.into_iter().min();
        queue.push_back(*c as usize);
    }
    while let Some(c) = queue.pop_front() {
        let k = count[c].expect("queued cycles are counted");
        for h in arr.cycle_half_edges(c) {
            let twin = h ^ 1;
            let c2 = arr.cycle_of[twin as usize] as usize;
            if count[c2].is_some() {
                continue;
            }
            let ending = on_left(h);
            let starting = on_left(twin);
            let k2 = k + starting.len() - ending.len();
            count[c2] = Some(k2);
            witness[c2] = if k2 == 0 {
                None
            } else {
                match witness[c] {
                    Some(t) if !ending.contains(&t) => Some(t),
                    _ => starting
                        .iter()
                        .copied()
                        .min()
                        .or_else(|| covering(twin).into_iter().min()),
                }
            };
            debug_assert!(witness[c2].is_some() == (k2 > 0));
            queue.push_back(c2);
        }
    }
    witness
}

/// Whether the face to the left of half-edge `h` lies inside the
/// counter-clockwise triangle `t`.
///
/// The face is probed at `a + s d + s^2 n` for infinitesimal `s > 0`, where
/// `a` is the tail of `h`, `d` its direction and `n` the left normal, so the
/// sign against each triangle side is the first non-zero of three exact
/// terms.
fn left_face_in_triangle(arr: &Arrangement, h: u32, t: &[IPoint; 3]) -> bool {
    let tail = arr.origin(h);
    let d = arr.dir(h);
    let n = crate::geometry::exact::IVec { x: -d.y, y: d.x };
    (0..3).all(|i| {
        let (p, q) = (t[i], t[(i + 1) % 3]);
        let side = q.sub(p);
        let s = arr
            .orient_vertex(p, q, tail)
            .then_with(|| side.cross(d).cmp(&0))
            .then_with(|| side.cross(n).cmp(&0));
        s == Ordering::Greater
    })
}

impl ShadowComplex {
    pub fn snapper(&self) -> Snapper {
        self.snapper
    }

    /// Planar positions of the complex vertices.
    pub fn positions(&self) -> &[P2] {
        &self.positions
    }

    pub fn vertices(&self) -> &[ShadowVertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[ShadowEdge] {
        &self.edges
    }

    pub fn faces(&self) -> &[ShadowFace] {
        &self.faces
    }

    /// Non-degenerate projected triangles.
    pub fn triangles(&self) -> &[ShadowTriangle] {
        &self.triangles
    }

    pub fn covered_faces(&self) -> impl Iterator<Item = &ShadowFace> + '_ {
        self.faces.iter().filter(|f| f.is_covered())
    }

    pub fn crossing_count(&self) -> usize {
        self.vertices
            .iter()
            .filter(|v| matches!(v.kind, VertexKind::Crossing { .. }))
            .count()
    }

    /// Connected components of the arrangement 1-skeleton.
    pub fn arrangement_components(&self) -> usize {
        self.arr.n_comp
    }

    /// Number of half-edge cycles, one per face side including outer ones.
    pub fn cycle_count(&self) -> usize {
        self.arr.cycles.len()
    }

    /// `V - E + F` with `F` counting every bounded face plus the outer face.
    pub fn arrangement_euler(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.faces.len() as i64 + 1
    }

    /// Euler characteristic of the shadow.
    pub fn euler_characteristic(&self) -> i64 {
        let faces: i64 = self.covered_faces().map(|f| 1 - f.holes.len() as i64).sum();
        self.vertices.len() as i64 - self.edges.len() as i64 + faces
    }

    pub fn betti(&self) -> BettiVector {
        let mut uf = UnionFind::new(self.arr.n_comp);
        for (comp, parent) in self.hole_parent.iter().enumerate() {
            if let Some(f) = parent {
                if self.faces[*f].is_covered() {
                    uf.union(comp, self.faces[*f].component);
                }
            }
        }
        let b0 = uf.labels().1;
        let chi = self.euler_characteristic();
        let b1 = b0 as i64 - chi;
        debug_assert!(b1 >= 0, "negative first Betti number");
        BettiVector {
            b0,
            b1: b1.max(0) as usize,
            b2: None,
        }
    }

    /// Whether the face on the left of the given half-edge is covered.
    pub(crate) fn covered_left(&self, h: u32) -> bool {
        let c = self.arr.cycle_of[h as usize] as usize;
        let face = match self.face_of_cycle[c] {
            Some(f) => Some(f),
            None => {
                let comp = self.arr.comp_of[self.arr.origin(h)];
                self.hole_parent[comp]
            }
        };
        face.is_some_and(|f| self.faces[f].is_covered())
    }

    /// Half-edges as `(tail, head)` with covered region on the left and
    /// uncovered on the right.
    pub fn boundary_half_edges(&self) -> Vec<(usize, usize)> {
        (0..2 * self.edges.len() as u32)
            .filter(|&h| self.covered_left(h) && !self.covered_left(h ^ 1))
            .map(|h| (self.arr.origin(h), self.arr.head(h)))
            .collect()
    }

    /// Edges with uncovered faces on both sides.
    pub fn bare_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| {
                let h = 2 * e as u32;
                !self.covered_left(h) && !self.covered_left(h ^ 1)
            })
            .collect()
    }

    /// Transversely crossing pairs of complex edges.
    pub fn transverse_pairs(&self) -> Vec<((usize, usize), (usize, usize))> {
        let mut out = Vec::new();
        for &(s, r) in &self.arr.crossings {
            for &e in &self.seg_edges[s] {
                for &f in &self.seg_edges[r] {
                    out.push((e, f));
                }
            }
        }
        out
    }

    /// Line-oriented text dump.
    pub fn dump(&self) -> String {
        let b = self.betti();
        let mut s = String::new();
        let _ = writeln!(
            s,
            "# shadow vertices={} edges={} faces={} covered={} crossings={} betti={} {}",
            self.vertices.len(),
            self.edges.len(),
            self.faces.len(),
            self.covered_faces().count(),
            self.crossing_count(),
            b.b0,
            b.b1
        );
        for (i, v) in self.vertices.iter().enumerate() {
            match v.kind {
                VertexKind::Original(p) => {
                    let _ = writeln!(s, "V {i} original {p} {} {}", v.pos.x, v.pos.y);
                }
                VertexKind::Crossing { first, second, .. } => {
                    let _ = writeln!(
                        s,
                        "V {i} crossing {} {} {} {} {} {}",
                        first.0, first.1, second.0, second.1, v.pos.x, v.pos.y
                    );
                }
            }
        }
        for (i, e) in self.edges.iter().enumerate() {
            let _ = writeln!(s, "E {i} {} {} {} {}", e.a, e.b, e.parent.0, e.parent.1);
        }
        for (i, f) in self.faces.iter().enumerate() {
            let _ = write!(s, "F {i} {}", u8::from(f.is_covered()));
            for v in &f.boundary {
                let _ = write!(s, " {v}");
            }
            s.push('\n');
        }
        s
    }
}

/// Betti numbers of the shadow.
pub fn shadow_betti(sc: &ShadowComplex) -> BettiVector {
    sc.betti()
}
