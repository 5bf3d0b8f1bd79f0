//! Two-sided Hausdorff estimate between a shadow and a graph.

use rayon::prelude::*;

use crate::geometry::grid::{BoxGrid, PointGrid};
use crate::geometry::{point_segment_distance, point_triangle_distance, P2};
use crate::metric_graph::EmbeddedGraph;

use super::{ShadowComplex, ShadowError};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HausdorffEstimate {
    /// Largest distance from a shadow sample to `G`.
    pub shadow_to_graph: f64,
    /// Largest distance from a sample of `G` to the shadow.
    pub graph_to_shadow: f64,
    pub resolution: f64,
    pub shadow_samples: usize,
    pub graph_samples: usize,
}

impl HausdorffEstimate {
    pub fn value(&self) -> f64 {
        self.shadow_to_graph.max(self.graph_to_shadow)
    }
}

#[derive(Clone, Copy, Debug)]
enum Prim {
    Seg(P2, P2),
    Tri(P2, P2, P2),
}

impl Prim {
    fn dist(&self, p: P2) -> f64 {
        match *self {
            Prim::Seg(a, b) => point_segment_distance(p, a, b),
            Prim::Tri(a, b, c) => point_triangle_distance(p, a, b, c),
        }
    }

    fn bbox(&self) -> (P2, P2) {
        let pts: &[P2] = match self {
            Prim::Seg(a, b) => &[*a, *b],
            Prim::Tri(a, b, c) => &[*a, *b, *c],
        };
        super::bbox(pts)
    }
}

/// Exact distance to a union of segments and triangles.
struct Target {
    prims: Vec<Prim>,
    grid: BoxGrid,
    seeds: PointGrid,
}

impl Target {
    fn new(prims: Vec<Prim>, seeds: Vec<P2>, min_cell: f64) -> Self {
        let boxes: Vec<(P2, P2)> = prims.iter().map(Prim::bbox).collect();
        let mean = boxes
            .iter()
            .map(|(lo, hi)| (hi.x - lo.x).max(hi.y - lo.y))
            .sum::<f64>()
            / boxes.len().max(1) as f64;
        let cell = mean.max(min_cell);
        Target {
            grid: BoxGrid::build(&boxes, cell),
            seeds: PointGrid::build(&seeds),
            prims,
        }
    }

    fn dist(&self, p: P2) -> f64 {
        // every seed lies on the target, so it bounds the search radius
        let (_, r) = self.seeds.nearest(p);
        let r = r * (1.0 + 1e-12) + 1e-300;
        let mut best = r;
        self.grid
            .for_each_near(P2::new(p.x - r, p.y - r), P2::new(p.x + r, p.y + r), |i| {
                best = best.min(self.prims[i].dist(p))
            });
        best
    }
}

fn sample_segment(a: P2, b: P2, step: f64, out: &mut Vec<P2>) {
    let k = (a.dist(b) / step).ceil().max(1.0) as usize;
    for j in 0..=k {
        out.push(a.lerp(b, j as f64 / k as f64));
    }
}

/// Grid points of spacing `step` inside a polygon (even-odd rule over rings).
fn sample_region(rings: &[Vec<P2>], step: f64, out: &mut Vec<P2>) {
    let (lo, hi) = super::bbox(&rings[0]);
    let j0 = (lo.y / step).ceil() as i64;
    let j1 = (hi.y / step).floor() as i64;
    let mut xs = Vec::new();
    for j in j0..=j1 {
        let y = j as f64 * step;
        xs.clear();
        for ring in rings {
            for i in 0..ring.len() {
                let (a, b) = (ring[i], ring[(i + 1) % ring.len()]);
                if (a.y <= y) != (b.y <= y) {
                    xs.push(a.x + (y - a.y) / (b.y - a.y) * (b.x - a.x));
                }
            }
        }
        xs.sort_by(f64::total_cmp);
        for span in xs.chunks_exact(2) {
            let i0 = (span[0] / step).ceil() as i64;
            let i1 = (span[1] / step).floor() as i64;
            for i in i0..=i1 {
                out.push(P2::new(i as f64 * step, y));
            }
        }
    }
}

/// Hausdorff distance estimate at the given resolution.
pub fn shadow_hausdorff(
    sc: &ShadowComplex,
    g: &EmbeddedGraph,
    resolution: f64,
) -> Result<f64, ShadowError> {
    Ok(shadow_hausdorff_detail(sc, g, resolution)?.value())
}

/// Both directed distances. Samples of the shadow cover edges at spacing
/// `resolution / 2` and covered faces on a grid of the same spacing; samples
/// of `G` use spacing `resolution / 2`. Distances from samples are exact.
pub fn shadow_hausdorff_detail(
    sc: &ShadowComplex,
    g: &EmbeddedGraph,
    resolution: f64,
) -> Result<HausdorffEstimate, ShadowError> {
    if !(resolution > 0.0) {
        return Err(ShadowError::Parameter("resolution"));
    }
    if g.dim() != 2 {
        return Err(ShadowError::NotPlanar(g.dim()));
    }
    let step = resolution / 2.0;
    let vpos = |v: usize| sc.vertices()[v].pos;

    let mut sh_samples = Vec::new();
    for e in sc.edges() {
        sample_segment(vpos(e.a), vpos(e.b), step, &mut sh_samples);
    }
    for v in sc.vertices() {
        sh_samples.push(v.pos);
    }
    for f in sc.covered_faces() {
        let mut rings = vec![f.boundary.iter().map(|&v| vpos(v)).collect::<Vec<_>>()];
        for h in &f.holes {
            rings.push(h.iter().map(|&v| vpos(v)).collect());
        }
        sample_region(&rings, step, &mut sh_samples);
    }

    let mut g_prims = Vec::new();
    let mut g_seeds = Vec::new();
    for e in 0..g.edges().len() {
        let line = g.polyline2(e);
        for w in line.windows(2) {
            g_prims.push(Prim::Seg(w[0], w[1]));
        }
        g_seeds.extend_from_slice(&line);
    }
    for v in g.vertices() {
        g_seeds.push(v.pos.planar()?);
    }
    let mut g_samples = Vec::new();
    for e in 0..g.edges().len() {
        for w in g.polyline2(e).windows(2) {
            sample_segment(w[0], w[1], step, &mut g_samples);
        }
    }
    g_samples.extend(g_seeds.iter().copied());

    let mut sh_prims: Vec<Prim> = sc
        .edges()
        .iter()
        .map(|e| Prim::Seg(vpos(e.a), vpos(e.b)))
        .collect();
    let pos = sc.positions();
    sh_prims.extend(sc.triangles().iter().map(|t| {
        let [a, b, c] = t.vertices;
        Prim::Tri(pos[a], pos[b], pos[c])
    }));
    let mut sh_seeds: Vec<P2> = sc.vertices().iter().map(|v| v.pos).collect();
    if sh_seeds.is_empty() {
        sh_seeds.extend_from_slice(pos);
    }
    if sh_seeds.is_empty() {
        return Ok(HausdorffEstimate {
            shadow_to_graph: 0.0,
            graph_to_shadow: f64::INFINITY,
            resolution,
            shadow_samples: 0,
            graph_samples: g_samples.len(),
        });
    }
    // isolated complex vertices are part of the shadow too
    for p in pos {
        sh_prims.push(Prim::Seg(*p, *p));
    }

    g_seeds.extend_from_slice(&g_samples);
    let to_graph = Target::new(g_prims, g_seeds, resolution.max(1e-9));
    let to_shadow = Target::new(sh_prims, sh_seeds, resolution.max(1e-9));
    let max_to_graph = sh_samples
        .par_iter()
        .map(|&p| to_graph.dist(p))
        .reduce(|| 0.0, f64::max);
    let max_to_shadow = g_samples
        .par_iter()
        .map(|&p| to_shadow.dist(p))
        .reduce(|| 0.0, f64::max);
    Ok(HausdorffEstimate {
        shadow_to_graph: max_to_graph,
        graph_to_shadow: max_to_shadow,
        resolution,
        shadow_samples: sh_samples.len(),
        graph_samples: g_samples.len(),
    })
}
