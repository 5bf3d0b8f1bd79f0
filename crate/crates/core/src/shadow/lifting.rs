//! Lifting condition checker.
//!
//! For every transverse crossing of projected edges `AB` and `CD` the checker
//! looks for a witness of condition (A), a vertex `E` with `[ABE]` and
//! `[CDE]` in the complex, and otherwise of condition (B), an edge `EF` with
//! `[AEF]` and `[CDEF]` in the complex whose projection meets segment `AB`.
//! Simplices are read through the flag property, so `[CDEF]` means all six
//! pairs are edges. Condition (B) is tried with both edges in either role
//! and with either endpoint of the first edge.

use rayon::prelude::*;

use crate::complex::FlagComplex;
use crate::geometry::exact::{relate, IPoint, SegmentRelation, Snapper};
use crate::geometry::{DEFAULT_SNAP_DIGITS, P2};
use crate::sampling::PointCloud;

use super::{project_with, ShadowComplex, ShadowError};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct LiftingReport {
    pub examined: usize,
    pub satisfied_a: usize,
    pub satisfied_b: usize,
    pub violations: Vec<((usize, usize), (usize, usize))>,
}

impl LiftingReport {
    pub fn satisfied(&self) -> usize {
        self.satisfied_a + self.satisfied_b
    }

    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Verdict {
    A,
    B,
    Violated,
}

/// Checks every transversely crossing pair of projected edges of `k`.
pub fn check_lifting(k: &FlagComplex, coords: &PointCloud) -> Result<LiftingReport, ShadowError> {
    let sc = project_with(k, coords, Snapper::new(DEFAULT_SNAP_DIGITS))?;
    check_lifting_projected(k, &sc)
}

/// [`check_lifting`] on an existing projection of `k`.
pub fn check_lifting_projected(
    k: &FlagComplex,
    sc: &ShadowComplex,
) -> Result<LiftingReport, ShadowError> {
    if sc.positions().len() != k.vertex_count() {
        return Err(ShadowError::VertexCount {
            complex: k.vertex_count(),
            coords: sc.positions().len(),
        });
    }
    let snapper = sc.snapper();
    let lattice: Vec<IPoint> = sc
        .positions()
        .iter()
        .map(|p| snapper.snap_point(p.x, p.y))
        .collect::<Result<_, _>>()?;
    let pairs = sc.transverse_pairs();
    let verdicts: Vec<Verdict> = pairs
        .par_iter()
        .map(|&(e, f)| classify(k, &lattice, e, f))
        .collect();
    let mut report = LiftingReport {
        examined: pairs.len(),
        ..Default::default()
    };
    for (pair, v) in pairs.into_iter().zip(verdicts) {
        match v {
            Verdict::A => report.satisfied_a += 1,
            Verdict::B => report.satisfied_b += 1,
            Verdict::Violated => report.violations.push(pair),
        }
    }
    Ok(report)
}

/// Sorted closed neighbourhood `N[v]`.
fn closed_nbhd(k: &FlagComplex, v: usize) -> Vec<u32> {
    let mut out: Vec<u32> = k.neighbors(v).to_vec();
    let pos = out.partition_point(|&x| (x as usize) < v);
    out.insert(pos, v as u32);
    out
}

fn intersect(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

fn classify(k: &FlagComplex, pts: &[IPoint], ab: (usize, usize), cd: (usize, usize)) -> Verdict {
    let n = |v: usize| closed_nbhd(k, v);
    let (na, nb, nc, nd) = (n(ab.0), n(ab.1), n(cd.0), n(cd.1));
    let nab = intersect(&na, &nb);
    let ncd = intersect(&nc, &nd);
    if !intersect(&nab, &ncd).is_empty() {
        return Verdict::A;
    }
    let roles = [(ab, &na, &nb, &ncd), (cd, &nc, &nd, &nab)];
    for (first, n0, n1, other) in roles {
        for apex in [n0, n1] {
            let cand = intersect(apex, other);
            if condition_b(k, pts, first, &cand) {
                return Verdict::B;
            }
        }
    }
    Verdict::Violated
}

/// Searches `E != F` among `cand` with `E ~ F` and segment `EF` meeting the
/// segment `first`.
fn condition_b(k: &FlagComplex, pts: &[IPoint], first: (usize, usize), cand: &[u32]) -> bool {
    let (p, q) = (pts[first.0], pts[first.1]);
    for (i, &e) in cand.iter().enumerate() {
        for &f in &cand[i + 1..] {
            let (e, f) = (e as usize, f as usize);
            if !k.has_edge(e, f) {
                continue;
            }
            if meets(pts[e], pts[f], p, q) {
                return true;
            }
        }
    }
    false
}

/// Whether closed segments `rs` and `pq` share a point.
fn meets(r: IPoint, s: IPoint, p: IPoint, q: IPoint) -> bool {
    if r == s {
        return on_segment(r, p, q);
    }
    if p == q {
        return on_segment(p, r, s);
    }
    !matches!(relate(r, s, p, q), SegmentRelation::Disjoint)
}

fn on_segment(x: IPoint, p: IPoint, q: IPoint) -> bool {
    crate::geometry::exact::orient(p, q, x) == 0
        && x.x >= p.x.min(q.x)
        && x.x <= p.x.max(q.x)
        && x.y >= p.y.min(q.y)
        && x.y <= p.y.max(q.y)
}

/// Vertex among the four endpoints nearest to the crossing point of `ab`, `cd`.
pub fn nearest_endpoint(pos: &[P2], ab: (usize, usize), cd: (usize, usize)) -> usize {
    let (a, b, c, d) = (pos[ab.0], pos[ab.1], pos[cd.0], pos[cd.1]);
    let r = b.sub(a);
    let s = d.sub(c);
    let t = c.sub(a).cross(s) / r.cross(s);
    let x = a.lerp(b, t);
    [ab.0, ab.1, cd.0, cd.1]
        .into_iter()
        .min_by(|&u, &v| pos[u].dist(x).total_cmp(&pos[v].dist(x)))
        .unwrap()
}
