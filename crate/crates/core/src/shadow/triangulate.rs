//! Ear-clipping triangulation of covered faces, used to cross-check the
//! Euler characteristic of a shadow.

use crate::geometry::P2;

use super::ShadowComplex;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TriangulationCheck {
    pub triangles: usize,
    pub diagonals: usize,
    /// Covered faces split into triangles.
    pub triangulated: usize,
    /// Covered faces with holes or repeated boundary vertices, counted from
    /// the arrangement instead.
    pub skipped: usize,
    /// Faces where clipping got stuck or lost area.
    pub failed: usize,
    pub euler: i64,
}

fn cross(o: P2, a: P2, b: P2) -> f64 {
    a.sub(o).cross(b.sub(o))
}

fn turn_tol(o: P2, a: P2, b: P2) -> f64 {
    1e-12 * a.sub(o).norm() * b.sub(o).norm()
}

/// Triangulates a simple counter-clockwise polygon. Straight-angle vertices
/// are dropped first, so the result triangulates the remaining corners.
pub fn ear_clip(poly: &[P2]) -> Option<Vec<[usize; 3]>> {
    let n = poly.len();
    let mut ring: Vec<usize> = (0..n)
        .filter(|&i| {
            let (p, c, q) = (poly[(i + n - 1) % n], poly[i], poly[(i + 1) % n]);
            cross(p, c, q).abs() > turn_tol(c, p, q)
        })
        .collect();
    let mut out = Vec::new();
    while ring.len() > 3 {
        let m = ring.len();
        let ear = (0..m).find(|&k| {
            let (ia, ib, ic) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
            let (a, b, c) = (poly[ia], poly[ib], poly[ic]);
            if cross(a, b, c) <= turn_tol(b, a, c) {
                return false;
            }
            (0..n).all(|j| {
                let p = poly[j];
                if p == a || p == b || p == c {
                    return true;
                }
                !(cross(a, b, p) > 0.0 && cross(b, c, p) > 0.0 && cross(c, a, p) > 0.0)
            })
        })?;
        out.push([ring[(ear + m - 1) % m], ring[ear], ring[(ear + 1) % m]]);
        ring.remove(ear);
    }
    if ring.len() == 3 {
        out.push([ring[0], ring[1], ring[2]]);
    }
    Some(out)
}

/// Signed area, fanned from the first vertex to keep small faces far from
/// the origin accurate.
fn area(poly: &[P2]) -> f64 {
    (1..poly.len().saturating_sub(1))
        .map(|i| cross(poly[0], poly[i], poly[i + 1]))
        .sum::<f64>()
        * 0.5
}

/// Euler characteristic of the shadow recomputed from an explicit
/// triangulation of its covered faces.
pub fn triangulated_euler(sc: &ShadowComplex) -> TriangulationCheck {
    let mut chk = TriangulationCheck::default();
    let mut cells: i64 = 0;
    for f in sc.covered_faces() {
        let mut seen = f.boundary.clone();
        seen.sort_unstable();
        seen.dedup();
        if !f.holes.is_empty() || seen.len() != f.boundary.len() {
            chk.skipped += 1;
            cells += 1 - f.holes.len() as i64;
            continue;
        }
        let poly: Vec<P2> = f.boundary.iter().map(|&v| sc.vertices()[v].pos).collect();
        let ok = ear_clip(&poly).filter(|tris| {
            let total: f64 = tris
                .iter()
                .map(|t| cross(poly[t[0]], poly[t[1]], poly[t[2]]) * 0.5)
                .sum();
            let a = area(&poly);
            tris.iter()
                .all(|t| cross(poly[t[0]], poly[t[1]], poly[t[2]]) > 0.0)
                && (total - a).abs() <= 1e-9 * a.abs().max(f64::MIN_POSITIVE)
        });
        match ok {
            Some(tris) => {
                chk.triangulated += 1;
                chk.triangles += tris.len();
                chk.diagonals += tris.len().saturating_sub(1);
                cells += tris.len() as i64;
            }
            None => {
                chk.failed += 1;
                cells += 1;
            }
        }
    }
    chk.euler = sc.vertices().len() as i64 - (sc.edges().len() + chk.diagonals) as i64 + cells;
    chk
}
