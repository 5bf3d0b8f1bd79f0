//! Independent oracles shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use shadow_recon::geometry::P2;
use shadow_recon::metric_graph::{GraphMetric, GraphPoint};
use shadow_recon::sampling::PointCloud;
use shadow_recon::shadow::ShadowComplex;

/// `d^ε` by Floyd–Warshall over hops of length `< eps`.
pub fn floyd_warshall(cloud: &PointCloud, eps: f64) -> Vec<Vec<f64>> {
    let n = cloud.len();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for i in 0..n {
        d[i][i] = 0.0;
        for j in 0..n {
            let w = cloud.distance(i, j);
            if i != j && w < eps {
                d[i][j] = w;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Brute-force circumcenter over a candidate set: the candidate minimizing
/// the largest distance to `a`, with that distance.
pub fn brute_center(m: &GraphMetric, a: &[GraphPoint], grid: &[GraphPoint]) -> (usize, f64) {
    let mut best = (0, f64::INFINITY);
    for (i, &c) in grid.iter().enumerate() {
        let r = a.iter().map(|&p| m.distance(p, c)).fold(0.0, f64::max);
        if r < best.1 {
            best = (i, r);
        }
    }
    best
}

pub fn diameter(m: &GraphMetric, a: &[GraphPoint]) -> f64 {
    let mut d = 0.0f64;
    for &p in a {
        for &q in a {
            d = d.max(m.distance(p, q));
        }
    }
    d
}

/// Coordinates of a double triangle built from rays: `p` at the origin,
/// `ab` on the x-axis, `v` above it. Returns `(|av|, |bv|, |pv|)` scaled to
/// `|av| + |bv| = r`.
pub fn double_triangle_by_rays(
    phi: f64,
    varphi: f64,
    theta: f64,
    r: f64,
) -> Option<(f64, f64, f64)> {
    let v = P2::new(-theta.cos(), theta.sin());
    let to_p = P2::new(0.0, 0.0).sub(v);
    let rot = |d: P2, ang: f64| {
        P2::new(
            d.x * ang.cos() - d.y * ang.sin(),
            d.x * ang.sin() + d.y * ang.cos(),
        )
    };
    // ray from v turned by `ang` off vp, meeting the x-axis on the `side`
    let hit = |ang: f64, side: f64| -> Option<P2> {
        [rot(to_p, ang), rot(to_p, -ang)].into_iter().find_map(|d| {
            if d.y >= 0.0 {
                return None;
            }
            let q = v.add(d.scale(-v.y / d.y));
            (q.x * side > 0.0).then_some(q)
        })
    };
    let a = hit(phi, -1.0)?;
    let b = hit(varphi, 1.0)?;
    let angle = |x: P2, y: P2| (x.dot(y) / (x.norm() * y.norm())).clamp(-1.0, 1.0).acos();
    // the construction must reproduce the requested angles
    let ok = (angle(a.sub(v), to_p) - phi).abs() < 1e-9
        && (angle(b.sub(v), to_p) - varphi).abs() < 1e-9
        && (angle(a, v) - theta).abs() < 1e-9;
    if !ok {
        return None;
    }
    let (av, bv, pv) = (a.dist(v), b.dist(v), v.norm());
    let s = r / (av + bv);
    Some((av * s, bv * s, pv * s))
}

/// Betti numbers of a planar set by rasterization: pixels covered by a
/// projected triangle, crossed by an arrangement edge or holding a vertex
/// form the set;
/// 8-connected components of the set give `b0` and bounded 4-connected
/// components of the complement give `b1`.
pub fn raster_betti(sc: &ShadowComplex, pixel: f64) -> (usize, usize) {
    let pos = sc.vertices().iter().map(|v| v.pos).collect::<Vec<_>>();
    let (mut lo, mut hi) = (
        P2::new(f64::INFINITY, f64::INFINITY),
        P2::new(f64::NEG_INFINITY, f64::NEG_INFINITY),
    );
    for p in &pos {
        lo = P2::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = P2::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    // empty pixels of margin on every side
    let origin = P2::new(lo.x - 2.0 * pixel, lo.y - 2.0 * pixel);
    let w = ((hi.x - origin.x) / pixel).ceil() as usize + 3;
    let h = ((hi.y - origin.y) / pixel).ceil() as usize + 3;
    let mut on = vec![false; w * h];
    let cell = |p: P2| {
        let i = ((p.x - origin.x) / pixel).floor() as usize;
        let j = ((p.y - origin.y) / pixel).floor() as usize;
        (i, j)
    };
    let cp = sc.positions();
    for t in sc.triangles() {
        let [a, b, c] = t.vertices.map(|v| cp[v]);
        let (i0, j0) = cell(P2::new(a.x.min(b.x).min(c.x), a.y.min(b.y).min(c.y)));
        let (i1, j1) = cell(P2::new(a.x.max(b.x).max(c.x), a.y.max(b.y).max(c.y)));
        for j in j0..=j1 {
            for i in i0..=i1 {
                let q = P2::new(
                    origin.x + (i as f64 + 0.5) * pixel,
                    origin.y + (j as f64 + 0.5) * pixel,
                );
                let s = |u: P2, v: P2| v.sub(u).cross(q.sub(u));
                if s(a, b) >= 0.0 && s(b, c) >= 0.0 && s(c, a) >= 0.0 {
                    on[j * w + i] = true;
                }
            }
        }
    }
    for &p in &pos {
        let (i, j) = cell(p);
        on[j * w + i] = true;
    }
    for e in sc.edges() {
        let (a, b) = (pos[e.a], pos[e.b]);
        let k = (a.dist(b) / (0.25 * pixel)).ceil().max(1.0) as usize;
        for s in 0..=k {
            let (i, j) = cell(a.lerp(b, s as f64 / k as f64));
            on[j * w + i] = true;
        }
    }
    let b0 = components(&on, w, h, true, true).0;
    let (count, touches_border) = components(&on, w, h, false, false);
    (b0, count - touches_border)
}

/// Components of pixels equal to `value`; returns the count and how many
/// of them reach the image border.
fn components(on: &[bool], w: usize, h: usize, value: bool, eight: bool) -> (usize, usize) {
    let mut seen = vec![false; w * h];
    let (mut count, mut border) = (0, 0);
    let mut stack = Vec::new();
    for start in 0..w * h {
        if seen[start] || on[start] != value {
            continue;
        }
        count += 1;
        let mut touches = false;
        seen[start] = true;
        stack.push(start);
        while let Some(p) = stack.pop() {
            let (i, j) = ((p % w) as i64, (p / w) as i64);
            if i == 0 || j == 0 || i == w as i64 - 1 || j == h as i64 - 1 {
                touches = true;
            }
            for dj in -1i64..=1 {
                for di in -1i64..=1 {
                    if (di == 0 && dj == 0) || (!eight && di != 0 && dj != 0) {
                        continue;
                    }
                    let (x, y) = (i + di, j + dj);
                    if x < 0 || y < 0 || x >= w as i64 || y >= h as i64 {
                        continue;
                    }
                    let q = y as usize * w + x as usize;
                    if !seen[q] && on[q] == value {
                        seen[q] = true;
                        stack.push(q);
                    }
                }
            }
        }
        if touches {
            border += 1;
        }
    }
    (count, border)
}

/// Points of `grid` within `d_G` distance `radius` of `anchor`.
pub fn ball(
    m: &GraphMetric,
    grid: &[GraphPoint],
    anchor: GraphPoint,
    radius: f64,
) -> Vec<GraphPoint> {
    grid.iter()
        .copied()
        .filter(|&p| m.distance(anchor, p) < radius)
        .collect()
}
