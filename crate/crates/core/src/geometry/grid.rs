//! Uniform bucket grids for planar proximity queries.

use super::P2;

#[derive(Clone, Copy, Debug)]
struct Frame {
    min: P2,
    cell: f64,
    nx: usize,
    ny: usize,
}

impl Frame {
    fn new(min: P2, max: P2, cell: f64) -> Self {
        let cell = if cell.is_finite() && cell > 0.0 {
            cell
        } else {
            1.0
        };
        let nx = (((max.x - min.x) / cell).floor() as usize + 1).clamp(1, 1 << 12);
        let ny = (((max.y - min.y) / cell).floor() as usize + 1).clamp(1, 1 << 12);
        let cell = cell
            .max((max.x - min.x) / nx as f64 * 1.000001)
            .max((max.y - min.y) / ny as f64 * 1.000001);
        Frame { min, cell, nx, ny }
    }

    fn ix(&self, x: f64) -> usize {
        (((x - self.min.x) / self.cell).floor().max(0.0) as usize).min(self.nx - 1)
    }

    fn iy(&self, y: f64) -> usize {
        (((y - self.min.y) / self.cell).floor().max(0.0) as usize).min(self.ny - 1)
    }
}

fn bounds(pts: impl Iterator<Item = P2>) -> Option<(P2, P2)> {
    let mut it = pts.peekable();
    let first = *it.peek()?;
    Some(it.fold((first, first), |(lo, hi), p| {
        (
            P2::new(lo.x.min(p.x), lo.y.min(p.y)),
            P2::new(hi.x.max(p.x), hi.y.max(p.y)),
        )
    }))
}

/// Points bucketed into square cells.
#[derive(Clone, Debug)]
pub struct PointGrid {
    frame: Frame,
    start: Vec<usize>,
    items: Vec<usize>,
    pts: Vec<P2>,
}

impl PointGrid {
    /// Builds a grid with roughly two points per occupied cell.
    pub fn build(pts: &[P2]) -> Self {
        let (lo, hi) = bounds(pts.iter().copied()).unwrap_or_default();
        let area = ((hi.x - lo.x) * (hi.y - lo.y)).max(0.0);
        let extent = (hi.x - lo.x).max(hi.y - lo.y);
        let mut cell = (2.0 * area / pts.len().max(1) as f64).sqrt();
        if !(cell > extent * 1e-4) {
            cell = extent / (pts.len().max(1) as f64).sqrt().max(1.0);
        }
        Self::with_cell(pts, cell)
    }

    pub fn with_cell(pts: &[P2], cell: f64) -> Self {
        let (lo, hi) = bounds(pts.iter().copied()).unwrap_or_default();
        let frame = Frame::new(lo, hi, cell);
        let ncell = frame.nx * frame.ny;
        let key = |p: &P2| frame.iy(p.y) * frame.nx + frame.ix(p.x);
        let mut count = vec![0usize; ncell + 1];
        for p in pts {
            count[key(p) + 1] += 1;
        }
        for i in 0..ncell {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut items = vec![0; pts.len()];
        for (i, p) in pts.iter().enumerate() {
            let k = key(p);
            items[fill[k]] = i;
            fill[k] += 1;
        }
        PointGrid {
            frame,
            start: count,
            items,
            pts: pts.to_vec(),
        }
    }

    pub fn len(&self) -> usize {
        self.pts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pts.is_empty()
    }

    pub fn points(&self) -> &[P2] {
        &self.pts
    }

    fn cell(&self, cx: usize, cy: usize) -> &[usize] {
        let k = cy * self.frame.nx + cx;
        &self.items[self.start[k]..self.start[k + 1]]
    }

    /// Calls `f` with every point index within the axis-aligned box.
    pub fn for_each_in_box(&self, lo: P2, hi: P2, mut f: impl FnMut(usize)) {
        if self.pts.is_empty() {
            return;
        }
        for cy in self.frame.iy(lo.y)..=self.frame.iy(hi.y) {
            for cx in self.frame.ix(lo.x)..=self.frame.ix(hi.x) {
                for &i in self.cell(cx, cy) {
                    let p = self.pts[i];
                    if p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y {
                        f(i);
                    }
                }
            }
        }
    }

    /// Indices of points with `|p - c| <= r`, in increasing index order.
    pub fn within(&self, c: P2, r: f64) -> Vec<usize> {
        let mut out = Vec::new();
        self.for_each_in_box(P2::new(c.x - r, c.y - r), P2::new(c.x + r, c.y + r), |i| {
            if self.pts[i].dist(c) <= r {
                out.push(i);
            }
        });
        out.sort_unstable();
        out
    }

    /// Nearest point as `(index, distance)`; ties go to the lower index.
    pub fn nearest(&self, q: P2) -> (usize, f64) {
        assert!(!self.pts.is_empty(), "nearest on empty grid");
        let f = &self.frame;
        let (cx, cy) = (f.ix(q.x) as isize, f.iy(q.y) as isize);
        let mut best = (usize::MAX, f64::INFINITY);
        let max_ring = f.nx.max(f.ny) as isize;
        for ring in 0..=max_ring {
            // Any point in a ring at Chebyshev index `ring` is at least
            // `(ring - 1) * cell` away from `q`.
            if best.1.is_finite() && (ring as f64 - 1.0) * f.cell > best.1 {
                break;
            }
            for dy in -ring..=ring {
                for dx in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue;
                    }
                    let (x, y) = (cx + dx, cy + dy);
                    if x < 0 || y < 0 || x >= f.nx as isize || y >= f.ny as isize {
                        continue;
                    }
                    for &i in self.cell(x as usize, y as usize) {
                        let d = self.pts[i].dist(q);
                        if d < best.1 || (d == best.1 && i < best.0) {
                            best = (i, d);
                        }
                    }
                }
            }
        }
        best
    }
}

/// Axis-aligned boxes bucketed into every cell they overlap.
#[derive(Clone, Debug)]
pub struct BoxGrid {
    frame: Frame,
    start: Vec<usize>,
    items: Vec<usize>,
}

impl BoxGrid {
    pub fn build(boxes: &[(P2, P2)], cell: f64) -> Self {
        let (lo, hi) = bounds(boxes.iter().flat_map(|b| [b.0, b.1])).unwrap_or_default();
        let frame = Frame::new(lo, hi, cell);
        let ncell = frame.nx * frame.ny;
        let mut count = vec![0usize; ncell + 1];
        let span = |b: &(P2, P2)| {
            (
                frame.ix(b.0.x)..=frame.ix(b.1.x),
                frame.iy(b.0.y)..=frame.iy(b.1.y),
            )
        };
        for b in boxes {
            let (xs, ys) = span(b);
            for y in ys {
                for x in xs.clone() {
                    count[y * frame.nx + x + 1] += 1;
                }
            }
        }
        for i in 0..ncell {
            count[i + 1] += count[i];
        }
        let mut fill = count.clone();
        let mut items = vec![0; count[ncell]];
        for (i, b) in boxes.iter().enumerate() {
            let (xs, ys) = span(b);
            for y in ys {
                for x in xs.clone() {
                    let k = y * frame.nx + x;
                    items[fill[k]] = i;
                    fill[k] += 1;
                }
            }
        }
        BoxGrid {
            frame,
            start: count,
            items,
        }
    }

    /// Boxes whose cells contain `p`; a superset of the boxes containing it.
    pub fn candidates(&self, p: P2) -> &[usize] {
        if self.items.is_empty() {
            return &[];
        }
        let f = &self.frame;
        if p.x < f.min.x - f.cell || p.y < f.min.y - f.cell {
            return &[];
        }
        if p.x > f.min.x + f.cell * (f.nx as f64 + 1.0)
            || p.y > f.min.y + f.cell * (f.ny as f64 + 1.0)
        {
            return &[];
        }
        let k = f.iy(p.y) * f.nx + f.ix(p.x);
        &self.items[self.start[k]..self.start[k + 1]]
    }

    /// Calls `f` for every box registered in a cell overlapping the query box.
    /// A box may be reported more than once.
    pub fn for_each_near(&self, lo: P2, hi: P2, mut f: impl FnMut(usize)) {
        if self.items.is_empty() {
            return;
        }
        let fr = &self.frame;
        for cy in fr.iy(lo.y)..=fr.iy(hi.y) {
            for cx in fr.ix(lo.x)..=fr.ix(hi.x) {
                let k = cy * fr.nx + cx;
                for &i in &self.items[self.start[k]..self.start[k + 1]] {
                    f(i);
                }
            }
        }
    }
}
