//! Points, segments and the planar predicates everything else is built on.
//!
//! The public predicates take real coordinates, snap them to a fixed decimal
//! lattice (see [`exact::Snapper`]) and decide on the lattice without
//! rounding. Distances stay in `f64`.

pub mod exact;
pub mod grid;

use std::fmt;

use thiserror::Error;

use exact::{orient, relate, IPoint, SegmentRelation, Snapper};
pub use grid::PointGrid;

/// Decimal digits kept when snapping coordinates for exact predicates.
pub const DEFAULT_SNAP_DIGITS: u32 = 12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("expected planar points, got dimension {0}")]
    NotPlanar(usize),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("degenerate segment of zero length")]
    DegenerateSegment,
    #[error("coordinate {value} exceeds the exact range at {digits} snap digits")]
    OutOfRange { value: f64, digits: u32 },
    #[error("non-finite coordinate")]
    NonFinite,
    #[error("empty point set")]
    Empty,
}

/// A point in `R^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    coords: Vec<f64>,
}

impl Point {
    pub fn new(coords: Vec<f64>) -> Self {
        Point { coords }
    }

    pub fn xy(x: f64, y: f64) -> Self {
        Point { coords: vec![x, y] }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn distance(&self, other: &Point) -> f64 {
        dist(&self.coords, &other.coords)
    }

    /// Planar view, or an error when `N != 2`.
    pub fn planar(&self) -> Result<P2, GeometryError> {
        match self.coords.as_slice() {
            [x, y] => Ok(P2::new(*x, *y)),
            _ => Err(GeometryError::NotPlanar(self.dim())),
        }
    }
}

impl From<P2> for Point {
    fn from(p: P2) -> Self {
        Point::xy(p.x, p.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Euclidean distance between coordinate slices of equal length.
pub fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A planar point with value semantics.
#[derive(Clone, Copy, Debug, PartialEq, Default)]
pub struct P2 {
    pub x: f64,
    pub y: f64,
}

impl P2 {
    pub const fn new(x: f64, y: f64) -> Self {
        P2 { x, y }
    }

    pub fn sub(self, o: P2) -> P2 {
        P2::new(self.x - o.x, self.y - o.y)
    }

    pub fn add(self, o: P2) -> P2 {
        P2::new(self.x + o.x, self.y + o.y)
    }

    pub fn scale(self, s: f64) -> P2 {
        P2::new(self.x * s, self.y * s)
    }

    pub fn dot(self, o: P2) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: P2) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: P2) -> f64 {
        self.sub(o).norm()
    }

    pub fn lerp(self, o: P2, t: f64) -> P2 {
        P2::new(self.x + (o.x - self.x) * t, self.y + (o.y - self.y) * t)
    }
}

/// Distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: P2, a: P2, b: P2) -> f64 {
    let d = b.sub(a);
    let len2 = d.dot(d);
    if len2 == 0.0 {
        return p.dist(a);
    }
    let t = (p.sub(a).dot(d) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, t))
}

/// Distance from `p` to the closed triangle `abc`; zero inside.
pub fn point_triangle_distance(p: P2, a: P2, b: P2, c: P2) -> f64 {
    let o1 = b.sub(a).cross(p.sub(a));
    let o2 = c.sub(b).cross(p.sub(b));
    let o3 = a.sub(c).cross(p.sub(c));
    let has_neg = o1 < 0.0 || o2 < 0.0 || o3 < 0.0;
    let has_pos = o1 > 0.0 || o2 > 0.0 || o3 > 0.0;
    if !(has_neg && has_pos) {
        return 0.0;
    }
    point_segment_distance(p, a, b)
        .min(point_segment_distance(p, b, c))
        .min(point_segment_distance(p, c, a))
}

/// A segment in the plane.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    Cw,
    Ccw,
    Collinear,
}

/// How two segments meet.
///
/// `Touching` covers an endpoint of one segment lying strictly inside the
/// other (a T-junction). Like `SharedEndpoint`, it is not transverse.
#[derive(Clone, Debug, PartialEq)]
pub enum IntersectionClass {
    Disjoint,
    TransversePoint(Point),
    SharedEndpoint(Point),
    Touching(Point),
    CollinearOverlap(Segment),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointLocation {
    Interior,
    Boundary,
    Exterior,
}

fn snap2(s: &Snapper, p: &Point) -> Result<IPoint, GeometryError> {
    let q = p.planar()?;
    s.snap_point(q.x, q.y)
}

/// Orientation of `pqr` at the default snap precision.
pub fn orientation(p: &Point, q: &Point, r: &Point) -> Result<Orientation, GeometryError> {
    orientation_with(&Snapper::default(), p, q, r)
}

pub fn orientation_with(
    s: &Snapper,
    p: &Point,
    q: &Point,
    r: &Point,
) -> Result<Orientation, GeometryError> {
    let o = orient(snap2(s, p)?, snap2(s, q)?, snap2(s, r)?);
    Ok(match o.signum() {
        1 => Orientation::Ccw,
        -1 => Orientation::Cw,
        _ => Orientation::Collinear,
    })
}

/// Classifies how two planar segments meet, at the default snap precision.
pub fn segment_intersect(s1: &Segment, s2: &Segment) -> Result<IntersectionClass, GeometryError> {
    segment_intersect_with(&Snapper::default(), s1, s2)
}

pub fn segment_intersect_with(
    sn: &Snapper,
    s1: &Segment,
    s2: &Segment,
) -> Result<IntersectionClass, GeometryError> {
    let (p, q) = (snap2(sn, &s1.a)?, snap2(sn, &s1.b)?);
    let (r, s) = (snap2(sn, &s2.a)?, snap2(sn, &s2.b)?);
    if p == q || r == s {
        return Err(GeometryError::DegenerateSegment);
    }
    let back = |v: IPoint| Point::xy(sn.unsnap(v.x), sn.unsnap(v.y));
    Ok(match relate(p, q, r, s) {
        SegmentRelation::Disjoint => IntersectionClass::Disjoint,
        SegmentRelation::Crossing { t, .. } => {
            // Evaluate from the lexicographically smaller segment so the
            // witness is identical under argument swap.
            let ((a, b), tt) = if (p.min(q), p.max(q)) <= (r.min(s), r.max(s)) {
                ((p, q), t)
            } else {
                let u = match relate(r, s, p, q) {
                    SegmentRelation::Crossing { t, .. } => t,
                    _ => unreachable!("crossing is symmetric"),
                };
                ((r, s), u)
            };
            let tf = tt.to_f64();
            let x = sn.unsnap(a.x) + (sn.unsnap(b.x) - sn.unsnap(a.x)) * tf;
            let y = sn.unsnap(a.y) + (sn.unsnap(b.y) - sn.unsnap(a.y)) * tf;
            IntersectionClass::TransversePoint(Point::xy(x, y))
        }
        SegmentRelation::Contact { collinear, .. } => {
            if collinear {
                // Overlap of the two collinear closed intervals.
                let key = |v: IPoint| (v.x, v.y);
                let (lo1, hi1) = (p.min(q), p.max(q));
                let (lo2, hi2) = (r.min(s), r.max(s));
                let lo = if key(lo1) >= key(lo2) { lo1 } else { lo2 };
                let hi = if key(hi1) <= key(hi2) { hi1 } else { hi2 };
                if lo == hi {
                    IntersectionClass::SharedEndpoint(back(lo))
                } else {
                    IntersectionClass::CollinearOverlap(Segment::new(back(lo), back(hi)))
                }
            } else if let Some(v) = [p, q].into_iter().find(|v| *v == r || *v == s) {
                IntersectionClass::SharedEndpoint(back(v))
            } else {
                let v = [r, s, p, q]
                    .into_iter()
                    .enumerate()
                    .find(|(k, v)| {
                        if *k < 2 {
                            exact_on_segment(p, q, *v)
                        } else {
                            exact_on_segment(r, s, *v)
                        }
                    })
                    .map(|(_, v)| v)
                    .expect("contact has a witness endpoint");
                IntersectionClass::Touching(back(v))
            }
        }
    })
}

fn exact_on_segment(p: IPoint, q: IPoint, x: IPoint) -> bool {
    orient(p, q, x) == 0
        && x.x >= p.x.min(q.x)
        && x.x <= p.x.max(q.x)
        && x.y >= p.y.min(q.y)
        && x.y <= p.y.max(q.y)
}

/// Locates `p` relative to the closed triangle `t` at the default precision.
pub fn point_in_triangle(
    p: &Point,
    t: (&Point, &Point, &Point),
) -> Result<PointLocation, GeometryError> {
    let s = Snapper::default();
    Ok(locate_in_triangle(
        snap2(&s, p)?,
        snap2(&s, t.0)?,
        snap2(&s, t.1)?,
        snap2(&s, t.2)?,
    ))
}

/// Exact location of a lattice point in a lattice triangle. Degenerate
/// triangles collapse to their segment hull, which has no interior.
pub fn locate_in_triangle(p: IPoint, a: IPoint, b: IPoint, c: IPoint) -> PointLocation {
    let area = orient(a, b, c);
    if area == 0 {
        let pts = [a, b, c];
        let lo = *pts.iter().min().unwrap();
        let hi = *pts.iter().max().unwrap();
        let inside = if lo == hi {
            p == lo
        } else {
            exact_on_segment(lo, hi, p)
        };
        return if inside {
            PointLocation::Boundary
        } else {
            PointLocation::Exterior
        };
    }
    let sgn = area.signum();
    let o = [
        orient(a, b, p) * sgn,
        orient(b, c, p) * sgn,
        orient(c, a, p) * sgn,
    ];
    if o.iter().any(|v| *v < 0) {
        PointLocation::Exterior
    } else if o.iter().all(|v| *v > 0) {
        PointLocation::Interior
    } else {
        PointLocation::Boundary
    }
}

/// Directed distance `sup_{a in A} inf_{b in B} |a - b|`.
pub fn directed_hausdorff(a: &[Point], b: &[Point]) -> Result<f64, GeometryError> {
    if a.is_empty() || b.is_empty() {
        return Err(GeometryError::Empty);
    }
    let dim = a[0].dim();
    if let Some(p) = a.iter().chain(b).find(|p| p.dim() != dim) {
        return Err(GeometryError::DimensionMismatch(dim, p.dim()));
    }
    if dim == 2 {
        let bp: Vec<P2> = b.iter().map(|p| p.planar().unwrap()).collect();
        let grid = PointGrid::build(&bp);
        return Ok(a
            .iter()
            .map(|p| grid.nearest(p.planar().unwrap()).1)
            .fold(0.0, f64::max));
    }
    Ok(a.iter()
        .map(|p| {
            b.iter()
                .map(|q| p.distance(q))
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max))
}

/// Hausdorff distance between two non-empty finite point sets.
pub fn hausdorff_distance(a: &[Point], b: &[Point]) -> Result<f64, GeometryError> {
    Ok(directed_hausdorff(a, b)?.max(directed_hausdorff(b, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pt(x: f64, y: f64) -> Point {
        Point::xy(x, y)
    }

    fn seg(a: (f64, f64), b: (f64, f64)) -> Segment {
        Segment::new(pt(a.0, a.1), pt(b.0, b.1))
    }

    #[test]
    fn orientation_examples() {
        let o = |a, b, c| orientation(&a, &b, &c).unwrap();
        assert_eq!(o(pt(0., 0.), pt(1., 0.), pt(0., 1.)), Orientation::Ccw);
        assert_eq!(
            o(pt(0., 0.), pt(1., 1.), pt(2., 2.)),
            Orientation::Collinear
        );
        assert_eq!(o(pt(0., 0.), pt(0., 1.), pt(1., 0.)), Orientation::Cw);
    }

    #[test]
    fn orientation_rejects_non_planar() {
        let p = Point::new(vec![0.0, 0.0, 0.0]);
        assert_eq!(
            orientation(&p, &pt(1.0, 0.0), &pt(0.0, 1.0)),
            Err(GeometryError::NotPlanar(3))
        );
    }

    #[test]
    fn orientation_is_exact_near_degeneracy() {
        // Floating-point evaluation of this determinant is notoriously wrong.
        let a = pt(0.5, 0.5);
        let b = pt(12.0, 12.0);
        let c = pt(24.0, 24.0);
        assert_eq!(orientation(&a, &b, &c).unwrap(), Orientation::Collinear);
        let d = pt(24.0, 24.000000000001);
        assert_eq!(orientation(&a, &b, &d).unwrap(), Orientation::Ccw);
    }

    #[test]
    fn intersection_examples() {
        let x = segment_intersect(&seg((-1., 0.), (1., 0.)), &seg((0., -1.), (0., 1.))).unwrap();
        assert_eq!(x, IntersectionClass::TransversePoint(pt(0.0, 0.0)));
        let x = segment_intersect(&seg((0., 0.), (1., 0.)), &seg((2., 0.), (3., 0.))).unwrap();
        assert_eq!(x, IntersectionClass::Disjoint);
        let x = segment_intersect(&seg((0., 0.), (1., 0.)), &seg((1., 0.), (1., 1.))).unwrap();
        assert_eq!(x, IntersectionClass::SharedEndpoint(pt(1.0, 0.0)));
    }

    #[test]
    fn intersection_special_cases() {
        let x = segment_intersect(&seg((0., 0.), (2., 0.)), &seg((1., 0.), (1., 1.))).unwrap();
        assert_eq!(x, IntersectionClass::Touching(pt(1.0, 0.0)));
        let x = segment_intersect(&seg((0., 0.), (2., 0.)), &seg((1., 0.), (3., 0.))).unwrap();
        assert_eq!(
            x,
            IntersectionClass::CollinearOverlap(seg((1., 0.), (2., 0.)))
        );
        let x = segment_intersect(&seg((0., 0.), (1., 0.)), &seg((1., 0.), (3., 0.))).unwrap();
        assert_eq!(x, IntersectionClass::SharedEndpoint(pt(1.0, 0.0)));
        assert_eq!(
            segment_intersect(&seg((0., 0.), (0., 0.)), &seg((1., 0.), (3., 0.))),
            Err(GeometryError::DegenerateSegment)
        );
    }

    #[test]
    fn hausdorff_examples() {
        assert_eq!(
            hausdorff_distance(&[pt(0., 0.)], &[pt(3., 4.)]).unwrap(),
            5.0
        );
        let a = [pt(0., 0.), pt(1., 2.)];
        assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
        assert_eq!(
            hausdorff_distance(&[pt(0., 0.)], &[pt(0., 0.), pt(2., 0.)]).unwrap(),
            2.0
        );
        assert_eq!(hausdorff_distance(&[], &a), Err(GeometryError::Empty));
    }

    #[test]
    fn hausdorff_in_three_dimensions() {
        let a = [Point::new(vec![0., 0., 0.])];
        let b = [Point::new(vec![1., 2., 2.])];
        assert_eq!(hausdorff_distance(&a, &b).unwrap(), 3.0);
    }

    #[test]
    fn triangle_examples() {
        let (a, b, c) = (pt(0., 0.), pt(3., 0.), pt(0., 3.));
        let t = (&a, &b, &c);
        assert_eq!(
            point_in_triangle(&pt(1., 1.), t).unwrap(),
            PointLocation::Interior
        );
        assert_eq!(
            point_in_triangle(&pt(10., 10.), t).unwrap(),
            PointLocation::Exterior
        );
        assert_eq!(
            point_in_triangle(&pt(1.5, 0.), t).unwrap(),
            PointLocation::Boundary
        );
    }

    #[test]
    fn degenerate_triangle_is_its_segment() {
        let (a, b, c) = (pt(0., 0.), pt(1., 1.), pt(2., 2.));
        let t = (&a, &b, &c);
        assert_eq!(
            point_in_triangle(&pt(1.5, 1.5), t).unwrap(),
            PointLocation::Boundary
        );
        assert_eq!(
            point_in_triangle(&pt(1.5, 1.0), t).unwrap(),
            PointLocation::Exterior
        );
    }

    fn small() -> impl Strategy<Value = (f64, f64)> {
        (-20i32..20, -20i32..20).prop_map(|(x, y)| (x as f64 * 0.25, y as f64 * 0.25))
    }

    fn cloud() -> impl Strategy<Value = Vec<Point>> {
        prop::collection::vec(small(), 1..12)
            .prop_map(|v| v.into_iter().map(|(x, y)| pt(x, y)).collect())
    }

    proptest! {
        #[test]
        fn orientation_antisymmetric(a in small(), b in small(), c in small()) {
            let (a, b, c) = (pt(a.0, a.1), pt(b.0, b.1), pt(c.0, c.1));
            let flip = |o| match o {
                Orientation::Cw => Orientation::Ccw,
                Orientation::Ccw => Orientation::Cw,
                Orientation::Collinear => Orientation::Collinear,
            };
            let o = orientation(&a, &b, &c).unwrap();
            prop_assert_eq!(orientation(&b, &a, &c).unwrap(), flip(o));
            prop_assert_eq!(orientation(&a, &c, &b).unwrap(), flip(o));
            prop_assert_eq!(orientation(&c, &b, &a).unwrap(), flip(o));
        }

        #[test]
        fn intersection_symmetric(a in small(), b in small(), c in small(), d in small()) {
            prop_assume!(a != b && c != d);
            let s1 = seg(a, b);
            let s2 = seg(c, d);
            prop_assert_eq!(segment_intersect(&s1, &s2).unwrap(),
                            segment_intersect(&s2, &s1).unwrap());
        }

        #[test]
        fn transverse_points_are_interior(a in small(), b in small(), c in small(), d in small()) {
            prop_assume!(a != b && c != d);
            if let IntersectionClass::TransversePoint(x) =
                segment_intersect(&seg(a, b), &seg(c, d)).unwrap()
            {
                let x = x.planar().unwrap();
                for (p, q) in [(a, b), (c, d)] {
                    let (p, q) = (P2::new(p.0, p.1), P2::new(q.0, q.1));
                    prop_assert!(point_segment_distance(x, p, q) < 1e-9);
                    prop_assert!(x.dist(p) > 1e-9 && x.dist(q) > 1e-9);
                }
            }
        }

        #[test]
        fn hausdorff_is_a_metric(a in cloud(), b in cloud(), c in cloud()) {
            let ab = hausdorff_distance(&a, &b).unwrap();
            let ba = hausdorff_distance(&b, &a).unwrap();
            let bc = hausdorff_distance(&b, &c).unwrap();
            let ac = hausdorff_distance(&a, &c).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(hausdorff_distance(&a, &a).unwrap(), 0.0);
            prop_assert!(ac <= ab + bc + 1e-12);
            let same = a.iter().all(|p| b.contains(p)) && b.iter().all(|p| a.contains(p));
            prop_assert_eq!(ab == 0.0, same);
        }

        #[test]
        fn hausdorff_of_subset_is_directed(b in cloud(), k in 1usize..12) {
            let a: Vec<Point> = b.iter().take(k).cloned().collect();
            prop_assert_eq!(hausdorff_distance(&a, &b).unwrap(),
                            directed_hausdorff(&b, &a).unwrap());
        }
    }
}
