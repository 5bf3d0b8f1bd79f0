//! Integer-snapped planar predicates.
//!
//! Coordinates are scaled by `10^digits`, rounded to `i64` and bounded by
//! `2^50` in magnitude. Differences then fit in 52 bits, so every
//! orientation determinant fits in `i128`, and every intersection parameter
//! is a ratio of two `i128` values. Ratios are compared through a widening
//! 128x128 -> 256 bit multiply, so no predicate in this module ever rounds.

use std::cmp::Ordering;

use super::GeometryError;

/// Largest admissible magnitude of a snapped coordinate.
pub const SNAP_LIMIT: i64 = 1 << 50;

/// Fixed-precision snapping of real coordinates onto an integer lattice.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Snapper {
    digits: u32,
    scale: f64,
}

impl Snapper {
    pub fn new(digits: u32) -> Self {
        Snapper {
            digits,
            scale: 10f64.powi(digits as i32),
        }
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn snap(&self, x: f64) -> Result<i64, GeometryError> {
        if !x.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        let s = (x * self.scale).round();
        if s.abs() > SNAP_LIMIT as f64 {
            return Err(GeometryError::OutOfRange {
                value: x,
                digits: self.digits,
            });
        }
        Ok(s as i64)
    }

    pub fn snap_point(&self, x: f64, y: f64) -> Result<IPoint, GeometryError> {
        Ok(IPoint {
            x: self.snap(x)?,
            y: self.snap(y)?,
        })
    }

    pub fn unsnap(&self, v: i64) -> f64 {
        v as f64 / self.scale
    }
}

impl Default for Snapper {
    fn default() -> Self {
        Snapper::new(super::DEFAULT_SNAP_DIGITS)
    }
}

/// A lattice point.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IPoint {
    pub x: i64,
    pub y: i64,
}

impl IPoint {
    pub fn new(x: i64, y: i64) -> Self {
        IPoint { x, y }
    }

    pub fn sub(self, o: IPoint) -> IVec {
        IVec {
            x: (self.x - o.x) as i128,
            y: (self.y - o.y) as i128,
        }
    }
}

/// Difference of two lattice points.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IVec {
    pub x: i128,
    pub y: i128,
}

impl IVec {
    pub fn cross(self, o: IVec) -> i128 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(self, o: IVec) -> i128 {
        self.x * o.x + self.y * o.y
    }

    pub fn neg(self) -> IVec {
        IVec {
            x: -self.x,
            y: -self.y,
        }
    }

    /// Upper half-plane (angle in `[0, pi)`) versus lower.
    pub(crate) fn half(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Counter-clockwise angular order starting at the positive x axis.
    /// Parallel vectors with the same direction compare equal.
    pub fn angle_cmp(self, o: IVec) -> Ordering {
        let (h1, h2) = (self.half(), o.half());
        if h1 != h2 {
            return h1.cmp(&h2);
        }
        0.cmp(&self.cross(o))
    }
}

/// Twice the signed area of `abc`.
pub fn orient(a: IPoint, b: IPoint, c: IPoint) -> i128 {
    b.sub(a).cross(c.sub(a))
}

/// A rational number `num / den` with `den > 0`.
#[derive(Clone, Copy, Debug)]
pub struct Ratio {
    pub num: i128,
    pub den: i128,
}

impl Ratio {
    pub fn new(num: i128, den: i128) -> Self {
        assert!(den != 0, "zero denominator");
        if den < 0 {
            Ratio {
                num: -num,
                den: -den,
            }
        } else {
            Ratio { num, den }
        }
    }

    pub const ZERO: Ratio = Ratio { num: 0, den: 1 };
    pub const ONE: Ratio = Ratio { num: 1, den: 1 };

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl PartialEq for Ratio {
    fn eq(&self, o: &Self) -> bool {
        self.cmp(o) == Ordering::Equal
    }
}

impl Eq for Ratio {}

impl PartialOrd for Ratio {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl Ord for Ratio {
    fn cmp(&self, o: &Self) -> Ordering {
        cmp_products(self.num, o.den, o.num, self.den)
    }
}

/// Unsigned 128x128 -> 256 bit product as `(hi, lo)`.
fn mul_u128(a: u128, b: u128) -> (u128, u128) {
    const MASK: u128 = u64::MAX as u128;
    let (a1, a0) = (a >> 64, a & MASK);
    let (b1, b0) = (b >> 64, b & MASK);
    let lo = a0 * b0;
    let m1 = a0 * b1;
    let m2 = a1 * b0;
    let hi = a1 * b1;
    let (mid, mid_carry) = m1.overflowing_add(m2);
    let (lo, lo_carry) = lo.overflowing_add(mid << 64);
    let hi = hi + (mid >> 64) + ((mid_carry as u128) << 64) + lo_carry as u128;
    (hi, lo)
}

/// Sign-magnitude 256 bit product.
fn mul_i128(a: i128, b: i128) -> (bool, u128, u128) {
    let neg = (a < 0) != (b < 0) && a != 0 && b != 0;
    let (hi, lo) = mul_u128(a.unsigned_abs(), b.unsigned_abs());
    (neg, hi, lo)
}

/// Compares `a * b` with `c * d` exactly.
pub fn cmp_products(a: i128, b: i128, c: i128, d: i128) -> Ordering {
    let (n1, h1, l1) = mul_i128(a, b);
    let (n2, h2, l2) = mul_i128(c, d);
    let zero1 = h1 == 0 && l1 == 0;
    let zero2 = h2 == 0 && l2 == 0;
    let s1 = if zero1 {
        0
    } else if n1 {
        -1
    } else {
        1
    };
    let s2 = if zero2 {
        0
    } else if n2 {
        -1
    } else {
        1
    };
    if s1 != s2 {
        return s1.cmp(&s2);
    }
    let mag = (h1, l1).cmp(&(h2, l2));
    if s1 < 0 {
        mag.reverse()
    } else {
        mag
    }
}

/// How two lattice segments `pq` and `rs` meet, as parameters along each.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SegmentRelation {
    Disjoint,
    /// Interiors cross at a single point that is not an endpoint of either.
    Crossing {
        t: Ratio,
        u: Ratio,
    },
    /// The segments touch or overlap only through endpoints and collinear runs.
    /// Each field lists parameters on one segment at which an endpoint of the
    /// other lies strictly inside it.
    Contact {
        on_pq: [Option<Ratio>; 2],
        on_rs: [Option<Ratio>; 2],
        collinear: bool,
    },
}

/// Parameter of `x` on `pq` when `x` lies strictly inside the segment.
/// Assumes `x` is collinear with `p` and `q`.
fn interior_param(p: IPoint, q: IPoint, x: IPoint) -> Option<Ratio> {
    let d = q.sub(p);
    let num = x.sub(p).dot(d);
    let den = d.dot(d);
    if num > 0 && num < den {
        Some(Ratio::new(num, den))
    } else {
        None
    }
}

fn on_closed(p: IPoint, q: IPoint, x: IPoint) -> bool {
    orient(p, q, x) == 0
        && x.x >= p.x.min(q.x)
        && x.x <= p.x.max(q.x)
        && x.y >= p.y.min(q.y)
        && x.y <= p.y.max(q.y)
}

/// Exact classification of two non-degenerate lattice segments.
pub fn relate(p: IPoint, q: IPoint, r: IPoint, s: IPoint) -> SegmentRelation {
    debug_assert!(p != q && r != s);
    let o1 = orient(p, q, r).signum();
    let o2 = orient(p, q, s).signum();
    let o3 = orient(r, s, p).signum();
    let o4 = orient(r, s, q).signum();
    if o1 * o2 < 0 && o3 * o4 < 0 {
        let d1 = q.sub(p);
        let d2 = s.sub(r);
        let den = d1.cross(d2);
        let t = Ratio::new(r.sub(p).cross(d2), den);
        let u = Ratio::new(r.sub(p).cross(d1), den);
        return SegmentRelation::Crossing { t, u };
    }
    let collinear = o1 == 0 && o2 == 0;
    let mut touch = false;
    let mut on_pq = [None, None];
    let mut on_rs = [None, None];
    for (k, x) in [r, s].into_iter().enumerate() {
        if on_closed(p, q, x) {
            touch = true;
            on_pq[k] = interior_param(p, q, x);
        }
    }
    for (k, x) in [p, q].into_iter().enumerate() {
        if on_closed(r, s, x) {
            touch = true;
            on_rs[k] = interior_param(r, s, x);
        }
    }
    if touch {
        SegmentRelation::Contact {
            on_pq,
            on_rs,
            collinear,
        }
    } else {
        SegmentRelation::Disjoint
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use proptest::prelude::*;

    fn big_cmp(a: i128, b: i128, c: i128, d: i128) -> Ordering {
        (BigInt::from(a) * BigInt::from(b)).cmp(&(BigInt::from(c) * BigInt::from(d)))
    }

    #[test]
    fn wide_products_at_the_extremes() {
        let m = i128::MAX;
        assert_eq!(cmp_products(m, m, m, m - 1), Ordering::Greater);
        assert_eq!(cmp_products(-m, m, m, -m), Ordering::Equal);
        assert_eq!(cmp_products(-m, m, 0, 5), Ordering::Less);
        assert_eq!(cmp_products(0, m, 0, -m), Ordering::Equal);
    }

    proptest! {
        #[test]
        fn wide_products_match_bigint(a in any::<i128>(), b in any::<i128>(),
                                      c in any::<i128>(), d in any::<i128>()) {
            let a = a / 2; let b = b / 2; let c = c / 2; let d = d / 2;
            prop_assert_eq!(cmp_products(a, b, c, d), big_cmp(a, b, c, d));
        }

        #[test]
        fn angle_order_is_antisymmetric(ax in -50i128..50, ay in -50i128..50,
                                        bx in -50i128..50, by in -50i128..50) {
            prop_assume!((ax, ay) != (0, 0) && (bx, by) != (0, 0));
            let a = IVec { x: ax, y: ay };
            let b = IVec { x: bx, y: by };
            prop_assert_eq!(a.angle_cmp(b), b.angle_cmp(a).reverse());
            let fa = (ay as f64).atan2(ax as f64).rem_euclid(std::f64::consts::TAU);
            let fb = (by as f64).atan2(bx as f64).rem_euclid(std::f64::consts::TAU);
            if (fa - fb).abs() > 1e-9 {
                prop_assert_eq!(a.angle_cmp(b), fa.partial_cmp(&fb).unwrap());
            }
        }
    }

    #[test]
    fn snapping_rejects_huge_and_non_finite_values() {
        let s = Snapper::new(12);
        assert!(s.snap(1e4).is_err());
        assert!(s.snap(f64::NAN).is_err());
        assert_eq!(s.snap(0.5).unwrap(), 500_000_000_000);
    }

    #[test]
    fn crossing_parameters() {
        let p = IPoint::new(-2, 0);
        let q = IPoint::new(2, 0);
        let r = IPoint::new(1, -1);
        let s = IPoint::new(1, 3);
        match relate(p, q, r, s) {
            SegmentRelation::Crossing { t, u } => {
                assert_eq!(t, Ratio::new(3, 4));
                assert_eq!(u, Ratio::new(1, 4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn collinear_overlap_reports_inner_endpoints() {
        let rel = relate(
            IPoint::new(0, 0),
            IPoint::new(4, 0),
            IPoint::new(2, 0),
            IPoint::new(6, 0),
        );
        assert_eq!(
            rel,
            SegmentRelation::Contact {
                on_pq: [Some(Ratio::new(1, 2)), None],
                on_rs: [None, Some(Ratio::new(1, 2))],
                collinear: true,
            }
        );
    }
}
