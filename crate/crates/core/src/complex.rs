//! Vietoris–Rips flag complexes and their GF(2) homology.
//!
//! Simplices of each dimension are stored as one flat array of sorted vertex
//! tuples in lexicographic order, which is the order clique enumeration
//! produces. Faces are therefore located by binary search.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::path_metric::FiniteMetric;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ComplexError {
    #[error("scale β must be positive, got {0}")]
    Scale(f64),
    #[error("max_dim must be 1, 2 or 3, got {0}")]
    MaxDim(usize),
    #[error("Betti numbers up to dimension {up_to} need simplices through dimension {need}, complex stops at {have}")]
    MissingDimension {
        up_to: usize,
        need: usize,
        have: usize,
    },
    #[error("simplex {0:?} has a vertex out of range")]
    VertexRange(Vec<usize>),
    #[error("simplex {0:?} is missing its face {1:?}")]
    NotClosed(Vec<usize>, Vec<usize>),
    #[error("complex exceeds the budget of {budget} {what} (estimated {count})")]
    Budget {
        what: &'static str,
        count: usize,
        budget: usize,
    },
}

/// Which metric produced a complex.
#[derive(Clone, Debug, PartialEq)]
pub enum MetricTag {
    Euclidean,
    EpsPath { eps: f64 },
    Intrinsic,
    Explicit,
}

impl fmt::Display for MetricTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricTag::Euclidean => write!(f, "euclidean"),
            MetricTag::EpsPath { eps } => write!(f, "eps-path:{eps}"),
            MetricTag::Intrinsic => write!(f, "intrinsic"),
            MetricTag::Explicit => write!(f, "explicit"),
        }
    }
}

/// Limits on the size of a complex under construction.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    pub edges: usize,
    pub simplices: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            edges: 20_000_000,
            simplices: 60_000_000,
        }
    }
}

/// A simplicial complex given by its simplices of each dimension.
#[derive(Clone, Debug, PartialEq)]
pub struct FlagComplex {
    n: usize,
    beta: f64,
    metric: MetricTag,
    /// Dimensions known to be fully enumerated; `None` when the listed
    /// simplices are the whole complex.
    truncated_at: Option<usize>,
    /// `simplices[k]` holds the k-simplices, `k + 1` entries each.
    simplices: Vec<Vec<u32>>,
    /// Sorted neighbors of every vertex.
    nbrs: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BettiVector {
    pub b0: usize,
    pub b1: usize,
    pub b2: Option<usize>,
}

impl BettiVector {
    pub fn pair(self) -> (usize, usize) {
        (self.b0, self.b1)
    }
}

impl fmt::Display for BettiVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.b0, self.b1)?;
        if let Some(b2) = self.b2 {
            write!(f, " {b2}")?;
        }
        Ok(())
    }
}

/// Vietoris–Rips complex: all vertex sets of pairwise distance `< beta`, up
/// to dimension `max_dim`.
pub fn rips<M: FiniteMetric + ?Sized>(
    metric: &M,
    beta: f64,
    max_dim: usize,
    tag: MetricTag,
) -> Result<FlagComplex, ComplexError> {
    rips_with_budget(metric, beta, max_dim, tag, Budget::default())
}

pub fn rips_with_budget<M: FiniteMetric + ?Sized>(
    metric: &M,
    beta: f64,
    max_dim: usize,
    tag: MetricTag,
    budget: Budget,
) -> Result<FlagComplex, ComplexError> {
    if !(beta > 0.0) {
        return Err(ComplexError::Scale(beta));
    }
    if !(1..=3).contains(&max_dim) {
        return Err(ComplexError::MaxDim(max_dim));
    }
    let n = metric.len();
    let up: Vec<Vec<u32>> = metric
        .upper_neighbors(beta)
        .into_iter()
        .map(|r| r.into_iter().map(|j| j as u32).collect())
        .collect();
    let n_edges: usize = up.iter().map(Vec::len).sum();
    if n_edges > budget.edges {
        return Err(ComplexError::Budget {
            what: "edges",
            count: n_edges,
            budget: budget.edges,
        });
    }
    from_upper_neighbors(n, up, beta, max_dim, tag, budget)
}

/// Clique expansion of an upper-neighbor graph.
fn from_upper_neighbors(
    n: usize,
    up: Vec<Vec<u32>>,
    beta: f64,
    max_dim: usize,
    metric: MetricTag,
    budget: Budget,
) -> Result<FlagComplex, ComplexError> {
    let mut simplices: Vec<Vec<u32>> = vec![Vec::new(); max_dim + 1];
    simplices[0] = (0..n as u32).collect();
    let mut total = n;
    let mut stack: Vec<u32> = Vec::with_capacity(max_dim + 1);
    for i in 0..n {
        stack.clear();
        stack.push(i as u32);
        expand(
            &up,
            &mut stack,
            &up[i],
            max_dim,
            &mut simplices,
            &mut total,
            budget,
        )?;
    }
    let mut nbrs: Vec<Vec<u32>> = vec![Vec::new(); n];
    for (i, row) in up.iter().enumerate() {
        for &j in row {
            nbrs[i].push(j);
            nbrs[j as usize].push(i as u32);
        }
    }
    for r in &mut nbrs {
        r.sort_unstable();
    }
    Ok(FlagComplex {
        n,
        beta,
        metric,
        truncated_at: Some(max_dim),
        simplices,
        nbrs,
    })
}

fn expand(
    up: &[Vec<u32>],
    stack: &mut Vec<u32>,
    cand: &[u32],
    max_dim: usize,
    out: &mut [Vec<u32>],
    total: &mut usize,
    budget: Budget,
) -> Result<(), ComplexError> {
    let dim = stack.len();
    if dim > max_dim {
        return Ok(());
    }
    for (k, &j) in cand.iter().enumerate() {
        stack.push(j);
        out[dim].extend_from_slice(stack);
        *total += 1;
        if *total > budget.simplices {
            return Err(ComplexError::Budget {
                what: "simplices",
                count: *total,
                budget: budget.simplices,
            });
        }
        if dim < max_dim {
            let next = intersect_sorted(&cand[k + 1..], &up[j as usize]);
            if !next.is_empty() {
                expand(up, stack, &next, max_dim, out, total, budget)?;
            }
        }
        stack.pop();
    }
    Ok(())
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => i += 1,
            Ordering::Greater => j += 1,
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

impl FlagComplex {
    /// An explicit complex from its simplex list. Faces must be present.
    /// `truncated_at` declares a dimension cap of an enumeration; `None`
    /// means the list is the whole complex.
    pub fn from_simplices(
        n: usize,
        list: &[Vec<usize>],
        truncated_at: Option<usize>,
    ) -> Result<FlagComplex, ComplexError> {
        let top = list
            .iter()
            .map(|s| s.len().saturating_sub(1))
            .max()
            .unwrap_or(0);
        let dims = truncated_at.map_or(top, |t| t.max(top));
        let mut by_dim: Vec<Vec<Vec<u32>>> = vec![Vec::new(); dims + 1];
        for s in list {
            if s.is_empty() {
                continue;
            }
            if s.iter().any(|&v| v >= n) {
                return Err(ComplexError::VertexRange(s.clone()));
            }
            let mut t: Vec<u32> = s.iter().map(|&v| v as u32).collect();
            t.sort_unstable();
            t.dedup();
            by_dim[t.len() - 1].push(t);
        }
        by_dim[0] = (0..n as u32).map(|v| vec![v]).collect();
        let mut simplices = Vec::with_capacity(by_dim.len());
        for mut d in by_dim {
            d.sort_unstable();
            d.dedup();
            simplices.push(d.concat());
        }
        let mut nbrs: Vec<Vec<u32>> = vec![Vec::new(); n];
        if simplices.len() > 1 {
            for e in simplices[1].chunks(2) {
                nbrs[e[0] as usize].push(e[1]);
                nbrs[e[1] as usize].push(e[0]);
            }
        }
        for r in &mut nbrs {
            r.sort_unstable();
        }
        let k = FlagComplex {
            n,
            beta: f64::NAN,
            metric: MetricTag::Explicit,
            truncated_at,
            simplices,
            nbrs,
        };
        for d in 1..k.simplices.len() {
            for s in k.simplices[d].chunks(d + 1) {
                for skip in 0..=d {
                    let face: Vec<u32> = (0..=d).filter(|&x| x != skip).map(|x| s[x]).collect();
                    if k.index_of(&face).is_none() {
                        return Err(ComplexError::NotClosed(
                            s.iter().map(|&v| v as usize).collect(),
                            face.iter().map(|&v| v as usize).collect(),
                        ));
                    }
                }
            }
        }
        Ok(k)
    }

    /// The complex generated by the given simplices and all their faces.
    pub fn from_maximal(n: usize, list: &[Vec<usize>]) -> Result<FlagComplex, ComplexError> {
        let mut all = Vec::new();
        for s in list {
            let mut s = s.clone();
            s.sort_unstable();
            s.dedup();
            if s.len() > 16 {
                return Err(ComplexError::Budget {
                    what: "faces",
                    count: 1usize << s.len(),
                    budget: 1 << 16,
                });
            }
            for mask in 1u32..(1 << s.len()) {
                all.push(
                    (0..s.len())
                        .filter(|&i| mask >> i & 1 == 1)
                        .map(|i| s[i])
                        .collect(),
                );
            }
        }
        FlagComplex::from_simplices(n, &all, None)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn metric(&self) -> &MetricTag {
        &self.metric
    }

    pub fn truncated_at(&self) -> Option<usize> {
        self.truncated_at
    }

    /// Highest dimension with storage.
    pub fn top_dim(&self) -> usize {
        self.simplices.len() - 1
    }

    pub fn count(&self, k: usize) -> usize {
        self.simplices.get(k).map_or(0, |s| s.len() / (k + 1))
    }

    /// The k-simplices as sorted vertex tuples in lexicographic order.
    pub fn simplices(&self, k: usize) -> impl Iterator<Item = &[u32]> + '_ {
        self.simplices
            .get(k)
            .map(|s| s.chunks(k + 1))
            .into_iter()
            .flatten()
    }

    pub fn simplex(&self, k: usize, idx: usize) -> &[u32] {
        &self.simplices[k][idx * (k + 1)..(idx + 1) * (k + 1)]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.simplices(1).map(|e| (e[0] as usize, e[1] as usize))
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.nbrs[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a != b && self.nbrs[a].binary_search(&(b as u32)).is_ok()
    }

    /// Index of a sorted simplex within its dimension.
    pub fn index_of(&self, s: &[u32]) -> Option<usize> {
        let k = s.len().checked_sub(1)?;
        let flat = self.simplices.get(k)?;
        let m = flat.len() / (k + 1);
        let (mut lo, mut hi) = (0, m);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match flat[mid * (k + 1)..(mid + 1) * (k + 1)].cmp(s) {
                Ordering::Less => lo = mid + 1,
                Ordering::Greater => hi = mid,
                Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        let mut t: Vec<u32> = s.iter().map(|&v| v as u32).collect();
        t.sort_unstable();
        t.dedup();
        self.index_of(&t).is_some()
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        (0..self.simplices.len())
            .map(|k| {
                let c = self.count(k) as i64;
                if k % 2 == 0 {
                    c
                } else {
                    -c
                }
            })
            .sum()
    }

    /// Ranks of the boundary maps `∂_1 ..= ∂_top` over GF(2), reducing from
    /// the top down and clearing columns of simplices already paired.
    fn boundary_ranks(&self, top: usize) -> Vec<usize> {
        let mut ranks = vec![0; top + 1];
        let mut cleared: Vec<bool> = Vec::new();
        for d in (1..=top).rev() {
            let m = self.count(d);
            let rows = self.count(d - 1);
            let mut pivot_col: Vec<u32> = vec![u32::MAX; rows];
            let mut reduced: Vec<Vec<u32>> = vec![Vec::new(); m];
            let mut next_cleared = vec![false; rows];
            let mut rank = 0;
            let mut face = vec![0u32; d];
            for j in 0..m {
                if cleared.get(j).copied().unwrap_or(false) {
                    continue;
                }
                let s = self.simplex(d, j);
                let mut col: Vec<u32> = Vec::with_capacity(d + 1);
                for skip in 0..=d {
                    let mut w = 0;
                    for (x, &v) in s.iter().enumerate() {
                        if x != skip {
                            face[w] = v;
                            w += 1;
                        }
                    }
                    col.push(self.index_of(&face).expect("downward closed") as u32);
                }
                col.sort_unstable();
                while let Some(&low) = col.last() {
                    let p = pivot_col[low as usize];
                    if p == u32::MAX {
                        break;
                    }
                    col = sym_diff(&col, &reduced[p as usize]);
                }
                if let Some(&low) = col.last() {
                    pivot_col[low as usize] = j as u32;
                    next_cleared[low as usize] = true;
                    rank += 1;
                    reduced[j] = col;
                }
            }
            ranks[d] = rank;
            cleared = next_cleared;
        }
        ranks
    }

    /// Betti numbers through dimension `up_to` (at most 2).
    pub fn betti(&self, up_to: usize) -> Result<BettiVector, ComplexError> {
        let need = up_to + 1;
        if let Some(t) = self.truncated_at {
            if t < need {
                return Err(ComplexError::MissingDimension {
                    up_to,
                    need,
                    have: t,
                });
            }
        }
        let top = need.min(self.top_dim());
        let ranks = self.boundary_ranks(top);
        let rank = |d: usize| if d >= 1 && d <= top { ranks[d] } else { 0 };
        let b = |k: usize| self.count(k) - rank(k) - rank(k + 1);
        Ok(BettiVector {
            b0: b(0),
            b1: if up_to >= 1 { b(1) } else { 0 },
            b2: if up_to >= 2 { Some(b(2)) } else { None },
        })
    }
}

fn sym_diff(a: &[u32], b: &[u32]) -> Vec<u32> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Betti numbers of an explicit complex given by its simplices.
pub fn betti(k: &FlagComplex, up_to: usize) -> Result<BettiVector, ComplexError> {
    k.betti(up_to)
}

pub fn euler_characteristic(k: &FlagComplex) -> i64 {
    k.euler_characteristic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::path_metric::{DistanceMatrix, EuclideanMetric};
    use crate::sampling::PointCloud;
    use proptest::prelude::*;

    fn equilateral() -> PointCloud {
        PointCloud::new(2, vec![0.0, 0.0, 1.0, 0.0, 0.5, 3f64.sqrt() / 2.0])
    }

    fn hexagon() -> PointCloud {
        let c = (0..6)
            .flat_map(|k| {
                let a = k as f64 * std::f64::consts::PI / 3.0;
                [a.cos(), a.sin()]
            })
            .collect();
        PointCloud::new(2, c)
    }

    #[test]
    fn rips_examples() {
        let c = equilateral();
        let k = rips(&EuclideanMetric(&c), 1.1, 2, MetricTag::Euclidean).unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 3, 1));
        // Side lengths are 1 up to rounding; use an exact matrix for the threshold.
        let m = DistanceMatrix::from_fn(3, |i, j| Some(if i == j { 0.0 } else { 1.0 }));
        let k = rips(&m, 1.0, 2, MetricTag::Explicit).unwrap();
        assert_eq!((k.count(0), k.count(1), k.count(2)), (3, 0, 0));
        let k = rips(&EuclideanMetric(&hexagon()), 1.1, 2, MetricTag::Euclidean).unwrap();
        assert_eq!((k.count(1), k.count(2)), (6, 0));
        assert_eq!(k.betti(1).unwrap().pair(), (1, 1));
    }

    #[test]
    fn betti_examples() {
        let hollow =
            FlagComplex::from_simplices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], None).unwrap();
        assert_eq!(hollow.betti(1).unwrap().pair(), (1, 1));
        let filled = FlagComplex::from_simplices(
            3,
            &[vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]],
            None,
        )
        .unwrap();
        assert_eq!(filled.betti(1).unwrap().pair(), (1, 0));
        let two = FlagComplex::from_simplices(
            6,
            &[
                vec![0, 1, 2],
                vec![0, 1],
                vec![1, 2],
                vec![0, 2],
                vec![3, 4, 5],
                vec![3, 4],
                vec![4, 5],
                vec![3, 5],
            ],
            None,
        )
        .unwrap();
        assert_eq!(two.betti(1).unwrap().pair(), (2, 0));
    }

    #[test]
    fn euler_examples() {
        let filled = FlagComplex::from_simplices(
            3,
            &[vec![0, 1], vec![1, 2], vec![0, 2], vec![0, 1, 2]],
            None,
        )
        .unwrap();
        assert_eq!(filled.euler_characteristic(), 1);
        let hollow =
            FlagComplex::from_simplices(3, &[vec![0, 1], vec![1, 2], vec![0, 2]], None).unwrap();
        assert_eq!(hollow.euler_characteristic(), 0);
        let k = rips(&EuclideanMetric(&hexagon()), 1.1, 2, MetricTag::Euclidean).unwrap();
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn truncated_complex_refuses_high_betti() {
        let k = rips(&EuclideanMetric(&hexagon()), 1.1, 1, MetricTag::Euclidean).unwrap();
        assert!(matches!(
            k.betti(1),
            Err(ComplexError::MissingDimension { .. })
        ));
        assert_eq!(k.betti(0).unwrap().b0, 1);
    }

    #[test]
    fn missing_face_is_rejected() {
        let r = FlagComplex::from_simplices(3, &[vec![0, 1, 2], vec![0, 1]], None);
        assert!(matches!(r, Err(ComplexError::NotClosed(..))));
    }

    #[test]
    fn octahedron_has_b2() {
        // Six points with antipodal pairs at distance 2, others at sqrt(2).
        let pts = [
            [1., 0., 0.],
            [-1., 0., 0.],
            [0., 1., 0.],
            [0., -1., 0.],
            [0., 0., 1.],
            [0., 0., -1.],
        ];
        let c = PointCloud::new(3, pts.concat());
        let k = rips(&EuclideanMetric(&c), 1.5, 3, MetricTag::Euclidean).unwrap();
        let b = k.betti(2).unwrap();
        assert_eq!((b.b0, b.b1, b.b2), (1, 0, Some(1)));
        assert_eq!(k.euler_characteristic(), 2);
    }

    #[test]
    fn budget_is_enforced() {
        let c = hexagon();
        let r = rips_with_budget(
            &EuclideanMetric(&c),
            3.0,
            3,
            MetricTag::Euclidean,
            Budget {
                edges: 5,
                simplices: 100,
            },
        );
        assert!(matches!(r, Err(ComplexError::Budget { what: "edges", .. })));
    }

    fn random_matrix() -> impl Strategy<Value = (usize, Vec<f64>)> {
        (2usize..13).prop_flat_map(|n| (Just(n), prop::collection::vec(0.0f64..1.0, n * n)))
    }

    proptest! {
        #[test]
        fn flag_property((n, raw) in random_matrix(), beta in 0.2f64..0.9) {
            let d = |i: usize, j: usize| if i == j { 0.0 } else { raw[i.min(j) * n + i.max(j)] };
            let m = DistanceMatrix::from_fn(n, |i, j| Some(d(i, j)));
            let k = rips(&m, beta, 3, MetricTag::Explicit).unwrap();
            for mask in 1u32..(1 << n) {
                let s: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
                if s.len() > 4 { continue; }
                let clique = s.iter().all(|&a| s.iter().all(|&b| a == b || d(a, b) < beta));
                prop_assert_eq!(k.contains(&s), clique);
            }
        }

        #[test]
        fn monotone_in_scale((n, raw) in random_matrix(), b1 in 0.1f64..0.9, b2 in 0.1f64..0.9) {
            let (lo, hi) = (b1.min(b2), b1.max(b2));
            let m = DistanceMatrix::from_fn(n, |i, j| Some(if i == j { 0.0 } else { raw[i.min(j) * n + i.max(j)] }));
            let small = rips(&m, lo, 2, MetricTag::Explicit).unwrap();
            let big = rips(&m, hi, 2, MetricTag::Explicit).unwrap();
            for d in 0..=2 {
                for s in small.simplices(d) {
                    prop_assert!(big.index_of(s).is_some());
                }
            }
        }

        #[test]
        fn euler_matches_betti((n, raw) in random_matrix(), beta in 0.2f64..0.9) {
            let m = DistanceMatrix::from_fn(n, |i, j| Some(if i == j { 0.0 } else { raw[i.min(j) * n + i.max(j)] }));
            let k = rips(&m, beta, 2, MetricTag::Explicit).unwrap();
            // The 2-skeleton taken as a complex in its own right.
            let list: Vec<Vec<usize>> = (0..=2)
                .flat_map(|d| k.simplices(d).map(|s| s.iter().map(|&v| v as usize).collect()).collect::<Vec<_>>())
                .collect();
            let skel = FlagComplex::from_simplices(n, &list, None).unwrap();
            let b = skel.betti(2).unwrap();
            prop_assert_eq!(skel.euler_characteristic(),
                            b.b0 as i64 - b.b1 as i64 + b.b2.unwrap() as i64);
        }
    }
}
