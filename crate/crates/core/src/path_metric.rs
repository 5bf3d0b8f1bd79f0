//! The ε-path metric of a point cloud.
//!
//! Two points are ε-neighbors when their Euclidean distance is strictly
//! below ε. `d^ε(p, q)` is the length of the shortest chain of neighbors
//! from `p` to `q`, or unreachable (`None`) when no chain exists.

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use rayon::prelude::*;
use thiserror::Error;

use crate::sampling::PointCloud;
use crate::UnionFind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PathMetricError {
    #[error("ε must be positive, got {0}")]
    Eps(f64),
    #[error("empty subset")]
    EmptySubset,
}

/// A finite metric on `0..len()`. `None` is an infinite distance.
pub trait FiniteMetric: Sync {
    fn len(&self) -> usize;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn distance(&self, i: usize, j: usize) -> Option<f64>;

    /// Indices `j > i` with `distance(i, j) < beta`, sorted.
    fn neighbors_above(&self, i: usize, beta: f64) -> Vec<usize> {
        (i + 1..self.len())
            .filter(|&j| self.distance(i, j).is_some_and(|d| d < beta))
            .collect()
    }

    /// `neighbors_above` for every vertex.
    fn upper_neighbors(&self, beta: f64) -> Vec<Vec<usize>> {
        (0..self.len())
            .into_par_iter()
            .map(|i| self.neighbors_above(i, beta))
            .collect()
    }
}

/// Pairs `i < j` with Euclidean distance `< r`, found by sweeping the first
/// coordinate. Works in any dimension.
pub fn close_pairs(cloud: &PointCloud, r: f64) -> Vec<Vec<(usize, f64)>> {
    let n = cloud.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| cloud.row(a)[0].total_cmp(&cloud.row(b)[0]).then(a.cmp(&b)));
    let mut out: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (k, &i) in order.iter().enumerate() {
        let xi = cloud.row(i)[0];
        for &j in &order[k + 1..] {
            if cloud.row(j)[0] - xi >= r {
                break;
            }
            let d = cloud.distance(i, j);
            if d < r {
                let (a, b) = if i < j { (i, j) } else { (j, i) };
                out[a].push((b, d));
            }
        }
    }
    for row in &mut out {
        row.sort_by_key(|p| p.0);
    }
    out
}

/// Euclidean distances on a cloud.
pub struct EuclideanMetric<'a>(pub &'a PointCloud);

impl FiniteMetric for EuclideanMetric<'_> {
    fn len(&self) -> usize {
        self.0.len()
    }

    fn distance(&self, i: usize, j: usize) -> Option<f64> {
        Some(self.0.distance(i, j))
    }

    fn upper_neighbors(&self, beta: f64) -> Vec<Vec<usize>> {
        close_pairs(self.0, beta)
            .into_iter()
            .map(|row| row.into_iter().map(|p| p.0).collect())
            .collect()
    }
}

/// A dense symmetric matrix of distances.
#[derive(Clone, Debug, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<Option<f64>>,
}

impl DistanceMatrix {
    pub fn new(n: usize, data: Vec<Option<f64>>) -> Self {
        assert_eq!(data.len(), n * n);
        DistanceMatrix { n, data }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize) -> Option<f64> + Sync) -> Self {
        let data = (0..n * n)
            .into_par_iter()
            .map(|k| f(k / n, k % n))
            .collect();
        DistanceMatrix { n, data }
    }

    pub fn row(&self, i: usize) -> &[Option<f64>] {
        &self.data[i * self.n..(i + 1) * self.n]
    }
}

impl FiniteMetric for DistanceMatrix {
    fn len(&self) -> usize {
        self.n
    }

    fn distance(&self, i: usize, j: usize) -> Option<f64> {
        self.data[i * self.n + j]
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Item(f64, usize);

impl Eq for Item {}

impl Ord for Item {
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        o.0.total_cmp(&self.0).then_with(|| o.1.cmp(&self.1))
    }
}

impl PartialOrd for Item {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}

/// The ε-neighbor graph of a cloud with shortest-path queries.
#[derive(Debug)]
pub struct EpsMetricIndex {
    eps: f64,
    adj: Vec<Vec<(usize, f64)>>,
    components: usize,
    all_pairs: OnceLock<DistanceMatrix>,
}

impl EpsMetricIndex {
    /// Links every pair at Euclidean distance strictly below `eps`.
    pub fn build(cloud: &PointCloud, eps: f64) -> Result<Self, PathMetricError> {
        if !(eps > 0.0) {
            return Err(PathMetricError::Eps(eps));
        }
        let n = cloud.len();
        let pairs = close_pairs(cloud, eps);
        let mut adj: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        for (i, row) in pairs.iter().enumerate() {
            for &(j, d) in row {
                adj[i].push((j, d));
                adj[j].push((i, d));
                uf.union(i, j);
            }
        }
        for row in &mut adj {
            row.sort_by_key(|p| p.0);
        }
        Ok(EpsMetricIndex {
            eps,
            adj,
            components: uf.labels().1,
            all_pairs: OnceLock::new(),
        })
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// Neighbor pairs `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.adj.iter().enumerate() {
            out.extend(row.iter().filter(|p| p.0 > i).map(|p| (i, p.0)));
        }
        out
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adj[i]
    }

    pub fn component_count(&self) -> usize {
        self.components
    }

    /// `d^ε` is finite everywhere exactly when this holds.
    pub fn is_connected(&self) -> bool {
        self.components <= 1
    }

    /// Shortest-path distances from `src`, stopping at `limit`.
    /// Nodes at distance `>= limit` are reported unreachable.
    pub fn distances_from(&self, src: usize, limit: f64) -> Vec<Option<f64>> {
        let n = self.adj.len();
        let mut d = vec![f64::INFINITY; n];
        let mut heap = BinaryHeap::new();
        d[src] = 0.0;
        heap.push(Item(0.0, src));
        while let Some(Item(du, u)) = heap.pop() {
            if du > d[u] {
                continue;
            }
            for &(v, w) in &self.adj[u] {
                let nd = du + w;
                if nd < d[v] && nd < limit {
                    d[v] = nd;
                    heap.push(Item(nd, v));
                }
            }
        }
        d.into_iter()
            .map(|x| if x < limit { Some(x) } else { None })
            .collect()
    }

    /// All pairs, computed once. Entry `(i, j)` comes from the search rooted
    /// at `min(i, j)` so the matrix is exactly symmetric.
    pub fn all_pairs(&self) -> &DistanceMatrix {
        self.all_pairs.get_or_init(|| {
            let n = self.adj.len();
            let rows: Vec<Vec<Option<f64>>> = (0..n)
                .into_par_iter()
                .map(|i| self.distances_from(i, f64::INFINITY))
                .collect();
            let mut data = vec![None; n * n];
            for i in 0..n {
                for j in i..n {
                    data[i * n + j] = rows[i][j];
                    data[j * n + i] = rows[i][j];
                }
            }
            DistanceMatrix::new(n, data)
        })
    }

    /// `d^ε(i, j)`, or `None` when no ε-path exists.
    pub fn d_eps(&self, i: usize, j: usize) -> Option<f64> {
        if let Some(m) = self.all_pairs.get() {
            return m.distance(i, j);
        }
        let (a, b) = (i.min(j), i.max(j));
        self.distances_from(a, f64::INFINITY)[b]
    }

    /// Largest pairwise `d^ε` in `subset`; `None` when some pair is unreachable.
    pub fn diam_eps(&self, subset: &[usize]) -> Result<Option<f64>, PathMetricError> {
        if subset.is_empty() {
            return Err(PathMetricError::EmptySubset);
        }
        let mut best = 0.0f64;
        for (k, &i) in subset.iter().enumerate() {
            let row = if self.all_pairs.get().is_some() {
                None
            } else {
                Some(self.distances_from(i, f64::INFINITY))
            };
            for &j in &subset[k + 1..] {
                let d = match &row {
                    Some(r) => {
                        if i <= j {
                            r[j]
                        } else {
                            self.d_eps(j, i)
                        }
                    }
                    None => self.d_eps(i, j),
                };
                match d {
                    Some(d) => best = best.max(d),
                    None => return Ok(None),
                }
            }
        }
        Ok(Some(best))
    }
}

impl FiniteMetric for EpsMetricIndex {
    fn len(&self) -> usize {
        self.adj.len()
    }

    fn distance(&self, i: usize, j: usize) -> Option<f64> {
        self.d_eps(i, j)
    }

    fn neighbors_above(&self, i: usize, beta: f64) -> Vec<usize> {
        if let Some(m) = self.all_pairs.get() {
            return (i + 1..self.adj.len())
                .filter(|&j| m.distance(i, j).is_some_and(|d| d < beta))
                .collect();
        }
        self.distances_from(i, beta)
            .into_iter()
            .enumerate()
            .skip(i + 1)
            .filter_map(|(j, d)| d.map(|_| j))
            .collect()
    }
}

impl FiniteMetric for &EpsMetricIndex {
    fn len(&self) -> usize {
        (*self).len()
    }

    fn distance(&self, i: usize, j: usize) -> Option<f64> {
        (*self).distance(i, j)
    }

    fn neighbors_above(&self, i: usize, beta: f64) -> Vec<usize> {
        (*self).neighbors_above(i, beta)
    }
}
