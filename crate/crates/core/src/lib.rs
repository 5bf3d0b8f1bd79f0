//! Reconstruction of embedded metric graphs from noisy point samples.
//!
//! A sample `S` of a graph `G` is turned into a Vietoris–Rips complex under
//! the ε-path metric of `S`. Its homology recovers the homotopy type of `G`,
//! and in the plane its shadow (the union of the projected simplices) is a
//! geometrically close reconstruction. The modules follow the data flow:
//!
//! * [`geometry`]: exact planar predicates and distances.
//! * [`metric_graph`]: graphs with polyline edges, `d_G`, systole and `Θ`.
//! * [`sampling`]: seeded samples at controlled Hausdorff distance.
//! * [`path_metric`]: the ε-path metric of a point cloud.
//! * [`complex`]: Rips flag complexes and GF(2) Betti numbers.
//! * [`shadow`]: planar arrangements of projected complexes.
//! * [`params`]: distortion, shadow radius and parameter selection.
//! * [`pipeline`]: the end-to-end reconstruct-and-verify run.

// NaN must fail range checks, so negated comparisons are deliberate.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
#![allow(clippy::should_implement_trait, clippy::type_complexity)]

pub mod complex;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod metric_graph;
pub mod params;
pub mod path_metric;
pub mod pipeline;
pub mod sampling;
pub mod shadow;

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns `true` when two distinct classes were merged.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Dense class labels in order of first appearance, and the class count.
    pub fn labels(&mut self) -> (Vec<usize>, usize) {
        let n = self.parent.len();
        let mut map = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut next = 0;
        for i in 0..n {
            let r = self.find(i);
            if map[r] == usize::MAX {
                map[r] = next;
                next += 1;
            }
            out[i] = map[r];
        }
        (out, next)
    }
}
