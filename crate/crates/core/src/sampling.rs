//! Seeded samples of embedded graphs.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geometry::{Point, P2};
use crate::metric_graph::{EmbeddedGraph, GraphPoint};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SamplingError {
    #[error("spacing must be positive, got {0}")]
    Spacing(f64),
    #[error("noise bound must be non-negative, got {0}")]
    Noise(f64),
    #[error("graph has no vertices")]
    EmptyGraph,
}

/// Where a cloud came from.
#[derive(Clone, Debug, PartialEq)]
pub struct Provenance {
    pub source: String,
    pub spacing: f64,
    pub noise: f64,
    pub seed: u64,
}

/// A finite point set in `R^N`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloud {
    dim: usize,
    coords: Vec<f64>,
    pub provenance: Option<Provenance>,
}

impl PointCloud {
    pub fn new(dim: usize, coords: Vec<f64>) -> Self {
        assert!(dim > 0 && coords.len().is_multiple_of(dim), "ragged cloud");
        PointCloud {
            dim,
            coords,
            provenance: None,
        }
    }

    pub fn from_points(points: &[Point]) -> Self {
        let dim = points.first().map_or(2, Point::dim);
        let coords = points
            .iter()
            .flat_map(|p| p.coords().iter().copied())
            .collect();
        PointCloud::new(dim, coords)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn point(&self, i: usize) -> Point {
        Point::new(self.row(i).to_vec())
    }

    pub fn points(&self) -> Vec<Point> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Planar coordinates. Panics when `N != 2`.
    pub fn planar(&self) -> Vec<P2> {
        assert_eq!(self.dim, 2, "planar view of a cloud in R^{}", self.dim);
        self.coords.chunks(2).map(|c| P2::new(c[0], c[1])).collect()
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        crate::geometry::dist(self.row(i), self.row(j))
    }
}

/// Samples `G` at arclength steps of at most `h`, vertices included once.
pub fn sample_graph(g: &EmbeddedGraph, h: f64) -> Result<PointCloud, SamplingError> {
    Ok(sample_graph_points(g, h)?.0)
}

/// Like [`sample_graph`], also returning the graph point behind every sample.
pub fn sample_graph_points(
    g: &EmbeddedGraph,
    h: f64,
) -> Result<(PointCloud, Vec<GraphPoint>), SamplingError> {
    if !(h > 0.0) {
        return Err(SamplingError::Spacing(h));
    }
    if g.vertices().is_empty() {
        return Err(SamplingError::EmptyGraph);
    }
    let gp = g.sample_points(h);
    let pts: Vec<Point> = gp.iter().map(|p| g.locate(*p)).collect();
    let mut cloud = PointCloud::from_points(&pts);
    cloud.provenance = Some(Provenance {
        source: String::new(),
        spacing: h,
        noise: 0.0,
        seed: 0,
    });
    Ok((cloud, gp))
}

/// Uniform variate in `[0, 1)` from the top 53 bits of a `u64`.
fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Moves every point by an independent uniform vector of the `ρ`-ball.
///
/// Draws come from ChaCha8 seeded with `seed`. Each displacement takes `N`
/// variates `2u - 1`, rejecting the draw until it falls in the unit ball, and
/// is then scaled by `ρ`. The output is identical across platforms.
pub fn perturb(cloud: &PointCloud, rho: f64, seed: u64) -> Result<PointCloud, SamplingError> {
    if !(rho >= 0.0) {
        return Err(SamplingError::Noise(rho));
    }
    let mut out = cloud.clone();
    if let Some(p) = out.provenance.as_mut() {
        p.noise = rho;
        p.seed = seed;
    }
    if rho == 0.0 {
        return Ok(out);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = cloud.dim;
    let mut u = vec![0.0; dim];
    for row in out.coords.chunks_mut(dim) {
        loop {
            for c in u.iter_mut() {
                *c = 2.0 * unit(&mut rng) - 1.0;
            }
            if u.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
                break;
            }
        }
        for (x, d) in row.iter_mut().zip(&u) {
            *x += rho * d;
        }
    }
    Ok(out)
}
