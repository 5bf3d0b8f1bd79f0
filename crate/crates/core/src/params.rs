//! Distortion estimates, shadow-radius certificates and parameter plans.
//!
//! `d_{G^ε}` and `Δ(G)` have no practical exact algorithm. Both are replaced
//! by computable surrogates on dense self-samples of `G`:
//!
//! * the distortion uses the ε-path metric of a self-sample `D`; every ε-path
//!   through `D` stays inside `G^ε`, so `d^ε_D ≥ d_{G^ε}` and the estimate is
//!   a lower bound of the true supremum over the sampled pairs;
//! * the shadow radius is certified on an `h`-grid of `G` only.

use std::f64::consts::PI;
use std::fmt::{self, Write as _};

use rayon::prelude::*;
use thiserror::Error;

use crate::geometry::{point_segment_distance, PointGrid, P2};
use crate::metric_graph::{length_metric, EmbeddedGraph, GraphError, GraphMetric, Mode};
use crate::path_metric::{EpsMetricIndex, PathMetricError};
use crate::sampling::{sample_graph_points, SamplingError};

/// Self-samples up to this size use every point as a source.
pub const FULL_SOURCE_LIMIT: usize = 4000;
/// Number of evenly spaced source points for larger self-samples.
pub const ANCHOR_SOURCES: usize = 400;
/// Largest self-sample a distortion estimate will build.
pub const DISTORTION_SAMPLE_BUDGET: usize = 150_000;
/// Largest sample a shadow-radius check will build.
pub const RADIUS_SAMPLE_BUDGET: usize = 4000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParamsError {
    #[error("ξ = {xi} outside the open interval ({lo}, {hi})")]
    Xi { xi: f64, lo: f64, hi: f64 },
    #[error("{0} must be positive")]
    NonPositive(&'static str),
    #[error("density h = {h} too coarse for ε = {eps}: need h ≤ ε/10")]
    Density { h: f64, eps: f64 },
    #[error("ε-graph of the self-sample is disconnected at ε = {eps}, h = {h}")]
    Disconnected { eps: f64, h: f64 },
    #[error("ε shrank to {eps} < 10·h = {} before δ̂ = {distortion} reached {bound}; use a finer density", 10.0 * h)]
    CoarseDensity {
        eps: f64,
        h: f64,
        distortion: f64,
        bound: f64,
    },
    #[error("no positive radius certified at resolution {h}; try a finer resolution")]
    NoCertifiedRadius { h: f64 },
    #[error("geometric mode needs a shadow radius")]
    MissingShadowRadius,
    #[error("Θ = {0} must lie in [1/2, 1)")]
    Theta(f64),
    #[error("{what} of {count} points exceeds the budget of {budget}")]
    Budget {
        what: &'static str,
        count: usize,
        budget: usize,
    },
    #[error("plan violates {0}")]
    Invariant(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    PathMetric(#[from] PathMetricError),
}

/// How an estimate relates to the quantity it stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sidedness {
    /// Never above the true value over the sampled pairs.
    LowerBound,
}

impl fmt::Display for Sidedness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sidedness::LowerBound => f.write_str("lower-bound"),
        }
    }
}

/// Estimate of the large-scale distortion `δ^ε_R(G)`, the supremum of
/// `d_G(a,b) / d_{G^ε}(a,b)` over pairs with `d_G(a,b) ≥ R`.
#[derive(Clone, Debug, PartialEq)]
pub struct DistortionEstimate {
    pub eps: f64,
    pub r: f64,
    /// `δ̂ ≥ 1`; exactly 1 when no sampled pair reaches `R`.
    pub value: f64,
    pub density: f64,
    pub samples: usize,
    /// Samples used as sources; all of them unless the sample is large.
    pub sources: usize,
    /// Source-target pairs with `d_G ≥ R`.
    pub pairs: usize,
    pub sidedness: Sidedness,
}

/// `δ̂ = max d_G(a,b) / d^ε_D(a,b)` over pairs of a spacing-`h` self-sample
/// `D` with `d_G(a,b) ≥ R`. Samples beyond [`FULL_SOURCE_LIMIT`] restrict
/// the first point of each pair to [`ANCHOR_SOURCES`] evenly spaced sources.
pub fn distortion_estimate(
    g: &EmbeddedGraph,
    eps: f64,
    r: f64,
    h: f64,
) -> Result<DistortionEstimate, ParamsError> {
    if !(eps > 0.0) {
        return Err(ParamsError::NonPositive("ε"));
    }
    if !(r > 0.0) {
        return Err(ParamsError::NonPositive("R"));
    }
    if !(h > 0.0) {
        return Err(ParamsError::NonPositive("h"));
    }
    if h > eps / 10.0 {
        return Err(ParamsError::Density { h, eps });
    }
    let total = g.total_length();
    let expected = (total / h).ceil() as usize + g.vertices().len();
    if expected > DISTORTION_SAMPLE_BUDGET {
        return Err(ParamsError::Budget {
            what: "distortion self-sample",
            count: expected,
            budget: DISTORTION_SAMPLE_BUDGET,
        });
    }
    let (cloud, gp) = sample_graph_points(g, h)?;
    let index = EpsMetricIndex::build(&cloud, eps)?;
    if !index.is_connected() {
        return Err(ParamsError::Disconnected { eps, h });
    }
    let metric = length_metric(g);
    let n = gp.len();
    let sources: Vec<usize> = if n <= FULL_SOURCE_LIMIT {
        (0..n).collect()
    } else {
        let step = n.div_ceil(ANCHOR_SOURCES);
        (0..n).step_by(step).collect()
    };
    let (value, pairs) = sources
        .par_iter()
        .map(|&s| {
            let d = index.distances_from(s, f64::INFINITY);
            let mut best = 1.0f64;
            let mut count = 0usize;
            for (j, dj) in d.iter().enumerate() {
                let dg = metric.distance(gp[s], gp[j]);
                if dg >= r {
                    count += 1;
                    if let Some(de) = dj {
                        best = best.max(dg / de);
                    }
                }
            }
            (best, count)
        })
        .reduce(|| (1.0, 0), |a, b| (a.0.max(b.0), a.1 + b.1));
    // hop sums along a straight run differ from d_G only by rounding
    let value = if value - 1.0 <= 1e-12 { 1.0 } else { value };
    Ok(DistortionEstimate {
        eps,
        r,
        value,
        density: h,
        samples: n,
        sources: sources.len(),
        pairs,
        sidedness: Sidedness::LowerBound,
    })
}

/// A sampled triple violating (★).
#[derive(Clone, Debug, PartialEq)]
pub struct Counterexample {
    pub a: P2,
    pub b: P2,
    pub q: P2,
    /// Distance from `q` to the segment `ab`, used as ε.
    pub eps: f64,
    /// `min{d_G(a,q), d_G(b,q)}`.
    pub lhs: f64,
    /// `(1+Θ)/2 · d_G(a,b) + ε/(1-Θ)`.
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum RadiusVerdict {
    /// (★) holds for every sampled triple.
    Certified,
    Counterexample(Box<Counterexample>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowRadiusCertificate {
    pub r: f64,
    pub verdict: RadiusVerdict,
    pub resolution: f64,
    pub theta: f64,
    pub samples: usize,
}

impl ShadowRadiusCertificate {
    pub fn certified(&self) -> bool {
        self.verdict == RadiusVerdict::Certified
    }
}

/// A spacing-`h` sample of `G` with its pairwise `d_G`, reusable across radii.
pub struct RadiusChecker {
    theta: f64,
    resolution: f64,
    pos: Vec<P2>,
    dg: Vec<f64>,
    grid: PointGrid,
}

impl RadiusChecker {
    pub fn new(g: &EmbeddedGraph, h: f64) -> Result<Self, ParamsError> {
        if !(h > 0.0) {
            return Err(ParamsError::NonPositive("resolution"));
        }
        let theta = crate::metric_graph::theta(g)?;
        let expected = (g.total_length() / h).ceil() as usize + g.vertices().len();
        if expected > RADIUS_SAMPLE_BUDGET {
            return Err(ParamsError::Budget {
                what: "shadow-radius sample",
                count: expected,
                budget: RADIUS_SAMPLE_BUDGET,
            });
        }
        let (cloud, gp) = sample_graph_points(g, h)?;
        let pos = cloud.planar();
        let dg = length_metric(g).pairwise(&gp);
        Ok(RadiusChecker {
            theta,
            resolution: h,
            grid: PointGrid::build(&pos),
            pos,
            dg,
        })
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn d(&self, i: usize, j: usize) -> f64 {
        self.dg[i * self.pos.len() + j]
    }

    /// First violation among pairs `(i, j ≥ i)` with `‖a-b‖ ≤ r`.
    fn violation(&self, i: usize, r: f64) -> Option<Counterexample> {
        let t = self.theta;
        let slab = 0.5 * (1.0 - t).powf(1.5) * r;
        let a = self.pos[i];
        let mut partners = self.grid.within(a, r * (1.0 + 1e-12));
        partners.retain(|&j| j >= i && self.pos[j].dist(a) <= r);
        partners.sort_unstable();
        for j in partners {
            let b = self.pos[j];
            let lo = P2::new(a.x.min(b.x) - slab, a.y.min(b.y) - slab);
            let hi = P2::new(a.x.max(b.x) + slab, a.y.max(b.y) + slab);
            let dab = self.d(i, j);
            let mut found: Option<Counterexample> = None;
            self.grid.for_each_in_box(lo, hi, |k| {
                if found.is_some() {
                    return;
                }
                let q = self.pos[k];
                let eps = point_segment_distance(q, a, b);
                if eps > slab {
                    return;
                }
                let lhs = self.d(i, k).min(self.d(j, k));
                let rhs = 0.5 * (1.0 + t) * dab + eps / (1.0 - t);
                if lhs > rhs + 1e-12 * (1.0 + rhs) {
                    found = Some(Counterexample {
                        a,
                        b,
                        q,
                        eps,
                        lhs,
                        rhs,
                    });
                }
            });
            if found.is_some() {
                return found;
            }
        }
        None
    }

    /// Smallest entry radius of a violating triple, over the triples that
    /// enter at radii up to `r`, with its counterexample.
    pub fn first_violation_within(&self, r: f64) -> Option<(f64, Counterexample)> {
        let t = self.theta;
        let c = 0.5 * (1.0 - t).powf(1.5);
        let slab = c * r;
        (0..self.pos.len())
            .into_par_iter()
            .filter_map(|i| {
                let a = self.pos[i];
                let mut partners = self.grid.within(a, r * (1.0 + 1e-12));
                partners.retain(|&j| j >= i && self.pos[j].dist(a) <= r);
                partners.sort_unstable();
                let mut best: Option<(f64, usize, usize, Counterexample)> = None;
                for j in partners {
                    let b = self.pos[j];
                    let dab_e = a.dist(b);
                    if best.as_ref().is_some_and(|x| x.0 <= dab_e) {
                        continue;
                    }
                    let lo = P2::new(a.x.min(b.x) - slab, a.y.min(b.y) - slab);
                    let hi = P2::new(a.x.max(b.x) + slab, a.y.max(b.y) + slab);
                    let dab = self.d(i, j);
                    self.grid.for_each_in_box(lo, hi, |k| {
                        let q = self.pos[k];
                        let eps = point_segment_distance(q, a, b);
                        if eps > slab {
                            return;
                        }
                        let enter = dab_e.max(eps / c);
                        if best.as_ref().is_some_and(|x| (x.0, x.1) <= (enter, k)) {
                            return;
                        }
                        let lhs = self.d(i, k).min(self.d(j, k));
                        let rhs = 0.5 * (1.0 + t) * dab + eps / (1.0 - t);
                        if lhs > rhs + 1e-12 * (1.0 + rhs) {
                            best = Some((
                                enter,
                                k,
                                j,
                                Counterexample {
                                    a,
                                    b,
                                    q,
                                    eps,
                                    lhs,
                                    rhs,
                                },
                            ));
                        }
                    });
                }
                best.map(|(enter, k, j, cx)| (enter, i, j, k, cx))
            })
            .min_by(|x, y| {
                x.0.total_cmp(&y.0)
                    .then((x.1, x.2, x.3).cmp(&(y.1, y.2, y.3)))
            })
            .map(|(enter, _, _, _, cx)| (enter, cx))
    }

    pub fn check(&self, r: f64) -> ShadowRadiusCertificate {
        let hit = (0..self.pos.len())
            .into_par_iter()
            .find_map_first(|i| self.violation(i, r));
        ShadowRadiusCertificate {
            r,
            verdict: match hit {
                None => RadiusVerdict::Certified,
                Some(c) => RadiusVerdict::Counterexample(Box::new(c)),
            },
            resolution: self.resolution,
            theta: self.theta,
            samples: self.pos.len(),
        }
    }

    /// Largest Euclidean distance between samples.
    pub fn extent(&self) -> f64 {
        (0..self.pos.len())
            .into_par_iter()
            .map(|i| {
                self.pos[i + 1..]
                    .iter()
                    .map(|q| q.dist(self.pos[i]))
                    .fold(0.0, f64::max)
            })
            .reduce(|| 0.0, f64::max)
    }
}

/// Checks (★) for radius `r` on a spacing-`h` sample of `G`: every sampled
/// pair `a, b` with `‖a-b‖ ≤ r` and every sampled `q` within
/// `ε_q ≤ ½(1-Θ)^{3/2} r` of the segment `ab` must satisfy
/// `min{d_G(a,q), d_G(b,q)} ≤ (1+Θ)/2 · d_G(a,b) + ε_q/(1-Θ)`.
pub fn shadow_radius_check(
    g: &EmbeddedGraph,
    r: f64,
    h: f64,
) -> Result<ShadowRadiusCertificate, ParamsError> {
    Ok(RadiusChecker::new(g, h)?.check(r))
}

/// Largest radius certified on a spacing-`h` sample, capped at the sample's
/// Euclidean diameter.
///
/// Whether a triple `(a, b, q)` violates (★) does not depend on `r`; the
/// triple enters the check once `r ≥ max{‖a-b‖, ε_q / (½(1-Θ)^{3/2})}`. The
/// result lies just below the smallest such threshold over violating
/// triples, found by doubling the search radius.
pub fn shadow_radius_lower_bound(g: &EmbeddedGraph, h: f64) -> Result<f64, ParamsError> {
    let chk = RadiusChecker::new(g, h)?;
    let top = chk.extent();
    let mut r = (4.0 * h).min(top);
    loop {
        if let Some((first, _)) = chk.first_violation_within(r) {
            let below = first * (1.0 - 1e-9);
            return if below > 0.0 {
                Ok(below)
            } else {
                Err(ParamsError::NoCertifiedRadius { h })
            };
        }
        if r >= top {
            return if top > 0.0 {
                Ok(top)
            } else {
                Err(ParamsError::NoCertifiedRadius { h })
            };
        }
        r = (2.0 * r).min(top);
    }
}

/// Inputs of [`select_parameters`].
#[derive(Clone, Debug, PartialEq)]
pub struct PlanRequest {
    pub mode: Mode,
    /// `ℓ(G)`; infinite for trees.
    pub systole: f64,
    pub theta: f64,
    /// `Δ(G)` or a certified lower bound of it; required in geometric mode.
    pub shadow_radius: Option<f64>,
    /// Defaults to 1/6 in homotopy mode and `(1-Θ)/12` in geometric mode.
    pub xi: Option<f64>,
    /// Self-sample spacing for distortion estimates; defaults to
    /// [`default_density`].
    pub density: Option<f64>,
}

/// The constraints of the simpler homotopy statement with `ξ = 1/6`,
/// evaluated at a plan's `β` and `ε`.
#[derive(Clone, Debug, PartialEq)]
pub struct HomotopyEcho {
    pub xi: f64,
    pub distortion_bound: f64,
    pub required_hausdorff: f64,
    pub beta_below_systole_quarter: bool,
    pub eps_below_beta_third: bool,
    pub distortion_ok: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParameterPlan {
    pub mode: Mode,
    pub xi: f64,
    pub beta: f64,
    pub eps: f64,
    pub theta: f64,
    pub systole: f64,
    /// The systole used in the caps: `ℓ(G)`, or the geodesic diameter of a
    /// tree.
    pub systole_used: f64,
    pub shadow_radius: Option<f64>,
    pub beta_cap: f64,
    pub eps_cap: f64,
    pub halvings: u32,
    pub distortion: DistortionEstimate,
    /// `(1+2ξ)/(1+ξ)`.
    pub distortion_bound: f64,
    /// `½ξε`; samples must satisfy `d_H(G, S) <` this.
    pub required_hausdorff: f64,
    /// `β + ½ξε`, geometric mode only.
    pub predicted_shadow_hausdorff: Option<f64>,
    pub homotopy_echo: Option<HomotopyEcho>,
}

/// Open range of ξ in a mode.
pub fn xi_range(mode: Mode, theta: f64) -> (f64, f64) {
    match mode {
        Mode::Homotopy => (0.0, 0.25),
        Mode::Geometric => (0.0, (1.0 - theta) / 6.0),
    }
}

/// `(1-Θ)(1-Θ-6ξ)/12 · β`.
pub fn geometric_eps_cap(theta: f64, xi: f64, beta: f64) -> f64 {
    (1.0 - theta) * (1.0 - theta - 6.0 * xi) / 12.0 * beta
}

pub fn distortion_bound(xi: f64) -> f64 {
    (1.0 + 2.0 * xi) / (1.0 + xi)
}

/// `β` and `ε` caps for the request.
fn caps(req: &PlanRequest, xi: f64, systole_used: f64) -> Result<(f64, f64, f64), ParamsError> {
    Ok(match req.mode {
        Mode::Homotopy => {
            let beta_cap = systole_used / 4.0;
            let beta = 0.9 * beta_cap;
            (beta_cap, beta, beta / 3.0)
        }
        Mode::Geometric => {
            let delta = req.shadow_radius.ok_or(ParamsError::MissingShadowRadius)?;
            if !(delta > 0.0) {
                return Err(ParamsError::NonPositive("shadow radius"));
            }
            let beta_cap = delta.min(systole_used / 18.0);
            let beta = 0.9 * beta_cap;
            (beta_cap, beta, geometric_eps_cap(req.theta, xi, beta))
        }
    })
}

/// The quantities of a plan fixed before any distortion estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanCaps {
    pub xi: f64,
    pub systole_used: f64,
    pub beta_cap: f64,
    pub beta: f64,
    /// Starting point of the ε halving.
    pub eps_cap: f64,
}

/// Checks `Θ`, `ξ` and the systole, and derives the caps.
pub fn plan_caps(req: &PlanRequest, g: &EmbeddedGraph) -> Result<PlanCaps, ParamsError> {
    if !(0.5..1.0).contains(&req.theta) {
        return Err(ParamsError::Theta(req.theta));
    }
    let (lo, hi) = xi_range(req.mode, req.theta);
    let xi = req.xi.unwrap_or(match req.mode {
        Mode::Homotopy => 1.0 / 6.0,
        Mode::Geometric => (1.0 - req.theta) / 12.0,
    });
    if !(xi > lo && xi < hi) {
        return Err(ParamsError::Xi { xi, lo, hi });
    }
    if !(req.systole > 0.0) {
        return Err(ParamsError::NonPositive("systole"));
    }
    let systole_used = if req.systole.is_finite() {
        req.systole
    } else {
        tree_diameter(&length_metric(g), g)
    };
    let (beta_cap, beta, eps_cap) = caps(req, xi, systole_used)?;
    if !(eps_cap > 0.0) {
        return Err(ParamsError::NonPositive("ε cap"));
    }
    Ok(PlanCaps {
        xi,
        systole_used,
        beta_cap,
        beta,
        eps_cap,
    })
}

/// Picks `β = 0.9 ×` its cap, then halves `ε` from its cap until the
/// distortion estimate at scale `R = β` is at most `(1+2ξ)/(1+ξ)`.
pub fn select_parameters(
    req: &PlanRequest,
    g: &EmbeddedGraph,
) -> Result<ParameterPlan, ParamsError> {
    let PlanCaps {
        xi,
        systole_used,
        beta_cap,
        beta,
        eps_cap,
    } = plan_caps(req, g)?;
    let h = req.density.unwrap_or_else(|| default_density(g, eps_cap));
    let bound = distortion_bound(xi);
    let mut eps = eps_cap;
    let mut halvings = 0;
    let distortion = loop {
        if eps < 10.0 * h {
            let last = distortion_estimate(g, 2.0 * eps, beta, h)
                .map(|d| d.value)
                .unwrap_or(f64::NAN);
            return Err(ParamsError::CoarseDensity {
                eps,
                h,
                distortion: last,
                bound,
            });
        }
        let d = distortion_estimate(g, eps, beta, h)?;
        if d.value <= bound {
            break d;
        }
        eps *= 0.5;
        halvings += 1;
    };
    let homotopy_echo = (req.mode == Mode::Geometric).then(|| {
        let xi6 = 1.0 / 6.0;
        HomotopyEcho {
            xi: xi6,
            distortion_bound: distortion_bound(xi6),
            required_hausdorff: 0.5 * xi6 * eps,
            beta_below_systole_quarter: beta < systole_used / 4.0,
            eps_below_beta_third: eps <= beta / 3.0,
            distortion_ok: distortion.value <= distortion_bound(xi6),
        }
    });
    let plan = ParameterPlan {
        mode: req.mode,
        xi,
        beta,
        eps,
        theta: req.theta,
        systole: req.systole,
        systole_used,
        shadow_radius: req.shadow_radius,
        beta_cap,
        eps_cap,
        halvings,
        distortion,
        distortion_bound: bound,
        required_hausdorff: 0.5 * xi * eps,
        predicted_shadow_hausdorff: (req.mode == Mode::Geometric).then_some(beta + 0.5 * xi * eps),
        homotopy_echo,
    };
    let bad = plan.violations();
    if let Some(v) = bad.first() {
        return Err(ParamsError::Invariant(v.clone()));
    }
    Ok(plan)
}

/// `ε_cap / 50`, enough for two halvings, coarsened to fit the self-sample
/// budget.
pub fn default_density(g: &EmbeddedGraph, eps_cap: f64) -> f64 {
    let fit = g.total_length() / (0.9 * DISTORTION_SAMPLE_BUDGET as f64);
    (eps_cap / 50.0).max(fit)
}

/// Geodesic diameter over polyline nodes, plus the longest polyline piece to
/// account for interior points.
fn tree_diameter(m: &GraphMetric, g: &EmbeddedGraph) -> f64 {
    let piece = (0..g.edges().len())
        .flat_map(|e| {
            let l = g.polyline2(e);
            l.windows(2).map(|w| w[0].dist(w[1])).collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    m.node_diameter() + piece
}

impl ParameterPlan {
    /// The plan's defining inequalities that fail; empty for a valid plan.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let (lo, hi) = xi_range(self.mode, self.theta);
        if !(self.xi > lo && self.xi < hi) {
            v.push(format!("ξ ∈ ({lo}, {hi})"));
        }
        if !(self.beta > 0.0 && self.beta < self.beta_cap) {
            v.push(format!("0 < β < {}", self.beta_cap));
        }
        let eps_cap = match self.mode {
            Mode::Homotopy => self.beta / 3.0,
            Mode::Geometric => geometric_eps_cap(self.theta, self.xi, self.beta),
        };
        if !(self.eps > 0.0 && self.eps <= eps_cap) {
            v.push(format!("0 < ε ≤ {eps_cap}"));
        }
        if self.distortion.value > distortion_bound(self.xi) {
            v.push(format!("δ̂ ≤ {}", distortion_bound(self.xi)));
        }
        v
    }

    /// Flat `key=value` report.
    pub fn to_key_values(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        kv("mode", self.mode.to_string());
        kv("xi", fmt_f(self.xi));
        kv("beta", fmt_f(self.beta));
        kv("eps", fmt_f(self.eps));
        kv("theta", fmt_f(self.theta));
        kv("systole", fmt_f(self.systole));
        kv("systole_used", fmt_f(self.systole_used));
        kv(
            "shadow_radius",
            self.shadow_radius.map_or("none".into(), fmt_f),
        );
        kv("beta_cap", fmt_f(self.beta_cap));
        kv("eps_cap", fmt_f(self.eps_cap));
        kv("halvings", self.halvings.to_string());
        kv("distortion", fmt_f(self.distortion.value));
        kv("distortion_bound", fmt_f(self.distortion_bound));
        kv("distortion_scale", fmt_f(self.distortion.r));
        kv("distortion_density", fmt_f(self.distortion.density));
        kv("distortion_samples", self.distortion.samples.to_string());
        kv("distortion_sources", self.distortion.sources.to_string());
        kv(
            "distortion_sidedness",
            self.distortion.sidedness.to_string(),
        );
        kv("required_hausdorff", fmt_f(self.required_hausdorff));
        if let Some(p) = self.predicted_shadow_hausdorff {
            kv("predicted_shadow_hausdorff", fmt_f(p));
        }
        if let Some(e) = &self.homotopy_echo {
            kv("homotopy.xi", fmt_f(e.xi));
            kv("homotopy.distortion_bound", fmt_f(e.distortion_bound));
            kv("homotopy.required_hausdorff", fmt_f(e.required_hausdorff));
            kv(
                "homotopy.beta_below_systole_quarter",
                e.beta_below_systole_quarter.to_string(),
            );
            kv(
                "homotopy.eps_below_beta_third",
                e.eps_below_beta_third.to_string(),
            );
            kv("homotopy.distortion_ok", e.distortion_ok.to_string());
        }
        s
    }
}

/// Shortest round-trip formatting, with `inf` for infinity.
pub fn fmt_f(x: f64) -> String {
    if x.is_infinite() {
        if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        }
    } else {
        format!("{x}")
    }
}

/// Two triangles `avp` and `bvp` sharing the side `vp`, with `p` on the
/// segment `ab`, apex angles `∠avp = φ` and `∠bvp = ϕ`, and `∠apv = θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DoubleTriangle {
    pub phi: f64,
    pub varphi: f64,
    pub theta: f64,
    /// `|av| + |bv|`.
    pub r: f64,
}

impl DoubleTriangle {
    /// `None` unless `φ, ϕ > 0`, `φ + ϕ < π` and `θ ∈ (ϕ, π - φ)`.
    pub fn new(phi: f64, varphi: f64, theta: f64, r: f64) -> Option<Self> {
        let ok = phi > 0.0
            && varphi > 0.0
            && phi + varphi < PI
            && theta > varphi
            && theta < PI - phi
            && r > 0.0;
        ok.then_some(DoubleTriangle {
            phi,
            varphi,
            theta,
            r,
        })
    }

    /// `|pv|` from the law of sines in both triangles.
    pub fn pv(&self) -> f64 {
        let t = self.theta;
        self.r / t.sin() / (1.0 / (t + self.phi).sin() + 1.0 / (t - self.varphi).sin())
    }

    pub fn av(&self) -> f64 {
        self.pv() * self.theta.sin() / (self.theta + self.phi).sin()
    }

    pub fn bv(&self) -> f64 {
        self.pv() * self.theta.sin() / (self.theta - self.varphi).sin()
    }

    /// `min{|av| + |pv|, |bv| + |pv|}`.
    pub fn shorter_path(&self) -> f64 {
        let p = self.pv();
        (self.av() + p).min(self.bv() + p)
    }

    /// `cos²(min{φ, ϕ}/2) · r`.
    pub fn bound(&self) -> f64 {
        let c = (0.5 * self.phi.min(self.varphi)).cos();
        c * c * self.r
    }

    /// Largest `|pq|` for `q` on the line `vp` within `ε` of `ab`:
    /// `ε / √(2[1 - cos²(min{φ, ϕ}/2)])`.
    pub fn offset_bound(&self, eps: f64) -> f64 {
        let c = (0.5 * self.phi.min(self.varphi)).cos();
        eps / (2.0 * (1.0 - c * c)).sqrt()
    }
}
