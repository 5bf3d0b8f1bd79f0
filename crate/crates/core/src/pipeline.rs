//! The end-to-end reconstruct-and-verify run.
//!
//! A run loads a graph or a cloud, samples the graph if needed, chooses or
//! accepts `ξ`, `β`, `ε`, builds the ε-path Rips complex and, for planar
//! input, its shadow. Every recorded quantity goes into a
//! [`VerificationReport`] whose pass flags are recomputed from the numbers.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::info;
use thiserror::Error;

use crate::complex::{rips_with_budget, BettiVector, Budget, FlagComplex, MetricTag};
use crate::geometry::grid::{BoxGrid, PointGrid};
use crate::geometry::{point_segment_distance, P2};
use crate::io;
use crate::metric_graph::{betti_graph, systole, theta, validate_assumptions, EmbeddedGraph, Mode};
use crate::params::{
    fmt_f, plan_caps, select_parameters, shadow_radius_lower_bound, ParameterPlan, PlanRequest,
};
use crate::path_metric::{EpsMetricIndex, EuclideanMetric};
use crate::sampling::{perturb, sample_graph, PointCloud};
use crate::shadow::{
    check_lifting_projected, medial_axis, project, render_svg, shadow_hausdorff_detail,
    HausdorffEstimate, LiftingReport, Overlays, ShadowComplex, SkeletonGraph,
};

/// Sample size behind the default shadow-radius resolution.
pub const RADIUS_DEFAULT_SAMPLES: f64 = 500.0;

/// Largest sample the pipeline will draw from a graph.
pub const SAMPLE_BUDGET: usize = 20_000;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("config: {0}")]
    Config(String),
    #[error("assumptions violated: {}", .0.join("; "))]
    Assumption(Vec<String>),
    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        source: Box<dyn std::error::Error + Send + Sync>,
    },
}

impl PipelineError {
    /// 2 for configuration and input errors, 3 for violated assumptions and
    /// 4 for a stage that could not complete.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Assumption(_) => 3,
            PipelineError::Stage { .. } => 4,
        }
    }
}

fn stage<E: std::error::Error + Send + Sync + 'static>(
    stage: &'static str,
) -> impl FnOnce(E) -> PipelineError {
    move |e| PipelineError::Stage {
        stage,
        source: Box::new(e),
    }
}

#[derive(Debug, Error)]
#[error("{what} of {count} exceeds the budget of {budget}")]
pub struct BudgetError {
    pub what: &'static str,
    pub count: usize,
    pub budget: usize,
}

/// Settings of a run. Unset parameters are chosen by the pipeline.
#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub graph: Option<PathBuf>,
    pub cloud: Option<PathBuf>,
    pub mode: Mode,
    pub xi: Option<f64>,
    pub beta: Option<f64>,
    pub eps: Option<f64>,
    /// Sample spacing; defaults to `0.75 ξε`.
    pub h: Option<f64>,
    /// Noise radius; defaults to `0.1 ξε`.
    pub noise: Option<f64>,
    pub seed: u64,
    /// Hausdorff resolution, defaulting to `β/50`, and shadow-radius grid
    /// spacing, defaulting to `L/500` for total length `L`.
    pub resolution: Option<f64>,
    /// Skips the shadow-radius search in geometric mode.
    pub shadow_radius: Option<f64>,
    pub out: Option<PathBuf>,
    pub render: bool,
    pub medial_axis: bool,
    /// Leaf-branch pruning length of the medial axis; defaults to `β/2`.
    pub prune: Option<f64>,
    /// Builds the shadow; defaults to on in geometric mode.
    pub shadow: Option<bool>,
    /// Runs the Euclidean Rips comparison; defaults to the shadow setting.
    pub euclidean: Option<bool>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            graph: None,
            cloud: None,
            mode: Mode::Homotopy,
            xi: None,
            beta: None,
            eps: None,
            h: None,
            noise: None,
            seed: 0,
            resolution: None,
            shadow_radius: None,
            out: None,
            render: false,
            medial_axis: false,
            prune: None,
            shadow: None,
            euclidean: None,
        }
    }
}

fn parse_bool(key: &str, v: &str) -> Result<bool, PipelineError> {
    match v {
        "true" | "1" | "yes" | "on" => Ok(true),
        "false" | "0" | "no" | "off" => Ok(false),
        _ => Err(PipelineError::Config(format!(
            "{key}: expected a boolean, found `{v}`"
        ))),
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, v: &str) -> Result<T, PipelineError> {
    v.parse()
        .map_err(|_| PipelineError::Config(format!("{key}: cannot parse `{v}`")))
}

impl PipelineConfig {
    /// Sets one key; `-` and `_` are interchangeable in key names.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), PipelineError> {
        let key = key.replace('-', "_");
        let k = key.as_str();
        let v = value.trim();
        match k {
            "graph" => self.graph = Some(PathBuf::from(v)),
            "cloud" => self.cloud = Some(PathBuf::from(v)),
            "mode" => self.mode = v.parse().map_err(PipelineError::Config)?,
            "xi" => self.xi = Some(parse_num(k, v)?),
            "beta" => self.beta = Some(parse_num(k, v)?),
            "eps" => self.eps = Some(parse_num(k, v)?),
            "h" => self.h = Some(parse_num(k, v)?),
            "noise" => self.noise = Some(parse_num(k, v)?),
            "seed" => self.seed = parse_num(k, v)?,
            "resolution" => self.resolution = Some(parse_num(k, v)?),
            "shadow_radius" => self.shadow_radius = Some(parse_num(k, v)?),
            "out" => self.out = Some(PathBuf::from(v)),
            "render" => self.render = parse_bool(k, v)?,
            "medial_axis" => self.medial_axis = parse_bool(k, v)?,
            "prune" => self.prune = Some(parse_num(k, v)?),
            "shadow" => self.shadow = Some(parse_bool(k, v)?),
            "euclidean" => self.euclidean = Some(parse_bool(k, v)?),
            _ => return Err(PipelineError::Config(format!("unknown key `{key}`"))),
        }
        Ok(())
    }

    /// Reads a `key=value` file. Relative input and output paths are taken
    /// relative to the file's directory.
    pub fn from_file(path: &Path) -> Result<Self, PipelineError> {
        let text = io::read_file(path).map_err(|e| PipelineError::Config(e.to_string()))?;
        let mut cfg = Self::from_key_values(&text)
            .map_err(|e| PipelineError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        for p in [&mut cfg.graph, &mut cfg.cloud, &mut cfg.out]
            .into_iter()
            .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
        Ok(cfg)
    }

    pub fn from_key_values(text: &str) -> Result<Self, PipelineError> {
        let mut cfg = PipelineConfig::default();
        for (k, v) in
            io::parse_key_values(text).map_err(|e| PipelineError::Config(e.to_string()))?
        {
            cfg.set(&k, &v)?;
        }
        Ok(cfg)
    }

    /// Exactly one input, positive lengths, `ξ < 1` and `β`, `ε` given
    /// together.
    pub fn validate(&self) -> Result<(), PipelineError> {
        if self.graph.is_some() == self.cloud.is_some() {
            return Err(PipelineError::Config(
                "give exactly one of graph and cloud".into(),
            ));
        }
        self.validate_values()
    }

    fn validate_values(&self) -> Result<(), PipelineError> {
        let positive = [
            ("xi", self.xi),
            ("beta", self.beta),
            ("eps", self.eps),
            ("h", self.h),
            ("resolution", self.resolution),
            ("shadow_radius", self.shadow_radius),
            ("prune", self.prune),
        ];
        for (name, v) in positive {
            if let Some(v) = v {
                if !(v > 0.0 && v.is_finite()) {
                    return Err(PipelineError::Config(format!(
                        "{name} must be positive, got {v}"
                    )));
                }
            }
        }
        if let Some(n) = self.noise {
            if !(n >= 0.0 && n.is_finite()) {
                return Err(PipelineError::Config(format!(
                    "noise must be non-negative, got {n}"
                )));
            }
        }
        if self.xi.is_some_and(|x| x >= 1.0) {
            return Err(PipelineError::Config("xi must be below 1".into()));
        }
        if self.beta.is_some() != self.eps.is_some() {
            return Err(PipelineError::Config(
                "beta and eps are overridden together".into(),
            ));
        }
        Ok(())
    }

    fn shadow_enabled(&self) -> bool {
        self.shadow.unwrap_or(self.mode == Mode::Geometric)
    }
}

/// The data a run starts from.
#[derive(Clone, Debug)]
pub enum Input {
    Graph(EmbeddedGraph),
    Cloud(PointCloud),
}

/// Loads the configured input file.
pub fn load_input(cfg: &PipelineConfig) -> Result<Input, PipelineError> {
    let cfg_err = |e: io::IoError, p: &Path| PipelineError::Config(format!("{}: {e}", p.display()));
    match (&cfg.graph, &cfg.cloud) {
        (Some(p), None) => {
            let text = io::read_file(p).map_err(|e| PipelineError::Config(e.to_string()))?;
            Ok(Input::Graph(
                io::parse_graph(&text).map_err(|e| cfg_err(e, p))?,
            ))
        }
        (None, Some(p)) => {
            let text = io::read_file(p).map_err(|e| PipelineError::Config(e.to_string()))?;
            Ok(Input::Cloud(
                io::parse_cloud(&text).map_err(|e| cfg_err(e, p))?,
            ))
        }
        _ => Err(PipelineError::Config(
            "give exactly one of graph and cloud".into(),
        )),
    }
}

/// Where `ξ`, `β` and `ε` came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParameterSource {
    Selected,
    Override,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShadowSummary {
    pub betti: BettiVector,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
    pub covered: usize,
    pub crossings: usize,
    pub lifting_examined: usize,
    pub lifting_satisfied_a: usize,
    pub lifting_satisfied_b: usize,
    pub lifting_violations: usize,
    /// Against the input graph.
    pub hausdorff: Option<HausdorffEstimate>,
    pub skeleton_betti: Option<(usize, usize)>,
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// Everything a run measured.
#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub mode: Mode,
    pub input: &'static str,
    pub parameters: ParameterSource,
    pub samples: usize,
    pub xi: f64,
    pub beta: f64,
    pub eps: f64,
    pub h: Option<f64>,
    pub noise: Option<f64>,
    pub seed: u64,
    pub resolution: f64,
    pub graph_betti: Option<(usize, usize)>,
    pub rips_betti: BettiVector,
    pub rips_edges: usize,
    pub rips_triangles: usize,
    pub euclidean_rips_betti: Option<BettiVector>,
    pub euclidean_shadow_betti: Option<BettiVector>,
    pub shadow: Option<ShadowSummary>,
    /// Upper estimate of `d_H(S, G)`.
    pub sample_hausdorff: Option<f64>,
    /// `½ξε`.
    pub required_hausdorff: f64,
    /// `β + ½ξε`.
    pub predicted_bound: f64,
}

impl VerificationReport {
    /// Pass flags computed from the recorded numbers.
    pub fn checks(&self) -> Vec<Check> {
        let mut out = Vec::new();
        if let Some(d) = self.sample_hausdorff {
            out.push(Check {
                name: "sample_hausdorff",
                pass: d < self.required_hausdorff,
                detail: format!("d_H(S,G) ≈ {d:.6} < ½ξε = {:.6}", self.required_hausdorff),
            });
        }
        if let Some(g) = self.graph_betti {
            out.push(Check {
                name: "rips_betti",
                pass: self.rips_betti.pair() == g,
                detail: format!("rips {} vs graph {} {}", self.rips_betti, g.0, g.1),
            });
            if let Some(s) = &self.shadow {
                out.push(Check {
                    name: "shadow_betti",
                    pass: s.betti.pair() == g,
                    detail: format!("shadow {} vs graph {} {}", s.betti, g.0, g.1),
                });
                if let Some(hd) = s.hausdorff {
                    let bound = self.predicted_bound + self.resolution;
                    out.push(Check {
                        name: "shadow_hausdorff",
                        pass: hd.value() <= bound,
                        detail: format!(
                            "d_H(Sh,G) ≈ {:.6} ≤ β + ½ξε + resolution = {bound:.6}",
                            hd.value()
                        ),
                    });
                }
            }
        }
        if let Some(s) = &self.shadow {
            out.push(Check {
                name: "lifting",
                pass: s.lifting_violations == 0,
                detail: format!(
                    "{} violations in {} crossings",
                    s.lifting_violations, s.lifting_examined
                ),
            });
        }
        out
    }

    pub fn passed(&self) -> bool {
        self.checks().iter().all(|c| c.pass)
    }

    /// `key=value` lines followed by a commented table.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k}={v}");
        };
        let pair = |p: (usize, usize)| format!("{} {}", p.0, p.1);
        kv("input", self.input.into());
        kv("mode", self.mode.to_string());
        kv(
            "parameters",
            match self.parameters {
                ParameterSource::Selected => "selected",
                ParameterSource::Override => "override",
            }
            .into(),
        );
        kv("samples", self.samples.to_string());
        kv("xi", fmt_f(self.xi));
        kv("beta", fmt_f(self.beta));
        kv("eps", fmt_f(self.eps));
        if let Some(h) = self.h {
            kv("h", fmt_f(h));
        }
        if let Some(n) = self.noise {
            kv("noise", fmt_f(n));
        }
        kv("seed", self.seed.to_string());
        kv("resolution", fmt_f(self.resolution));
        if let Some(g) = self.graph_betti {
            kv("graph_betti", pair(g));
        }
        kv("rips_betti", pair(self.rips_betti.pair()));
        kv("rips_edges", self.rips_edges.to_string());
        kv("rips_triangles", self.rips_triangles.to_string());
        if let Some(b) = self.euclidean_rips_betti {
            kv("euclidean_rips_betti", pair(b.pair()));
        }
        if let Some(b) = self.euclidean_shadow_betti {
            kv("euclidean_shadow_betti", pair(b.pair()));
        }
        if let Some(sh) = &self.shadow {
            kv("shadow_betti", pair(sh.betti.pair()));
            kv("shadow_vertices", sh.vertices.to_string());
            kv("shadow_edges", sh.edges.to_string());
            kv("shadow_faces", sh.faces.to_string());
            kv("shadow_covered_faces", sh.covered.to_string());
            kv("shadow_crossings", sh.crossings.to_string());
            kv("lifting_examined", sh.lifting_examined.to_string());
            kv("lifting_satisfied_a", sh.lifting_satisfied_a.to_string());
            kv("lifting_satisfied_b", sh.lifting_satisfied_b.to_string());
            kv("lifting_violations", sh.lifting_violations.to_string());
            if let Some(hd) = sh.hausdorff {
                kv("shadow_hausdorff", fmt_f(hd.value()));
                kv("shadow_to_graph", fmt_f(hd.shadow_to_graph));
                kv("graph_to_shadow", fmt_f(hd.graph_to_shadow));
            }
            if let Some(b) = sh.skeleton_betti {
                kv("skeleton_betti", pair(b));
            }
        }
        if let Some(d) = self.sample_hausdorff {
            kv("sample_hausdorff", fmt_f(d));
        }
        kv("required_hausdorff", fmt_f(self.required_hausdorff));
        kv("predicted_bound", fmt_f(self.predicted_bound));
        let checks = self.checks();
        for c in &checks {
            kv(
                &format!("check.{}", c.name),
                if c.pass { "pass" } else { "fail" }.into(),
            );
        }
        kv("passed", self.passed().to_string());
        s.push_str("#\n");
        let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in &checks {
            let _ = writeln!(
                s,
                "# {:width$}  {}  {}",
                c.name,
                if c.pass { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        s
    }
}

/// A finished run.
#[derive(Debug)]
pub struct PipelineOutcome {
    pub report: VerificationReport,
    pub plan: Option<ParameterPlan>,
    pub cloud: PointCloud,
    pub complex: FlagComplex,
    pub shadow: Option<ShadowComplex>,
    pub skeleton: Option<SkeletonGraph>,
    /// Files written, in order.
    pub artifacts: Vec<PathBuf>,
}

/// Loads the configured input and runs it.
pub fn run_pipeline(cfg: &PipelineConfig) -> Result<PipelineOutcome, PipelineError> {
    cfg.validate()?;
    let input = load_input(cfg)?;
    run_on(cfg, input)
}

/// Upper estimate of `d_H(S, G)`: exact from the samples to `G`, and from a
/// `step`-sample of `G` to `S` plus `step/2`.
pub fn sample_hausdorff(cloud: &PointCloud, g: &EmbeddedGraph, step: f64) -> f64 {
    let mut segs = Vec::new();
    for e in 0..g.edges().len() {
        let line = g.polyline2(e);
        for w in line.windows(2) {
            segs.push((w[0], w[1]));
        }
    }
    let pts = cloud.planar();
    let mut to_graph = 0.0f64;
    if segs.is_empty() {
        let vs: Vec<P2> = g
            .vertices()
            .iter()
            .filter_map(|v| v.pos.planar().ok())
            .collect();
        for p in &pts {
            to_graph = to_graph.max(vs.iter().map(|v| v.dist(*p)).fold(f64::INFINITY, f64::min));
        }
    } else {
        let boxes: Vec<(P2, P2)> = segs
            .iter()
            .map(|&(a, b)| {
                (
                    P2::new(a.x.min(b.x), a.y.min(b.y)),
                    P2::new(a.x.max(b.x), a.y.max(b.y)),
                )
            })
            .collect();
        let cell = boxes
            .iter()
            .map(|b| (b.1.x - b.0.x).max(b.1.y - b.0.y))
            .sum::<f64>()
            / boxes.len() as f64;
        let grid = BoxGrid::build(&boxes, cell.max(step));
        for &p in &pts {
            // grow the search box until it holds a segment, then once more
            let mut r = cell.max(step);
            let d = loop {
                let mut best = f64::INFINITY;
                grid.for_each_near(P2::new(p.x - r, p.y - r), P2::new(p.x + r, p.y + r), |i| {
                    best = best.min(point_segment_distance(p, segs[i].0, segs[i].1));
                });
                if best <= r {
                    break best;
                }
                r *= 2.0;
            };
            to_graph = to_graph.max(d);
        }
    }
    let near = PointGrid::build(&pts);
    let mut to_cloud = 0.0f64;
    let mut probe = |q: P2| to_cloud = to_cloud.max(near.nearest(q).1);
    for v in g.vertices() {
        if let Ok(q) = v.pos.planar() {
            probe(q);
        }
    }
    for (a, b) in segs {
        let k = (a.dist(b) / step).ceil().max(1.0) as usize;
        for j in 0..=k {
            probe(a.lerp(b, j as f64 / k as f64));
        }
    }
    to_graph.max(to_cloud + step / 2.0)
}

struct Params {
    source: ParameterSource,
    xi: f64,
    beta: f64,
    eps: f64,
    plan: Option<ParameterPlan>,
}

fn timed<T>(name: &str, f: impl FnOnce() -> T) -> T {
    let t = Instant::now();
    let out = f();
    info!("{name}: {:.2?}", t.elapsed());
    out
}

/// Runs every stage on an in-memory input. Paths in `cfg` are ignored
/// except `out`.
pub fn run_on(cfg: &PipelineConfig, input: Input) -> Result<PipelineOutcome, PipelineError> {
    cfg.validate_values()?;
    let shadow_on = cfg.shadow_enabled();
    let euclid_on = cfg.euclidean.unwrap_or(shadow_on);
    let graph = match &input {
        Input::Graph(g) => Some(g),
        Input::Cloud(_) => None,
    };
    if cfg.mode == Mode::Geometric && graph.is_none() {
        return Err(PipelineError::Config(
            "geometric mode needs a graph input".into(),
        ));
    }

    if let Some(g) = graph {
        let report = validate_assumptions(g, cfg.mode);
        if !report.ok() {
            return Err(PipelineError::Assumption(
                report.violations.iter().map(|v| v.to_string()).collect(),
            ));
        }
    }

    let params = match (graph, cfg.beta, cfg.eps) {
        (_, Some(beta), Some(eps)) => {
            let xi = cfg.xi.unwrap_or(match (cfg.mode, graph) {
                (Mode::Geometric, Some(g)) => (1.0 - theta(g).map_err(stage("params"))?) / 12.0,
                _ => 1.0 / 6.0,
            });
            Params {
                source: ParameterSource::Override,
                xi,
                beta,
                eps,
                plan: None,
            }
        }
        (Some(g), _, _) => timed("params", || plan_for(cfg, g))?,
        (None, _, _) => {
            return Err(PipelineError::Config(
                "a cloud input needs beta and eps".into(),
            ));
        }
    };
    let (xi, beta, eps) = (params.xi, params.beta, params.eps);
    info!("xi={xi} beta={beta} eps={eps}");

    let (cloud, h, noise) = match &input {
        Input::Graph(g) => {
            let h = cfg.h.unwrap_or(0.75 * xi * eps);
            let noise = cfg.noise.unwrap_or(0.1 * xi * eps);
            check_sample_budget(g, h)?;
            let clean = sample_graph(g, h).map_err(stage("sample"))?;
            let cloud = perturb(&clean, noise, cfg.seed).map_err(stage("sample"))?;
            (cloud, Some(h), Some(noise))
        }
        Input::Cloud(c) => (c.clone(), None, None),
    };
    info!("samples: {}", cloud.len());
    let sample_hd = match (graph, h) {
        (Some(g), Some(h)) if cloud.dim() == 2 => Some(sample_hausdorff(&cloud, g, h / 10.0)),
        _ => None,
    };

    let index =
        timed("eps metric", || EpsMetricIndex::build(&cloud, eps)).map_err(stage("metric"))?;
    let complex = timed("rips", || {
        rips_with_budget(
            &index,
            beta,
            2,
            MetricTag::EpsPath { eps },
            Budget::default(),
        )
    })
    .map_err(stage("rips"))?;
    let rips_betti = timed("betti", || complex.betti(1)).map_err(stage("betti"))?;

    let resolution = cfg.resolution.unwrap_or(beta / 50.0);
    let planar = cloud.dim() == 2;
    if shadow_on && !planar {
        return Err(PipelineError::Config(format!(
            "the shadow needs planar points, got dimension {}",
            cloud.dim()
        )));
    }

    let mut shadow = None;
    let mut skeleton = None;
    let mut summary = None;
    if shadow_on {
        let sc = timed("project", || project(&complex, &cloud)).map_err(stage("project"))?;
        let betti = sc.betti();
        let lifting: LiftingReport = timed("lifting", || check_lifting_projected(&complex, &sc))
            .map_err(stage("lifting"))?;
        let hausdorff = match graph {
            Some(g) => Some(
                timed("hausdorff", || shadow_hausdorff_detail(&sc, g, resolution))
                    .map_err(stage("hausdorff"))?,
            ),
            None => None,
        };
        if cfg.medial_axis {
            let prune = cfg.prune.unwrap_or(beta / 2.0);
            skeleton = Some(
                timed("medial axis", || medial_axis(&sc, resolution, prune))
                    .map_err(stage("medial_axis"))?,
            );
        }
        summary = Some(ShadowSummary {
            betti,
            vertices: sc.vertices().len(),
            edges: sc.edges().len(),
            faces: sc.faces().len(),
            covered: sc.covered_faces().count(),
            crossings: sc.crossing_count(),
            lifting_examined: lifting.examined,
            lifting_satisfied_a: lifting.satisfied_a,
            lifting_satisfied_b: lifting.satisfied_b,
            lifting_violations: lifting.violations.len(),
            hausdorff,
            skeleton_betti: skeleton.as_ref().map(SkeletonGraph::betti),
        });
        shadow = Some(sc);
    }

    let mut euclidean_rips_betti = None;
    let mut euclidean_shadow = None;
    if euclid_on {
        let ek = timed("euclidean rips", || {
            rips_with_budget(
                &EuclideanMetric(&cloud),
                beta,
                2,
                MetricTag::Euclidean,
                Budget::default(),
            )
        })
        .map_err(stage("euclidean_rips"))?;
        euclidean_rips_betti = Some(ek.betti(1).map_err(stage("euclidean_rips"))?);
        if shadow_on {
            euclidean_shadow = Some(
                timed("euclidean project", || project(&ek, &cloud))
                    .map_err(stage("euclidean_shadow"))?,
            );
        }
    }

    let report = VerificationReport {
        mode: cfg.mode,
        input: if graph.is_some() { "graph" } else { "cloud" },
        parameters: params.source,
        samples: cloud.len(),
        xi,
        beta,
        eps,
        h,
        noise,
        seed: cfg.seed,
        resolution,
        graph_betti: graph.map(betti_graph),
        rips_betti,
        rips_edges: complex.count(1),
        rips_triangles: complex.count(2),
        euclidean_rips_betti,
        euclidean_shadow_betti: euclidean_shadow.as_ref().map(ShadowComplex::betti),
        shadow: summary,
        sample_hausdorff: sample_hd,
        required_hausdorff: 0.5 * xi * eps,
        predicted_bound: beta + 0.5 * xi * eps,
    };

    let mut artifacts = Vec::new();
    if let Some(dir) = &cfg.out {
        let write =
            |name: &str, text: &str, list: &mut Vec<PathBuf>| -> Result<(), PipelineError> {
                let p = dir.join(name);
                io::write_file(&p, text).map_err(stage("write"))?;
                list.push(p);
                Ok(())
            };
        std::fs::create_dir_all(dir).map_err(stage("write"))?;
        write("cloud.csv", &io::write_cloud(&cloud), &mut artifacts)?;
        let plan_text = match &params.plan {
            Some(p) => p.to_key_values(),
            None => format!(
                "parameters=override\nmode={}\nxi={}\nbeta={}\neps={}\n",
                cfg.mode,
                fmt_f(xi),
                fmt_f(beta),
                fmt_f(eps)
            ),
        };
        write("plan.txt", &plan_text, &mut artifacts)?;
        write("complex.txt", &io::write_complex(&complex), &mut artifacts)?;
        if let Some(sc) = &shadow {
            write("shadow.txt", &sc.dump(), &mut artifacts)?;
        }
        write("report.txt", &report.render(), &mut artifacts)?;
        if cfg.render {
            if let Some(sc) = &shadow {
                let overlays = Overlays {
                    graph,
                    cloud: Some(&cloud),
                    skeleton: skeleton.as_ref(),
                };
                write("shadow.svg", &render_svg(sc, overlays), &mut artifacts)?;
            }
            if let Some(sc) = &euclidean_shadow {
                let overlays = Overlays {
                    graph,
                    cloud: Some(&cloud),
                    skeleton: None,
                };
                write(
                    "euclidean_shadow.svg",
                    &render_svg(sc, overlays),
                    &mut artifacts,
                )?;
            }
        }
    }

    Ok(PipelineOutcome {
        report,
        plan: params.plan,
        cloud,
        complex,
        shadow,
        skeleton,
        artifacts,
    })
}

fn check_sample_budget(g: &EmbeddedGraph, h: f64) -> Result<(), PipelineError> {
    let count = (g.total_length() / h).ceil() as usize + g.vertices().len();
    if count > SAMPLE_BUDGET {
        return Err(PipelineError::Stage {
            stage: "sample",
            source: Box::new(BudgetError {
                what: "graph sample",
                count,
                budget: SAMPLE_BUDGET,
            }),
        });
    }
    Ok(())
}

/// Runs [`select_parameters`], after a shadow-radius search in geometric
/// mode and a check that the sample the plan calls for can be afforded.
fn plan_for(cfg: &PipelineConfig, g: &EmbeddedGraph) -> Result<Params, PipelineError> {
    let theta = theta(g).map_err(stage("params"))?;
    let shadow_radius = match (cfg.mode, cfg.shadow_radius) {
        (Mode::Homotopy, _) => None,
        (Mode::Geometric, Some(r)) => Some(r),
        (Mode::Geometric, None) => {
            let res = cfg
                .resolution
                .unwrap_or(g.total_length() / RADIUS_DEFAULT_SAMPLES);
            Some(
                timed("shadow radius", || shadow_radius_lower_bound(g, res))
                    .map_err(stage("shadow_radius"))?,
            )
        }
    };
    let req = PlanRequest {
        mode: cfg.mode,
        systole: systole(g),
        theta,
        shadow_radius,
        xi: cfg.xi,
        density: None,
    };
    // ε only shrinks from its cap, so the cap bounds the sample from below
    let caps = plan_caps(&req, g).map_err(stage("params"))?;
    let h = cfg.h.unwrap_or(0.75 * caps.xi * caps.eps_cap);
    check_sample_budget(g, h)?;
    let plan = select_parameters(&req, g).map_err(stage("params"))?;
    Ok(Params {
        source: ParameterSource::Selected,
        xi: plan.xi,
        beta: plan.beta,
        eps: plan.eps,
        plan: Some(plan),
    })
}
