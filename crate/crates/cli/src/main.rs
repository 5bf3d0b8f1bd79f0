use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use shadow_recon::complex::{rips, FlagComplex, MetricTag};
use shadow_recon::io;
use shadow_recon::metric_graph::{systole, theta, validate_assumptions, EmbeddedGraph, Mode};
use shadow_recon::params::{select_parameters, shadow_radius_lower_bound, PlanRequest};
use shadow_recon::path_metric::{EpsMetricIndex, EuclideanMetric};
use shadow_recon::pipeline::{run_pipeline, PipelineConfig, RADIUS_DEFAULT_SAMPLES};
use shadow_recon::sampling::{perturb, sample_graph, PointCloud};
use shadow_recon::shadow::{check_lifting, medial_axis, project, render_svg, Overlays};

#[derive(Parser)]
#[command(
    name = "shadow-recon",
    version,
    about = "Reconstruct embedded graphs from noisy samples"
)]
struct Cli {
    /// Log progress to stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Sample a graph and perturb the samples.
    Sample(SampleArgs),
    /// ε-path distance matrix of a cloud.
    Metric(MetricArgs),
    /// Rips complex of a cloud.
    Rips(RipsArgs),
    /// Betti numbers of a complex dump.
    Betti(BettiArgs),
    /// Planar shadow of a complex.
    Shadow(ShadowArgs),
    /// Lifting-condition check of a complex.
    Lifting(ShadowArgs),
    /// Parameter plan for a graph.
    Params(ParamsArgs),
    /// SVG of a shadow.
    Render(RenderArgs),
    /// The full reconstruct-and-verify run.
    Pipeline(Box<PipelineArgs>),
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Arclength spacing.
    #[arg(long)]
    h: f64,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MetricArgs {
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    eps: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RipsArgs {
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    beta: f64,
    /// Use the ε-path metric; Euclidean without it.
    #[arg(long)]
    eps: Option<f64>,
    #[arg(long, default_value_t = 2)]
    max_dim: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BettiArgs {
    #[arg(long)]
    complex: PathBuf,
}

#[derive(Args)]
struct ShadowArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cloud: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Homotopy,
    Geometric,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Homotopy => Mode::Homotopy,
            ModeArg::Geometric => Mode::Geometric,
        }
    }
}

#[derive(Args)]
struct ParamsArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, value_enum, default_value = "homotopy")]
    mode: ModeArg,
    #[arg(long)]
    xi: Option<f64>,
    /// Shadow-radius grid spacing in geometric mode.
    #[arg(long)]
    resolution: Option<f64>,
    /// Use this shadow radius instead of searching for one.
    #[arg(long)]
    shadow_radius: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    cloud: PathBuf,
    /// Graph drawn under the shadow.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    medial_axis: bool,
    /// Boundary sample spacing of the medial axis.
    #[arg(long, default_value_t = 0.01)]
    resolution: f64,
    #[arg(long, default_value_t = 0.0)]
    prune: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PipelineArgs {
    /// key=value file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    graph: Option<String>,
    #[arg(long)]
    cloud: Option<String>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    eps: Option<String>,
    #[arg(long)]
    xi: Option<String>,
    #[arg(long)]
    h: Option<String>,
    #[arg(long)]
    noise: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    resolution: Option<String>,
    #[arg(long)]
    shadow_radius: Option<String>,
    #[arg(long)]
    out: Option<String>,
    #[arg(long)]
    render: bool,
    #[arg(long)]
    medial_axis: bool,
    #[arg(long)]
    prune: Option<String>,
    /// Build the shadow (true or false).
    #[arg(long)]
    shadow: Option<String>,
    /// Run the Euclidean Rips comparison (true or false).
    #[arg(long)]
    euclidean: Option<String>,
}

/// A failure with its exit code.
struct Failure {
    code: u8,
    msg: String,
}

impl Failure {
    fn config(msg: impl ToString) -> Self {
        Failure {
            code: 2,
            msg: msg.to_string(),
        }
    }

    fn stage(msg: impl ToString) -> Self {
        Failure {
            code: 4,
            msg: msg.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    io::read_file(path).map_err(Failure::config)
}

fn load_graph(path: &Path) -> Result<EmbeddedGraph, Failure> {
    io::parse_graph(&read(path)?).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn load_cloud(path: &Path) -> Result<PointCloud, Failure> {
    io::parse_cloud(&read(path)?).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn load_complex(path: &Path) -> Result<FlagComplex, Failure> {
    io::parse_complex(&read(path)?).map_err(|e| Failure::config(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => io::write_file(p, text).map_err(Failure::config),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn sample(a: SampleArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let clean = sample_graph(&g, a.h).map_err(Failure::config)?;
    let cloud = perturb(&clean, a.noise, a.seed).map_err(Failure::config)?;
    emit(a.out.as_deref(), &io::write_cloud(&cloud))?;
    Ok(0)
}

fn metric(a: MetricArgs) -> Outcome {
    let cloud = load_cloud(&a.cloud)?;
    let index = EpsMetricIndex::build(&cloud, a.eps).map_err(Failure::config)?;
    emit(a.out.as_deref(), &io::write_distance_matrix(&index))?;
    Ok(0)
}

fn rips_cmd(a: RipsArgs) -> Outcome {
    let cloud = load_cloud(&a.cloud)?;
    let k = match a.eps {
        Some(eps) => {
            let index = EpsMetricIndex::build(&cloud, eps).map_err(Failure::config)?;
            rips(&index, a.beta, a.max_dim, MetricTag::EpsPath { eps })
        }
        None => rips(
            &EuclideanMetric(&cloud),
            a.beta,
            a.max_dim,
            MetricTag::Euclidean,
        ),
    }
    .map_err(Failure::stage)?;
    emit(a.out.as_deref(), &io::write_complex(&k))?;
    Ok(0)
}

fn betti_cmd(a: BettiArgs) -> Outcome {
    let k = load_complex(&a.complex)?;
    let b = k.betti(1).map_err(Failure::stage)?;
    println!("{} {}", b.b0, b.b1);
    Ok(0)
}

fn shadow_cmd(a: ShadowArgs) -> Outcome {
    let k = load_complex(&a.complex)?;
    let cloud = load_cloud(&a.cloud)?;
    let sc = project(&k, &cloud).map_err(Failure::stage)?;
    emit(a.out.as_deref(), &sc.dump())?;
    Ok(0)
}

fn lifting_cmd(a: ShadowArgs) -> Outcome {
    let k = load_complex(&a.complex)?;
    let cloud = load_cloud(&a.cloud)?;
    let r = check_lifting(&k, &cloud).map_err(Failure::stage)?;
    let mut text = format!(
        "examined={}\nsatisfied_a={}\nsatisfied_b={}\nviolations={}\n",
        r.examined,
        r.satisfied_a,
        r.satisfied_b,
        r.violations.len()
    );
    for ((a1, b1), (c1, d1)) in &r.violations {
        text.push_str(&format!("violation={a1} {b1} {c1} {d1}\n"));
    }
    emit(a.out.as_deref(), &text)?;
    Ok(if r.ok() { 0 } else { 4 })
}

fn params_cmd(a: ParamsArgs) -> Outcome {
    let g = load_graph(&a.graph)?;
    let mode = Mode::from(a.mode);
    let report = validate_assumptions(&g, mode);
    if !report.ok() {
        let msgs: Vec<String> = report.violations.iter().map(|v| v.to_string()).collect();
        return Err(Failure {
            code: 3,
            msg: format!("assumptions violated: {}", msgs.join("; ")),
        });
    }
    let shadow_radius = match (mode, a.shadow_radius) {
        (Mode::Homotopy, _) => None,
        (Mode::Geometric, Some(r)) => Some(r),
        (Mode::Geometric, None) => {
            let res = a
                .resolution
                .unwrap_or(g.total_length() / RADIUS_DEFAULT_SAMPLES);
            Some(shadow_radius_lower_bound(&g, res).map_err(Failure::stage)?)
        }
    };
    let req = PlanRequest {
        mode,
        systole: systole(&g),
        theta: theta(&g).map_err(Failure::stage)?,
        shadow_radius,
        xi: a.xi,
        density: None,
    };
    let plan = select_parameters(&req, &g).map_err(Failure::stage)?;
    emit(a.out.as_deref(), &plan.to_key_values())?;
    Ok(0)
}

fn render_cmd(a: RenderArgs) -> Outcome {
    let k = load_complex(&a.complex)?;
    let cloud = load_cloud(&a.cloud)?;
    let graph = a.graph.as_deref().map(load_graph).transpose()?;
    let sc = project(&k, &cloud).map_err(Failure::stage)?;
    let skeleton = if a.medial_axis {
        Some(medial_axis(&sc, a.resolution, a.prune).map_err(Failure::stage)?)
    } else {
        None
    };
    let overlays = Overlays {
        graph: graph.as_ref(),
        cloud: Some(&cloud),
        skeleton: skeleton.as_ref(),
    };
    emit(a.out.as_deref(), &render_svg(&sc, overlays))?;
    Ok(0)
}

fn pipeline_cmd(a: PipelineArgs) -> Outcome {
    let mut cfg = match &a.config {
        Some(p) => PipelineConfig::from_file(p).map_err(Failure::config)?,
        None => PipelineConfig::default(),
    };
    let mode = a.mode.map(|m| Mode::from(m).to_string());
    let flags = [
        ("graph", a.graph),
        ("cloud", a.cloud),
        ("mode", mode),
        ("beta", a.beta),
        ("eps", a.eps),
        ("xi", a.xi),
        ("h", a.h),
        ("noise", a.noise),
        ("seed", a.seed),
        ("resolution", a.resolution),
        ("shadow_radius", a.shadow_radius),
        ("out", a.out),
        ("prune", a.prune),
        ("shadow", a.shadow),
        ("euclidean", a.euclidean),
        ("render", a.render.then(|| "true".to_string())),
        ("medial_axis", a.medial_axis.then(|| "true".to_string())),
    ];
    for (k, v) in flags {
        if let Some(v) = v {
            cfg.set(k, &v).map_err(Failure::config)?;
        }
    }
    let outcome = run_pipeline(&cfg).map_err(|e| Failure {
        code: e.exit_code() as u8,
        msg: e.to_string(),
    })?;
    print!("{}", outcome.report.render());
    Ok(if outcome.report.passed() { 0 } else { 4 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    env_logger::Builder::new()
        .filter_level(if cli.verbose {
            log::LevelFilter::Info
        } else {
            log::LevelFilter::Warn
        })
        .parse_default_env()
        .init();
    let result = match cli.cmd {
        Cmd::Sample(a) => sample(a),
        Cmd::Metric(a) => metric(a),
        Cmd::Rips(a) => rips_cmd(a),
        Cmd::Betti(a) => betti_cmd(a),
        Cmd::Shadow(a) => shadow_cmd(a),
        Cmd::Lifting(a) => lifting_cmd(a),
        Cmd::Params(a) => params_cmd(a),
        Cmd::Render(a) => render_cmd(a),
        Cmd::Pipeline(a) => pipeline_cmd(*a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
