//! The `tdakit` command line. Exit status 0 on success, 2 for invalid input
//! or parameters, 1 when a computation fails; messages name the stage.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use crate::distance::{pwgk, wasserstein_distance};
use crate::error::{Error, Result};
use crate::graph::NodeFunction;
use crate::image::{raw_thresholds, GrayImage};
use crate::io::{csv_row, fmt_sig, load_graph, load_node_values, load_pgm, load_pointcloud, DiagramFile};
use crate::mapper::{Clustering, Lens};
use crate::multipers::{
    bigraded_betti, density_rips_bifiltration, graph_bifiltration, graph_edge_bifiltration, image_bifiltration,
    slice_vectorize, Axis, Bifiltration, SliceVectorizer,
};
use crate::pipeline::{diagram_file, load_dataset_dir, run_mapper, Dataset, FiltrationSpec, Reduction};
use crate::pointcloud::linspace;
use crate::vectorize::{default_grid, ImageBounds, Psi, Statistic, Vectorization};

#[derive(Debug, Parser)]
#[command(name = "tdakit", version, about = "Topological data analysis from the command line")]
pub struct Cli {
    /// More log output (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    /// Seed for stochastic steps. Every current method is deterministic, so
    /// the seed is only logged.
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vietoris–Rips persistence of a CSV point cloud.
    Rips(RipsArgs),
    /// Čech persistence (cells up to dimension 2).
    Cech(CechArgs),
    /// Cubical persistence of a PGM image.
    Cubical(CubicalArgs),
    /// Node- or edge-filtration persistence of an edge-list graph.
    GraphFilt(GraphArgs),
    /// Persistence of the graph-distance (power) filtration.
    Power(PowerArgs),
    /// Distance or kernel value between two diagram files.
    DiagramDist(DistArgs),
    /// Turn diagram files into fixed-length vectors (one CSV row per file).
    Vectorize(VectorizeArgs),
    /// Bigraded Betti numbers or slice vectors of a bifiltration.
    Multipers(MultipersArgs),
    /// Build a Mapper graph.
    Mapper(MapperArgs),
    /// Serve the HTTP API over a directory of datasets.
    Serve(ServeArgs),
}

#[derive(Debug, Args)]
struct Output {
    /// Write here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RipsArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    max_scale: f64,
    /// Highest homology dimension.
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[arg(long, default_value = "euclidean")]
    metric: String,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CechArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    max_scale: f64,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct CubicalArgs {
    #[arg(long)]
    input: PathBuf,
    /// Comma-separated thresholds (default: 64 levels over [0, 255]).
    #[arg(long, conflicts_with_all = ["levels", "raw"])]
    thresholds: Option<String>,
    /// Number of evenly spaced levels over [0, 255].
    #[arg(long, conflicts_with = "raw")]
    levels: Option<usize>,
    /// Use every distinct gray level as a threshold.
    #[arg(long)]
    raw: bool,
    #[arg(long)]
    superlevel: bool,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct GraphArgs {
    #[arg(long)]
    input: PathBuf,
    /// degree, eccentricity, closeness, external (needs --node-values) or edge.
    #[arg(long, default_value = "degree")]
    function: String,
    /// `id,value` sidecar for the external function.
    #[arg(long)]
    node_values: Option<PathBuf>,
    #[arg(long)]
    thresholds: Option<String>,
    #[arg(long)]
    superlevel: bool,
    #[arg(long, default_value_t = 2)]
    clique_dim: usize,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    /// none, coral or prune.
    #[arg(long, default_value = "none")]
    reduce: String,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct PowerArgs {
    #[arg(long)]
    input: PathBuf,
    #[arg(long, default_value_t = 3)]
    max_hops: usize,
    /// Use shortest weighted paths with edge length 1/weight up to this scale.
    #[arg(long)]
    weighted_scale: Option<f64>,
    #[arg(long, default_value_t = 1)]
    max_dim: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct DistArgs {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
    /// Wasserstein order; `inf` for bottleneck.
    #[arg(long, default_value = "inf")]
    p: String,
    /// Only this dimension (default: every dimension, one line each).
    #[arg(long)]
    dim: Option<usize>,
    /// Print the persistence-weighted Gaussian kernel instead.
    #[arg(long)]
    pwgk: bool,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    weight_power: f64,
}

#[derive(Debug, Args)]
struct VectorizeArgs {
    #[arg(long, required = true)]
    pd: Vec<PathBuf>,
    /// betti, landscape, silhouette, curve or image.
    #[arg(long, default_value = "betti")]
    method: String,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    level: usize,
    #[arg(long, default_value = "constant")]
    psi: String,
    #[arg(long, default_value = "sum")]
    stat: String,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, requires = "t_max")]
    t_min: Option<f64>,
    #[arg(long, requires = "t_min")]
    t_max: Option<f64>,
    /// Image resolution as KxL.
    #[arg(long, default_value = "20x20")]
    resolution: String,
    #[arg(long, default_value_t = 0.1)]
    sigma: f64,
    #[arg(long, default_value_t = 1.0)]
    weight_power: f64,
    /// Emit JSON with provenance instead of CSV rows.
    #[arg(long)]
    json: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MultipersArgs {
    /// graph, graph-edge, image or density-rips.
    #[arg(long)]
    kind: String,
    #[arg(long)]
    input: PathBuf,
    /// Second channel image (kind image).
    #[arg(long)]
    input_b: Option<PathBuf>,
    /// Row node function (graph kinds).
    #[arg(long, default_value = "degree")]
    f: String,
    /// Column node function (kind graph).
    #[arg(long, default_value = "closeness")]
    h: String,
    #[arg(long)]
    node_values: Option<PathBuf>,
    #[arg(long)]
    alphas: Option<String>,
    #[arg(long)]
    betas: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    density_radius: f64,
    /// Decreasing density thresholds.
    #[arg(long)]
    density_thresholds: Option<String>,
    #[arg(long)]
    scales: Option<String>,
    #[arg(long, default_value_t = 0)]
    dim: usize,
    #[arg(long, default_value_t = 2)]
    clique_dim: usize,
    /// Vectorize slices with betti, silhouette or landscape instead of
    /// printing the Betti tensor.
    #[arg(long)]
    slices: Option<String>,
    #[arg(long, default_value_t = 1.0)]
    p: f64,
    #[arg(long, default_value_t = 1)]
    level: usize,
    #[arg(long)]
    vertical: bool,
    /// Row-major CSV instead of JSON.
    #[arg(long)]
    csv: bool,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct MapperArgs {
    /// `.csv` point cloud, `.edges` graph or `.pgm` image.
    #[arg(long)]
    input: PathBuf,
    /// Point clouds: coordinate, eccentricity, density, pca. Graphs: a node
    /// function. Images: intensity.
    #[arg(long, default_value = "coordinate")]
    lens: String,
    #[arg(long, default_value_t = 0)]
    axis: usize,
    #[arg(long, default_value_t = 1.0)]
    radius: f64,
    #[arg(long, default_value_t = 0)]
    component: usize,
    #[arg(long, default_value_t = 10)]
    resolution: usize,
    #[arg(long, default_value_t = 0.3)]
    overlap: f64,
    /// single-linkage, kmeans or dbscan.
    #[arg(long, default_value = "single-linkage")]
    clustering: String,
    #[arg(long, default_value_t = 0.5)]
    eps: f64,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value_t = 5)]
    min_pts: usize,
    #[command(flatten)]
    output: Output,
}

#[derive(Debug, Args)]
struct ServeArgs {
    #[arg(long)]
    datasets: PathBuf,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value_t = 8080)]
    port: u16,
}

/// An error tagged with the pipeline stage it came from.
#[derive(Debug)]
pub struct Failure {
    pub stage: &'static str,
    pub error: Error,
}

trait Stage<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure>;
}

impl<T> Stage<T> for Result<T> {
    fn stage(self, stage: &'static str) -> std::result::Result<T, Failure> {
        self.map_err(|error| Failure { stage, error })
    }
}

type Run = std::result::Result<(), Failure>;

/// Worker threads requested through `TDAKIT_THREADS`, if set.
pub fn thread_limit() -> Result<Option<usize>> {
    match std::env::var("TDAKIT_THREADS") {
        Err(_) => Ok(None),
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => Err(Error::param("TDAKIT_THREADS", format!("expected a positive integer, got `{v}`"))),
        },
    }
}

/// Parses arguments, runs the subcommand and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(stderr, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    let _ = env_logger::Builder::new().filter_level(level).try_init();
    if let Some(seed) = cli.seed {
        log::info!("seed {seed} (all methods are deterministic)");
    }
    let result = thread_limit().stage("environment").and_then(|threads| {
        if let Some(n) = threads {
            // a pool may already exist when called repeatedly in one process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        dispatch(cli.command, threads, stdout)
    });
    match result {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(stderr, "tdakit: {} failed: {}", f.stage, f.error);
            if f.error.is_validation() {
                2
            } else {
                1
            }
        }
    }
}

fn parse_list(s: &str, field: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            x.trim()
                .parse::<f64>()
                .map_err(|_| Error::param(field, format!("`{x}` is not a number")))
        })
        .collect()
}

fn parse_order(s: &str) -> Result<f64> {
    match s {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        _ => s.parse().map_err(|_| Error::param("p", format!("`{s}` is not a number or `inf`"))),
    }
}

fn emit(output: &Output, text: &str, stdout: &mut dyn Write) -> Run {
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(Error::from).stage("write"),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from).stage("write"),
    }
}

fn source_name(path: &Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn diagrams_to(ds: &Dataset, spec: FiltrationSpec, input: &Path, output: &Output, stdout: &mut dyn Write) -> Run {
    let file = diagram_file(ds, &spec, &source_name(input)).stage("filtration")?;
    emit(output, &(file.to_json().stage("write")? + "\n"), stdout)
}

fn node_function(name: &str) -> Result<NodeFunction> {
    serde_json::from_value(json!(name)).map_err(|_| Error::param("function", format!("unknown node function `{name}`")))
}

fn load_graph_with_values(input: &Path, sidecar: Option<&Path>) -> Result<crate::graph::Graph> {
    let loaded = load_graph(input)?;
    match sidecar {
        Some(p) => {
            let values = load_node_values(p, &loaded)?;
            loaded.graph.with_node_values(values)
        }
        None => Ok(loaded.graph),
    }
}

fn dispatch(command: Command, threads: Option<usize>, stdout: &mut dyn Write) -> Run {
    match command {
        Command::Rips(a) => {
            let metric = a.metric.parse().stage("parameters")?;
            let ds = Dataset::PointCloud(load_pointcloud(&a.input).stage("load")?);
            let spec = FiltrationSpec::Rips { max_scale: a.max_scale, max_dim: a.max_dim, metric };
            diagrams_to(&ds, spec, &a.input, &a.output, stdout)
        }
        Command::Cech(a) => {
            let ds = Dataset::PointCloud(load_pointcloud(&a.input).stage("load")?);
            let spec = FiltrationSpec::Cech { max_scale: a.max_scale, max_dim: a.max_dim };
            diagrams_to(&ds, spec, &a.input, &a.output, stdout)
        }
        Command::Cubical(a) => {
            let img = load_pgm(&a.input).stage("load")?;
            let mut thresholds = match (&a.thresholds, a.levels, a.raw) {
                (Some(t), _, _) => Some(parse_list(t, "thresholds").stage("parameters")?),
                (None, Some(n), _) => {
                    if n < 1 {
                        return Err(Error::param("levels", "must be at least 1")).stage("parameters");
                    }
                    Some(linspace(0.0, 255.0, n.max(2)))
                }
                (None, None, true) => Some(raw_thresholds(&img)),
                _ => None,
            };
            if a.superlevel && a.thresholds.is_none() {
                if let Some(t) = &mut thresholds {
                    t.reverse();
                }
            }
            let spec = FiltrationSpec::Cubical { thresholds, superlevel: a.superlevel, max_dim: a.max_dim };
            diagrams_to(&Dataset::Image(img), spec, &a.input, &a.output, stdout)
        }
        Command::GraphFilt(a) => {
            let g = load_graph_with_values(&a.input, a.node_values.as_deref()).stage("load")?;
            let thresholds = a.thresholds.as_deref().map(|t| parse_list(t, "thresholds")).transpose().stage("parameters")?;
            let spec = if a.function == "edge" {
                FiltrationSpec::GraphEdge { thresholds, clique_dim: a.clique_dim, max_dim: a.max_dim }
            } else {
                let reduce = match a.reduce.as_str() {
                    "none" => Reduction::None,
                    "coral" => Reduction::Coral { k: a.k },
                    "prune" => Reduction::Prune,
                    r => return Err(Error::param("reduce", format!("unknown reduction `{r}`"))).stage("parameters"),
                };
                FiltrationSpec::GraphNode {
                    function: node_function(&a.function).stage("parameters")?,
                    thresholds,
                    superlevel: a.superlevel,
                    clique_dim: a.clique_dim,
                    max_dim: a.max_dim,
                    reduce,
                }
            };
            diagrams_to(&Dataset::Graph(g), spec, &a.input, &a.output, stdout)
        }
        Command::Power(a) => {
            let g = load_graph(&a.input).stage("load")?.graph;
            let spec = match a.weighted_scale {
                Some(s) => FiltrationSpec::WeightedPower { max_scale: s, max_dim: a.max_dim },
                None => FiltrationSpec::Power { max_hops: a.max_hops, max_dim: a.max_dim },
            };
            diagrams_to(&Dataset::Graph(g), spec, &a.input, &Output { out: a.output.out }, stdout)
        }
        Command::DiagramDist(a) => diagram_dist(a, stdout),
        Command::Vectorize(a) => vectorize(a, stdout),
        Command::Multipers(a) => multipers(a, stdout),
        Command::Mapper(a) => mapper(a, stdout),
        Command::Serve(a) => {
            let datasets = load_dataset_dir(&a.datasets).stage("load")?;
            let addr: std::net::SocketAddr = format!("{}:{}", a.host, a.port)
                .parse()
                .map_err(|e| Error::param("host", format!("{e}")))
                .stage("parameters")?;
            let mut rt = tokio::runtime::Builder::new_multi_thread();
            if let Some(n) = threads {
                rt.worker_threads(n).max_blocking_threads(n);
            }
            let rt = rt.enable_all().build().map_err(Error::from).stage("serve")?;
            rt.block_on(crate::serve::serve(addr, datasets)).map_err(Error::from).stage("serve")
        }
    }
}

fn diagram_dist(a: DistArgs, stdout: &mut dyn Write) -> Run {
    let p = parse_order(&a.p).stage("parameters")?;
    let fa = DiagramFile::load(&a.a).stage("load")?;
    let fb = DiagramFile::load(&a.b).stage("load")?;
    let dims: Vec<usize> = match a.dim {
        Some(d) => vec![d],
        None => {
            let mut d: Vec<usize> = fa.dims.iter().chain(&fb.dims).map(|e| e.dim).collect();
            d.sort_unstable();
            d.dedup();
            d
        }
    };
    let mut text = String::new();
    for d in dims {
        let (x, y) = (fa.diagram(d).stage("load")?, fb.diagram(d).stage("load")?);
        let v = if a.pwgk {
            pwgk(&x, &y, a.sigma, a.weight_power)
        } else {
            wasserstein_distance(&x, &y, p)
        }
        .stage("distance")?;
        text.push_str(&fmt_sig(v));
        text.push('\n');
    }
    stdout.write_all(text.as_bytes()).map_err(Error::from).stage("write")
}

fn vectorize(a: VectorizeArgs, stdout: &mut dyn Write) -> Run {
    let files = a.pd.iter().map(DiagramFile::load).collect::<Result<Vec<_>>>().stage("load")?;
    let batch = files.iter().map(DiagramFile::diagrams).collect::<Result<Vec<_>>>().stage("load")?;
    let all: Vec<_> = batch.iter().flatten().cloned().collect();
    let grid = match (a.t_min, a.t_max) {
        (Some(lo), Some(hi)) => crate::vectorize::uniform_grid(lo, hi, a.samples),
        _ => default_grid(&all, a.samples),
    }
    .stage("parameters")?;
    let method = match a.method.as_str() {
        "betti" => Vectorization::BettiCurve,
        "landscape" => Vectorization::Landscape { level: a.level },
        "silhouette" => Vectorization::Silhouette { p: a.p },
        "curve" => Vectorization::PersistenceCurve {
            psi: a.psi.parse::<Psi>().stage("parameters")?,
            statistic: a.stat.parse::<Statistic>().stage("parameters")?,
        },
        "image" => {
            let (k, l) = a
                .resolution
                .split_once('x')
                .and_then(|(k, l)| Some((k.parse().ok()?, l.parse().ok()?)))
                .ok_or_else(|| Error::param("resolution", "expected KxL"))
                .stage("parameters")?;
            Vectorization::PersistenceImage {
                resolution: (k, l),
                bounds: ImageBounds::covering(&all, 3.0 * a.sigma),
                sigma: a.sigma,
                weight_power: a.weight_power,
            }
        }
        m => return Err(Error::param("method", format!("unknown method `{m}`"))).stage("parameters"),
    };
    let vectors = method.apply_batch(&batch, &grid).stage("vectorize")?;
    let text = if a.json {
        serde_json::to_string_pretty(&vectors).map_err(Error::from).stage("write")? + "\n"
    } else {
        vectors.iter().map(|v| csv_row(&v.values) + "\n").collect()
    };
    emit(&a.output, &text, stdout)
}

fn distinct_sorted(values: &[f64]) -> Vec<f64> {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

fn list_or(s: &Option<String>, field: &str, default: impl FnOnce() -> Vec<f64>) -> Result<Vec<f64>> {
    match s {
        Some(s) => parse_list(s, field),
        None => Ok(default()),
    }
}

fn multipers(a: MultipersArgs, stdout: &mut dyn Write) -> Run {
    let bf: Bifiltration = match a.kind.as_str() {
        "graph" | "graph-edge" => {
            let g = load_graph_with_values(&a.input, a.node_values.as_deref()).stage("load")?;
            let f = crate::graph::node_filtration_values(&g, node_function(&a.f).stage("parameters")?).stage("filtration")?;
            let alphas = list_or(&a.alphas, "alphas", || distinct_sorted(&f)).stage("parameters")?;
            if a.kind == "graph" {
                let h = crate::graph::node_filtration_values(&g, node_function(&a.h).stage("parameters")?)
                    .stage("filtration")?;
                let betas = list_or(&a.betas, "betas", || distinct_sorted(&h)).stage("parameters")?;
                graph_bifiltration(&g, &f, &h, &alphas, &betas, a.clique_dim)
            } else {
                let w: Vec<f64> = g.edge_weights().map(|w| w.values().copied().collect()).unwrap_or_default();
                let betas = list_or(&a.betas, "betas", || distinct_sorted(&w)).stage("parameters")?;
                graph_edge_bifiltration(&g, &f, &alphas, &betas, a.clique_dim)
            }
        }
        "image" => {
            let img_a = load_pgm(&a.input).stage("load")?;
            let path_b = a
                .input_b
                .as_ref()
                .ok_or_else(|| Error::param("input_b", "image bifiltrations need a second channel"))
                .stage("parameters")?;
            let img_b: GrayImage = load_pgm(path_b).stage("load")?;
            let alphas = list_or(&a.alphas, "alphas", crate::image::default_thresholds).stage("parameters")?;
            let betas = list_or(&a.betas, "betas", crate::image::default_thresholds).stage("parameters")?;
            image_bifiltration(&img_a, &img_b, &alphas, &betas)
        }
        "density-rips" => {
            let pc = load_pointcloud(&a.input).stage("load")?;
            let dens = a
                .density_thresholds
                .as_ref()
                .ok_or_else(|| Error::param("density_thresholds", "required for density-rips"))
                .and_then(|s| parse_list(s, "density_thresholds"))
                .stage("parameters")?;
            let scales = a
                .scales
                .as_ref()
                .ok_or_else(|| Error::param("scales", "required for density-rips"))
                .and_then(|s| parse_list(s, "scales"))
                .stage("parameters")?;
            density_rips_bifiltration(&pc, a.density_radius, &dens, &scales, a.dim + 1)
        }
        k => Err(Error::param("kind", format!("unknown bifiltration kind `{k}`"))),
    }
    .stage("filtration")?;

    let axis = if a.vertical { Axis::Vertical } else { Axis::Horizontal };
    let (rows, json): (Vec<Vec<f64>>, serde_json::Value) = match a.slices.as_deref() {
        None => {
            let t = bigraded_betti(&bf, a.dim).stage("homology")?;
            let rows = t.values.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
            let json = json!({
                "dim": t.dim,
                "rows": bf.row_thresholds(),
                "cols": bf.col_thresholds(),
                "betti": t.values,
            });
            (rows, json)
        }
        Some(kind) => {
            let v = match kind {
                "betti" => SliceVectorizer::Betti,
                "silhouette" => SliceVectorizer::Silhouette { p: a.p },
                "landscape" => SliceVectorizer::Landscape { level: a.level },
                k => return Err(Error::param("slices", format!("unknown slice vectorizer `{k}`"))).stage("parameters"),
            };
            let m = slice_vectorize(&bf, a.dim, v, axis).stage("vectorize")?;
            let json = serde_json::to_value(&m).map_err(Error::from).stage("write")?;
            (m.values, json)
        }
    };
    let text = if a.csv {
        rows.iter().map(|r| csv_row(r) + "\n").collect()
    } else {
        serde_json::to_string_pretty(&json).map_err(Error::from).stage("write")? + "\n"
    };
    emit(&a.output, &text, stdout)
}

fn mapper(a: MapperArgs, stdout: &mut dyn Write) -> Run {
    let ds = Dataset::load(&a.input).stage("load")?;
    let lens = match (&ds, a.lens.as_str()) {
        (Dataset::PointCloud(_), "coordinate") => serde_json::to_value(Lens::Coordinate { axis: a.axis }),
        (Dataset::PointCloud(_), "density") => serde_json::to_value(Lens::Density { radius: a.radius }),
        (Dataset::PointCloud(_), "pca") => serde_json::to_value(Lens::Pca { component: a.component }),
        (Dataset::Image(_), "coordinate") => Ok(json!({ "kind": "intensity" })),
        (Dataset::Graph(_), "coordinate") => Ok(json!({ "kind": "degree" })),
        (_, kind) => Ok(json!({ "kind": kind })),
    }
    .map_err(Error::from)
    .stage("parameters")?;
    let clustering = match a.clustering.as_str() {
        "single-linkage" | "single_linkage" => Clustering::SingleLinkage { eps: a.eps },
        "kmeans" => Clustering::KMeans { k: a.k },
        "dbscan" => Clustering::Dbscan { eps: a.eps, min_pts: a.min_pts },
        c => return Err(Error::param("clustering", format!("unknown clustering `{c}`"))).stage("parameters"),
    };
    let g = run_mapper(&ds, &lens, a.resolution, a.overlap, Some(&clustering)).stage("mapper")?;
    let text = serde_json::to_string_pretty(&g).map_err(Error::from).stage("write")? + "\n";
    emit(&a.output, &text, stdout)
}
