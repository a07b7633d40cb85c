//! Command-line front end.
//!
//! Each command writes a JSON run manifest next to its main output
//! (`<output>.run.json`, or `run.json` inside an output directory) holding the
//! arguments, every resolved parameter and the produced files. Manifests carry
//! no timestamps, and `graphsig run-manifest <file>` repeats the recorded run.
//!
//! Exit codes: 0 on success, 1 for usage and input-file errors, 2 when a
//! computation fails.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, DVector};
use serde_json::{json, Value};
use thiserror::Error;

use crate::filters::{design, filter_analysis, warped_translates, FilterBank, FilterDesign, FilterMethod};
use crate::graph::{self, CommunityParams, Graph, LaplacianKind, SbmParams};
use crate::io;
use crate::optimize::{self, BpdnProblem, OptimizeError, SolveOptions, SolverReport};
use crate::plot::{self, Colormap, PlotStyle};
use crate::pyramid::{self, PyramidError, PyramidParams};
use crate::spectral::DEFAULT_DENSE_CAP;

/// Environment variable overriding the size limit of dense eigendecompositions.
pub const DENSE_CAP_ENV: &str = "GRAPHSIG_DENSE_CAP";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Run(#[from] crate::Error),
}

macro_rules! from_module_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Run(e.into())
            }
        }
    )*};
}

from_module_error!(
    crate::graph::GraphError,
    crate::spectral::SpectralError,
    crate::filters::FilterError,
    PyramidError,
    OptimizeError,
    crate::plot::PlotError,
    io::IoError
);

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Run(crate::Error::Io(_)) => 1,
            CliError::Run(_) => 2,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "graphsig", version, about = "Signal processing on graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a graph and write its weights as Matrix Market
    Generate(GenerateArgs),
    /// Write a Laplacian and its eigenvalues
    Laplacian(LaplacianArgs),
    /// Export the eigenvalues and eigenvectors of a Laplacian
    Fourier(FourierArgs),
    /// Filter signals with a spectral filter bank
    Filter(FilterArgs),
    /// Kron-reduction pyramid analysis and synthesis
    #[command(subcommand)]
    Pyramid(PyramidCommand),
    /// Denoise a signal with a graph regularizer
    Denoise(DenoiseArgs),
    /// Draw a graph or a filter bank
    #[command(subcommand)]
    Plot(PlotCommand),
    /// Repeat the run recorded in a manifest
    RunManifest { manifest: PathBuf },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum GraphKind {
    Ring,
    Path,
    Comet,
    Grid2d,
    ErdosRenyi,
    Sbm,
    Community,
    Sensor,
    SwissRoll,
    TwoMoons,
}

#[derive(Args, Debug)]
struct GenerateArgs {
    #[arg(value_enum)]
    kind: GraphKind,
    /// Number of vertices
    #[arg(long, default_value_t = 16)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    rows: usize,
    #[arg(long, default_value_t = 4)]
    cols: usize,
    /// Edge probability for erdos-renyi
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    /// Nearest neighbours for sensor graphs
    #[arg(long, default_value_t = 6)]
    k: usize,
    /// Star degree for comet graphs (the tail takes the remaining vertices)
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Comma-separated block sizes for sbm
    #[arg(long, value_delimiter = ',')]
    blocks: Vec<usize>,
    #[arg(long, default_value_t = 0.5)]
    p_in: f64,
    #[arg(long)]
    p_out: Option<f64>,
    /// Number of communities (community graphs)
    #[arg(long)]
    communities: Option<usize>,
    /// Coordinate noise for swiss-roll
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct GraphInput {
    /// Graph weights in Matrix Market format
    graph: PathBuf,
    /// Laplacian definition (combinatorial, normalized, directed-combinatorial,
    /// degree-normalized, distribution-normalized)
    #[arg(long)]
    kind: Option<LaplacianKind>,
}

#[derive(Args, Debug)]
struct LaplacianArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Laplacian output (default `<graph>.laplacian.mtx`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Eigenvalue CSV (default `<graph>.eigenvalues.csv`, skipped for asymmetric Laplacians)
    #[arg(long)]
    eigenvalues: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct FourierArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    eigenvalues: Option<PathBuf>,
    /// Eigenvector matrix CSV, one eigenvector per column (default `<graph>.basis.csv`)
    #[arg(long)]
    basis: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum DesignKind {
    Heat,
    MexicanHat,
    Itersine,
    RegularHpLp,
    Gabor,
    Expwin,
    Identity,
    WarpedTranslates,
}

#[derive(Args, Debug, Clone)]
struct DesignArgs {
    #[arg(long, value_enum)]
    design: Option<DesignKind>,
    /// Heat diffusion time
    #[arg(long, default_value_t = 10.0)]
    tau: f64,
    /// Band-pass scales of the Mexican hat design
    #[arg(long, default_value_t = 4)]
    scales: usize,
    /// Number of kernels for itersine, gabor and warped-translates
    #[arg(long, default_value_t = 4)]
    m: usize,
    /// Sharpening iterations of the regular HP/LP pair
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Cutoff of expwin as a fraction of lmax
    #[arg(long, default_value_t = 0.5)]
    band: f64,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum MethodKind {
    Exact,
    Cheby,
}

#[derive(Args, Debug, Clone)]
struct MethodArgs {
    #[arg(long, value_enum, default_value = "cheby")]
    method: MethodKind,
    /// Chebyshev polynomial order
    #[arg(long, default_value_t = crate::filters::DEFAULT_CHEBYSHEV_ORDER)]
    order: usize,
}

impl MethodArgs {
    fn method(&self) -> FilterMethod {
        match self.method {
            MethodKind::Exact => FilterMethod::Exact,
            MethodKind::Cheby => FilterMethod::Chebyshev(self.order),
        }
    }
}

#[derive(Args, Debug)]
struct FilterArgs {
    #[command(flatten)]
    input: GraphInput,
    #[command(flatten)]
    design: DesignArgs,
    #[command(flatten)]
    method: MethodArgs,
    /// Signals, one column per signal
    #[arg(long)]
    signal: PathBuf,
    /// Filtered signals, kernel-major columns
    #[arg(long)]
    out: PathBuf,
    /// Also write the filter bank descriptor as JSON
    #[arg(long)]
    bank: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum PyramidCommand {
    /// Decompose a signal into coarse approximations and prediction errors
    Analyze(PyramidAnalyzeArgs),
    /// Rebuild a signal from a stored pyramid
    Synthesize(PyramidSynthesizeArgs),
}

#[derive(Args, Debug)]
struct PyramidAnalyzeArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, default_value_t = 2)]
    levels: usize,
    #[arg(long, default_value_t = PyramidParams::default().alpha)]
    alpha: f64,
    #[arg(long, default_value_t = PyramidParams::default().epsilon)]
    epsilon: f64,
    #[arg(long)]
    out_dir: PathBuf,
}

#[derive(Args, Debug)]
struct PyramidSynthesizeArgs {
    #[command(flatten)]
    input: GraphInput,
    /// Directory written by `pyramid analyze`
    #[arg(long)]
    dir: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Signal to compare against (default: the signal recorded by the analysis run)
    #[arg(long)]
    reference: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum SolverKind {
    Tv,
    Tik,
    Wavelet,
    Bpdn,
}

#[derive(Args, Debug)]
struct DenoiseArgs {
    #[command(flatten)]
    input: GraphInput,
    #[arg(long)]
    signal: PathBuf,
    #[arg(long, value_enum)]
    solver: SolverKind,
    /// Regularization weight for tv and tik
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    /// Soft threshold for wavelet
    #[arg(long, default_value_t = 0.1)]
    threshold: f64,
    /// l1 weight for bpdn
    #[arg(long, default_value_t = 0.1)]
    lambda: f64,
    /// Observation mask for bpdn: one value per vertex, nonzero means observed
    #[arg(long)]
    mask: Option<PathBuf>,
    #[command(flatten)]
    design: DesignArgs,
    #[command(flatten)]
    method: MethodArgs,
    #[arg(long, default_value_t = SolveOptions::default().max_iter)]
    max_iter: usize,
    #[arg(long, default_value_t = SolveOptions::default().tol)]
    tol: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq)]
enum PlotFormat {
    Svg,
    Dot,
}

#[derive(Args, Debug, Clone)]
struct StyleArgs {
    #[arg(long, default_value_t = 640.0)]
    width: f64,
    #[arg(long, default_value_t = 480.0)]
    height: f64,
    /// viridis or grayscale
    #[arg(long, default_value = "viridis")]
    colormap: String,
}

impl StyleArgs {
    fn style(&self, g: Option<&Graph>) -> Result<PlotStyle, CliError> {
        let colormap = Colormap::by_name(&self.colormap).ok_or_else(|| CliError::Usage(format!("unknown colormap '{}'", self.colormap)))?;
        let base = g.map(PlotStyle::for_graph).unwrap_or_default();
        Ok(PlotStyle { width: self.width, height: self.height, colormap, ..base })
    }

    fn manifest(&self) -> Value {
        json!({ "width": self.width, "height": self.height, "colormap": self.colormap })
    }
}

#[derive(Subcommand, Debug)]
enum PlotCommand {
    /// Graph drawing (SVG, optionally colored by a signal) or topology (DOT)
    Graph {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        signal: Option<PathBuf>,
        /// Output format (default: from the file extension)
        #[arg(long, value_enum)]
        format: Option<PlotFormat>,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Kernel responses and frame sum of a filter bank
    Filters {
        /// Graph whose spectrum bounds the plot
        #[arg(long)]
        graph: Option<PathBuf>,
        /// Spectrum bound, instead of a graph
        #[arg(long)]
        lmax: Option<f64>,
        #[command(flatten)]
        design: DesignArgs,
        #[arg(long, default_value_t = 500)]
        grid: usize,
        #[command(flatten)]
        style: StyleArgs,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let argv: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(cli.command, argv) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error[{}]: {e}", describe(&e));
            e.exit_code()
        }
    }
}

/// `Module::Variant` of the innermost error.
fn describe(e: &CliError) -> String {
    match e {
        CliError::Usage(_) => "CliError::Usage".into(),
        CliError::Run(inner) => inner.origin(),
    }
}

fn execute(command: Command, argv: Vec<String>) -> Result<(), CliError> {
    match command {
        Command::Generate(a) => generate(a, argv),
        Command::Laplacian(a) => laplacian(a, argv),
        Command::Fourier(a) => fourier(a, argv),
        Command::Filter(a) => filter(a, argv),
        Command::Pyramid(PyramidCommand::Analyze(a)) => pyramid_analyze(a, argv),
        Command::Pyramid(PyramidCommand::Synthesize(a)) => pyramid_synthesize(a, argv),
        Command::Denoise(a) => denoise(a, argv),
        Command::Plot(p) => plot_command(p, argv),
        Command::RunManifest { manifest } => rerun(&manifest),
    }
}

fn rerun(path: &Path) -> Result<(), CliError> {
    let text = io::read_to_string(path)?;
    let bad = |message: String| CliError::Run(io::IoError::Json { path: path.display().to_string(), message }.into());
    let value: Value = serde_json::from_str(&text).map_err(|e| bad(e.to_string()))?;
    let argv: Vec<String> = value
        .get("argv")
        .and_then(Value::as_array)
        .and_then(|a| a.iter().map(|v| v.as_str().map(String::from)).collect())
        .ok_or_else(|| bad("missing string array 'argv'".into()))?;
    if argv.first().map(String::as_str) == Some("run-manifest") {
        return Err(CliError::Usage("a manifest cannot re-run another manifest".into()));
    }
    let cli = Cli::try_parse_from(std::iter::once("graphsig".to_string()).chain(argv.iter().cloned()))
        .map_err(|e| CliError::Usage(format!("manifest arguments do not parse: {}", e.kind())))?;
    execute(cli.command, argv)
}

fn manifest_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".run.json");
    PathBuf::from(s)
}

fn display(paths: &[PathBuf]) -> Vec<String> {
    paths.iter().map(|p| p.display().to_string()).collect()
}

fn write_manifest(path: &Path, command: &str, argv: &[String], params: Value, outputs: &[PathBuf], results: Value) -> Result<(), CliError> {
    let doc = json!({
        "command": command,
        "argv": argv,
        "params": params,
        "outputs": display(outputs),
        "results": results,
    });
    io::write_string(path, &(serde_json::to_string_pretty(&doc).expect("manifest serializes") + "\n"))?;
    Ok(())
}

fn dense_cap() -> Result<usize, CliError> {
    match std::env::var(DENSE_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Usage(format!("{DENSE_CAP_ENV} must be a nonnegative integer, got '{v}'"))),
        Err(_) => Ok(DEFAULT_DENSE_CAP),
    }
}

fn sibling(graph: &Path, suffix: &str) -> PathBuf {
    graph.with_extension(suffix)
}

fn load_graph(input: &GraphInput) -> Result<Graph, CliError> {
    let g = io::read_graph(&input.graph)?;
    Ok(match input.kind {
        Some(kind) if kind != g.lap_kind() => g.with_laplacian(kind)?,
        _ => g,
    })
}

fn graph_params(input: &GraphInput, g: &Graph) -> Value {
    json!({
        "graph": input.graph.display().to_string(),
        "laplacian": g.lap_kind().name(),
        "directed": g.is_directed(),
        "n": g.n(),
    })
}

fn generate(a: GenerateArgs, argv: Vec<String>) -> Result<(), CliError> {
    let (g, params) = match a.kind {
        GraphKind::Ring => (graph::ring(a.n)?, json!({ "n": a.n })),
        GraphKind::Path => (graph::path(a.n)?, json!({ "n": a.n })),
        GraphKind::Comet => {
            let tail = a.n.checked_sub(a.degree + 1).ok_or_else(|| CliError::Usage(format!("comet with --degree {} needs --n > {}", a.degree, a.degree)))?;
            (graph::comet(tail, a.degree)?, json!({ "n": a.n, "degree": a.degree, "tail": tail }))
        }
        GraphKind::Grid2d => (graph::grid2d(a.rows, a.cols)?, json!({ "rows": a.rows, "cols": a.cols })),
        GraphKind::ErdosRenyi => (graph::erdos_renyi(a.n, a.p, a.seed)?, json!({ "n": a.n, "p": a.p, "seed": a.seed })),
        GraphKind::Sbm => {
            let blocks = if a.blocks.is_empty() { vec![a.n / 2, a.n - a.n / 2] } else { a.blocks.clone() };
            let p_out = a.p_out.unwrap_or(0.05);
            let params = SbmParams { n: a.n, block_sizes: blocks.clone(), p_in: a.p_in, p_out };
            (graph::sbm(&params, a.seed)?, json!({ "n": a.n, "blocks": blocks, "p_in": a.p_in, "p_out": p_out, "seed": a.seed }))
        }
        GraphKind::Community => {
            let params = CommunityParams { n: a.n, communities: a.communities, p_in: a.p_in, p_out: a.p_out };
            (
                graph::community(&params, a.seed)?,
                json!({ "n": a.n, "communities": a.communities, "p_in": a.p_in, "p_out": a.p_out, "seed": a.seed }),
            )
        }
        GraphKind::Sensor => (graph::sensor(a.n, a.k, a.seed)?, json!({ "n": a.n, "k": a.k, "seed": a.seed })),
        GraphKind::SwissRoll => (graph::swiss_roll(a.n, a.noise, a.seed)?, json!({ "n": a.n, "noise": a.noise, "seed": a.seed })),
        GraphKind::TwoMoons => (graph::two_moons(a.n, a.seed)?, json!({ "n": a.n, "seed": a.seed })),
    };
    let outputs = io::write_graph(&a.out, &g)?;
    let kind = GraphKind::to_possible_value(&a.kind).map(|v| v.get_name().to_string()).unwrap_or_default();
    let params = json!({ "kind": kind, "generator": params });
    let results = json!({ "n": g.n(), "edges": g.ne(), "connected": g.is_connected() });
    write_manifest(&manifest_path(&a.out), "generate", &argv, params, &outputs, results)
}

fn eigen_csv(e: &DVector<f64>) -> DMatrix<f64> {
    DMatrix::from_column_slice(e.len(), 1, e.as_slice())
}

fn laplacian(a: LaplacianArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let out = a.out.clone().unwrap_or_else(|| sibling(&a.input.graph, "laplacian.mtx"));
    let symmetric = crate::sparse::max_asymmetry(g.l()) <= 1e-12 * crate::sparse::max_abs(g.l()).max(1.0);
    io::write_matrix_market(&out, g.l(), symmetric)?;
    let mut outputs = vec![out.clone()];
    let cap = dense_cap()?;
    let mut results = json!({ "symmetric": symmetric, "nnz": g.l().nnz() });
    if symmetric || a.eigenvalues.is_some() {
        let s = g.compute_fourier_basis_capped(cap)?;
        let path = a.eigenvalues.clone().unwrap_or_else(|| sibling(&a.input.graph, "eigenvalues.csv"));
        io::write_csv_matrix(&path, &eigen_csv(&s.e))?;
        outputs.push(path);
        results["lmax"] = json!(s.lmax);
    }
    let params = json!({ "input": graph_params(&a.input, &g), "dense_cap": cap });
    write_manifest(&manifest_path(&out), "laplacian", &argv, params, &outputs, results)
}

fn fourier(a: FourierArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let cap = dense_cap()?;
    let s = g.compute_fourier_basis_capped(cap)?;
    let epath = a.eigenvalues.clone().unwrap_or_else(|| sibling(&a.input.graph, "eigenvalues.csv"));
    let upath = a.basis.clone().unwrap_or_else(|| sibling(&a.input.graph, "basis.csv"));
    io::write_csv_matrix(&epath, &eigen_csv(&s.e))?;
    io::write_csv_matrix(&upath, &s.u)?;
    let params = json!({ "input": graph_params(&a.input, &g), "dense_cap": cap });
    let results = json!({ "lmax": s.lmax, "coherence": s.mu });
    write_manifest(&manifest_path(&upath), "fourier", &argv, params, &[epath, upath.clone()], results)
}

/// Makes sure the spectral quantity `method` needs is present and returns the spectrum bound.
fn prepare(g: &Graph, method: FilterMethod, needs_basis: bool) -> Result<f64, CliError> {
    if needs_basis || method == FilterMethod::Exact {
        g.compute_fourier_basis_capped(dense_cap()?)?;
    } else {
        g.estimate_lmax();
    }
    Ok(g.require_lmax()?)
}

fn resolve_design(d: &DesignArgs, fallback: DesignKind) -> DesignKind {
    d.design.unwrap_or(fallback)
}

fn build_bank(d: &DesignArgs, kind: DesignKind, g: Option<&Graph>, lmax: f64) -> Result<FilterBank, CliError> {
    let spec = match kind {
        DesignKind::Heat => FilterDesign::Heat { tau: d.tau },
        DesignKind::MexicanHat => FilterDesign::MexicanHat { scales: d.scales },
        DesignKind::Itersine => FilterDesign::Itersine { m: d.m },
        DesignKind::RegularHpLp => FilterDesign::RegularHpLp { d: d.d },
        DesignKind::Gabor => FilterDesign::Gabor { m: d.m },
        DesignKind::Expwin => FilterDesign::Expwin { band: d.band },
        DesignKind::Identity => FilterDesign::Identity,
        DesignKind::WarpedTranslates => {
            let g = g.ok_or_else(|| CliError::Usage("warped-translates needs a graph".into()))?;
            return Ok(warped_translates(g, d.m)?);
        }
    };
    Ok(design(&spec, lmax)?)
}

fn bank_params(fb: &FilterBank) -> Value {
    fb.to_json().ok().and_then(|s| serde_json::from_str(&s).ok()).unwrap_or(Value::Null)
}

fn method_params(m: &MethodArgs) -> Value {
    match m.method() {
        FilterMethod::Exact => json!({ "method": "exact" }),
        FilterMethod::Chebyshev(k) => json!({ "method": "cheby", "order": k }),
    }
}

fn filter(a: FilterArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let f = io::read_csv_matrix(&a.signal)?;
    let kind = resolve_design(&a.design, DesignKind::Heat);
    let method = a.method.method();
    let lmax = prepare(&g, method, kind == DesignKind::WarpedTranslates)?;
    let fb = build_bank(&a.design, kind, Some(&g), lmax)?;
    let out = filter_analysis(&g, &fb, &f, method)?;
    io::write_csv_matrix(&a.out, &out)?;
    let mut outputs = vec![a.out.clone()];
    if let Some(path) = &a.bank {
        io::write_string(path, &fb.to_json()?)?;
        outputs.push(path.clone());
    }
    let params = json!({
        "input": graph_params(&a.input, &g),
        "signal": a.signal.display().to_string(),
        "bank": bank_params(&fb),
        "filtering": method_params(&a.method),
    });
    let results = json!({ "kernels": fb.len(), "signals": f.ncols(), "lmax": lmax });
    write_manifest(&manifest_path(&a.out), "filter", &argv, params, &outputs, results)
}

fn pyramid_analyze(a: PyramidAnalyzeArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let f = io::read_csv_vector(&a.signal)?;
    let params = PyramidParams { alpha: a.alpha, epsilon: a.epsilon };
    let mr = pyramid::graph_multiresolution(&g, a.levels, params)?;
    let pyr = pyramid::pyramid_analysis(&mr, &f)?;
    let outputs = io::write_pyramid(&a.out_dir, &mr, &pyr)?;
    let manifest = json!({
        "input": graph_params(&a.input, &g),
        "signal": a.signal.display().to_string(),
        "levels": a.levels,
        "pyramid": params,
    });
    let results = json!({ "sizes": mr.sizes() });
    write_manifest(&a.out_dir.join("run.json"), "pyramid analyze", &argv, manifest, &outputs, results)
}

fn recorded_signal(dir: &Path) -> Result<PathBuf, CliError> {
    let path = dir.join("run.json");
    let value: Value = serde_json::from_str(&io::read_to_string(&path)?)
        .map_err(|e| CliError::Run(io::IoError::Json { path: path.display().to_string(), message: e.to_string() }.into()))?;
    value["params"]["signal"]
        .as_str()
        .map(PathBuf::from)
        .ok_or_else(|| CliError::Usage(format!("{} records no signal; pass --reference", path.display())))
}

fn pyramid_synthesize(a: PyramidSynthesizeArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let (manifest, pyr) = io::read_pyramid(&a.dir)?;
    let mr = pyramid::graph_multiresolution(&g, manifest.kept.len(), manifest.params)?;
    if io::PyramidManifest::of(&mr) != manifest {
        return Err(PyramidError::LevelMismatch(format!("{} was built from a different graph or parameters", a.dir.display())).into());
    }
    let f = pyramid::pyramid_synthesis(&mr, &pyr)?;
    io::write_csv_vector(&a.out, &f)?;
    let reference = match &a.reference {
        Some(p) => Some(p.clone()),
        None => recorded_signal(&a.dir).ok(),
    };
    let mut results = json!({ "n": f.len() });
    if let Some(path) = &reference {
        let r = io::read_csv_vector(path)?;
        if r.len() != f.len() {
            return Err(PyramidError::ShapeMismatch { expected: f.len(), got: r.len() }.into());
        }
        results["reference"] = json!(path.display().to_string());
        results["max_abs_diff"] = json!((&f - r).amax());
    }
    let params = json!({ "input": graph_params(&a.input, &g), "dir": a.dir.display().to_string(), "pyramid": manifest.params });
    write_manifest(&manifest_path(&a.out), "pyramid synthesize", &argv, params, &[a.out.clone()], results)
}

fn read_mask(path: &Path) -> Result<Vec<bool>, CliError> {
    Ok(io::read_csv_vector(path)?.iter().map(|&v| v != 0.0).collect())
}

fn denoise(a: DenoiseArgs, argv: Vec<String>) -> Result<(), CliError> {
    let g = load_graph(&a.input)?;
    let y = io::read_csv_vector(&a.signal)?;
    let opts = SolveOptions { max_iter: a.max_iter, tol: a.tol };
    let method = a.method.method();
    let mut params = json!({
        "input": graph_params(&a.input, &g),
        "signal": a.signal.display().to_string(),
        "solver": SolverKind::to_possible_value(&a.solver).map(|v| v.get_name().to_string()),
    });
    let outcome: Result<(DVector<f64>, SolverReport), OptimizeError> = match a.solver {
        SolverKind::Tv => {
            params["gamma"] = json!(a.gamma);
            params["options"] = json!(opts);
            optimize::prox_tv(&g, &y, a.gamma, opts)
        }
        SolverKind::Tik => {
            params["gamma"] = json!(a.gamma);
            optimize::tik_denoise(&g, &y, a.gamma)
        }
        SolverKind::Wavelet | SolverKind::Bpdn => {
            let kind = resolve_design(&a.design, DesignKind::Itersine);
            let lmax = prepare(&g, method, kind == DesignKind::WarpedTranslates)?;
            let fb = build_bank(&a.design, kind, Some(&g), lmax)?;
            params["bank"] = bank_params(&fb);
            params["filtering"] = method_params(&a.method);
            if a.solver == SolverKind::Wavelet {
                params["threshold"] = json!(a.threshold);
                optimize::wavelet_denoise(&g, &fb, &y, a.threshold, method)
            } else {
                let mask = a.mask.as_deref().map(read_mask).transpose()?;
                params["lambda"] = json!(a.lambda);
                params["mask"] = json!(a.mask.as_ref().map(|p| p.display().to_string()));
                params["options"] = json!(opts);
                let problem = BpdnProblem { lambda: a.lambda, mask, method, opts };
                optimize::solve_bpdn(&g, &fb, &y, &problem).and_then(|(c, report)| {
                    let blocks = DMatrix::from_column_slice(g.n(), fb.len(), c.as_slice());
                    let x = crate::filters::filter_synthesis(&g, &fb, &blocks, method)?;
                    Ok((x.column(0).into_owned(), report))
                })
            }
        }
    };
    let (x, report, failure) = match outcome {
        Ok((x, r)) => (x, r, None),
        Err(e) => match e.best() {
            Some((x, r)) => (x.clone(), r.clone(), Some(e)),
            None => return Err(e.into()),
        },
    };
    io::write_csv_vector(&a.out, &x)?;
    let results = serde_json::to_value(&report).expect("report serializes");
    write_manifest(&manifest_path(&a.out), "denoise", &argv, params, &[a.out.clone()], results)?;
    match failure {
        Some(e) => Err(e.into()),
        None => Ok(()),
    }
}

fn plot_command(p: PlotCommand, argv: Vec<String>) -> Result<(), CliError> {
    match p {
        PlotCommand::Graph { input, signal, format, style, out } => {
            let g = load_graph(&input)?;
            let format = format.unwrap_or(if out.extension().is_some_and(|e| e == "dot") { PlotFormat::Dot } else { PlotFormat::Svg });
            let text = match format {
                PlotFormat::Dot => plot::export_graph_dot(&g),
                PlotFormat::Svg => {
                    let s = signal.as_deref().map(io::read_csv_vector).transpose()?;
                    plot::export_graph_svg(&g, s.as_ref(), &style.style(Some(&g))?)?
                }
            };
            io::write_string(&out, &text)?;
            let params = json!({
                "input": graph_params(&input, &g),
                "signal": signal.as_ref().map(|p| p.display().to_string()),
                "format": PlotFormat::to_possible_value(&format).map(|v| v.get_name().to_string()),
                "style": style.manifest(),
            });
            write_manifest(&manifest_path(&out), "plot graph", &argv, params, &[out.clone()], json!({ "bytes": text.len() }))
        }
        PlotCommand::Filters { graph, lmax, design: d, grid, style, out } => {
            let kind = resolve_design(&d, DesignKind::Itersine);
            let g = graph.as_deref().map(io::read_graph).transpose()?;
            let bound = match (lmax, &g) {
                (Some(v), _) => v,
                (None, Some(g)) => prepare(g, FilterMethod::default(), kind == DesignKind::WarpedTranslates)?,
                (None, None) => return Err(CliError::Usage("plot filters needs --graph or --lmax".into())),
            };
            if kind == DesignKind::WarpedTranslates {
                if let Some(g) = &g {
                    g.compute_fourier_basis_capped(dense_cap()?)?;
                }
            }
            if grid < 2 {
                return Err(CliError::Usage(format!("--grid must be at least 2, got {grid}")));
            }
            let fb = build_bank(&d, kind, g.as_ref(), bound)?;
            let text = plot::export_filter_svg(&fb, bound, grid, &style.style(None)?)?;
            io::write_string(&out, &text)?;
            let params = json!({
                "graph": graph.as_ref().map(|p| p.display().to_string()),
                "lmax": bound,
                "bank": bank_params(&fb),
                "grid": grid,
                "style": style.manifest(),
            });
            write_manifest(&manifest_path(&out), "plot filters", &argv, params, &[out.clone()], json!({ "kernels": fb.len() }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_subcommand() {
        for args in [
            vec!["graphsig", "generate", "ring", "--n", "8", "--out", "r.mtx"],
            vec!["graphsig", "laplacian", "r.mtx", "--kind", "normalized"],
            vec!["graphsig", "fourier", "r.mtx"],
            vec!["graphsig", "filter", "r.mtx", "--design", "itersine", "--method", "exact", "--signal", "s.csv", "--out", "o.csv"],
            vec!["graphsig", "pyramid", "analyze", "r.mtx", "--signal", "s.csv", "--out-dir", "p"],
            vec!["graphsig", "pyramid", "synthesize", "r.mtx", "--dir", "p", "--out", "o.csv"],
            vec!["graphsig", "denoise", "r.mtx", "--signal", "s.csv", "--solver", "tv", "--out", "o.csv"],
            vec!["graphsig", "plot", "graph", "r.mtx", "--out", "g.svg"],
            vec!["graphsig", "plot", "filters", "--lmax", "4", "--design", "mexican-hat", "--out", "f.svg"],
            vec!["graphsig", "run-manifest", "m.json"],
        ] {
            assert!(Cli::try_parse_from(&args).is_ok(), "{args:?}");
        }
    }

    #[test]
    fn usage_errors_exit_one() {
        assert_eq!(run(["graphsig", "generate"]), 1);
        assert_eq!(run(["graphsig", "laplacian", "x.mtx", "--kind", "bogus"]), 1);
        assert_eq!(run(["graphsig", "nonsense"]), 1);
    }

    #[test]
    fn manifest_path_appends() {
        assert_eq!(manifest_path(Path::new("a/b.csv")), PathBuf::from("a/b.csv.run.json"));
    }
}
