use std::fmt::Display;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use phtk::{GroundMetric, Radius};
use serde::{Serialize, Serializer};

fn as_string<T: Display, S: Serializer>(v: &T, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

#[derive(Debug, Parser)]
#[command(name = "phtk", version, about = "Vietoris-Rips persistence, diagram distances and topology optimization")]
#[command(args_override_self = true)]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Master seed; every random draw is derived from it.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Top simplex dimension; diagrams are written for dims below it.
    #[arg(long, global = true, default_value_t = 2)]
    pub max_dim: usize,
    /// Filtration cutoff, a positive length or `auto` (enclosing radius).
    #[arg(long, global = true, default_value = "auto")]
    #[serde(serialize_with = "as_string")]
    pub max_radius: Radius,
    #[arg(long, global = true, default_value = ".")]
    pub out_dir: PathBuf,
    /// Plain-text `key = value` file of flag defaults; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic point cloud.
    Gen(GenArgs),
    /// Turn an IDX image set (or synthetic images) into a point cloud.
    Ingest(IngestArgs),
    /// Persistence diagrams and lifetime statistics of a point cloud.
    Persist(PersistArgs),
    /// Distance between two diagram files.
    Distance(DistanceArgs),
    /// Lifetime statistics of diagram files.
    Lifetimes(LifetimesArgs),
    /// Gradient descent/ascent of a diagram functional on point coordinates.
    Optimize(OptimizeArgs),
    /// Centre versus corner crop lifetimes over Monte-Carlo repeats.
    Exp1(Exp1Args),
    /// Diagram distances between disjoint image samples per crop condition.
    Exp2(Exp2Args),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gen(_) => "gen",
            Command::Ingest(_) => "ingest",
            Command::Persist(_) => "persist",
            Command::Distance(_) => "distance",
            Command::Lifetimes(_) => "lifetimes",
            Command::Optimize(_) => "optimize",
            Command::Exp1(_) => "exp1",
            Command::Exp2(_) => "exp2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Circle,
    Blob,
    DiskHoles,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Generator {
    #[arg(long, value_enum)]
    pub shape: Option<Shape>,
    #[arg(long, default_value_t = 60)]
    pub n: usize,
    /// Circle radius.
    #[arg(long, default_value_t = 1.0)]
    pub radius: f64,
    /// Per-coordinate Gaussian jitter of circle points.
    #[arg(long, default_value_t = 0.0)]
    pub noise_sd: f64,
    /// Blob ambient dimension.
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    /// Blob standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sd: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GenArgs {
    #[command(flatten)]
    pub generator: Generator,
    #[arg(long, default_value = "cloud.csv")]
    pub output: String,
}

/// A cloud file, or a generator when `--shape` is given instead.
#[derive(Debug, Clone, Args, Serialize)]
pub struct Source {
    #[arg(long, conflicts_with = "shape")]
    pub input: Option<PathBuf>,
    #[command(flatten)]
    pub generator: Generator,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Region {
    Center,
    Corner,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ImageSource {
    /// IDX unsigned-byte image file; synthetic structured-centre images when absent.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    pub synthetic_count: usize,
    #[arg(long, default_value_t = 28)]
    pub synthetic_side: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IngestArgs {
    #[command(flatten)]
    pub images: ImageSource,
    #[arg(long, value_enum, default_value = "center")]
    pub region: Region,
    #[arg(long, default_value_t = 10)]
    pub crop_size: usize,
    #[arg(long, default_value_t = 200)]
    pub sample_n: usize,
    #[arg(long, default_value_t = 0.05)]
    pub noise_sd: f64,
    /// Permute every point's coordinates independently.
    #[arg(long)]
    pub shuffle: bool,
    #[arg(long, default_value = "cloud.csv")]
    pub output: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Histogram {
    #[arg(long, default_value_t = 20)]
    pub bins: usize,
    #[arg(long, default_value_t = 0.05)]
    pub bin_width: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PersistArgs {
    #[command(flatten)]
    pub source: Source,
    #[command(flatten)]
    pub histogram: Histogram,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Exact,
    Sinkhorn,
    Bottleneck,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Sinkhorn => "sinkhorn",
            Method::Bottleneck => "bottleneck",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Transport {
    /// Ground metric between diagram points: `linf` or `l2`.
    #[arg(long, default_value = "linf")]
    #[serde(serialize_with = "as_string")]
    pub ground: GroundMetric,
    /// Replace essential deaths by this value instead of rejecting them.
    #[arg(long)]
    pub essential_cap: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DistanceArgs {
    pub a: PathBuf,
    pub b: PathBuf,
    #[arg(long, value_enum, default_value = "exact")]
    pub method: Method,
    #[command(flatten)]
    pub transport: Transport,
    /// Sinkhorn entropic regularization.
    #[arg(long, default_value_t = 0.01)]
    pub alpha: f64,
    #[arg(long, default_value_t = 100_000)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value = "distance.json")]
    pub output: String,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LifetimesArgs {
    #[arg(required = true)]
    pub diagrams: Vec<PathBuf>,
    #[command(flatten)]
    pub histogram: Histogram,
    #[arg(long, default_value = "lifetimes.csv")]
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FunctionalName {
    Total,
    Wasserstein,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DirectionArg {
    Min,
    Max,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct OptimizeArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, value_enum, default_value = "total")]
    pub functional: FunctionalName,
    #[arg(long, value_enum, default_value = "min")]
    pub direction: DirectionArg,
    /// Homology dimensions of the objective terms, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub dims: Vec<usize>,
    /// One weight per entry of `--dims`; all 1 when omitted.
    #[arg(long, value_delimiter = ',')]
    pub weights: Vec<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub p: f64,
    #[arg(long, default_value_t = 0.0)]
    pub q: f64,
    #[arg(long, default_value_t = 0)]
    pub i0: usize,
    /// Target diagram files for `wasserstein`, one per objective dim.
    #[arg(long)]
    pub target: Vec<PathBuf>,
    /// Use a Sinkhorn plan of this strength instead of the exact one.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value = "linf")]
    #[serde(serialize_with = "as_string")]
    pub ground: GroundMetric,
    #[arg(long, default_value_t = 0.01)]
    pub lr: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    #[arg(long, default_value_t = 10)]
    pub record_every: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Exp1Args {
    #[command(flatten)]
    pub images: ImageSource,
    /// Images per cloud.
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub crop_size: usize,
    #[arg(long, default_value_t = 0.05)]
    pub noise_sd: f64,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[command(flatten)]
    pub histogram: Histogram,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Exp2Args {
    #[command(flatten)]
    pub images: ImageSource,
    #[arg(long, default_value_t = 200)]
    pub n: usize,
    #[arg(long, default_value_t = 10)]
    pub crop_size: usize,
    #[arg(long, default_value_t = 0.05)]
    pub noise_sd: f64,
    #[arg(long, default_value_t = 5)]
    pub repeats: usize,
    #[command(flatten)]
    pub transport: Transport,
    /// Compare every sample with itself (same images, same noise).
    #[arg(long)]
    pub same_sample: bool,
}
