use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "harnack", version, about = "Li-Yau type estimates on model spaces, certified against exact heat kernels")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Human,
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    #[arg(long, value_enum, default_value_t = Format::Human)]
    pub format: Format,
    /// Write the data stream here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print one bound value.
    BoundsEval(BoundsEval),
    /// Right-hand sides of every gradient estimate along a t range.
    BoundsTable(BoundsTable),
    /// The heat kernel jet of a model space at distance d and time t.
    KernelEval(KernelEval),
    /// Run a certification sweep and print its report.
    Verify(Verify),
    /// Trace an entropy functional along a t range.
    Entropy(Entropy),
    /// Per-node slack of every comparable estimate.
    Compare(Compare),
}

#[derive(Debug, Args)]
pub struct BoundsEval {
    /// main-alpha, main-phi, linear-alpha, linear-phi, lower-main,
    /// lower-linear, harnack-main, harnack-linear, weight, or an estimate
    /// tag (main, linear, li-yau[:a], davies[:a], yau, bakry-qian,
    /// hamilton-exp, hamilton-log, perelman, ni) for its right-hand side
    /// on the Euclidean kernel at (d, t).
    #[arg(long)]
    pub estimate: String,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    /// Later time for harnack-main / harnack-linear (t is the earlier one).
    #[arg(long)]
    pub t2: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Sup bound for hamilton-log.
    #[arg(long = "A")]
    pub a: Option<f64>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct BoundsTable {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// a:b:m, m geometrically spaced times from a to b.
    #[arg(long)]
    pub t_range: String,
    /// Distance at which the Euclidean jet feeds the gradient-dependent sides.
    #[arg(long, default_value_t = 0.0)]
    pub d: f64,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    /// f = ln u
    Lnu,
    /// u = e^(-f) / (4 pi t)^(n/2)
    MinusLn,
}

#[derive(Debug, Args)]
pub struct KernelEval {
    /// euclid:N, hN[:K], circle[:L], torus:L1,L2,...
    #[arg(long)]
    pub space: String,
    #[arg(long)]
    pub d: f64,
    #[arg(long)]
    pub t: f64,
    #[arg(long, value_enum, default_value_t = ConventionArg::Lnu)]
    pub convention: ConventionArg,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Gradient,
    Perelman,
    Harnack,
    Lyh,
    KernelBounds,
    Residuals,
    Monotone,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(long)]
    pub space: String,
    /// Ricci bound; the space's sharp value by default.
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// uniform:a:b:n, geometric:a:b:n or explicit:x1,x2,...
    #[arg(long)]
    pub r_grid: Option<String>,
    #[arg(long)]
    pub t_grid: Option<String>,
    /// kernel or cosine:a (periodic spaces).
    #[arg(long, default_value = "kernel")]
    pub solution: String,
    /// Evaluate on one thread.
    #[arg(long)]
    pub sequential: bool,
    /// Worst samples kept in human and JSON output.
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct Verify {
    #[arg(long, value_enum)]
    pub check: CheckArg,
    #[command(flatten)]
    pub sweep: SweepArgs,
    /// Estimate tag, required by --check gradient.
    #[arg(long)]
    pub estimate: Option<String>,
    #[arg(long)]
    pub pairs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub fd_tol: Option<f64>,
    /// path-length, closed-form or literal.
    #[arg(long)]
    pub s_branch: Option<String>,
    /// Multiplier on the sup bound used by hamilton-log.
    #[arg(long)]
    pub hamilton_a_scale: Option<f64>,
    /// Halve k (or the hamilton-log sup bound); the report is expected to fail.
    #[arg(long)]
    pub negative_control: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Entropy {
    /// wp, wly-linear, wly-sinh or nash.
    #[arg(long)]
    pub functional: String,
    #[arg(long)]
    pub space: String,
    /// a:b:m, m geometrically spaced times from a to b.
    #[arg(long)]
    pub t_range: String,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value = "kernel")]
    pub solution: String,
    #[arg(long)]
    pub sequential: bool,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Compare {
    #[command(flatten)]
    pub sweep: SweepArgs,
    #[command(flatten)]
    pub output: Output,
}
