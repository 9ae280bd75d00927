use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Sparse regularization paths by Linearized Bregman iteration.
#[derive(Debug, Clone, Parser, Serialize)]
#[command(name = "sparsepath", version, about)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Linear, logistic or multinomial regression path.
    Lb(LbArgs),
    /// Exact inverse scale space path of the linear model.
    Iss(IssArgs),
    /// Gaussian graphical model path.
    Ggm(GgmArgs),
    /// Ising model path from binary data.
    Ising(IsingArgs),
    /// Potts model path from categorical data.
    Potts(PottsArgs),
    /// Generate synthetic data sets.
    #[command(subcommand)]
    Simulate(SimulateCommand),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Gaussian,
    Binomial,
    Multinomial,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum XAxis {
    T,
    L1,
}

/// Options shared by all path fits.
#[derive(Debug, Clone, Args, Serialize)]
pub struct PathArgs {
    /// Damping factor κ.
    #[arg(long, default_value_t = 100.0)]
    pub kappa: f64,
    /// Step size; defaults to 1/(κ·L) from the loss curvature bound.
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Comma-separated output times (overrides --nt/--trate).
    #[arg(long, value_delimiter = ',')]
    pub tlist: Option<Vec<f64>>,
    /// Number of points on the default geometric time grid.
    #[arg(long, default_value_t = 100)]
    pub nt: usize,
    /// Ratio of the last to the first time on the default grid.
    #[arg(long, default_value_t = 100.0)]
    pub trate: f64,
}

/// Options for artifacts and input parsing.
#[derive(Debug, Clone, Args, Serialize)]
pub struct OutputArgs {
    /// Directory receiving path.csv, path.json and path.svg.
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    /// Also write path.svg.
    #[arg(long)]
    pub plot: bool,
    /// Horizontal axis of the plot.
    #[arg(long, value_enum, default_value_t = XAxis::T)]
    pub x_axis: XAxis,
    /// Input CSV files start with a header row of column names.
    #[arg(long)]
    pub header: bool,
    /// Recorded in path.json; fits themselves are deterministic.
    #[arg(long)]
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LbArgs {
    /// Design matrix CSV (n rows, p columns).
    pub x: PathBuf,
    /// Response CSV (one column).
    pub y: PathBuf,
    #[arg(long, value_enum, default_value_t = FamilyArg::Gaussian)]
    pub family: FamilyArg,
    /// Group penalty: by --index labels, or per feature across classes for
    /// the multinomial family.
    #[arg(long)]
    pub group: bool,
    /// CSV with one integer group label per design column.
    #[arg(long)]
    pub index: Option<PathBuf>,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub intercept: bool,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub normalize: bool,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IssArgs {
    /// Design matrix CSV (n rows, p columns).
    pub x: PathBuf,
    /// Response CSV (one column).
    pub y: PathBuf,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub intercept: bool,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub normalize: bool,
    /// Comma-separated output times.
    #[arg(long, value_delimiter = ',')]
    pub tlist: Option<Vec<f64>>,
    #[arg(long, default_value_t = 100)]
    pub nt: usize,
    /// Ratio of the last output time to the first knot.
    #[arg(long, default_value_t = 100.0)]
    pub trate: f64,
    /// Stop the path at this time.
    #[arg(long)]
    pub t_max: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GgmArgs {
    /// Data matrix CSV; omit when --covariance is given.
    pub x: Option<PathBuf>,
    /// Precomputed covariance CSV.
    #[arg(long)]
    pub covariance: Option<PathBuf>,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IsingArgs {
    /// Binary data CSV.
    pub x: PathBuf,
    /// Coding of the data and of the reported coefficients: `0,1` or `-1,1`.
    #[arg(long, default_value = "0,1")]
    pub responses: String,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub intercept: bool,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct PottsArgs {
    /// Categorical data CSV.
    pub x: PathBuf,
    /// Penalize each variable pair's block as a group.
    #[arg(long)]
    pub group: bool,
    #[arg(long, action = clap::ArgAction::Set, default_value_t = true)]
    pub intercept: bool,
    #[command(flatten)]
    pub path: PathArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SimulateCommand {
    /// Gibbs samples from a lattice Ising model; writes X.csv and edges.csv.
    Grid(GridArgs),
    /// Sparse Gaussian linear model; writes X.csv, y.csv and theta.csv.
    Linear(LinearArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GridArgs {
    #[arg(long, default_value_t = 10)]
    pub rows: usize,
    #[arg(long, default_value_t = 10)]
    pub cols: usize,
    /// Interaction on every lattice edge.
    #[arg(long, default_value_t = 2.0 / 2.3)]
    pub coupling: f64,
    /// Common field on every site.
    #[arg(long, default_value_t = 0.0)]
    pub field: f64,
    #[arg(long, default_value_t = 5000)]
    pub n: usize,
    #[arg(long, default_value_t = 1000)]
    pub burn_in: usize,
    #[arg(long, default_value_t = 10)]
    pub thinning: usize,
    /// Coding of the emitted samples: `0,1` or `-1,1`.
    #[arg(long, default_value = "0,1")]
    pub responses: String,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LinearArgs {
    #[arg(long, default_value_t = 100)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub p: usize,
    #[arg(long, default_value_t = 5)]
    pub sparsity: usize,
    /// Signal-to-noise ratio; `inf` gives noiseless responses.
    #[arg(long, default_value_t = 10.0)]
    pub snr: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
}
