use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "pisubspace",
    version,
    about = "Buckingham-Pi dimensional analysis and active subspaces for physical models"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pi groups of a quantity system (writes pi.json and pi.txt).
    Pi(PiArgs),
    /// Estimate C, its spectrum and active subspace (writes spectrum.json,
    /// eigenvalues.csv, sensitivity.json).
    Subspace(SubspaceArgs),
    /// Summary-plot data and SVG scatters (writes summary{1,2}.{csv,svg}).
    Summary(SummaryArgs),
    /// Finite-difference gradient audit and activity identity (writes check.json).
    Check(CheckArgs),
    /// Draw seeded gradient samples into a sample file.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
pub struct Common {
    /// Output directory.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    /// Omit the generation timestamp from reports.
    #[arg(long)]
    pub no_timestamp: bool,
}

#[derive(Debug, Args)]
pub struct PiArgs {
    /// Quantity-system JSON file, or a bundled system: mhd_u_avg, mhd_b_ind,
    /// mhd_b_ind_mu0, pendulum.
    #[arg(long)]
    pub system: String,
    /// Re-check D v = u, D U = 0 and rank(U) = n and include the audit.
    #[arg(long)]
    pub verify: bool,
    #[command(flatten)]
    pub common: Common,
}

/// Where gradients come from.
#[derive(Debug, Args, Clone)]
pub struct Source {
    /// Built-in model: hartmann_u_avg or hartmann_b_ind.
    #[arg(long)]
    pub model: Option<String>,
    /// Parameter-space JSON file (may name the model).
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Gradient-sample file instead of a model.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Tensor Gauss-Legendre points per dimension (default 11).
    #[arg(long)]
    pub quadrature: Option<usize>,
    /// Monte Carlo sample count (requires --seed).
    #[arg(long)]
    pub mc: Option<usize>,
    /// 64-bit seed for every random draw.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Allow quadrature runs above 10^7 points.
    #[arg(long)]
    pub force: bool,
    /// Active dimension: a number or `auto` (largest gap).
    #[arg(long, default_value = "auto")]
    pub dim: String,
}

#[derive(Debug, Args)]
pub struct SubspaceArgs {
    #[command(flatten)]
    pub source: Source,
    /// Bootstrap replicates (requires samples and --seed).
    #[arg(long)]
    pub bootstrap: Option<usize>,
    /// Quantity-system file for the dimensional-analysis consistency check.
    #[arg(long)]
    pub system: Option<String>,
    /// Relative threshold for counting nonzero eigenvalues.
    #[arg(long, default_value_t = pisubspace::diagnostics::DEFAULT_ZERO_TOL)]
    pub zero_tol: f64,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SummaryArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of summary points (fresh draws; ignored with --samples).
    #[arg(long, default_value_t = pisubspace::diagnostics::DEFAULT_SUMMARY_COUNT)]
    pub count: usize,
    /// Which summaries to write: 1, 2, or 1,2.
    #[arg(long, default_value = "1,2", value_delimiter = ',')]
    pub plots: Vec<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub source: Source,
    /// Number of finite-difference check points.
    #[arg(long, default_value_t = 100)]
    pub count: usize,
    /// Finite-difference step in normalized coordinates.
    #[arg(long, default_value_t = 1e-6)]
    pub step: f64,
    /// Tolerance on the gradient relative error.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Tolerance on the activity-identity residuals (relative to lambda_1).
    #[arg(long, default_value_t = 1e-10)]
    pub identity_tol: f64,
    /// Test hook: add 1e-3 * max|grad| to this gradient component.
    #[arg(long, hide = true)]
    pub corrupt_gradient: Option<usize>,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    /// Built-in model: hartmann_u_avg or hartmann_b_ind.
    #[arg(long)]
    pub model: Option<String>,
    /// Parameter-space JSON file (may name the model).
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// Number of samples.
    #[arg(long)]
    pub mc: usize,
    #[arg(long)]
    pub seed: u64,
    /// Write physical coordinates and df/dt instead of normalized ones.
    #[arg(long)]
    pub physical: bool,
    /// Output sample file (must not exist).
    #[arg(long)]
    pub file: PathBuf,
}
