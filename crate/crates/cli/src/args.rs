use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cliffft_core::transform::Sign;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(
    name = "cliffft",
    version,
    about = "Clifford-Fourier transform kernels, transforms and uncertainty checks",
    after_help = "Exit status: 0 success, 2 invalid input, 3 kernel series not converged, \
                  4 verification failed, 1 other errors."
)]
pub struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "CLIFFFT_THREADS")]
    pub threads: Option<usize>,

    /// Seed for randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Print the resolved configuration and exit.
    #[arg(long, global = true)]
    pub dry_run: bool,

    /// Write the result here instead of stdout.
    #[arg(long, short = 'o', global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate the kernel K_-(x, y) at one pair of points (JSON).
    Kernel(KernelArgs),
    /// Tabulate K_-(x, t d) along a ray (CSV).
    #[command(
        after_help = "CSV columns: t, x1..xm, y1..ym, scalar_re, scalar_im, then <blade>_re, <blade>_im for \
                      each bivector blade (e12, e13, ..), then truncation_estimate, converged."
    )]
    KernelTable(KernelTableArgs),
    /// Transform a function at a set of points (CSV).
    #[command(
        after_help = "CSV columns: y1..ym, then <blade>_re, <blade>_im for every blade in grade order \
                      (1, e1, .., e12, ..)."
    )]
    Transform(TransformArgs),
    /// Run identity checks and report measured errors (JSON).
    Verify(VerifyArgs),
    /// Heisenberg product against its lower bound (JSON or text).
    Heisenberg(HeisenbergArgs),
    /// Fit joint Gaussian decay rates of f and its transform (JSON or text).
    Hardy(HardyArgs),
    /// Tabulate a special function (CSV).
    Specfn(SpecfnArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelOpts {
    /// Largest kernel series degree.
    #[arg(long)]
    pub k_max: Option<usize>,
    /// Absolute tolerance on the dropped series tail.
    #[arg(long)]
    pub tail_tol: Option<f64>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelArgs {
    #[arg(long)]
    pub m: usize,
    /// Comma-separated components of x.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Comma-separated components of y.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub y: Vec<f64>,
    #[command(flatten)]
    pub kernel: KernelOpts,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct KernelTableArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub x: Vec<f64>,
    /// Ray direction d (not normalized).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
    pub dir: Vec<f64>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_min: f64,
    #[arg(long, default_value_t = 5.0, allow_hyphen_values = true)]
    pub t_max: f64,
    #[arg(long, default_value_t = 50)]
    pub steps: usize,
    #[command(flatten)]
    pub kernel: KernelOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Spectral,
    Quadrature,
}

fn parse_sign(s: &str) -> Result<Sign, String> {
    Sign::parse(s).map_err(|e| e.to_string())
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FunctionOpts {
    /// Input function: JSON such as '{"kind":"gaussian","p":0.5}', a bare kind
    /// ("gaussian"), or @file.json.
    #[arg(long = "fn", default_value = "gaussian")]
    pub function: String,
    /// Which transform: + or -.
    #[arg(long, default_value = "-", value_parser = parse_sign, allow_hyphen_values = true)]
    pub sign: Sign,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct QuadratureOpts {
    /// Source nodes per axis (24 for m = 4, 12 for m = 6).
    #[arg(long)]
    pub nodes: Option<usize>,
    /// Target nodes per axis for frequency-side norms (6 for m = 4, 4 for m = 6).
    #[arg(long)]
    pub target_nodes: Option<usize>,
    /// Basis ranges used when a sampled input has to be projected.
    #[arg(long, default_value_t = 4)]
    pub max_j: usize,
    #[arg(long, default_value_t = 3)]
    pub max_k: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct TransformArgs {
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub function: FunctionOpts,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    pub method: Method,
    #[command(flatten)]
    pub quadrature: QuadratureOpts,
    /// Semicolon-separated target points ("1,0,0,0;0,1,0,0"); defaults to the target rule nodes.
    #[arg(long, allow_hyphen_values = true)]
    pub targets: Option<String>,
    #[command(flatten)]
    pub kernel: KernelOpts,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Plancherel,
    Eigen,
    Recurrence,
    Heisenberg,
    Scaling,
    Infimum,
    All,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(long)]
    pub m: usize,
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    #[command(flatten)]
    pub quadrature: QuadratureOpts,
    /// Largest j + k in the eigenvalue suite.
    #[arg(long, default_value_t = 2)]
    pub max_order: usize,
    /// Random cases per randomized check.
    #[arg(long)]
    pub cases: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HeisenbergArgs {
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub function: FunctionOpts,
    #[arg(long, value_enum, default_value_t = Method::Spectral)]
    pub method: Method,
    #[command(flatten)]
    pub quadrature: QuadratureOpts,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct HardyArgs {
    #[arg(long)]
    pub m: usize,
    #[command(flatten)]
    pub function: FunctionOpts,
    #[arg(long, value_enum, default_value_t = Method::Quadrature)]
    pub method: Method,
    #[command(flatten)]
    pub quadrature: QuadratureOpts,
    /// Fit annulus as fractions of the sample support.
    #[arg(long, default_value_t = 0.5)]
    pub fit_lo: f64,
    #[arg(long, default_value_t = 0.9)]
    pub fit_hi: f64,
    /// Frequency rays extend to this radius.
    #[arg(long, default_value_t = 4.5)]
    pub freq_radius: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SpecfnArgs {
    #[command(subcommand)]
    pub family: Family,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    /// Columns: z, j (J_nu), jt ((z/2)^-nu J_nu).
    Bessel {
        #[arg(long)]
        nu: f64,
        #[command(flatten)]
        grid: Grid,
    },
    /// Columns: w, c (C_k^lambda), dc (derivative).
    Gegenbauer {
        #[arg(long)]
        lambda: f64,
        #[arg(long)]
        k: usize,
        #[command(flatten)]
        grid: Grid,
    },
    /// Columns: t, l (L_j^alpha).
    Laguerre {
        #[arg(long)]
        alpha: f64,
        #[arg(long)]
        j: usize,
        #[command(flatten)]
        grid: Grid,
    },
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Grid {
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub from: f64,
    #[arg(long, default_value_t = 10.0, allow_hyphen_values = true)]
    pub to: f64,
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}
