//! Argument definitions and value parsers.

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

use opcert::geom::{GridSpec, Region, Vec2};
use opcert::tolerances::{PAIR_SAMPLES, QUAD_STEP, SEED, TOL_EXACT, TOL_QUAD};

#[derive(Parser)]
#[command(
    name = "opcert",
    version,
    about = "Numerical certification of planar monotone operators",
    after_help = "Exit codes: 0 certified/success, 1 usage or parse error, \
                  2 property check failed, 3 indeterminate (evaluation error)."
)]
pub struct Cli {
    /// Cap worker threads for grid sweeps (default: available parallelism)
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print a field's value and Jacobian at a point
    Eval {
        #[command(flatten)]
        source: SourceArgs,
        /// Evaluation point X:Y (coordinates accept pi and -pi)
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0:0")]
        point: Vec2,
        /// Write a JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Certify a property of a field over a grid
    Certify {
        #[command(subcommand)]
        property: Property,
    },
    /// Least-squares fit of the skew-affine model (a*y + b1, -a*x + b2)
    FitSkew {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Refute skew-affinity: minimize the sup integrability residual over a
    RefuteSkew {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Search interval LO:HI for the skew parameter (default: automatic)
        #[arg(long, value_parser = parse_interval, allow_hyphen_values = true)]
        a_search: Option<(f64, f64)>,
        /// Residual threshold a successful refutation must exceed
        #[arg(long, default_value_t = TOL_QUAD)]
        threshold: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Reconstruct a potential for a curl-free field by line integration
    Reconstruct {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        /// Anchor point X:Y where the potential is pinned to zero
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "0:0")]
        anchor: Vec2,
        /// Composite-Simpson step for the line integrals
        #[arg(long, default_value_t = QUAD_STEP)]
        quad_step: f64,
        /// Curl tolerance for the gradient precondition
        #[arg(long, default_value_t = TOL_QUAD)]
        curl_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Full additivity refutation pipeline for a coupling u(x, y)
    Counterexample {
        /// Coupling expression u(x, y)
        #[arg(long)]
        u: String,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = QUAD_STEP)]
        quad_step: f64,
        #[arg(long, default_value_t = PAIR_SAMPLES)]
        pair_samples: usize,
        #[arg(long, default_value_t = SEED)]
        seed: u64,
        /// Refutation residual threshold
        #[arg(long, default_value_t = TOL_QUAD)]
        threshold: f64,
        /// Write the aggregate JSON certificate to this path
        #[arg(long)]
        json: Option<PathBuf>,
        /// Write per-stage CSV grid dumps into this directory
        #[arg(long)]
        csv_dir: Option<PathBuf>,
    },
    /// Extragradient zero-finder demo
    Solve {
        #[command(flatten)]
        source: SourceArgs,
        /// Starting point X:Y
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true, default_value = "1:1")]
        start: Vec2,
        /// Stop when |F(z)|_inf falls below this
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Record every Nth iterate
        #[arg(long)]
        trace_every: Option<usize>,
        /// Write recorded iterates as CSV
        #[arg(long)]
        trace_csv: Option<PathBuf>,
        /// Write a JSON report to this path
        #[arg(long)]
        json: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
pub enum Property {
    /// Jacobian PSD on the grid plus the pairwise definitional check
    Monotone {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = TOL_EXACT)]
        tol: f64,
        #[arg(long, default_value_t = PAIR_SAMPLES)]
        pair_samples: usize,
        #[arg(long, default_value_t = SEED)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Hessian PSD with a gradient-monotonicity cross-check
    Convex {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = TOL_EXACT)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Separable slot-wise criterion: f_xx >= 0 and f_yy <= 0 on the grid
    ConvexConcave {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = TOL_EXACT)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Curl-free check: max |J12 - J21| over the grid
    Gradient {
        #[command(flatten)]
        source: SourceArgs,
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = TOL_EXACT)]
        tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
}

/// Operator selection: exactly one of --op, --u, --f.
#[derive(Args, Clone)]
pub struct SourceArgs {
    /// Built-in operator: fplus | fminus | sum | identity
    #[arg(long)]
    pub op: Option<String>,
    /// Coupling expression; selects the plus member of the saddle family
    #[arg(long)]
    pub u: Option<String>,
    /// Scalar-field expression
    #[arg(long)]
    pub f: Option<String>,
    /// Vector-field construction for --f
    #[arg(long, value_enum)]
    pub kind: Option<FieldKind>,
}

#[derive(ValueEnum, Copy, Clone, Debug)]
pub enum FieldKind {
    Gradient,
    Saddle,
}

#[derive(Args, Clone, Copy)]
pub struct DomainArgs {
    /// Region xmin:xmax:ymin:ymax (bounds accept pi and -pi)
    #[arg(long, value_parser = parse_region, allow_hyphen_values = true, default_value = "-pi:pi:-pi:pi")]
    pub region: Region,
    /// Grid resolution NXxNY
    #[arg(long, value_parser = parse_grid, default_value = "129x129")]
    pub grid: GridSpec,
}

#[derive(Args, Clone)]
pub struct OutputArgs {
    /// Write a JSON report to this path
    #[arg(long)]
    pub json: Option<PathBuf>,
    /// Write an x,y,metric CSV grid dump to this path
    #[arg(long)]
    pub csv: Option<PathBuf>,
}

/// Numeric token: full-precision f64, or the literals pi / -pi.
fn parse_coordinate(tok: &str) -> Result<f64, String> {
    match tok.trim() {
        "pi" => Ok(std::f64::consts::PI),
        "-pi" => Ok(-std::f64::consts::PI),
        other => other
            .parse::<f64>()
            .map_err(|_| format!("`{other}` is not a number (or pi/-pi)")),
    }
}

fn split_tokens(s: &str, n: usize, what: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != n {
        return Err(format!("{what} needs {n} `:`-separated values, got `{s}`"));
    }
    parts.iter().map(|t| parse_coordinate(t)).collect()
}

pub fn parse_region(s: &str) -> Result<Region, String> {
    let v = split_tokens(s, 4, "--region")?;
    Region::new(v[0], v[1], v[2], v[3]).map_err(|e| e.to_string())
}

pub fn parse_point(s: &str) -> Result<Vec2, String> {
    let v = split_tokens(s, 2, "a point")?;
    Ok(Vec2::new(v[0], v[1]))
}

pub fn parse_interval(s: &str) -> Result<(f64, f64), String> {
    let v = split_tokens(s, 2, "--a-search")?;
    Ok((v[0], v[1]))
}

pub fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let (nx, ny) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("--grid expects NXxNY, got `{s}`"))?;
    let nx: usize = nx.parse().map_err(|_| format!("bad grid dimension `{nx}`"))?;
    let ny: usize = ny.parse().map_err(|_| format!("bad grid dimension `{ny}`"))?;
    GridSpec::new(nx, ny).map_err(|e| e.to_string())
}
