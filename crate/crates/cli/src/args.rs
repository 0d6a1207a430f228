use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "ifp",
    version,
    about = "Axiom checks, contraction certificates and fixed-point solvers for finite intuitionistic fuzzy metric spaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    #[command(flatten)]
    pub global: GlobalOpts,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Numerical tolerance for axiom and convergence checks.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,

    /// Comma-separated `t` values replacing the document's grid.
    #[arg(long, global = true, value_delimiter = ',', num_args = 1)]
    pub t_grid: Option<Vec<f64>>,

    /// Require idempotent operations (property xii).
    #[arg(long, global = true, conflicts_with = "no_strict_xii")]
    pub strict_xii: bool,

    /// Do not require idempotent operations.
    #[arg(long, global = true)]
    pub no_strict_xii: bool,

    /// Omit the timestamped `meta` block so reports are byte-stable.
    #[arg(long, global = true)]
    pub no_meta: bool,

    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

impl GlobalOpts {
    pub fn strict_xii(&self) -> Option<bool> {
        match (self.strict_xii, self.no_strict_xii) {
            (true, _) => Some(true),
            (_, true) => Some(false),
            _ => None,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the intuitionistic fuzzy metric conditions on an instance.
    CheckAxioms {
        path: PathBuf,
    },
    /// Certify or refute a contraction property of the document's map.
    Certify(CertifyArgs),
    /// Run a fixed-point procedure on the document's map.
    Solve(SolveArgs),
    /// Find a shortest eta-chain between two points.
    Chain(ChainArgs),
    /// List every self-map certified at a given contraction constant.
    Enumerate {
        path: PathBuf,
        #[arg(long)]
        k: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CertifyKind {
    TsIf,
    Local,
}

impl CertifyKind {
    pub fn name(self) -> &'static str {
        match self {
            CertifyKind::TsIf => "ts-if",
            CertifyKind::Local => "local",
        }
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = CertifyKind::TsIf)]
    pub kind: CertifyKind,
    #[arg(long, conflicts_with = "auto_k")]
    pub k: Option<f64>,
    /// Compute the smallest contraction constant and certify with it.
    #[arg(long)]
    pub auto_k: bool,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Picard,
    Ball,
    Power,
    Chain,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub path: PathBuf,
    #[arg(long, value_enum, default_value_t = Mode::Picard)]
    pub mode: Mode,
    /// Starting point label; defaults to the first point.
    #[arg(long)]
    pub x0: Option<String>,
    #[arg(long)]
    pub k: Option<f64>,
    #[arg(long, default_value_t = 1000)]
    pub max_iter: usize,
    /// Power-map order.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    #[arg(long)]
    pub center: Option<String>,
    #[arg(long)]
    pub r: Option<f64>,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub lambda: Option<f64>,
    /// CSV trace path; defaults to `<out>.trace.csv` when `--out` is given.
    #[arg(long, value_name = "PATH")]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChainArgs {
    pub path: PathBuf,
    #[arg(long)]
    pub from: String,
    #[arg(long)]
    pub to: String,
    #[arg(long)]
    pub eta: f64,
    #[arg(long, required_unless_present = "all_grid", conflicts_with = "all_grid")]
    pub t: Option<f64>,
    /// Require every link to hold at every grid value of `t`.
    #[arg(long)]
    pub all_grid: bool,
}
