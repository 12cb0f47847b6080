use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

/// Exact computations with cluster X-varieties, the polygon model,
/// laminations and the punctured-torus boundary.
///
/// Exit codes: 0 ok, 1 property failure, 2 input error, 3 truncated
/// exploration (infinite type). CLUSTERX_THREADS caps worker threads.
#[derive(Debug, Parser)]
#[command(name = "clusterx", version)]
pub struct Cli {
    /// Seed for every random choice; recorded in the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub rng_seed: u64,

    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Mutate a seed and print the new seed with its coordinate pullbacks.
    Mutate(MutateArgs),
    /// Explore the exchange graph of a seed.
    Graph(GraphArgs),
    /// Apply piecewise-linear mutations to a tropical point.
    TropMutate(TropMutateArgs),
    /// Special cones containing a tropical point.
    Cones(ConesArgs),
    /// Valuation of a function at a tropical point.
    Valuation(ValuationArgs),
    /// Flip a diagonal, optionally checking it against seed mutation.
    Flip(FlipArgs),
    /// Cross-ratio coordinates of a configuration in a triangulation chart.
    Chart(ChartArgs),
    /// Sets of non-crossing diagonals by codimension.
    Associahedron(AssociahedronArgs),
    /// Canonical function of a lamination in a triangulation chart.
    Canon(CanonArgs),
    /// Enumerate laminations by tree coordinates.
    Laminations(LaminationsArgs),
    /// Strata of the special completion.
    Completion(CompletionArgs),
    /// Triangle patch of the punctured-torus boundary.
    TorusBoundary(TorusArgs),
    /// Run the invariant suite and report pass/fail per property.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct SeedInput {
    /// Seed file: {"n", "epsilon", "d", "labels"?}.
    #[arg(long = "seed")]
    pub seed: PathBuf,
}

#[derive(Debug, Args)]
pub struct MutateArgs {
    #[command(flatten)]
    pub input: SeedInput,
    /// Mutation directions, applied left to right.
    #[arg(long, short, visible_alias = "at", value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[command(flatten)]
    pub input: SeedInput,
    #[arg(long, default_value_t = 1000)]
    pub max_nodes: usize,
    /// Include each node's coordinates as functions of the root chart.
    #[arg(long)]
    pub charts: bool,
}

#[derive(Debug, Args)]
pub struct TropMutateArgs {
    #[command(flatten)]
    pub input: SeedInput,
    /// Point file {"chart", "coords"}, or inline coordinates such as `1,-2,3/2`.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    /// Mutation directions, applied left to right.
    #[arg(long, short, visible_alias = "at", value_delimiter = ',', required = true)]
    pub k: Vec<usize>,
}

#[derive(Debug, Args)]
pub struct ConesArgs {
    #[command(flatten)]
    pub input: SeedInput,
    /// Point file {"chart", "coords"}, or inline coordinates in the root chart.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
    #[arg(long, default_value_t = 1000)]
    pub max_nodes: usize,
}

#[derive(Debug, Args)]
pub struct ValuationArgs {
    /// Subtraction-free function such as `(1 + X0) / X1`, or a file holding one.
    #[arg(long, visible_alias = "f", conflicts_with = "lamination")]
    pub function: Option<String>,
    /// Variable order for `--function`; defaults to natural sort.
    #[arg(long, value_delimiter = ',')]
    pub vars: Option<Vec<String>>,
    /// Use the lamination's canonical function in `--triangulation`'s chart.
    #[arg(long, requires = "triangulation")]
    pub lamination: Option<PathBuf>,
    #[arg(long)]
    pub triangulation: Option<PathBuf>,
    /// Point file {"chart", "coords"}, or inline coordinates.
    #[arg(long, allow_hyphen_values = true)]
    pub point: String,
}

#[derive(Debug, Args)]
pub struct FlipArgs {
    #[arg(long)]
    pub triangulation: PathBuf,
    /// Diagonal to flip, as `a,b`.
    #[arg(long, value_delimiter = ',', required = true)]
    pub diagonal: Vec<usize>,
    /// Check the flip against seed mutation on random configurations.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
}

#[derive(Debug, Args)]
pub struct ChartArgs {
    #[arg(long)]
    pub triangulation: PathBuf,
    /// Configuration file: {"points": ["inf", "-1", "0", "1/2", ...]}.
    #[arg(long)]
    pub config: PathBuf,
}

#[derive(Debug, Args)]
pub struct AssociahedronArgs {
    #[arg(long)]
    pub size: usize,
    /// Only this codimension; all when omitted.
    #[arg(long)]
    pub codim: Option<usize>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RedRuleArg {
    Smallest,
    Largest,
}

#[derive(Debug, Args)]
pub struct CanonArgs {
    #[arg(long)]
    pub lamination: PathBuf,
    #[arg(long)]
    pub triangulation: PathBuf,
    /// Fail with exit code 1 unless every coefficient is nonnegative.
    #[arg(long)]
    pub check_positivity: bool,
    #[arg(long, value_enum, default_value_t = RedRuleArg::Smallest)]
    pub red_rule: RedRuleArg,
}

#[derive(Debug, Args)]
pub struct LaminationsArgs {
    #[arg(long)]
    pub size: usize,
    #[arg(long, default_value_t = 1)]
    pub bound: i64,
}

#[derive(Debug, Args)]
pub struct CompletionArgs {
    #[command(flatten)]
    pub input: SeedInput,
    #[arg(long, default_value_t = 1000)]
    pub max_nodes: usize,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Svg,
    Json,
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    #[arg(long, default_value_t = 6)]
    pub max_len: usize,
    #[arg(long, value_enum, default_value_t = FormatArg::Json)]
    pub format: FormatArg,
    /// Draw a ray at every vertex.
    #[arg(long)]
    pub rays: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    All,
    Laurent,
    Seed,
    Tropical,
    Polygon,
    Lamination,
    Completion,
    Torus,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Largest polygon size used by the polygon and lamination checks.
    #[arg(long, default_value_t = 6)]
    pub size_cap: usize,
    /// Random seed; overrides `--rng-seed`.
    #[arg(long)]
    pub seed: Option<u64>,
}
