use std::path::PathBuf;

use bassnet::harness::Family;
use bassnet::{Scheme, Target};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bassnet",
    version,
    about = "Bass diffusion on weighted directed networks",
    long_about = "Bass diffusion on weighted directed networks.\n\n\
        Curves are written as CSV, structures as JSON. Every run also writes a \
        manifest (command line, input hashes, seeds, version, wall time) to \
        <out>.manifest.json, or to stderr when the output goes to stdout.\n\n\
        Exit codes: 2 usage, 3 invalid input, 4 budget exceeded, 5 check failed."
)]
pub struct Cli {
    /// Worker threads for Monte Carlo and verification [default: available cores]
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    pub jobs: Option<u64>,

    /// Largest network the exact solver accepts (overrides BASSNET_MAX_NODES)
    #[arg(long, global = true)]
    pub max_nodes: Option<usize>,

    /// Output file, `-` for stdout
    #[arg(long, global = true, default_value = "-")]
    pub out: String,

    /// Where to write the run manifest [default: <out>.manifest.json, stderr for stdout]
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a network file
    #[command(subcommand)]
    Gen(GenCommand),
    /// Solve the master equations exactly and print a curve
    Solve(SolveArgs),
    /// Evaluate an explicit formula on a time grid
    Formula(FormulaArgs),
    /// Estimate a curve by Monte Carlo
    Simulate(SimulateArgs),
    /// Graph predicates and transformations
    #[command(subcommand)]
    Analyze(AnalyzeCommand),
    /// Run the theorem checks
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct RateArgs {
    /// External influence rate of every node
    #[arg(long)]
    pub p: f64,

    /// One-sided internal influence rate
    #[arg(long, conflicts_with_all = ["q_left", "q_right"], required_unless_present_all = ["q_left", "q_right"])]
    pub q: Option<f64>,

    /// Two-sided: rate from the left neighbour
    #[arg(long, requires = "q_right")]
    pub q_left: Option<f64>,

    /// Two-sided: rate from the right neighbour
    #[arg(long, requires = "q_left")]
    pub q_right: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum GenCommand {
    /// Homogeneous circle
    Circle {
        /// Number of nodes
        #[arg(long = "M")]
        m: usize,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Homogeneous line
    Line {
        /// Number of nodes
        #[arg(long = "M")]
        m: usize,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Periodic lattice with M1^D nodes and in-rate q per node
    Torus {
        /// Dimension
        #[arg(long = "D")]
        d: usize,
        /// Side length
        #[arg(long = "M1")]
        m1: usize,
        /// External influence rate
        #[arg(long)]
        p: f64,
        /// Total internal influence rate per node
        #[arg(long)]
        q: f64,
        /// Neighbours in one or both directions along each axis
        #[arg(long, value_enum, default_value_t = SidedArg::Two)]
        sided: SidedArg,
    },
    /// N rays of L nodes pointing into a hub
    Raystar {
        /// Number of rays
        #[arg(long = "N")]
        n: usize,
        /// Ray length
        #[arg(long = "L")]
        l: usize,
        /// External influence rate
        #[arg(long)]
        p: f64,
        /// Rate of every ray edge
        #[arg(long)]
        qt: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SidedArg {
    One,
    Two,
}

#[derive(Debug, Args)]
pub struct GridArgs {
    /// Last time of the grid
    #[arg(long, default_value_t = 5.0)]
    pub tmax: f64,

    /// Number of intervals; the grid has steps + 1 points
    #[arg(long, default_value_t = 50)]
    pub steps: usize,

    /// Explicit ascending time grid, overriding --tmax/--steps
    #[arg(long, value_delimiter = ',', conflicts_with_all = ["tmax", "steps"])]
    pub times: Vec<f64>,
}

#[derive(Debug, Args)]
#[group(id = "what", required = true, multiple = false)]
pub struct SolveTarget {
    /// Nonadoption probability of a node set
    #[arg(long, value_delimiter = ',', group = "what")]
    pub omega: Vec<usize>,

    /// Adoption probability of one node
    #[arg(long, group = "what")]
    pub node: Option<usize>,

    /// Expected fraction of adopters
    #[arg(long, group = "what")]
    pub level: bool,

    /// Probability that neither of two nodes adopted
    #[arg(long, value_delimiter = ',', group = "what")]
    pub pair: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Network file
    #[arg(long)]
    pub net: PathBuf,
    #[command(flatten)]
    pub target: SolveTarget,
    #[command(flatten)]
    pub grid: GridArgs,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FormulaKind {
    /// Adoption level of a circle
    Circle,
    /// Adoption probability on the infinite line
    F1d,
    /// One-sided line: node adoption with --j, level otherwise
    Line1s,
    /// Two-sided line: node adoption with --j, level otherwise
    Line2s,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Debug, Args)]
pub struct FormulaArgs {
    #[arg(value_enum)]
    pub kind: FormulaKind,
    /// External influence rate
    #[arg(long)]
    pub p: f64,
    /// Internal influence rate (circle, f1d, line1s)
    #[arg(long)]
    pub q: Option<f64>,
    /// Rate from the left neighbour (line2s)
    #[arg(long)]
    pub q_left: Option<f64>,
    /// Rate from the right neighbour (line2s)
    #[arg(long)]
    pub q_right: Option<f64>,
    /// Number of nodes (circle, line1s, line2s)
    #[arg(long = "M")]
    pub m: Option<usize>,
    /// Node on the line (line1s, line2s)
    #[arg(long)]
    pub j: Option<usize>,
    /// Evaluate near-singular parameters through the exact block chain
    #[arg(long, value_enum, default_value_t = Switch::On)]
    pub singular_fallback: Switch,
    #[command(flatten)]
    pub grid: GridArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Network file
    #[arg(long)]
    pub net: PathBuf,
    /// Number of replicates
    #[arg(long, default_value_t = 100_000)]
    pub runs: u64,
    /// Master seed; replicate r uses a stream derived from (seed, r)
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// `event` or `dt:<step>`
    #[arg(long, default_value = "event", value_parser = parse_scheme)]
    pub scheme: Scheme,
    /// `level`, `node:J`, `omega:A,B,..` or `pair:I,J`
    #[arg(long, default_value = "level", value_parser = parse_target)]
    pub target: Target,
    #[command(flatten)]
    pub grid: GridArgs,
}

fn parse_scheme(s: &str) -> Result<Scheme, String> {
    s.parse().map_err(|e: bassnet::Error| e.to_string())
}

fn parse_target(s: &str) -> Result<Target, String> {
    s.parse().map_err(|e: bassnet::Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: bassnet::Error| e.to_string())
}

#[derive(Debug, Args)]
pub struct PartitionArgs {
    /// Network file
    #[arg(long)]
    pub net: PathBuf,
    /// Nodes of A
    #[arg(long = "A", value_delimiter = ',', required = true)]
    pub a: Vec<usize>,
    /// Nodes of B
    #[arg(long = "B", value_delimiter = ',', required = true)]
    pub b: Vec<usize>,
    /// The focal node
    #[arg(long)]
    pub j: usize,
}

#[derive(Debug, Args)]
pub struct OmegaArgs {
    /// Network file
    #[arg(long)]
    pub net: PathBuf,
    /// Target node set
    #[arg(long, value_delimiter = ',', required = true)]
    pub omega: Vec<usize>,
}

#[derive(Debug, Subcommand)]
pub enum AnalyzeCommand {
    /// Nodes and edges influential to a node set
    Influential(OmegaArgs),
    /// Whether j is a funnel node of the partition, with blocking nodes
    Funnel(PartitionArgs),
    /// Whether j is a vertex cut between A and B
    Cut(PartitionArgs),
    /// Remove every edge not influential to a node set
    Reduce(OmegaArgs),
    /// Compare the rates of two networks coordinatewise
    Dominate {
        /// First network
        #[arg(long)]
        net: PathBuf,
        /// Second network
        #[arg(long)]
        other: PathBuf,
        /// Also predict whether this node is strictly slower in the first network
        #[arg(long)]
        node: Option<usize>,
    },
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// all, pair, funnel, circle, line, dimension or chebyshev
    #[arg(value_parser = parse_family, default_value = "all")]
    pub family: Family,
    /// Suite file replacing the shipped fixtures
    #[arg(long)]
    pub fixtures: Option<PathBuf>,
}

impl SidedArg {
    pub fn into_core(self) -> bassnet::Sidedness {
        match self {
            SidedArg::One => bassnet::Sidedness::One,
            SidedArg::Two => bassnet::Sidedness::Two,
        }
    }
}
