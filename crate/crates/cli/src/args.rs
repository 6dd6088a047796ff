//! Command-line grammar.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "star", version, about = "Evaluate and verify combinatorial star products")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two polynomials.
    Eval(EvalArgs),
    /// Run probe suites from a spec file, from flags, or the bundled default.
    Verify(VerifyArgs),
    /// Merge verify reports into one summary table.
    Report(ReportArgs),
    /// Gram matrix of a deformed evaluation state.
    Gram(StateArgs),
    /// GNS data of a deformed evaluation state.
    Gns(GnsArgs),
}

/// Where the product comes from.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Catalog id, e.g. `nonquadratic{N=2}`.
    #[arg(long, conflicts_with = "phi")]
    pub catalog: Option<String>,
    /// A deformation table in JSON.
    #[arg(long, value_name = "FILE")]
    pub phi: Option<PathBuf>,
    /// Number of generators.
    #[arg(long = "d", value_name = "D")]
    pub dim: Option<usize>,
    /// Parameter rules, `NAME=RULE[,...]`; repeatable.
    #[arg(long = "param", value_name = "NAME=RULE")]
    pub params: Vec<String>,
    /// complex, rational, series or rational_q.
    #[arg(long)]
    pub ring: Option<String>,
    /// Series truncation order.
    #[arg(long)]
    pub truncation: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, conflicts_with = "csv")]
    pub json: bool,
    #[arg(long)]
    pub csv: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    /// ℏ, or a comma-separated list.
    #[arg(long, default_value = "0.5", allow_hyphen_values = true)]
    pub hbar: String,
    #[arg(long)]
    pub lhs: String,
    #[arg(long)]
    pub rhs: String,
    /// Print coefficients at full precision.
    #[arg(long)]
    pub exact: bool,
    /// Rewrite budget per pair of monomials.
    #[arg(long)]
    pub step_limit: Option<u64>,
    #[arg(long)]
    pub json: bool,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// RunSpec JSON; without it (and without --catalog/--phi) the bundled
    /// default suite runs.
    pub spec: Option<PathBuf>,
    #[command(flatten)]
    pub source: SourceArgs,
    /// ℏ, or a comma-separated list, for a run built from flags.
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<String>,
    /// Probe kinds for a run built from flags; empty runs nothing.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub probes: Option<Vec<String>>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Record wall times in the report (makes output run-dependent).
    #[arg(long)]
    pub timings: bool,
    /// Print the bundled spec and exit.
    #[arg(long)]
    pub print_default: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct StateArgs {
    #[arg(long, default_value = "wick_log_canonical")]
    pub catalog: String,
    #[arg(long = "param", value_name = "NAME=RULE")]
    pub params: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: f64,
    /// Evaluation point, comma-separated complex numbers.
    #[arg(long)]
    pub z: String,
    /// Truncation degree D.
    #[arg(long, default_value_t = 3)]
    pub degree: u32,
    #[arg(long, value_name = "FILE")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GnsArgs {
    #[command(flatten)]
    pub state: StateArgs,
    #[arg(long, value_name = "FILE")]
    pub report: Option<PathBuf>,
}
