use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "credal", version, about = "Evidential clustering with credal partitions")]
pub struct Cli {
    /// Log every iteration's criterion to stderr.
    #[arg(short, long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a credal partition and write it as JSON.
    Run(RunArgs),
    /// Print the summary block of a saved partition.
    Summary { partition: PathBuf },
    /// Print nonspecificity and outlier statistics of a saved partition.
    Metrics { partition: PathBuf },
    /// Credal Rand index between two saved partitions.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long = "type", value_enum, default_value_t = RiKind::Belief)]
        kind: RiKind,
    },
    /// Write PCA coordinates and hard labels of a partition as CSV.
    Plotdata(PlotArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Ecm,
    Ccm,
    Catecm,
    Recm,
    Ecmdd,
    Mecmdd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Focal {
    Full,
    Simple,
    Pairs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Rwg,
    Rwl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RiKind {
    Belief,
    Plausibility,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Data file; repeat for the views of `mecmdd`.
    #[arg(long, short)]
    pub input: Vec<PathBuf>,

    /// Bundled dataset instead of a file (iris, fourclass).
    #[arg(long, conflicts_with = "input")]
    pub dataset: Option<String>,

    /// Label column to drop from the features: `auto`, `none` or a column name.
    #[arg(long, default_value = "auto")]
    pub label_column: String,

    /// The first row holds data, not column names.
    #[arg(long)]
    pub no_header: bool,

    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,

    #[command(flatten)]
    pub input: InputArgs,

    /// Inputs are dissimilarity matrices rather than attribute tables.
    #[arg(long)]
    pub distance: bool,

    #[arg(long, short = 'c')]
    pub clusters: usize,

    #[arg(long, value_enum, default_value_t = Focal::Full)]
    pub focal: Focal,

    /// Cluster pairs for `--focal pairs`, 1-based: `1-2,2-3`. All pairs by default.
    #[arg(long)]
    pub pairs: Option<String>,

    /// Leave the whole frame out of the focal sets.
    #[arg(long)]
    pub no_omega: bool,

    #[arg(long, default_value_t = 1.0)]
    pub alpha: f64,

    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,

    #[arg(long, default_value_t = 10.0)]
    pub delta: f64,

    /// Per-view outlier distances for `mecmdd`, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub view_deltas: Option<Vec<f64>>,

    #[arg(long, default_value_t = 1.0)]
    pub gamma: f64,

    /// View-weight exponent for `mecmdd`.
    #[arg(long, default_value_t = 2.0)]
    pub s: f64,

    #[arg(long, value_enum, default_value_t = Variant::Rwg)]
    pub variant: Variant,

    #[arg(long, default_value_t = 1)]
    pub ntrials: usize,

    #[arg(long, default_value_t = 500)]
    pub maxit: usize,

    #[arg(long, default_value_t = 1e-3)]
    pub epsi: f64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Destination of the JSON document; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub input: InputArgs,

    #[arg(long, short)]
    pub partition: PathBuf,

    /// Destination CSV; stdout when omitted.
    #[arg(long, short)]
    pub output: Option<PathBuf>,

    /// Standardize features before projecting.
    #[arg(long)]
    pub normalize: bool,
}
