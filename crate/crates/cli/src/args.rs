use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser, Serialize)]
#[command(name = "perclace", version, about = "Percolation and lace-expansion laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Output format for the data section.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Write output to this file instead of stdout. Relative paths resolve
    /// against PERCLACE_OUTPUT_DIR when it is set.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,

    /// Directory for relative output paths.
    #[arg(long, global = true, env = "PERCLACE_OUTPUT_DIR", hide_env_values = true)]
    pub output_dir: Option<PathBuf>,

    /// Worker threads; results do not depend on this value.
    #[arg(long, global = true, env = "PERCLACE_WORKERS")]
    pub workers: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum KindArg {
    Hypercube,
    Torus,
}

#[derive(Debug, Args, Serialize)]
pub struct GraphArgs {
    /// `q<N>` or `hypercube:<N>` for Q_N, `torus:<N>:<M>` for (Z/MZ)^N.
    #[arg(long, short)]
    pub graph: String,
}

#[derive(Debug, Args, Serialize)]
pub struct McArgs {
    #[arg(long, default_value_t = 100_000)]
    pub samples: u64,

    #[arg(long, default_value_t = 1)]
    pub seed: u64,

    /// Number of sample blocks; part of the reproducibility key.
    #[arg(long, default_value_t = perclace::mc::DEFAULT_STREAMS)]
    pub streams: u32,

    /// Largest cluster grown before a sample is flagged as truncated.
    #[arg(long, default_value_t = perclace::mc::DEFAULT_CLUSTER_CAP)]
    pub cluster_cap: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case", tag = "subcommand")]
pub enum Command {
    /// Evaluate the 1/Omega expansion of p_c.
    Predict {
        #[arg(long)]
        omega: f64,
        #[arg(long, default_value_t = 3)]
        order: usize,
        #[arg(long, value_enum, default_value_t = KindArg::Hypercube)]
        kind: KindArg,
        /// Allow the non-rigorous reference coefficients beyond order 3.
        #[arg(long)]
        reference: bool,
    },
    /// Estimate chi(p) by cluster growth.
    Chi {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Estimate chi on a grid of densities with shared randomness.
    Sweep {
        #[command(flatten)]
        graph: GraphArgs,
        /// Comma-separated densities.
        #[arg(long, value_delimiter = ',', required = true)]
        grid: Vec<f64>,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Solve chi(p) = target and report the corrected critical estimate.
    SolvePc {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = perclace::mc::DEFAULT_TARGET)]
        target: f64,
        /// Relative width of the final bracket on p.
        #[arg(long, default_value_t = 1e-3)]
        tol: f64,
        #[arg(long, default_value_t = 1 << 20)]
        min_samples: u64,
        /// Total cluster growths across all stages.
        #[arg(long, default_value_t = 1 << 24)]
        budget: u64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = perclace::mc::DEFAULT_STREAMS)]
        streams: u32,
    },
    /// Exact polynomial of Pi^(N) (N = 0 gives the double-connection sum).
    PiExact {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        levels: u32,
    },
    /// Pi^(N) exact through p^max_order.
    PiSeries {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        levels: u32,
        #[arg(long, default_value_t = perclace::oracle::enumerate::DEFAULT_SERIES_ORDER)]
        max_order: usize,
    },
    /// Nested Monte Carlo estimate of Pi^(N)(p).
    PiMc {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 0)]
        levels: u32,
        #[arg(long)]
        p: f64,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Series residual of the expansion identity, and optionally the exact
    /// recursion residual at one density.
    IdentityCheck {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long, default_value_t = 3)]
        max_order: usize,
        #[arg(long, default_value_t = 2)]
        n_max: u32,
        /// Density for the exact recursion residual, as a rational `a/b`.
        #[arg(long)]
        p: Option<String>,
    },
    /// Return probabilities, return bounds and triangle proxies.
    Diagrams {
        #[command(flatten)]
        graph: GraphArgs,
        /// Largest i for 2i-step return probabilities.
        #[arg(long, default_value_t = 4)]
        max_i: u32,
        /// chi value used for the k = 0 mode of the triangle proxy.
        #[arg(long, default_value_t = 200.0)]
        chi: f64,
        #[arg(long)]
        p: Option<f64>,
        /// Infrared proxy constant.
        #[arg(long, default_value_t = 2.0)]
        c: f64,
    },
    /// Fixed-point derivation of the Omega p_c series.
    DeriveSeries {
        #[arg(long, default_value_t = 2)]
        order: usize,
        /// c in Omega' = Omega - c (1 for hypercubes, 2 for tori).
        #[arg(long, default_value_t = 1)]
        sub_degree_offset: i64,
    },
    /// Weighted least-squares fit of critical estimates in powers of 1/Omega.
    Fit {
        /// CSV with columns omega,estimate,stderr (header line optional).
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: usize,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Predict { .. } => "predict",
            Command::Chi { .. } => "chi",
            Command::Sweep { .. } => "sweep",
            Command::SolvePc { .. } => "solve-pc",
            Command::PiExact { .. } => "pi-exact",
            Command::PiSeries { .. } => "pi-series",
            Command::PiMc { .. } => "pi-mc",
            Command::IdentityCheck { .. } => "identity-check",
            Command::Diagrams { .. } => "diagrams",
            Command::DeriveSeries { .. } => "derive-series",
            Command::Fit { .. } => "fit",
        }
    }
}
