use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kpartite_core::criteria::CriterionKind;
use kpartite_core::skew::SParameter;
use kpartite_core::threshold::DEFAULT_TOL;

#[derive(Debug, Parser)]
#[command(name = "kpartite", version, about = "Detect k-nonseparability and k-partite entanglement")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,

    /// Write the report to a file instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Criterion {
    Ksep,
    Kprod,
}

impl From<Criterion> for CriterionKind {
    fn from(c: Criterion) -> Self {
        match c {
            Criterion::Ksep => CriterionKind::KSeparability,
            Criterion::Kprod => CriterionKind::KProducibility,
        }
    }
}

/// MUM selection. Without `--kappa` or `--t` the largest `t` keeping every
/// effect positive is used.
#[derive(Clone, Debug, Args)]
pub struct MumArgs {
    /// Local dimension.
    #[arg(long, default_value_t = 2)]
    pub d: usize,

    /// Unbiasedness parameter κ in (1/d, 1].
    #[arg(long, conflicts_with = "t")]
    pub kappa: Option<f64>,

    /// Construction parameter t > 0.
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Clone, Debug, Args)]
pub struct SArg {
    /// Skew-information parameter: 0, -1, -inf, or any real <= 0.
    #[arg(long, default_value = "0", allow_hyphen_values = true, value_parser = parse_s)]
    pub s: SParameter,
}

fn parse_s(value: &str) -> Result<SParameter, String> {
    value.parse().map_err(|e: kpartite_core::Error| e.to_string())
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Closed-form k-separability or k-producibility bounds.
    Bounds {
        /// Number of sites.
        #[arg(long = "N")]
        num_sites: usize,
        #[command(flatten)]
        mum: MumArgs,
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long, conflicts_with = "all_k", required_unless_present = "all_k")]
        k: Option<usize>,
        /// Every admissible k.
        #[arg(long)]
        all_k: bool,
    },
    /// MUM construction checks.
    Mum {
        #[command(subcommand)]
        action: MumAction,
    },
    /// Evaluate one criterion on a state.
    Detect {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        s: SArg,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[command(flatten)]
        mum: MumArgs,
    },
    /// Certified entanglement depth from the producibility bounds.
    Depth {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        s: SArg,
        #[command(flatten)]
        mum: MumArgs,
    },
    /// Noise threshold p* of a criterion on p|ψ><ψ| + (1-p)𝕀/D.
    Threshold {
        /// State specifier or JSON file.
        #[arg(long)]
        state: String,
        #[command(flatten)]
        s: SArg,
        #[arg(long, value_enum)]
        criterion: Criterion,
        #[arg(long)]
        k: usize,
        /// Relative tolerance on |lhs(p) - bound|.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        #[command(flatten)]
        mum: MumArgs,
    },
    /// Reference threshold tables.
    Tables {
        /// I..IX or all.
        #[arg(long, default_value = "all")]
        which: String,
        #[arg(long, default_value_t = 1.0)]
        kappa: f64,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Match the three six-qubit network states to their networks.
    NetworkDemo {
        #[command(flatten)]
        s: SArg,
    },
}

#[derive(Debug, Subcommand)]
pub enum MumAction {
    /// Trace conditions, sum-of-squares identity and cross-term bound.
    Validate {
        #[command(flatten)]
        mum: MumArgs,
        /// Include the effect matrices in JSON output.
        #[arg(long)]
        effects: bool,
    },
}

#[derive(Clone, Debug, Args)]
pub struct StateArgs {
    /// `ghz:N`, `w:N`, `bellpairs:N`, `example37:a|b|c`, or a JSON file
    /// `{"dim": D, "amplitudes": [[re, im], ...]}`.
    #[arg(long)]
    pub state: String,

    /// Weight p of the pure state in p|ψ><ψ| + (1-p)𝕀/D.
    #[arg(long, default_value_t = 1.0)]
    pub noise: f64,
}
