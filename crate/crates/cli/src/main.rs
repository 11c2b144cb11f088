//! `kuratree`: batch driver for the checks in `kuratree-core`.
//!
//! Every subcommand writes a versioned JSON report and exits with 0 when all
//! checks in scope pass, 1 when one fails and 2 on configuration errors.
//! Set `RAYON_NUM_THREADS` to bound the worker count.

mod report;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use report::Format;

#[derive(Parser, Debug)]
#[command(name = "kuratree", version, about = "Ribbon-tree stratifications, corner calculus and model checks")]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct RunConfig {
    /// Class monoid file; defaults to one generator of energy 1 and Maslov index 2.
    #[arg(long, global = true)]
    pub monoid: Option<PathBuf>,
    /// Energy cutoff E0 as `p/q`.
    #[arg(long, global = true, default_value = "4")]
    pub e0: String,
    /// Largest k in index sweeps.
    #[arg(long, global = true, default_value_t = 3)]
    pub kmax: usize,
    /// Largest ℓ in index sweeps.
    #[arg(long, global = true, default_value_t = 1)]
    pub lmax: usize,
    /// Largest energy of β in index sweeps, as `p/q`.
    #[arg(long, global = true, default_value = "3")]
    pub emax: String,
    /// Also sweep indices over the interval parameter space.
    #[arg(long, global = true)]
    pub interval: bool,
    #[arg(long, global = true, value_enum, default_value_t = Convention::Shifted)]
    pub convention: Convention,
    /// Report path; standard output when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Records)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Convention {
    Shifted,
    Unshifted,
}

#[derive(Args, Debug, Clone)]
pub struct IndexArgs {
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub ell: usize,
    /// Exponents of β, comma separated; zero by default.
    #[arg(long)]
    pub beta: Option<String>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the stable trees of one index.
    Trees(IndexArgs),
    /// Signed codimension-one strata of one index.
    Boundary(IndexArgs),
    /// Strata of a given total codimension.
    Corners {
        #[command(flatten)]
        index: IndexArgs,
        #[arg(long, default_value_t = 2)]
        codim: usize,
    },
    /// Sign coherence of the boundary operator over the index sweep.
    CheckD2,
    /// Iterated-corner multiplicities over the index sweep.
    CheckCornerCount {
        #[arg(long, requires = "m2")]
        m1: Option<usize>,
        #[arg(long, requires = "m1")]
        m2: Option<usize>,
        /// Largest m1 + m2 when no pair is given.
        #[arg(long, default_value_t = 4)]
        max_total: usize,
    },
    /// Filtered A∞ relation of an operation table.
    CheckAinf {
        #[arg(long)]
        table: PathBuf,
    },
    /// Endpoint and collar conditions of a family of tables.
    CheckFamily {
        #[arg(long)]
        family: PathBuf,
    },
    /// Build a cover of a stratified model.
    BuildCover {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        cover: CoverArgs,
    },
    /// Check the four cover clauses.
    VerifyCover {
        #[arg(long)]
        model: PathBuf,
        /// A cover file or a `build-cover` report.
        #[arg(long)]
        cover: PathBuf,
    },
    /// Relate two covers of one model.
    CompareCovers {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        first: PathBuf,
        #[arg(long)]
        second: PathBuf,
        #[arg(long, default_value_t = 2)]
        zigzag_depth: usize,
    },
    /// Blaschke-product disk models.
    #[command(subcommand)]
    Blaschke(BlaschkeCommand),
}

#[derive(Args, Debug, Clone)]
pub struct CoverArgs {
    #[arg(long, value_enum, default_value_t = Order::Forward)]
    pub order: Order,
    /// Squared upper bound on open radii, `p/q`.
    #[arg(long, default_value = "1/4")]
    pub r_max_sq: String,
    /// Squared lower bound on shrunken radii, `p/q`.
    #[arg(long, default_value = "1/10000")]
    pub r_min_sq: String,
    /// Squared collar constant, `p/q`.
    #[arg(long)]
    pub rho_sq: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Order {
    Forward,
    Reverse,
}

#[derive(Subcommand, Debug)]
pub enum BlaschkeCommand {
    /// Dimension count; all stable (d, k) with k ≤ kmax and d ≤ 3 when no pair is given.
    Dim {
        #[arg(long, requires = "k")]
        d: Option<u32>,
        #[arg(long, requires = "d")]
        k: Option<u32>,
    },
    /// Maslov index by winding.
    Winding {
        /// Zeros as `re,im` pairs separated by `;`.
        #[arg(long, default_value = "")]
        zeros: String,
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
    },
    /// Fiber product of two full charts along `ev_slot = ev_0`.
    Fiber {
        /// `d,k` of the first family.
        #[arg(long)]
        first: String,
        /// `d,k` of the second family.
        #[arg(long)]
        second: String,
        #[arg(long, default_value_t = 1)]
        slot: usize,
        #[arg(long, default_value_t = 64)]
        seeds: u64,
    },
    /// Bubbling of d2 zeros at a boundary point.
    Degenerate {
        #[arg(long)]
        d1: u32,
        #[arg(long)]
        d2: u32,
        /// Angle of the bubbling point.
        #[arg(long, default_value_t = 0.7)]
        w: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run::run(&cli.command, &cli.config) {
        Ok(report) => {
            if let Err(e) = report.write(cli.config.format, cli.config.out.as_deref()) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(2);
            }
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
