//! `mcrs`: command-line front end for the best-approximation library.

mod commands;
mod input;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::process::ExitCode;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("precision exhausted: {0}")]
    Precision(String),
    #[error("regression refuted: {0}")]
    Refuted(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Refuted(_) => 1,
            CliError::Parse(_) => 2,
            CliError::Domain(_) => 3,
            CliError::Precision(_) => 4,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

/// Settings shared by every subcommand.
#[derive(Args, Clone, Debug)]
pub struct RunConfig {
    /// Bit budget for ball enclosures.
    #[arg(long, global = true, env = "MCRS_PRECISION_BITS", default_value_t = 128,
          value_parser = clap::value_parser!(u32).range(64..))]
    pub precision_bits: u32,
    /// Box bound of the brute-force oracle.
    #[arg(long, global = true, default_value_t = 60)]
    pub oracle_cap: i64,
    /// Ties closer than 2^-k would be reported as undecided.
    #[arg(long, global = true, default_value_t = 128)]
    pub tie_epsilon_exp: u32,
    /// Worker threads; all cores when unset.
    #[arg(long, global = true, env = "MCRS_THREADS")]
    pub threads: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
}

#[derive(Parser, Debug)]
#[command(name = "mcrs", version, about = "Best approximations of MCRS-groups by rational groups")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continued fractions of exact reals.
    #[command(subcommand)]
    Cf(CfCommand),
    /// Best approximations in the plane or in space.
    #[command(subcommand)]
    Approx(ApproxCommand),
    /// Certify a list of claimed best approximations of a 3D direction.
    VerifyTable(VerifyTableArgs),
    /// Run the regression suite over the reference examples.
    VerifyPaper(VerifyPaperArgs),
    /// Sails and geometric continued fractions.
    Sail(SailArgs),
    /// Plot columns over a range of size bounds.
    #[command(subcommand)]
    Sweep(SweepCommand),
}

#[derive(Subcommand, Debug)]
enum CfCommand {
    /// Partial quotients and convergents.
    Expand {
        value: String,
        #[arg(long, default_value_t = 20)]
        max_terms: usize,
        /// Expand from a ball enclosure instead of exact arithmetic.
        #[arg(long)]
        ball: bool,
    },
    /// Best rational approximation with denominator at most N.
    BestInBox {
        value: String,
        #[arg(long = "N")]
        n: u64,
    },
}

#[derive(Args, Debug, Clone)]
pub struct Target2d {
    /// Integer operator, row-major, or `fibonacci`.
    #[arg(long, group = "target2d")]
    pub matrix: Option<String>,
    /// Eigenvectors, e.g. "(1,2) (2,3)".
    #[arg(long, group = "target2d")]
    pub lines: Option<String>,
    /// Slope of the first real line.
    #[arg(long, group = "target2d", requires = "alpha2")]
    pub alpha1: Option<String>,
    #[arg(long, requires = "alpha1")]
    pub alpha2: Option<String>,
    /// Conjugate pair y = (re ± I·im)x, given as "re, im".
    #[arg(long, group = "target2d")]
    pub pair: Option<String>,
}

#[derive(Args, Debug, Clone)]
pub struct Target3d {
    /// Operator name (B, golden2d, E1, E2) or 9 integers.
    #[arg(long, group = "target3d")]
    pub operator: Option<String>,
    /// Direction "a b c" of exact reals, comma separated.
    #[arg(long, group = "target3d")]
    pub direction: Option<String>,
}

#[derive(Subcommand, Debug)]
enum ApproxCommand {
    #[command(name = "2d")]
    TwoD {
        #[command(flatten)]
        target: Target2d,
        #[arg(long = "N")]
        n: i64,
        /// Also run the brute-force oracle and compare.
        #[arg(long)]
        oracle: bool,
    },
    #[command(name = "3d")]
    ThreeD {
        #[command(flatten)]
        target: Target3d,
        #[arg(long = "N")]
        n: i64,
    },
}

#[derive(Args, Debug)]
struct VerifyTableArgs {
    /// B or E1 (golden2d shares the E1 table).
    #[arg(long)]
    operator: String,
    #[arg(long = "N", default_value_t = 1_000_000)]
    n: i64,
}

#[derive(Args, Debug)]
struct VerifyPaperArgs {
    /// Run a single check by id.
    #[arg(long)]
    only: Option<String>,
    /// Size bound for checks that take one.
    #[arg(long = "N")]
    n: Option<i64>,
    /// List the check ids and exit.
    #[arg(long)]
    list: bool,
}

#[derive(Args, Debug)]
struct SailArgs {
    /// Cone rays, e.g. "(1,2) (2,3)".
    #[arg(long, group = "sail_target")]
    cone: Option<String>,
    /// 2x2 integer operator: the four cones of its eigenlines, with periods.
    #[arg(long, group = "sail_target")]
    matrix: Option<String>,
    #[arg(long, default_value_t = 1)]
    k: u32,
    #[arg(long = "box", default_value_t = 100)]
    bound: i64,
}

#[derive(Subcommand, Debug)]
enum SweepCommand {
    /// Columns N, rho, rho·N², sail levels of the first minimizer.
    #[command(name = "2d")]
    TwoD {
        #[command(flatten)]
        target: Target2d,
        #[arg(long, default_value = "10,100,1000,10000")]
        ns: String,
    },
    /// Columns N, rho, rho·N^1.5.
    #[command(name = "3d")]
    ThreeD {
        #[command(flatten)]
        target: Target3d,
        #[arg(long, default_value = "100,1000,10000")]
        ns: String,
    },
}

fn run(cli: Cli) -> Result<String, CliError> {
    let cfg = &cli.config;
    if let Some(k) = cfg.threads {
        // a second initialization can only fail inside tests; the pool size is then already fixed
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k.max(1)).build_global();
    }
    match cli.command {
        Command::Cf(CfCommand::Expand { value, max_terms, ball }) => commands::cf_expand(cfg, &value, max_terms, ball),
        Command::Cf(CfCommand::BestInBox { value, n }) => commands::cf_best_in_box(cfg, &value, n),
        Command::Approx(ApproxCommand::TwoD { target, n, oracle }) => commands::approx2d(cfg, &target, n, oracle),
        Command::Approx(ApproxCommand::ThreeD { target, n }) => commands::approx3d(cfg, &target, n),
        Command::VerifyTable(a) => commands::verify_table(cfg, &a.operator, a.n),
        Command::VerifyPaper(a) if a.list => Ok(commands::list_checks()),
        Command::VerifyPaper(a) => commands::verify_paper(cfg, a.only.as_deref(), a.n),
        Command::Sail(a) => commands::sail(cfg, a.cone.as_deref(), a.matrix.as_deref(), a.k, a.bound),
        Command::Sweep(SweepCommand::TwoD { target, ns }) => commands::sweep2d(cfg, &target, &input::sizes(&ns)?),
        Command::Sweep(SweepCommand::ThreeD { target, ns }) => commands::sweep3d(cfg, &target, &input::sizes(&ns)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(CliError::Refuted(out)) => {
            print!("{out}");
            eprintln!("regression refuted");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.code())
        }
    }
}
