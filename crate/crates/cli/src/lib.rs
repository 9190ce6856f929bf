//! Command-line surface for the obstruction solver and the Kühnel harness.

pub mod commands;
pub mod source;

use std::io::Write;
use std::path::PathBuf;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use vkampen::forms::FormSpec;
use vkampen::sat::Budget;
use vkampen::Ring;

pub use source::ComplexSource;

/// Misuse that clap cannot catch; exits with status 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

#[derive(Parser, Debug)]
#[command(name = "vkampen", version, about = "Van Kampen obstructions relative to a 2k-manifold")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Classical obstruction: is ϑ in the finger-move span, and its z_J values.
    Obstruct(ObstructArgs),
    /// Decide the quadratic system for a complex and an intersection form.
    Solve(SolveArgs),
    /// Maximal n for which the complete k-skeleton passes the necessary conditions.
    Kuhnel(KuhnelArgs),
    /// Closed-form bounds for a (k, β) configuration.
    Bounds(BoundsArgs),
    /// Write the system as DIMACS CNF with XOR lines.
    EmitCnf(EmitCnfArgs),
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Wall-clock limit in seconds.
    #[arg(long, value_name = "SECS")]
    pub time_budget: Option<f64>,
    /// Limit on branching decisions.
    #[arg(long, value_name = "N")]
    pub branch_budget: Option<u64>,
}

impl BudgetArgs {
    pub fn budget(&self) -> Budget {
        Budget {
            time: self.time_budget.map(Duration::from_secs_f64),
            branches: self.branch_budget,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct ObstructArgs {
    /// `delta:n:k` or a JSON complex file.
    #[arg(long)]
    pub complex: ComplexSource,
    #[arg(long, default_value = "Z2")]
    pub ring: Ring,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct SolveArgs {
    #[arg(long)]
    pub complex: ComplexSource,
    #[arg(long, default_value = "trivial")]
    pub form: FormSpec,
    #[arg(long, default_value = "Z2")]
    pub ring: Ring,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub budget: BudgetArgs,
    /// Verify a witness file instead of searching.
    #[arg(long, value_name = "PATH")]
    pub check_witness: Option<PathBuf>,
    /// Over Z: search y with entries in [-B, B].
    #[arg(long, value_name = "B")]
    pub box_bound: Option<u64>,
    /// Enumeration threads; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    pub threads: usize,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct KuhnelArgs {
    #[arg(long)]
    pub k: usize,
    /// A single form; without it, rows for identity and symplectic forms of each β.
    #[arg(long, conflicts_with = "beta")]
    pub form: Option<FormSpec>,
    /// β or a range `a..b` (inclusive) for table rows.
    #[arg(long, value_parser = parse_range)]
    pub beta: Option<(usize, usize)>,
    /// Decide a single n.
    #[arg(long, conflicts_with = "max_n")]
    pub n: Option<u32>,
    /// Search the maximal n (default when --n is absent).
    #[arg(long)]
    pub max_n: bool,
    /// Stop the search at this n.
    #[arg(long, value_name = "N")]
    pub n_cap: Option<u32>,
    /// With --n: write the instance as DIMACS CNF+XOR.
    #[arg(long, value_name = "PATH", requires = "n")]
    pub emit_cnf: Option<PathBuf>,
    /// Allow k ≥ 3.
    #[arg(long)]
    pub extended: bool,
    /// Budget per probed n.
    #[command(flatten)]
    pub budget: BudgetArgs,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct BoundsArgs {
    #[arg(long)]
    pub k: u64,
    #[arg(long, value_parser = parse_range)]
    pub beta: (usize, usize),
    #[arg(long)]
    pub alternating: bool,
    /// Euler characteristic; defaults to 2 + (-1)^k β.
    #[arg(long, allow_hyphen_values = true)]
    pub chi: Option<i64>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Args, Debug, Clone)]
pub struct EmitCnfArgs {
    #[arg(long)]
    pub complex: ComplexSource,
    #[arg(long, default_value = "trivial")]
    pub form: FormSpec,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// DIMACS output path.
    #[arg(long, short)]
    pub output: PathBuf,
    /// Also write the variable map here (it always goes to stdout).
    #[arg(long, value_name = "PATH")]
    pub map: Option<PathBuf>,
    /// Decode an external solver's model into a witness file instead of printing the map.
    #[arg(long, value_name = "MODEL")]
    pub decode: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(usize, usize), String> {
    let parse = |v: &str| v.trim().parse::<usize>().map_err(|_| format!("`{v}` is not a count"));
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (parse(a)?, parse(b.trim_start_matches('='))?);
            if a > b {
                return Err(format!("empty range {s}"));
            }
            Ok((a, b))
        }
        None => parse(s).map(|v| (v, v)),
    }
}

/// Runs a parsed command, writing its report to `out`.
pub fn run(cli: Cli, out: &mut dyn Write) -> anyhow::Result<()> {
    match cli.command {
        Command::Obstruct(args) => commands::obstruct(&args, out),
        Command::Solve(args) => commands::solve(&args, out),
        Command::Kuhnel(args) => commands::kuhnel(&args, out),
        Command::Bounds(args) => commands::bounds(&args, out),
        Command::EmitCnf(args) => commands::emit_cnf(&args, out),
    }
}
