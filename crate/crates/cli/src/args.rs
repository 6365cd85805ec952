use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "poaforge",
    version,
    about = "First-price auction price-of-anarchy toolkit",
    propagate_version = true
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Check every instance invariant; nonzero exit with a report when any fails.
    Validate {
        /// Instance file or builtin name (see `--help` of `poa`).
        #[arg(long)]
        instance: String,
        /// Pieces minus one for discretized builtins.
        #[arg(long, default_value_t = 500)]
        m: usize,
    },
    /// Print the most specific class of an instance.
    Classify {
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 500)]
        m: usize,
    },
    /// Evaluate FPA, OPT and their ratio exactly (closed form), with an
    /// optional quadrature cross-check.
    Poa {
        /// Instance file, or `builtin:worstcase-discrete` (twin-ceiling
        /// family member, knobs `--lambda`/`--mu`) or `builtin:hht`
        /// (two-curve fixture, knob `--lambda`).
        #[arg(long)]
        instance: String,
        #[arg(long, default_value_t = 2000)]
        m: usize,
        /// Supremum bid for parametric builtins (defaults per builtin).
        #[arg(long)]
        lambda: Option<f64>,
        /// Family parameter for `builtin:worstcase-discrete`.
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Also run the independent quadrature oracle and report both.
        #[arg(long)]
        oracle: bool,
    },
    /// Run the reduction pipeline to a twin-ceiling instance with a trace.
    Reduce {
        /// Input instance JSON.
        #[arg(long = "in")]
        input: PathBuf,
        /// Output (twin-ceiling) instance JSON.
        #[arg(long)]
        out: PathBuf,
        /// Reduction trace JSON.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Optimize the worst-case family; optionally emit the parameter sweep.
    WorstCase {
        /// Coarse grid resolution for the optimizer and the sweep.
        #[arg(long, default_value_t = 200)]
        grid: usize,
        /// Emit the (lambda, mu, h, objective) sweep in this format.
        #[arg(long, value_enum)]
        emit: Option<EmitFormat>,
        /// Sweep output path (required with `--emit`).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Long-form CSV sweeps for external plotting.
    Sweep {
        #[arg(long, value_enum, default_value_t = SweepKind::Objective)]
        kind: SweepKind,
        /// Grid resolution for the objective sweep.
        #[arg(long, default_value_t = 30)]
        grid: usize,
        /// Comma-separated piece counts for the discretization sweep.
        #[arg(long, default_value = "250,500,1000,2000")]
        m_list: String,
        /// Supremum bid (discretization sweep).
        #[arg(long)]
        lambda: Option<f64>,
        /// Family parameter (discretization sweep).
        #[arg(long, default_value_t = 1.0)]
        mu: f64,
        /// Output CSV path (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Seeded Monte Carlo welfare simulation of a builtin finite instance.
    Simulate {
        /// `builtin:example1|example2|example3|single|hht|worstcase`.
        #[arg(long)]
        instance: String,
        /// Low-impact bidder count for `hht` and `worstcase`.
        #[arg(long, default_value_t = 100)]
        n: usize,
        /// Sample count; scientific notation accepted (`1e6`).
        #[arg(long, default_value = "1e6", value_parser = parse_samples)]
        samples: u64,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = EmitFormat::Json)]
        format: EmitFormat,
    },
    /// Full reproduction of the tight bound: optimize, cross-check the
    /// integral route, discretize, reduce, build the finite instance,
    /// simulate, and print a summary table.
    Repro {
        /// Smaller grids and sample counts.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SweepKind {
    /// (lambda, mu, h, objective, integral) over the feasible region.
    Objective,
    /// Discretized twin-ceiling ratio against the piece count.
    Discretization,
}

fn parse_samples(s: &str) -> Result<u64, String> {
    let v: f64 = s.parse().map_err(|_| format!("not a number: {s}"))?;
    if !(v >= 1.0 && v.is_finite() && v <= 1e12) {
        return Err(format!("sample count out of range: {s}"));
    }
    Ok(v as u64)
}
