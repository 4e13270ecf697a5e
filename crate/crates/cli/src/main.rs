use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ddbb::report::default_config;
use ddbb::{CutsetPolicy, GcPolicy, ProblemKind, SolverConfig, WidthPolicy};

mod bench;
mod generate;
mod solve;

#[derive(Parser)]
#[command(name = "ddbb", version, about = "Decision-diagram branch-and-bound solver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print its run record as JSON.
    Solve(solve::SolveArgs),
    /// Solve every instance of a directory for several widths, with and without
    /// the cache, appending one CSV row per run.
    Bench(bench::BenchArgs),
    /// Generate random production-scheduling instances.
    GeneratePsp(generate::GenerateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum WidthArg {
    /// `n * alpha` nodes per layer.
    Fixed,
    /// `n * (depth + 1) * alpha` nodes per layer.
    Dynamic,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CutsetArg {
    Lel,
    Frontier,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GcArg {
    Never,
    OnAdvance,
    EveryPop,
}

/// Solver settings shared by `solve` and `bench`. Unset options follow the
/// problem's defaults: dynamic width for TSPTW, fixed otherwise, and the
/// frontier cutset with the cache or the last exact layer without it.
#[derive(Args, Clone)]
pub struct SolverArgs {
    #[arg(long, value_enum)]
    width_policy: Option<WidthArg>,
    /// Constant layer width; overrides the width factor and policy.
    #[arg(long)]
    width: Option<usize>,
    #[arg(long, value_enum)]
    cutset: Option<CutsetArg>,
    /// When to drop cache entries above the shallowest open subproblem.
    #[arg(long, value_enum, default_value = "on-advance")]
    gc: GcArg,
    /// Wall-clock limit in seconds.
    #[arg(long)]
    time_limit: Option<f64>,
    /// Report a wall time of zero so that outputs are reproducible.
    #[arg(long)]
    no_timing: bool,
}

impl SolverArgs {
    pub fn config(&self, kind: ProblemKind, alpha: usize, cache: bool) -> anyhow::Result<SolverConfig> {
        anyhow::ensure!(alpha >= 1, "the width factor must be at least 1");
        let mut config = default_config(kind, alpha, cache);
        match self.width_policy {
            Some(WidthArg::Fixed) => config.width = WidthPolicy::Fixed { alpha },
            Some(WidthArg::Dynamic) => config.width = WidthPolicy::Dynamic { alpha },
            None => {}
        }
        if let Some(width) = self.width {
            anyhow::ensure!(width >= 1, "the width must be at least 1");
            config.width = WidthPolicy::Constant { width };
        }
        match self.cutset {
            Some(CutsetArg::Lel) => config.cutset = CutsetPolicy::Lel,
            Some(CutsetArg::Frontier) => config.cutset = CutsetPolicy::Frontier,
            None => {}
        }
        config.gc = match self.gc {
            GcArg::Never => GcPolicy::Never,
            GcArg::OnAdvance => GcPolicy::OnAdvance,
            GcArg::EveryPop => GcPolicy::EveryPop,
        };
        if let Some(secs) = self.time_limit {
            let limit = Duration::try_from_secs_f64(secs)
                .map_err(|_| anyhow::anyhow!("invalid time limit {secs}"))?;
            config.time_limit = Some(limit);
        }
        Ok(config)
    }
}

pub fn file_name(path: &std::path::Path) -> String {
    path.file_name().map_or_else(|| path.display().to_string(), |n| n.to_string_lossy().into_owned())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => solve::run(args),
        Command::Bench(args) => bench::run(args),
        Command::GeneratePsp(args) => generate::run(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
