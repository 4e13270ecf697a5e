use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use ddbb::problems::parse_instance;
use ddbb::report::root_diagram_dot;
use ddbb::{run_instance, Instance, ProblemKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::{file_name, SolverArgs, Switch};

#[derive(Args)]
pub struct SolveArgs {
    /// Problem type; inferred from the file extension when omitted.
    #[arg(long)]
    problem: Option<ProblemKind>,
    /// Instance file.
    #[arg(long, conflicts_with = "random")]
    input: Option<PathBuf>,
    /// Solve a small random instance instead of reading one.
    #[arg(long, requires = "problem")]
    random: bool,
    /// Seed of the random instance.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Width multiplier alpha.
    #[arg(long, default_value_t = 1)]
    width_factor: usize,
    #[arg(long, value_enum, default_value = "on")]
    cache: Switch,
    /// Write the root relaxed diagram in DOT format to this file.
    #[arg(long)]
    dump_dd: Option<PathBuf>,
    #[command(flatten)]
    solver: SolverArgs,
}

pub fn run(args: SolveArgs) -> anyhow::Result<()> {
    let (id, instance) = match (&args.input, args.random) {
        (Some(path), _) => {
            let instance = parse_instance(path, args.problem)
                .with_context(|| format!("cannot load {}", path.display()))?;
            (file_name(path), instance)
        }
        (None, true) => {
            let kind = args.problem.expect("required by clap");
            let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
            (format!("random-{kind}-{}", args.seed), Instance::random(kind, &mut rng))
        }
        (None, false) => bail!("pass --input FILE or --random"),
    };
    let config = args.solver.config(instance.kind(), args.width_factor, args.cache == Switch::On)?;
    if let Some(path) = &args.dump_dd {
        std::fs::write(path, root_diagram_dot(&instance, config))
            .with_context(|| format!("cannot write {}", path.display()))?;
    }
    let mut output = run_instance(&id, &instance, config);
    if args.solver.no_timing {
        output = output.without_timing();
    }
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{}", serde_json::to_string_pretty(&output)?)?;
    Ok(())
}
