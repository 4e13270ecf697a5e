use std::collections::HashSet;
use std::fs::OpenOptions;
use std::path::{Path, PathBuf};

use anyhow::Context;
use clap::Args;
use ddbb::problems::parse_instance;
use ddbb::{run_instance, ProblemKind, RunRecord};

use crate::{file_name, SolverArgs};

#[derive(Args)]
pub struct BenchArgs {
    /// Directory of instance files.
    #[arg(long)]
    dir: PathBuf,
    /// CSV file receiving the results; existing rows are kept and skipped.
    #[arg(long)]
    output: PathBuf,
    /// Width multipliers to sweep.
    #[arg(long, value_delimiter = ',', default_value = "1,10")]
    alphas: Vec<usize>,
    /// Problem type of every file; inferred per file from its extension when omitted.
    #[arg(long)]
    problem: Option<ProblemKind>,
    #[command(flatten)]
    solver: SolverArgs,
}

type Key = (String, usize, bool);

fn completed(path: &Path) -> anyhow::Result<HashSet<Key>> {
    let mut done = HashSet::new();
    if !path.exists() {
        return Ok(done);
    }
    let mut reader = csv::Reader::from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    for row in reader.deserialize::<RunRecord>() {
        let r = row.with_context(|| format!("malformed row in {}", path.display()))?;
        done.insert((r.instance, r.alpha, r.cache));
    }
    Ok(done)
}

fn instance_files(dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).with_context(|| format!("cannot list {}", dir.display()))? {
        let path = entry?.path();
        let manifest = path.file_stem().is_some_and(|s| s == "manifest");
        if path.is_file() && !manifest {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

pub fn run(args: BenchArgs) -> anyhow::Result<()> {
    let done = completed(&args.output)?;
    let fresh = std::fs::metadata(&args.output).map_or(true, |m| m.len() == 0);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(&args.output)
        .with_context(|| format!("cannot open {}", args.output.display()))?;
    let mut writer = csv::WriterBuilder::new().has_headers(fresh).from_writer(file);

    let (mut written, mut skipped, mut failed) = (0, 0, 0);
    for path in instance_files(&args.dir)? {
        let id = file_name(&path);
        let pending: Vec<(usize, bool)> = args
            .alphas
            .iter()
            .flat_map(|&a| [(a, false), (a, true)])
            .filter(|&(a, c)| !done.contains(&(id.clone(), a, c)))
            .collect();
        skipped += 2 * args.alphas.len() - pending.len();
        if pending.is_empty() {
            continue;
        }
        let instance = match parse_instance(&path, args.problem) {
            Ok(instance) => instance,
            Err(e) => {
                eprintln!("skipping {}: {e}", path.display());
                failed += 1;
                continue;
            }
        };
        for (alpha, cache) in pending {
            let config = args.solver.config(instance.kind(), alpha, cache)?;
            let mut record = run_instance(&id, &instance, config).record;
            if args.solver.no_timing {
                record = record.without_timing();
            }
            writer.serialize(&record)?;
            writer.flush()?;
            written += 1;
        }
    }
    eprintln!("{written} rows written, {skipped} already present, {failed} unreadable instances");
    Ok(())
}
