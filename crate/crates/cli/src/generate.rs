use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::Args;
use ddbb::problems::generate::GRID_INSTANCES_PER_POINT;
use ddbb::problems::{generate_psp, grid, grid_over};
use serde::Serialize;

#[derive(Args)]
pub struct GenerateArgs {
    /// Output directory; must not exist unless --force is given.
    #[arg(long)]
    out: PathBuf,
    /// Every combination of 5/7/10 items, 50/100/150/200 periods, densities
    /// 0.9/0.95/1 and rho 0.001/0.01/0.1.
    #[arg(long, conflicts_with_all = ["items", "periods", "density", "rho"])]
    paper_grid: bool,
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_grid")]
    items: Vec<usize>,
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_grid")]
    periods: Vec<usize>,
    /// Demands per period, rounded down.
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_grid")]
    density: Vec<f64>,
    /// Stocking to changeover cost ratio.
    #[arg(long, value_delimiter = ',', required_unless_present = "paper_grid")]
    rho: Vec<f64>,
    /// Instances per parameter combination.
    #[arg(long, default_value_t = GRID_INSTANCES_PER_POINT)]
    count: usize,
    /// Seed of the first instance; the following ones count up from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Write into an existing directory, overwriting files with the same name.
    #[arg(long)]
    force: bool,
}

#[derive(Serialize)]
struct ManifestRow {
    file: String,
    items: usize,
    periods: usize,
    density: f64,
    rho: f64,
    seed: u64,
    index: usize,
}

pub fn run(args: GenerateArgs) -> anyhow::Result<()> {
    if args.out.exists() && !args.force {
        bail!("{} already exists; pass --force to write into it", args.out.display());
    }
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("cannot create {}", args.out.display()))?;
    let points = if args.paper_grid {
        grid(args.count, args.seed)
    } else {
        grid_over(&args.items, &args.periods, &args.density, &args.rho, args.count, args.seed)
    };
    let mut manifest = csv::Writer::from_path(args.out.join("manifest.csv"))?;
    for (cfg, index) in &points {
        let psp = generate_psp(cfg).with_context(|| format!("cannot generate {cfg:?}"))?;
        let file = format!("{}.psp", cfg.file_stem(*index));
        std::fs::write(args.out.join(&file), psp.to_text())?;
        manifest.serialize(ManifestRow {
            file,
            items: cfg.items,
            periods: cfg.periods,
            density: cfg.density,
            rho: cfg.rho,
            seed: cfg.seed,
            index: *index,
        })?;
    }
    manifest.flush()?;
    eprintln!("{} instances written to {}", points.len(), args.out.display());
    Ok(())
}
