//! Random production-scheduling instances.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::psp::Psp;
use super::text::{invalid, InstanceError};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PspGenConfig {
    pub items: usize,
    pub periods: usize,
    /// Number of demands divided by the number of periods.
    pub density: f64,
    /// Weight of stocking costs relative to changeover costs.
    pub rho: f64,
    pub seed: u64,
}

pub const GRID_ITEMS: [usize; 3] = [5, 7, 10];
pub const GRID_PERIODS: [usize; 4] = [50, 100, 150, 200];
pub const GRID_DENSITY: [f64; 3] = [0.9, 0.95, 1.0];
pub const GRID_RHO: [f64; 3] = [0.001, 0.01, 0.1];
pub const GRID_INSTANCES_PER_POINT: usize = 5;

impl PspGenConfig {
    pub fn demand_count(&self) -> usize {
        // the epsilon keeps 0.95 * 100 from rounding down to 94
        (self.density * self.periods as f64 + 1e-9).floor() as usize
    }

    /// File stem describing the parameters and the instance index.
    pub fn file_stem(&self, index: usize) -> String {
        format!(
            "psp_n{}_h{}_d{}_r{}_{}",
            self.items, self.periods, self.density, self.rho, index
        )
    }
}

/// Every parameter combination of the standard grid, `count` instances each,
/// with seeds derived from `base_seed` and the position in the grid.
pub fn grid(count: usize, base_seed: u64) -> Vec<(PspGenConfig, usize)> {
    grid_over(&GRID_ITEMS, &GRID_PERIODS, &GRID_DENSITY, &GRID_RHO, count, base_seed)
}

/// Cartesian product of the given parameter values, `count` instances per
/// combination. The `k`-th instance produced gets seed `base_seed + k`.
pub fn grid_over(
    items: &[usize],
    periods: &[usize],
    densities: &[f64],
    rhos: &[f64],
    count: usize,
    base_seed: u64,
) -> Vec<(PspGenConfig, usize)> {
    let mut out = Vec::new();
    for &items in items {
        for &periods in periods {
            for &density in densities {
                for &rho in rhos {
                    for index in 0..count {
                        let seed = base_seed.wrapping_add(out.len() as u64);
                        out.push((PspGenConfig { items, periods, density, rho, seed }, index));
                    }
                }
            }
        }
    }
    out
}

fn uniform_cost<R: Rng>(rng: &mut R, weight: f64) -> i64 {
    let lo = (weight * 5000.0).round() as i64;
    let hi = (weight * 15000.0).round() as i64;
    rng.gen_range(lo..=hi)
}

/// True when, for every period `p`, the demands due by `p` fit in `p + 1` periods.
pub fn is_schedulable(demand: &[Vec<i64>]) -> bool {
    let mut cumulative = 0;
    demand.iter().enumerate().all(|(p, row)| {
        cumulative += row.iter().sum::<i64>();
        cumulative <= p as i64 + 1
    })
}

pub fn generate_psp(cfg: &PspGenConfig) -> Result<Psp, InstanceError> {
    if cfg.items == 0 || cfg.periods == 0 {
        return Err(invalid("items and periods must be positive"));
    }
    if !(0.0..=1.0).contains(&cfg.density) || !(0.0..=1.0).contains(&cfg.rho) {
        return Err(invalid("density and rho must lie in [0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let n = cfg.items;
    let stocking: Vec<i64> = (0..n).map(|_| uniform_cost(&mut rng, cfg.rho)).collect();
    let changeover: Vec<Vec<i64>> = (0..n)
        .map(|a| {
            (0..n)
                .map(|b| if a == b { 0 } else { uniform_cost(&mut rng, 1.0 - cfg.rho) })
                .collect()
        })
        .collect();

    let target = cfg.demand_count();
    let mut pairs: Vec<(usize, usize)> =
        (0..cfg.periods).flat_map(|p| (0..n).map(move |i| (p, i))).collect();
    pairs.shuffle(&mut rng);
    let mut demand = vec![vec![0i64; n]; cfg.periods];
    // prefix[p] = demands due at or before p
    let mut prefix = vec![0usize; cfg.periods];
    let mut placed = 0;
    for (p, i) in pairs {
        if placed == target {
            break;
        }
        if (p..cfg.periods).any(|q| prefix[q] + 1 > q + 1) {
            continue;
        }
        demand[p][i] = 1;
        prefix[p..].iter_mut().for_each(|c| *c += 1);
        placed += 1;
    }
    if placed < target {
        return Err(invalid(format!("could only place {placed} of {target} demands")));
    }
    Psp::new(cfg.periods, changeover, stocking, demand)
}
