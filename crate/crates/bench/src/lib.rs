//! Shared fixtures for the criterion benchmarks.

use ddbb::problems::{generate_psp, Bkp, PspGenConfig, Srflp, Tsptw};
use ddbb::{Instance, ProblemKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Medium-sized random instance: large enough that the solver branches,
/// small enough that one solve stays in the millisecond range.
pub fn instance(kind: ProblemKind, seed: u64) -> Instance {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        ProblemKind::Bkp => Instance::Bkp(Bkp::random(&mut rng, 25)),
        ProblemKind::Tsptw => Instance::Tsptw(Tsptw::random(&mut rng, 16, 150)),
        ProblemKind::Psp => {
            let cfg = PspGenConfig { items: 5, periods: 40, density: 0.9, rho: 0.01, seed };
            Instance::Psp(generate_psp(&cfg).expect("generator succeeds at this size"))
        }
        ProblemKind::Srflp => Instance::Srflp(Srflp::random(&mut rng, 9)),
    }
}

pub const KINDS: [ProblemKind; 4] =
    [ProblemKind::Bkp, ProblemKind::Tsptw, ProblemKind::Psp, ProblemKind::Srflp];
