//! Concrete models and their instance files.

pub mod bkp;
pub mod generate;
pub mod psp;
pub mod srflp;
mod text;
pub mod tsptw;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use bkp::Bkp;
pub use generate::{generate_psp, grid, grid_over, PspGenConfig};
pub use psp::Psp;
pub use srflp::Srflp;
pub use text::InstanceError;
pub use tsptw::Tsptw;

use crate::model::ObjectiveSense;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProblemKind {
    Bkp,
    Tsptw,
    Psp,
    Srflp,
}

impl ProblemKind {
    pub const ALL: [ProblemKind; 4] =
        [ProblemKind::Bkp, ProblemKind::Tsptw, ProblemKind::Psp, ProblemKind::Srflp];

    pub fn name(&self) -> &'static str {
        match self {
            ProblemKind::Bkp => "bkp",
            ProblemKind::Tsptw => "tsptw",
            ProblemKind::Psp => "psp",
            ProblemKind::Srflp => "srflp",
        }
    }

    pub fn sense(&self) -> ObjectiveSense {
        match self {
            ProblemKind::Bkp => ObjectiveSense::Maximize,
            _ => ObjectiveSense::Minimize,
        }
    }

    /// Guesses the problem from a file extension (`.bkp`, `.tsptw`, `.psp`, `.srflp`).
    pub fn from_path(path: &Path) -> Option<Self> {
        path.extension()?.to_str()?.parse().ok()
    }
}

impl fmt::Display for ProblemKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "bkp" => Ok(ProblemKind::Bkp),
            "tsptw" => Ok(ProblemKind::Tsptw),
            "psp" => Ok(ProblemKind::Psp),
            "srflp" => Ok(ProblemKind::Srflp),
            other => Err(format!("unknown problem `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Bkp(Bkp),
    Tsptw(Tsptw),
    Psp(Psp),
    Srflp(Srflp),
}

impl Instance {
    pub fn kind(&self) -> ProblemKind {
        match self {
            Instance::Bkp(_) => ProblemKind::Bkp,
            Instance::Tsptw(_) => ProblemKind::Tsptw,
            Instance::Psp(_) => ProblemKind::Psp,
            Instance::Srflp(_) => ProblemKind::Srflp,
        }
    }

    pub fn nb_variables(&self) -> usize {
        match self {
            Instance::Bkp(p) => p.len(),
            Instance::Tsptw(p) => p.len(),
            Instance::Psp(p) => p.horizon,
            Instance::Srflp(p) => p.len(),
        }
    }

    pub fn parse(kind: ProblemKind, text: &str) -> Result<Self, InstanceError> {
        Ok(match kind {
            ProblemKind::Bkp => Instance::Bkp(Bkp::parse(text)?),
            ProblemKind::Tsptw => Instance::Tsptw(Tsptw::parse(text)?),
            ProblemKind::Psp => Instance::Psp(Psp::parse(text)?),
            ProblemKind::Srflp => Instance::Srflp(Srflp::parse(text)?),
        })
    }

    pub fn to_text(&self) -> String {
        match self {
            Instance::Bkp(p) => p.to_text(),
            Instance::Tsptw(p) => p.to_text(),
            Instance::Psp(p) => p.to_text(),
            Instance::Srflp(p) => p.to_text(),
        }
    }

    /// Small random instance, sized for exhaustive verification.
    pub fn random<R: Rng>(kind: ProblemKind, rng: &mut R) -> Self {
        match kind {
            ProblemKind::Bkp => {
                let n = rng.gen_range(1..=10);
                Instance::Bkp(Bkp::random(rng, n))
            }
            ProblemKind::Tsptw => {
                let n = rng.gen_range(2..=8);
                let slack = rng.gen_range(10..=60);
                Instance::Tsptw(Tsptw::random(rng, n, slack))
            }
            ProblemKind::Psp => {
                let items = rng.gen_range(1..=3);
                let periods = rng.gen_range(2..=10);
                let density = [0.5, 0.7, 0.9, 1.0][rng.gen_range(0..4)];
                let rho = [0.001, 0.01, 0.1, 0.5][rng.gen_range(0..4)];
                let cfg = PspGenConfig { items, periods, density, rho, seed: rng.gen() };
                Instance::Psp(generate_psp(&cfg).expect("small instances are always generated"))
            }
            ProblemKind::Srflp => {
                let n = rng.gen_range(2..=8);
                Instance::Srflp(Srflp::random(rng, n))
            }
        }
    }
}

/// Reads an instance file. Without an explicit kind the file extension decides.
pub fn parse_instance(path: &Path, kind: Option<ProblemKind>) -> Result<Instance, InstanceError> {
    let kind = kind.or_else(|| ProblemKind::from_path(path)).ok_or_else(|| {
        InstanceError::Invalid(format!(
            "cannot infer the problem type of {}; pass it explicitly",
            path.display()
        ))
    })?;
    let text = std::fs::read_to_string(path).map_err(|source| InstanceError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Instance::parse(kind, &text)
}
