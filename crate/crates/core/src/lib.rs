//! Branch-and-bound with decision diagrams, extended with a cache of expansion
//! thresholds that prunes states already proven dominated or suboptimal.
//!
//! A problem is described by a dynamic-programming model ([`Problem`]) and a
//! merge operator ([`Relaxation`]). The [`Solver`] alternates restricted
//! diagrams (feasible solutions) and relaxed diagrams (bounds and exact
//! cutsets), and records thresholds in a [`ThresholdCache`] to avoid exploring
//! the same state twice.

pub mod bounds;
pub mod cache;
pub mod dd;
pub mod fringe;
pub mod model;
pub mod path;
pub mod problems;
pub mod report;
pub mod solver;
pub mod value;

pub use cache::{CacheEntry, CacheStats, GcPolicy, ThresholdCache};
pub use dd::{CompilationMode, CutsetPolicy, DecisionDiagram, WidthPolicy};
pub use fringe::FringeNode;
pub use model::{adapt_to_maximization, Decision, ObjectiveSense, Oriented, Problem, Relaxation};
pub use path::Path;
pub use problems::{Instance, InstanceError, ProblemKind};
pub use report::{run_instance, RunOutput, RunRecord};
pub use solver::{solve, SolveResult, SolveStats, Solver, SolverConfig, Status};
pub use value::{Value, INFINITY, NEG_INFINITY};
