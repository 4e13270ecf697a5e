//! Running a configured solve on a parsed instance and summarizing it.

use serde::{Deserialize, Serialize};

use crate::bounds::compute_local_bounds;
use crate::cache::{compute_thresholds, ThresholdCache};
use crate::dd::{compile, extract_cutset, to_dot, CompilationInput, CompilationMode, WidthPolicy};
use crate::fringe::FringeNode;
use crate::model::{adapt_to_maximization, ObjectiveSense, Problem, Relaxation};
use crate::problems::{Instance, ProblemKind};
use crate::solver::{solve, SolveResult, SolveStats, SolverConfig};
use crate::value::{Value, NEG_INFINITY};

/// One line of a benchmark table. Column order is part of the CSV format.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub instance: String,
    pub problem: ProblemKind,
    pub alpha: usize,
    pub width_policy: String,
    pub cutset: String,
    pub cache: bool,
    pub status: String,
    /// Objective in the problem's own sense; empty when no solution was found.
    pub objective: Option<f64>,
    pub gap_pct: f64,
    pub dd_nodes_expanded: u64,
    pub wall_ms: f64,
    pub peak_cache_entries: usize,
    pub peak_fringe_size: usize,
}

impl RunRecord {
    /// The same record with wall-clock time zeroed, for reproducible output.
    pub fn without_timing(mut self) -> Self {
        self.wall_ms = 0.0;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunOutput {
    #[serde(flatten)]
    pub record: RunRecord,
    /// Decision values in variable order.
    pub solution: Option<Vec<i64>>,
    pub stats: SolveStats,
}

impl RunOutput {
    pub fn without_timing(mut self) -> Self {
        self.record = self.record.without_timing();
        self.stats.wall_ms = 0.0;
        self
    }
}

/// Default solver settings for a problem: dynamic width for TSPTW, fixed otherwise.
pub fn default_config(kind: ProblemKind, alpha: usize, cache: bool) -> SolverConfig {
    let config = SolverConfig::new(alpha, cache);
    match kind {
        ProblemKind::Tsptw => config.with_width(WidthPolicy::Dynamic { alpha }),
        _ => config,
    }
}

fn solve_oriented<P: Relaxation>(problem: P, sense: ObjectiveSense, config: SolverConfig) -> SolveResult {
    let model = adapt_to_maximization(problem, sense);
    solve(&model, config)
}

/// Solves `instance` and returns the raw result in the maximizing orientation.
pub fn solve_instance(instance: &Instance, config: SolverConfig) -> SolveResult {
    let sense = instance.kind().sense();
    match instance {
        Instance::Bkp(p) => solve_oriented(p.clone(), sense, config),
        Instance::Tsptw(p) => solve_oriented(p.clone(), sense, config),
        Instance::Psp(p) => solve_oriented(p.clone(), sense, config),
        Instance::Srflp(p) => solve_oriented(p.clone(), sense, config),
    }
}

/// Converts a value of the maximizing core back to the instance's objective.
pub fn natural_objective(instance: &Instance, value: Value) -> f64 {
    let v = match instance.kind().sense() {
        ObjectiveSense::Maximize => value as f64,
        ObjectiveSense::Minimize => -value as f64,
    };
    match instance {
        Instance::Srflp(p) if p.constant_twice() % 2 != 0 => v + 0.5,
        _ => v,
    }
}

fn alpha_of(width: WidthPolicy) -> usize {
    match width {
        WidthPolicy::Fixed { alpha } | WidthPolicy::Dynamic { alpha } => alpha,
        WidthPolicy::Constant { width } => width,
    }
}

pub fn run_instance(id: &str, instance: &Instance, config: SolverConfig) -> RunOutput {
    let result = solve_instance(instance, config);
    let record = RunRecord {
        instance: id.to_string(),
        problem: instance.kind(),
        alpha: alpha_of(config.width),
        width_policy: config.width.name().to_string(),
        cutset: match config.cutset {
            crate::dd::CutsetPolicy::Lel => "lel",
            crate::dd::CutsetPolicy::Frontier => "frontier",
        }
        .to_string(),
        cache: config.cache,
        status: result.status.as_str().to_string(),
        objective: result.incumbent.value.map(|v| natural_objective(instance, v)),
        gap_pct: result.gap(),
        dd_nodes_expanded: result.stats.dd_nodes_expanded,
        wall_ms: result.stats.wall_ms,
        peak_cache_entries: result.stats.cache.peak_entries,
        peak_fringe_size: result.stats.peak_fringe,
    };
    let solution = result
        .incumbent
        .solution
        .as_ref()
        .map(|ds| ds.iter().map(|d| d.value).collect());
    RunOutput { record, solution, stats: result.stats }
}

fn root_dot<P: Relaxation>(problem: P, sense: ObjectiveSense, config: SolverConfig) -> String
where
    P::State: std::fmt::Debug,
{
    let model = adapt_to_maximization(problem, sense);
    let root = FringeNode::root(&model);
    let input = |mode, best_lb| CompilationInput {
        problem: &model,
        root: &root,
        mode,
        width: config.width,
        best_lb,
        cache: None,
        deadline: None,
    };
    let restricted = compile(&input(CompilationMode::Restricted, NEG_INFINITY)).expect("no deadline");
    let lb = restricted.best_value();
    let mut relaxed = compile(&input(CompilationMode::Relaxed, lb)).expect("no deadline");
    compute_local_bounds(&mut relaxed);
    extract_cutset(&mut relaxed, config.cutset);
    if config.cache {
        compute_thresholds(&mut relaxed, lb, &mut ThresholdCache::new(model.nb_variables()));
    }
    to_dot(&relaxed)
}

/// DOT rendering of the root relaxed diagram, compiled against the value of the
/// root restricted diagram, with local bounds, cutset and thresholds filled in.
/// Values are shown in the maximizing orientation (negated for minimization).
pub fn root_diagram_dot(instance: &Instance, config: SolverConfig) -> String {
    let sense = instance.kind().sense();
    match instance {
        Instance::Bkp(p) => root_dot(p.clone(), sense, config),
        Instance::Tsptw(p) => root_dot(p.clone(), sense, config),
        Instance::Psp(p) => root_dot(p.clone(), sense, config),
        Instance::Srflp(p) => root_dot(p.clone(), sense, config),
    }
}
