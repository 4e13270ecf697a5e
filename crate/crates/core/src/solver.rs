//! Branch-and-bound over decision diagrams.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::bounds::{combined_upper_bound, compute_local_bounds};
use crate::cache::{
    compute_thresholds, CacheStats, FringeCheck, GcPolicy, ThresholdCache,
};
use crate::dd::{
    compile, extract_cutset, CompilationInput, CompilationMode, CutsetPolicy, DecisionDiagram,
    WidthPolicy,
};
use crate::fringe::{Fringe, FringeNode};
use crate::model::{replay, Decision, Relaxation};
use crate::path::Path;
use crate::value::{add, Value, INFINITY, NEG_INFINITY};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub width: WidthPolicy,
    pub cutset: CutsetPolicy,
    pub cache: bool,
    pub gc: GcPolicy,
    pub time_limit: Option<Duration>,
}

impl SolverConfig {
    /// Fixed width `n * alpha`; the cutset follows the cache setting
    /// (frontier with the cache, last exact layer without it).
    pub fn new(alpha: usize, cache: bool) -> Self {
        SolverConfig {
            width: WidthPolicy::Fixed { alpha },
            cutset: if cache { CutsetPolicy::Frontier } else { CutsetPolicy::Lel },
            cache,
            gc: GcPolicy::OnAdvance,
            time_limit: None,
        }
    }

    pub fn with_width(mut self, width: WidthPolicy) -> Self {
        self.width = width;
        self
    }

    pub fn with_cutset(mut self, cutset: CutsetPolicy) -> Self {
        self.cutset = cutset;
        self
    }

    pub fn with_gc(mut self, gc: GcPolicy) -> Self {
        self.gc = gc;
        self
    }

    pub fn with_time_limit(mut self, limit: Option<Duration>) -> Self {
        self.time_limit = limit;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Optimal,
    TimeLimit,
    /// The search completed without finding any feasible solution.
    Infeasible,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Optimal => "optimal",
            Status::TimeLimit => "time_limit",
            Status::Infeasible => "infeasible",
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Incumbent {
    pub value: Option<Value>,
    pub solution: Option<Vec<Decision>>,
}

/// A new incumbent value, stamped with the number of expanded DD nodes at the time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct IncumbentUpdate {
    pub nodes_expanded: u64,
    pub value: Value,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SolveStats {
    pub dd_nodes_expanded: u64,
    pub fringe_pops: u64,
    pub peak_fringe: usize,
    pub cache: CacheStats,
    pub restricted_compilations: u64,
    pub relaxed_compilations: u64,
    pub wall_ms: f64,
    pub trajectory: Vec<IncumbentUpdate>,
    /// Best bound on the optimum, in the maximizing orientation.
    pub final_bound: Option<Value>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub status: Status,
    pub incumbent: Incumbent,
    pub stats: SolveStats,
}

impl SolveResult {
    /// Relative gap in percent between the incumbent and the final bound.
    pub fn gap(&self) -> f64 {
        if self.status != Status::TimeLimit {
            return 0.0;
        }
        optimality_gap(self.incumbent.value, self.stats.final_bound)
    }
}

/// `(bound - incumbent) / |bound| * 100`, clamped to `[0, 100]`.
/// Without an incumbent the gap is 100.
pub fn optimality_gap(incumbent: Option<Value>, bound: Option<Value>) -> f64 {
    let Some(lb) = incumbent else {
        return 100.0;
    };
    let Some(bb) = bound else {
        return 0.0;
    };
    if bb <= lb {
        return 0.0;
    }
    if bb == INFINITY || bb == 0 {
        return 100.0;
    }
    let gap = (bb as f64 - lb as f64) / (bb as f64).abs() * 100.0;
    gap.clamp(0.0, 100.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepOutcome {
    /// A node was processed (or discarded); more work remains.
    Progress,
    Done(Status),
}

pub struct Solver<'a, P: Relaxation> {
    problem: &'a P,
    config: SolverConfig,
    fringe: Fringe<P::State>,
    cache: ThresholdCache<P::State>,
    incumbent: Incumbent,
    stats: SolveStats,
    started: Instant,
    deadline: Option<Instant>,
    gc_floor: usize,
    status: Option<Status>,
}

impl<'a, P: Relaxation> Solver<'a, P> {
    pub fn new(problem: &'a P, config: SolverConfig) -> Self {
        let n = problem.nb_variables();
        let started = Instant::now();
        let mut fringe = Fringe::new(n);
        fringe.push(FringeNode::root(problem));
        Solver {
            problem,
            config,
            fringe,
            cache: ThresholdCache::new(n),
            incumbent: Incumbent::default(),
            stats: SolveStats::default(),
            started,
            deadline: config.time_limit.map(|d| started + d),
            gc_floor: 0,
            status: None,
        }
    }

    pub fn incumbent(&self) -> &Incumbent {
        &self.incumbent
    }

    pub fn lower_bound(&self) -> Value {
        self.incumbent.value.unwrap_or(NEG_INFINITY)
    }

    pub fn cache(&self) -> &ThresholdCache<P::State> {
        &self.cache
    }

    pub fn cache_mut(&mut self) -> &mut ThresholdCache<P::State> {
        &mut self.cache
    }

    pub fn fringe_len(&self) -> usize {
        self.fringe.len()
    }

    pub fn stats(&self) -> &SolveStats {
        &self.stats
    }

    fn timed_out(&self) -> bool {
        self.deadline.is_some_and(|d| Instant::now() >= d)
    }

    fn offer(&mut self, value: Value, path: Path) {
        if self.incumbent.value.is_some_and(|v| v >= value) {
            return;
        }
        let solution = path.to_vec();
        debug_assert_eq!(solution.len(), self.problem.nb_variables());
        debug_assert_eq!(replay(self.problem, &solution), Some(value));
        self.incumbent = Incumbent { value: Some(value), solution: Some(solution) };
        self.stats.trajectory.push(IncumbentUpdate {
            nodes_expanded: self.stats.dd_nodes_expanded,
            value,
        });
    }

    fn harvest(&mut self, dd: &DecisionDiagram<P::State>, id: Option<usize>) {
        if let Some(id) = id {
            let value = dd.node(id).value_top;
            if self.incumbent.value.map_or(true, |v| value > v) {
                let mut memo = HashMap::new();
                let path = dd.full_path(id, &mut memo);
                self.offer(value, path);
            }
        }
    }

    fn collect_gc(&mut self, popped_depth: usize) {
        if !self.config.cache || self.config.gc == GcPolicy::Never {
            return;
        }
        let first_active = self.fringe.min_depth().map_or(popped_depth, |d| d.min(popped_depth));
        match self.config.gc {
            GcPolicy::EveryPop => {
                self.cache.gc(first_active);
            }
            GcPolicy::OnAdvance if first_active > self.gc_floor => {
                self.cache.gc(first_active);
                self.gc_floor = first_active;
            }
            _ => {}
        }
    }

    fn compile(
        &self,
        node: &FringeNode<P::State>,
        mode: CompilationMode,
        lb: Value,
    ) -> Option<DecisionDiagram<P::State>> {
        let input = CompilationInput {
            problem: self.problem,
            root: node,
            mode,
            width: self.config.width,
            best_lb: lb,
            cache: self.config.cache.then_some(&self.cache),
            deadline: self.deadline,
        };
        compile(&input).ok()
    }

    fn finish(&mut self, status: Status) -> StepOutcome {
        self.status = Some(status);
        StepOutcome::Done(status)
    }

    /// Processes one fringe node.
    pub fn step(&mut self) -> StepOutcome {
        if let Some(status) = self.status {
            return StepOutcome::Done(status);
        }
        if self.timed_out() {
            return self.finish(Status::TimeLimit);
        }
        let Some(node) = self.fringe.pop() else {
            let status =
                if self.incumbent.value.is_some() { Status::Optimal } else { Status::Infeasible };
            return self.finish(status);
        };
        self.stats.fringe_pops += 1;
        self.collect_gc(node.depth);

        if node.bound() <= self.lower_bound() {
            return StepOutcome::Progress;
        }
        if self.config.cache
            && self.cache.fringe_check(node.depth, &node.state, node.value) == FringeCheck::Skip
        {
            self.cache.record_fringe_skip();
            return StepOutcome::Progress;
        }

        let lb = self.lower_bound();
        let Some(restricted) = self.compile(&node, CompilationMode::Restricted, lb) else {
            self.fringe.push(node);
            return self.finish(Status::TimeLimit);
        };
        self.stats.restricted_compilations += 1;
        self.stats.dd_nodes_expanded += restricted.expanded_nodes() as u64;
        self.cache.record_compile_prunes(restricted.cache_prunes());
        self.harvest(&restricted, restricted.best_terminal());
        if restricted.is_exact() {
            return StepOutcome::Progress;
        }
        drop(restricted);

        let lb = self.lower_bound();
        let Some(mut relaxed) = self.compile(&node, CompilationMode::Relaxed, lb) else {
            self.fringe.push(node);
            return self.finish(Status::TimeLimit);
        };
        self.stats.relaxed_compilations += 1;
        self.stats.dd_nodes_expanded += relaxed.expanded_nodes() as u64;
        self.cache.record_compile_prunes(relaxed.cache_prunes());
        self.harvest(&relaxed, relaxed.best_exact_terminal());

        compute_local_bounds(&mut relaxed);
        let cutset = extract_cutset(&mut relaxed, self.config.cutset);
        if self.config.cache {
            compute_thresholds(&mut relaxed, lb, &mut self.cache);
        }
        let mut memo = HashMap::new();
        for id in cutset {
            let n = relaxed.node(id);
            let ub = combined_upper_bound(n, lb);
            if add(n.value_top, ub) <= self.lower_bound() {
                continue;
            }
            let child = FringeNode {
                state: n.state.clone(),
                depth: n.depth,
                value: n.value_top,
                ub,
                path: relaxed.full_path(id, &mut memo),
            };
            self.fringe.push(child);
        }
        self.stats.peak_fringe = self.stats.peak_fringe.max(self.fringe.peak_len());
        StepOutcome::Progress
    }

    /// Runs to completion (or until the time limit).
    pub fn run(mut self) -> SolveResult {
        let status = loop {
            if let StepOutcome::Done(status) = self.step() {
                break status;
            }
        };
        self.into_result(status)
    }

    fn into_result(mut self, status: Status) -> SolveResult {
        self.stats.peak_fringe = self.stats.peak_fringe.max(self.fringe.peak_len());
        self.stats.cache = self.cache.stats();
        self.stats.wall_ms = self.started.elapsed().as_secs_f64() * 1000.0;
        self.stats.final_bound = match status {
            Status::Optimal => self.incumbent.value,
            Status::Infeasible => None,
            Status::TimeLimit => {
                let open = self.fringe.best_bound();
                match (open, self.incumbent.value) {
                    (Some(b), Some(v)) => Some(b.max(v)),
                    (b, v) => b.or(v),
                }
            }
        };
        SolveResult { status, incumbent: self.incumbent, stats: self.stats }
    }
}

pub fn solve<P: Relaxation>(problem: &P, config: SolverConfig) -> SolveResult {
    Solver::new(problem, config).run()
}
