//! Structural checks on compiled diagrams, generic over the model.
//!
//! Every check returns `Err(description)` on the first violation so that the
//! acceptance runner can report it on one line.

#![allow(dead_code)]

use std::collections::HashMap;
use std::hash::Hash;

use ddbb::bounds::compute_local_bounds;
use ddbb::cache::compute_thresholds;
use ddbb::dd::{compile, extract_cutset, CompilationInput, NodeId};
use ddbb::value::{add, sub};
use ddbb::*;

/// Applies `$body` to the instance's model, oriented for maximization.
#[macro_export]
macro_rules! with_model {
    ($instance:expr, |$m:ident| $body:expr) => {{
        let instance: &ddbb::Instance = $instance;
        let sense = instance.kind().sense();
        match instance {
            ddbb::Instance::Bkp(p) => {
                let $m = ddbb::adapt_to_maximization(p.clone(), sense);
                $body
            }
            ddbb::Instance::Tsptw(p) => {
                let $m = ddbb::adapt_to_maximization(p.clone(), sense);
                $body
            }
            ddbb::Instance::Psp(p) => {
                let $m = ddbb::adapt_to_maximization(p.clone(), sense);
                $body
            }
            ddbb::Instance::Srflp(p) => {
                let $m = ddbb::adapt_to_maximization(p.clone(), sense);
                $body
            }
        }
    }};
}

/// Memoized best completion of every state, by plain recursion on the model.
pub struct Completions<'a, P: Problem> {
    problem: &'a P,
    memo: HashMap<(usize, P::State), Option<Value>>,
}

impl<'a, P: Problem> Completions<'a, P> {
    pub fn new(problem: &'a P) -> Self {
        Completions { problem, memo: HashMap::new() }
    }

    /// Best value collectable from `state` at `depth`; `None` if no completion is feasible.
    pub fn best(&mut self, state: &P::State, depth: usize) -> Option<Value> {
        if depth == self.problem.nb_variables() {
            return Some(0);
        }
        if let Some(&v) = self.memo.get(&(depth, state.clone())) {
            return v;
        }
        let mut best: Option<Value> = None;
        for x in self.problem.domain(state, depth) {
            let d = Decision { variable: depth, value: x };
            let next = self.problem.transition(state, d);
            if let Some(rest) = self.best(&next, depth + 1) {
                let v = add(self.problem.transition_value(state, d), rest);
                best = Some(best.map_or(v, |b| b.max(v)));
            }
        }
        self.memo.insert((depth, state.clone()), best);
        best
    }

    pub fn optimum(&mut self) -> Option<Value> {
        let root = self.problem.root_state();
        self.best(&root, 0).map(|v| add(self.problem.root_value(), v))
    }

    /// Every state reachable from the root together with its depth.
    pub fn reachable(&self) -> Vec<(usize, P::State)> {
        let mut layer = vec![self.problem.root_state()];
        let mut out = Vec::new();
        for depth in 0..=self.problem.nb_variables() {
            layer.sort();
            layer.dedup();
            out.extend(layer.iter().cloned().map(|s| (depth, s)));
            if depth == self.problem.nb_variables() {
                break;
            }
            let mut next = Vec::new();
            for s in &layer {
                for x in self.problem.domain(s, depth) {
                    next.push(self.problem.transition(s, Decision { variable: depth, value: x }));
                }
            }
            layer = next;
        }
        out
    }
}

pub fn compile_from<P: Relaxation>(
    problem: &P,
    root: &FringeNode<P::State>,
    mode: CompilationMode,
    width: usize,
    lb: Value,
    cache: Option<&ThresholdCache<P::State>>,
) -> DecisionDiagram<P::State> {
    let input = CompilationInput {
        problem,
        root,
        mode,
        width: WidthPolicy::Constant { width },
        best_lb: lb,
        cache,
        deadline: None,
    };
    compile(&input).expect("no deadline")
}

fn fringe_node<P: Problem>(dd: &DecisionDiagram<P::State>, id: NodeId) -> FringeNode<P::State> {
    let n = dd.node(id);
    let mut memo = HashMap::new();
    FringeNode {
        state: n.state.clone(),
        depth: n.depth,
        value: n.value_top,
        ub: INFINITY,
        path: dd.full_path(id, &mut memo),
    }
}

/// Relaxed best >= subproblem optimum >= restricted best, at the root and at
/// every frontier-cutset node of the root relaxation.
pub fn check_bound_sandwich<P: Relaxation>(problem: &P, width: usize) -> Result<(), String> {
    let mut completions = Completions::new(problem);
    let root = FringeNode::root(problem);
    let mut roots = vec![root.clone()];
    let mut relaxed = compile_from(problem, &root, CompilationMode::Relaxed, width, NEG_INFINITY, None);
    for id in extract_cutset(&mut relaxed, CutsetPolicy::Frontier) {
        roots.push(fringe_node::<P>(&relaxed, id));
    }
    for node in roots {
        let optimum = completions.best(&node.state, node.depth).map(|v| add(node.value, v));
        let relaxed =
            compile_from(problem, &node, CompilationMode::Relaxed, width, NEG_INFINITY, None);
        let restricted =
            compile_from(problem, &node, CompilationMode::Restricted, width, NEG_INFINITY, None);
        let opt = optimum.unwrap_or(NEG_INFINITY);
        let (up, down) = (relaxed.best_value(), restricted.best_value());
        if !(up >= opt && opt >= down) {
            return Err(format!(
                "depth {} state {:?}: relaxed {up}, optimum {opt}, restricted {down}",
                node.depth, node.state
            ));
        }
        if let Some(id) = relaxed.best_exact_terminal() {
            if relaxed.node(id).value_top > opt {
                return Err(format!("exact terminal beats the optimum at depth {}", node.depth));
            }
        }
    }
    Ok(())
}

/// Every solution of the model either runs through a cutset node, stops at a
/// pruned node, or ends at an exact terminal, and never meets a relaxed node
/// before the cutset.
pub fn check_cutset_cover<P: Relaxation>(
    problem: &P,
    width: usize,
    policy: CutsetPolicy,
    lb: Value,
) -> Result<(), String> {
    let root = FringeNode::root(problem);
    let mut dd = compile_from(problem, &root, CompilationMode::Relaxed, width, lb, None);
    compute_local_bounds(&mut dd);
    extract_cutset(&mut dd, policy);
    let mut children: HashMap<(NodeId, i64), NodeId> = HashMap::new();
    for (id, node) in dd.nodes() {
        for arc in &node.inbound {
            children.insert((arc.parent, arc.decision.value), id);
        }
    }
    let n = problem.nb_variables();
    let mut stack = vec![(problem.root_state(), 0usize, 0usize)];
    while let Some((state, depth, id)) = stack.pop() {
        let node = dd.node(id);
        if node.flags.cutset || node.is_pruned() {
            continue;
        }
        if node.is_relaxed {
            return Err(format!("solution prefix reaches relaxed node {:?} at depth {depth}", node.state));
        }
        if depth == n {
            continue;
        }
        for x in problem.domain(&state, depth) {
            let Some(&child) = children.get(&(id, x)) else {
                return Err(format!("missing arc {x} below {:?} at depth {depth}", node.state));
            };
            let next = problem.transition(&state, Decision { variable: depth, value: x });
            stack.push((next, depth + 1, child));
        }
    }
    Ok(())
}

/// `theta(parent) <= theta(child) - v(arc)` on every arc of `dd`.
pub fn check_theta_propagation<S: Clone + Eq + Hash + Ord + std::fmt::Debug>(
    dd: &DecisionDiagram<S>,
) -> Result<(), String> {
    for (_, node) in dd.nodes() {
        for arc in &node.inbound {
            let parent = dd.node(arc.parent);
            if parent.theta > sub(node.theta, arc.value) {
                return Err(format!(
                    "theta {} at {:?} (depth {}) exceeds {} - {} from {:?}",
                    parent.theta, parent.state, parent.depth, node.theta, arc.value, node.state
                ));
            }
        }
    }
    Ok(())
}

/// Replays a few branch-and-bound iterations by hand with a shared cache and
/// checks threshold propagation on each relaxed diagram, including those where
/// cache pruning occurred.
pub fn check_thresholds_in_search<P: Relaxation>(
    problem: &P,
    width: usize,
    lb: Value,
    max_diagrams: usize,
) -> Result<usize, String> {
    let mut cache = ThresholdCache::new(problem.nb_variables());
    let mut queue = vec![FringeNode::root(problem)];
    let mut checked = 0;
    while let Some(node) = queue.pop() {
        if checked == max_diagrams {
            break;
        }
        let mut dd =
            compile_from(problem, &node, CompilationMode::Relaxed, width, lb, Some(&cache));
        compute_local_bounds(&mut dd);
        let cutset = extract_cutset(&mut dd, CutsetPolicy::Frontier);
        compute_thresholds(&mut dd, lb, &mut cache);
        check_theta_propagation(&dd)?;
        checked += 1;
        for id in cutset {
            queue.push(fringe_node::<P>(&dd, id));
        }
    }
    Ok(checked)
}

/// The rough bound never underestimates the best completion of a reachable state.
pub fn check_rough_bound<P: Problem>(problem: &P) -> Result<(), String> {
    let mut completions = Completions::new(problem);
    for (depth, state) in completions.reachable() {
        if let Some(best) = completions.best(&state, depth) {
            let rub = problem.rough_bound(&state, depth);
            if rub < best {
                return Err(format!("rough bound {rub} < best completion {best} at depth {depth} for {state:?}"));
            }
        }
    }
    Ok(())
}

/// Merging any group of states at the same depth never loses a completion:
/// the merged state's best completion is at least each member's.
pub fn check_merge_relaxes<P: Relaxation>(problem: &P, group: usize) -> Result<(), String> {
    let mut completions = Completions::new(problem);
    let reachable = completions.reachable();
    let n = problem.nb_variables();
    for depth in 1..n {
        let layer: Vec<&P::State> =
            reachable.iter().filter(|(d, _)| *d == depth).map(|(_, s)| s).collect();
        for chunk in layer.chunks(group) {
            let merged = problem.merge(chunk);
            let relaxed = completions.best(&merged, depth);
            for s in chunk {
                if let Some(b) = completions.best(s, depth) {
                    if relaxed.map_or(true, |r| r < b) {
                        return Err(format!(
                            "merge of {chunk:?} at depth {depth} completes to {relaxed:?} < {b}"
                        ));
                    }
                }
            }
        }
    }
    Ok(())
}
