//! The five-item bounded knapsack used as the running example:
//! values (2,3,6,6,1), weights (4,6,4,2,5), quantities (1,1,2,2,1), capacity 15.

use std::sync::Arc;
use std::time::Instant;

use ddbb::bounds::compute_local_bounds;
use ddbb::cache::compute_thresholds;
use ddbb::dd::to_dot;
use ddbb::dd::{compile, extract_cutset, CompilationInput, NodeId};
use ddbb::problems::bkp::Bkp;
use ddbb::value::add;
use ddbb::*;

fn knapsack() -> Bkp {
    Bkp::new(15, vec![2, 3, 6, 6, 1], vec![4, 6, 4, 2, 5], vec![1, 1, 2, 2, 1]).unwrap()
}

/// The node reached by taking one unit of item 0: remaining capacity 11.
fn second_root() -> FringeNode<i64> {
    FringeNode {
        state: Arc::new(11),
        depth: 1,
        value: 2,
        ub: INFINITY,
        path: Path::empty().push(Decision { variable: 0, value: 1 }),
    }
}

fn build(
    b: &Bkp,
    root: &FringeNode<i64>,
    mode: CompilationMode,
    width: usize,
    lb: Value,
) -> DecisionDiagram<i64> {
    let input = CompilationInput {
        problem: b,
        root,
        mode,
        width: WidthPolicy::Constant { width },
        best_lb: lb,
        cache: None,
        deadline: None,
    };
    compile(&input).unwrap()
}

/// Runs the post-compilation passes of the solver with a fresh cache.
fn analyse(dd: &mut DecisionDiagram<i64>, lb: Value) -> (Vec<NodeId>, ThresholdCache<i64>) {
    compute_local_bounds(dd);
    let cutset = extract_cutset(dd, CutsetPolicy::Frontier);
    let mut cache = ThresholdCache::new(5);
    compute_thresholds(dd, lb, &mut cache);
    (cutset, cache)
}

fn find(dd: &DecisionDiagram<i64>, depth: usize, state: i64, relaxed: bool) -> &ddbb::dd::DdNode<i64> {
    dd.layer(depth)
        .iter()
        .map(|&id| dd.node(id))
        .find(|n| *n.state == state && n.is_relaxed == relaxed)
        .unwrap_or_else(|| panic!("no node with state {state} at depth {depth}"))
}

#[test]
fn model_primitives() {
    let b = knapsack();
    let d = Decision { variable: 0, value: 1 };
    assert_eq!(b.transition(&15, d), 11);
    assert_eq!(b.transition_value(&15, d), 2);
    assert_eq!(b.merge(&[&9, &5]), 9);
    assert_eq!(b.rough_bound(&0, 3), 13);
}

#[test]
fn exact_diagram_optimum() {
    let b = knapsack();
    let dd = build(&b, &FringeNode::root(&b), CompilationMode::Relaxed, usize::MAX, NEG_INFINITY);
    assert!(dd.is_exact());
    assert_eq!(dd.best_value(), 24);
    let values: Vec<i64> = dd.local_path(dd.best_terminal().unwrap()).iter().map(|d| d.value).collect();
    assert_eq!(values, vec![0, 0, 2, 2, 0]);
}

#[test]
fn restricted_and_relaxed_width_three() {
    let b = knapsack();
    let root = FringeNode::root(&b);
    let restricted = build(&b, &root, CompilationMode::Restricted, 3, NEG_INFINITY);
    assert!(!restricted.is_exact());
    assert_eq!(restricted.best_value(), 21);
    let relaxed = build(&b, &root, CompilationMode::Relaxed, 3, NEG_INFINITY);
    assert!(!relaxed.is_exact());
    assert_eq!(relaxed.best_value(), 26);
}

#[test]
fn cutsets_of_the_root_relaxation() {
    let b = knapsack();
    let root = FringeNode::root(&b);
    let mut dd = build(&b, &root, CompilationMode::Relaxed, 3, NEG_INFINITY);
    let (fc, _) = analyse(&mut dd, NEG_INFINITY);
    let fc: Vec<(usize, i64)> = fc.iter().map(|&id| (dd.node(id).depth, *dd.node(id).state)).collect();
    assert_eq!(fc, vec![(1, 15), (1, 11), (2, 9), (2, 5), (3, 1)]);

    let lel = extract_cutset(&mut dd, CutsetPolicy::Lel);
    let lel: Vec<(usize, i64)> = lel.iter().map(|&id| (dd.node(id).depth, *dd.node(id).state)).collect();
    assert_eq!(lel, vec![(1, 15), (1, 11)]);
}

#[test]
fn rough_bound_and_local_bound_pruning_with_incumbent_21() {
    let b = knapsack();
    let mut dd = build(&b, &FringeNode::root(&b), CompilationMode::Relaxed, 3, 21);
    analyse(&mut dd, 21);

    // fourth layer: rub = 2*6 + 1*1 = 13
    for (state, relaxed) in [(9, false), (15, true), (11, true)] {
        let n = find(&dd, 3, state, relaxed);
        assert!(n.flags.pruned_by_rub, "state {state}");
        assert_eq!(n.rub, 13);
    }
    assert!(find(&dd, 4, 5, true).flags.pruned_by_rub);
    assert!(find(&dd, 4, 7, true).flags.pruned_by_rub);
    assert_eq!(dd.rub_prunes(), 5);

    let c = find(&dd, 3, 5, false);
    assert!(c.flags.cutset);
    assert_eq!((c.value_top, c.locb), (9, 12));
    assert_eq!(add(c.value_top, c.locb), 21);
    let d = find(&dd, 4, 1, false);
    assert_eq!(add(d.value_top, d.locb), 21);
}

#[test]
fn dominance_thresholds() {
    let b = knapsack();
    let mut dd = build(&b, &second_root(), CompilationMode::Relaxed, 3, NEG_INFINITY);
    let (_, cache) = analyse(&mut dd, NEG_INFINITY);
    assert_eq!(find(&dd, 4, 1, false).theta, 20);
    let c = find(&dd, 3, 1, false);
    assert_eq!((c.value_top, c.theta), (11, 20));
    assert_eq!(cache.get(3, &1), Some(CacheEntry { theta: 20, expanded: true }));
}

#[test]
fn pruning_thresholds() {
    let b = knapsack();
    let mut dd = build(&b, &second_root(), CompilationMode::Relaxed, 3, 21);
    analyse(&mut dd, 21);
    for state in [11, 7, 5] {
        let n = find(&dd, 3, state, false);
        assert!(n.flags.pruned_by_rub);
        assert_eq!(n.theta, 8, "state {state}");
    }
    assert_eq!(find(&dd, 4, 1, false).theta, 20);
    assert_eq!(find(&dd, 3, 1, false).theta, 20);
    assert_eq!(find(&dd, 3, 3, false).theta, 14);
}

#[test]
fn full_branch_and_bound() {
    let b = knapsack();
    let started = Instant::now();
    let config = SolverConfig::new(1, true).with_width(WidthPolicy::Constant { width: 3 });
    let result = solve(&b, config);
    assert!(started.elapsed().as_secs_f64() < 1.0);
    assert_eq!(result.status, Status::Optimal);
    assert_eq!(result.incumbent.value, Some(24));
    let values: Vec<i64> = result.incumbent.solution.unwrap().iter().map(|d| d.value).collect();
    assert_eq!(values, vec![0, 0, 2, 2, 0]);
    // the root's cutset reduces to its two children, both solved by an exact restricted diagram
    assert_eq!(result.stats.fringe_pops, 3);
    assert_eq!(result.stats.relaxed_compilations, 1);
    assert_eq!(result.stats.restricted_compilations, 3);
}

#[test]
fn dot_marks_cutset_and_pruned_nodes() {
    let b = knapsack();
    let mut dd = build(&b, &FringeNode::root(&b), CompilationMode::Relaxed, 3, 21);
    analyse(&mut dd, 21);
    let dot = to_dot(&dd);
    assert!(dot.starts_with("digraph"));
    assert!(dot.contains("bold"));
    assert!(dot.contains("dashed"));
    assert!(dot.contains("filled"));
}
