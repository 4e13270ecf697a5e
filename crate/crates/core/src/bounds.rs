//! Local bounds and the combined upper bound of a node.

use crate::dd::{DdNode, DecisionDiagram};
use crate::value::{add, Value, NEG_INFINITY};

/// Computes, bottom-up, the longest path from every node to the terminal layer.
///
/// Nodes that cannot reach the terminal layer (because every path below them
/// was pruned) keep `locb = -inf` and stay unmarked.
pub fn compute_local_bounds<S: Clone + Eq + std::hash::Hash + Ord>(dd: &mut DecisionDiagram<S>) {
    for layer in &dd.layers {
        for &id in layer {
            let n = &mut dd.nodes[id];
            n.locb = NEG_INFINITY;
            n.flags.marked = false;
        }
    }
    if let Some(last) = dd.layers.last() {
        for &id in last {
            dd.nodes[id].locb = 0;
            dd.nodes[id].flags.marked = true;
        }
    }
    for k in (1..dd.layers.len()).rev() {
        for i in 0..dd.layers[k].len() {
            let id = dd.layers[k][i];
            if !dd.nodes[id].flags.marked {
                continue;
            }
            let locb = dd.nodes[id].locb;
            for a in 0..dd.nodes[id].inbound.len() {
                let arc = dd.nodes[id].inbound[a];
                let parent = &mut dd.nodes[arc.parent];
                parent.locb = parent.locb.max(add(locb, arc.value));
                parent.flags.marked = true;
            }
        }
    }
}

/// Upper bound on the value still collectable below `node`.
///
/// A node cut off by its rough bound has no meaningful local bound, so the
/// rough bound is returned as is; otherwise the tighter of the two is used.
pub fn combined_upper_bound<S>(node: &DdNode<S>, lb: Value) -> Value {
    if node.flags.pruned_by_rub || add(node.value_top, node.rub) <= lb {
        node.rub
    } else {
        node.rub.min(node.locb)
    }
}
