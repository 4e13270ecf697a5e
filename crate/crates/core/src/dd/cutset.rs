use super::{CutsetPolicy, DecisionDiagram, NodeId};

/// Selects the exact cutset of a relaxed diagram and flags its nodes.
///
/// Pruned nodes are never part of the cutset. An exact diagram has an empty
/// cutset: its terminal layer already contains the optimum of the subproblem.
pub fn extract_cutset<S: Clone + Eq + std::hash::Hash + Ord>(
    dd: &mut DecisionDiagram<S>,
    policy: CutsetPolicy,
) -> Vec<NodeId> {
    dd.cutset_policy = Some(policy);
    dd.lel_depth = None;
    for node in dd.nodes.iter_mut() {
        node.flags.cutset = false;
    }
    if dd.is_exact() {
        return Vec::new();
    }
    let mut cutset = Vec::new();
    match policy {
        CutsetPolicy::Lel => {
            let first_relaxed = dd
                .layers
                .iter()
                .position(|layer| layer.iter().any(|&id| dd.nodes[id].is_relaxed));
            let Some(k) = first_relaxed else {
                return cutset;
            };
            // the root layer is always exact, so k >= 1
            let lel = k - 1;
            dd.lel_depth = Some(dd.root_depth + lel);
            for &id in &dd.layers[lel] {
                if !dd.nodes[id].is_pruned() {
                    cutset.push(id);
                }
            }
        }
        CutsetPolicy::Frontier => {
            let mut seen = vec![false; dd.nodes.len()];
            for layer in &dd.layers {
                for &id in layer {
                    let node = &dd.nodes[id];
                    if !node.is_relaxed {
                        continue;
                    }
                    for arc in &node.inbound {
                        let parent = &dd.nodes[arc.parent];
                        if !parent.is_relaxed && !parent.is_pruned() && !seen[arc.parent] {
                            seen[arc.parent] = true;
                            cutset.push(arc.parent);
                        }
                    }
                }
            }
            cutset.sort_by_key(|&id| (dd.nodes[id].depth, id));
        }
    }
    for &id in &cutset {
        dd.nodes[id].flags.cutset = true;
    }
    cutset
}
