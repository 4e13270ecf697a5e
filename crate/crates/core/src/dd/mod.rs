//! Top-down compilation of restricted and relaxed decision diagrams.

mod cutset;
mod dot;

use std::collections::HashMap;
use std::sync::Arc;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use cutset::extract_cutset;
pub use dot::to_dot;

use crate::cache::{CompileCheck, ThresholdCache};
use crate::fringe::FringeNode;
use crate::model::{Decision, Relaxation};
use crate::path::Path;
use crate::value::{add, Value, INFINITY, NEG_INFINITY};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompilationMode {
    Restricted,
    Relaxed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CutsetPolicy {
    /// Last layer whose nodes are all exact.
    Lel,
    /// Exact nodes with at least one relaxed child.
    Frontier,
}

/// Maximum layer width as a function of the layer depth.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WidthPolicy {
    /// `n * alpha` for every layer.
    Fixed { alpha: usize },
    /// `n * (depth + 1) * alpha`.
    Dynamic { alpha: usize },
    /// A constant width, independent of the instance size.
    Constant { width: usize },
}

impl WidthPolicy {
    pub fn max_width(&self, nb_variables: usize, depth: usize) -> usize {
        let w = match *self {
            WidthPolicy::Fixed { alpha } => nb_variables.saturating_mul(alpha),
            WidthPolicy::Dynamic { alpha } => {
                nb_variables.saturating_mul(depth + 1).saturating_mul(alpha)
            }
            WidthPolicy::Constant { width } => width,
        };
        w.max(1)
    }

    pub fn name(&self) -> &'static str {
        match self {
            WidthPolicy::Fixed { .. } => "fixed",
            WidthPolicy::Dynamic { .. } => "dynamic",
            WidthPolicy::Constant { .. } => "constant",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InArc {
    pub parent: NodeId,
    pub decision: Decision,
    pub value: Value,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NodeFlags {
    pub pruned_by_cache: bool,
    pub pruned_by_rub: bool,
    pub cutset: bool,
    /// Set by local-bound propagation for nodes that reach the terminal layer.
    pub marked: bool,
    /// Removed by restriction or merged away by relaxation.
    pub deleted: bool,
}

#[derive(Debug, Clone)]
pub struct DdNode<S> {
    pub state: Arc<S>,
    pub depth: usize,
    pub value_top: Value,
    pub best_arc: Option<usize>,
    pub inbound: Vec<InArc>,
    pub is_relaxed: bool,
    pub flags: NodeFlags,
    /// Threshold read from the cache when the node was pruned by it.
    pub cached_theta: Value,
    /// Rough bound, computed when the node is considered for expansion.
    pub rub: Value,
    pub locb: Value,
    pub theta: Value,
}

impl<S> DdNode<S> {
    fn new(state: Arc<S>, depth: usize, value_top: Value, is_relaxed: bool) -> Self {
        DdNode {
            state,
            depth,
            value_top,
            best_arc: None,
            inbound: Vec::new(),
            is_relaxed,
            flags: NodeFlags::default(),
            cached_theta: INFINITY,
            rub: INFINITY,
            locb: NEG_INFINITY,
            theta: INFINITY,
        }
    }

    pub fn is_exact(&self) -> bool {
        !self.is_relaxed
    }

    pub fn is_pruned(&self) -> bool {
        self.flags.pruned_by_cache || self.flags.pruned_by_rub
    }
}

pub struct CompilationInput<'a, P: Relaxation> {
    pub problem: &'a P,
    pub root: &'a FringeNode<P::State>,
    pub mode: CompilationMode,
    pub width: WidthPolicy,
    pub best_lb: Value,
    pub cache: Option<&'a ThresholdCache<P::State>>,
    pub deadline: Option<Instant>,
}

/// Compilation stopped because the deadline passed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Interrupted;

pub struct DecisionDiagram<S> {
    pub(crate) nodes: Vec<DdNode<S>>,
    /// `layers[k]` holds the live nodes at depth `root_depth + k`.
    pub(crate) layers: Vec<Vec<NodeId>>,
    pub(crate) root_depth: usize,
    pub(crate) root_path: Path,
    pub(crate) mode: CompilationMode,
    pub(crate) shrunk: bool,
    pub(crate) expanded: usize,
    pub(crate) cache_prunes: usize,
    pub(crate) rub_prunes: usize,
    pub(crate) best_lb: Value,
    pub(crate) cutset_policy: Option<CutsetPolicy>,
    /// Depth of the last exact layer when the cutset was extracted with that policy.
    pub(crate) lel_depth: Option<usize>,
}

impl<S: Clone + Eq + std::hash::Hash + Ord> DecisionDiagram<S> {
    pub fn mode(&self) -> CompilationMode {
        self.mode
    }

    pub fn root_depth(&self) -> usize {
        self.root_depth
    }

    pub fn root_path(&self) -> &Path {
        &self.root_path
    }

    /// Incumbent value the diagram was compiled against.
    pub fn best_lb(&self) -> Value {
        self.best_lb
    }

    pub fn node(&self, id: NodeId) -> &DdNode<S> {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &DdNode<S>)> {
        self.layers.iter().flatten().map(move |&id| (id, &self.nodes[id]))
    }

    /// Live nodes at absolute `depth`.
    pub fn layer(&self, depth: usize) -> &[NodeId] {
        depth
            .checked_sub(self.root_depth)
            .and_then(|k| self.layers.get(k))
            .map_or(&[], Vec::as_slice)
    }

    pub fn terminal_depth(&self) -> usize {
        self.root_depth + self.layers.len() - 1
    }

    /// True when no layer had to be shrunk. Cache and rough-bound pruning do
    /// not affect exactness.
    pub fn is_exact(&self) -> bool {
        !self.shrunk
    }

    /// Number of nodes whose outgoing arcs were generated.
    pub fn expanded_nodes(&self) -> usize {
        self.expanded
    }

    pub fn cache_prunes(&self) -> usize {
        self.cache_prunes
    }

    pub fn rub_prunes(&self) -> usize {
        self.rub_prunes
    }

    fn terminals(&self) -> &[NodeId] {
        self.layers.last().map_or(&[], Vec::as_slice)
    }

    fn best_among(&self, exact_only: bool) -> Option<NodeId> {
        let mut best: Option<NodeId> = None;
        for &id in self.terminals() {
            let n = &self.nodes[id];
            if exact_only && n.is_relaxed {
                continue;
            }
            if best.map_or(true, |b| n.value_top > self.nodes[b].value_top) {
                best = Some(id);
            }
        }
        best
    }

    /// Terminal-layer node with the best value.
    pub fn best_terminal(&self) -> Option<NodeId> {
        self.best_among(false)
    }

    /// Best terminal-layer node reached only through exact nodes.
    /// Its value is attained by a feasible solution.
    pub fn best_exact_terminal(&self) -> Option<NodeId> {
        self.best_among(true)
    }

    /// Value of the best terminal; an upper bound for relaxed diagrams and a
    /// feasible value for restricted ones.
    pub fn best_value(&self) -> Value {
        self.best_terminal().map_or(NEG_INFINITY, |id| self.nodes[id].value_top)
    }

    /// Decisions leading from the diagram root to `id` along best arcs.
    pub fn local_path(&self, id: NodeId) -> Vec<Decision> {
        let mut out = Vec::new();
        let mut cur = id;
        while let Some(a) = self.nodes[cur].best_arc {
            let arc = self.nodes[cur].inbound[a];
            out.push(arc.decision);
            cur = arc.parent;
        }
        out.reverse();
        out
    }

    /// Full path from the problem root to `id`. `memo` shares prefixes between calls.
    pub fn full_path(&self, id: NodeId, memo: &mut HashMap<NodeId, Path>) -> Path {
        let mut chain = Vec::new();
        let mut cur = id;
        let base = loop {
            if let Some(p) = memo.get(&cur) {
                break p.clone();
            }
            match self.nodes[cur].best_arc {
                Some(a) => {
                    let arc = self.nodes[cur].inbound[a];
                    chain.push((cur, arc.decision));
                    cur = arc.parent;
                }
                None => break self.root_path.clone(),
            }
        };
        let mut path = base;
        for &(node, d) in chain.iter().rev() {
            path = path.push(d);
            memo.insert(node, path.clone());
        }
        path
    }

    /// Removes the nodes of `active` that do not fit in width `w`.
    fn shrink<P: Relaxation<State = S>>(
        &mut self,
        k: usize,
        active: &mut Vec<NodeId>,
        w: usize,
        problem: &P,
    ) -> Option<NodeId> {
        self.shrunk = true;
        let nodes = &self.nodes;
        let mut ranked = active.clone();
        ranked.sort_by(|&a, &b| {
            let (na, nb) = (&nodes[a], &nodes[b]);
            na.value_top.cmp(&nb.value_top).then_with(|| na.state.cmp(&nb.state))
        });
        let cut = match self.mode {
            CompilationMode::Restricted => ranked.len() - w,
            CompilationMode::Relaxed => ranked.len() - w + 1,
        };
        let (dropped, kept) = ranked.split_at(cut);
        for &id in dropped {
            self.nodes[id].flags.deleted = true;
        }
        let mut created = None;
        if self.mode == CompilationMode::Relaxed {
            let merged_state = {
                let states: Vec<&S> = dropped.iter().map(|&id| &*self.nodes[id].state).collect();
                problem.merge(&states)
            };
            let target = match kept.iter().find(|&&id| *self.nodes[id].state == merged_state) {
                Some(&id) => id,
                None => {
                    let depth = self.root_depth + k;
                    let id = self.nodes.len();
                    self.nodes.push(DdNode::new(Arc::new(merged_state), depth, NEG_INFINITY, true));
                    created = Some(id);
                    id
                }
            };
            self.nodes[target].is_relaxed = true;
            for &id in dropped {
                let arcs = std::mem::take(&mut self.nodes[id].inbound);
                for arc in arcs {
                    let value = problem.relax_arc_value(arc.value, &self.nodes[id].state);
                    let candidate = add(self.nodes[arc.parent].value_top, value);
                    let t = &mut self.nodes[target];
                    t.inbound.push(InArc { value, ..arc });
                    if t.best_arc.is_none() || candidate > t.value_top {
                        t.value_top = candidate;
                        t.best_arc = Some(t.inbound.len() - 1);
                    }
                }
            }
        }
        let nodes = &self.nodes;
        active.retain(|&id| !nodes[id].flags.deleted);
        self.layers[k].retain(|&id| !nodes[id].flags.deleted);
        if let Some(id) = created {
            active.push(id);
            self.layers[k].push(id);
        }
        created
    }

    /// Computes the rough bound of a node and flags it when it cannot beat the incumbent.
    fn rub_prune<P: Relaxation<State = S>>(&mut self, id: NodeId, depth: usize, problem: &P) -> bool {
        let node = &mut self.nodes[id];
        node.rub = problem.rough_bound(&node.state, depth);
        if add(node.value_top, node.rub) <= self.best_lb {
            node.flags.pruned_by_rub = true;
            self.rub_prunes += 1;
            true
        } else {
            false
        }
    }
}

/// Compiles a restricted or relaxed diagram rooted at `input.root`.
pub fn compile<P: Relaxation>(
    input: &CompilationInput<'_, P>,
) -> Result<DecisionDiagram<P::State>, Interrupted> {
    let problem = input.problem;
    let n = problem.nb_variables();
    let root = input.root;
    let mut dd = DecisionDiagram {
        nodes: vec![DdNode::new(root.state.clone(), root.depth, root.value, false)],
        layers: vec![vec![0]],
        root_depth: root.depth,
        root_path: root.path.clone(),
        mode: input.mode,
        shrunk: false,
        expanded: 0,
        cache_prunes: 0,
        rub_prunes: 0,
        best_lb: input.best_lb,
        cutset_policy: None,
        lel_depth: None,
    };
    let mut index: HashMap<Arc<P::State>, NodeId> = HashMap::new();

    for depth in root.depth..n {
        if input.deadline.is_some_and(|d| Instant::now() >= d) {
            return Err(Interrupted);
        }
        let k = depth - root.depth;

        let mut active = Vec::with_capacity(dd.layers[k].len());
        for &id in &dd.layers[k] {
            let node = &mut dd.nodes[id];
            if depth > root.depth {
                if let Some(cache) = input.cache {
                    if let CompileCheck::Prune(theta) =
                        cache.lookup_prune(depth, &node.state, node.value_top)
                    {
                        node.flags.pruned_by_cache = true;
                        node.cached_theta = theta;
                        dd.cache_prunes += 1;
                        continue;
                    }
                }
            }
            active.push(id);
        }

        // rough-bound pruning happens before the width check so that pruned
        // nodes do not take part in merging
        active.retain(|&id| !dd.rub_prune(id, depth, problem));

        let w = input.width.max_width(n, depth);
        // The children of the root are never merged so that every relaxed
        // diagram has a non-trivial exact cutset, even at width 1.
        let protected = input.mode == CompilationMode::Relaxed && depth == root.depth + 1;
        if active.len() > w && !protected {
            if let Some(merged) = dd.shrink(k, &mut active, w, problem) {
                if dd.rub_prune(merged, depth, problem) {
                    active.retain(|&id| id != merged);
                }
            }
        }

        index.clear();
        let mut next: Vec<NodeId> = Vec::new();
        for &id in &active {
            let state = dd.nodes[id].state.clone();
            let value_top = dd.nodes[id].value_top;
            let relaxed = dd.nodes[id].is_relaxed;
            dd.expanded += 1;
            let nodes = &mut dd.nodes;
            problem.for_each_in_domain(&state, depth, &mut |v| {
                let decision = Decision { variable: depth, value: v };
                let child = problem.transition(&state, decision);
                let arc_value = problem.transition_value(&state, decision);
                let candidate = add(value_top, arc_value);
                let cid = match index.get(&child) {
                    Some(&cid) => cid,
                    None => {
                        let cid = nodes.len();
                        let child = Arc::new(child);
                        nodes.push(DdNode::new(child.clone(), depth + 1, NEG_INFINITY, false));
                        index.insert(child, cid);
                        next.push(cid);
                        cid
                    }
                };
                let c = &mut nodes[cid];
                c.is_relaxed |= relaxed;
                c.inbound.push(InArc { parent: id, decision, value: arc_value });
                if c.best_arc.is_none() || candidate > c.value_top {
                    c.value_top = candidate;
                    c.best_arc = Some(c.inbound.len() - 1);
                }
            });
        }
        dd.layers.push(next);
    }
    Ok(dd)
}
