//! Expansion-threshold cache.
//!
//! For an exact state `s` at depth `j`, a threshold `θ` certifies that reaching
//! `s` again with a value `v <= θ` cannot lead to a solution better than what is
//! already known or already queued. The `expanded` flag tells whether a node with
//! value exactly `θ` has already been explored or is merely queued.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use crate::dd::{CutsetPolicy, DecisionDiagram};
use crate::value::{add, sub, Value, INFINITY};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CacheEntry {
    pub theta: Value,
    pub expanded: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompileCheck {
    Keep,
    /// The node is dominated; carries the stored threshold.
    Prune(Value),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FringeCheck {
    Explore,
    Skip,
}

/// When dead cache layers are reclaimed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GcPolicy {
    Never,
    /// Sweep whenever the shallowest open depth moves down.
    #[default]
    OnAdvance,
    /// Sweep after every fringe pop.
    EveryPop,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, serde::Serialize)]
pub struct CacheStats {
    pub entries: usize,
    pub peak_entries: usize,
    pub compile_prunes: usize,
    pub fringe_skips: usize,
    pub gc_removed: usize,
}

pub struct ThresholdCache<S> {
    layers: Vec<HashMap<Arc<S>, CacheEntry>>,
    entries: usize,
    stats: CacheStats,
}

impl<S: Eq + Hash> ThresholdCache<S> {
    pub fn new(nb_variables: usize) -> Self {
        ThresholdCache {
            layers: (0..=nb_variables).map(|_| HashMap::new()).collect(),
            entries: 0,
            stats: CacheStats::default(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    pub fn stats(&self) -> CacheStats {
        CacheStats { entries: self.entries, ..self.stats }
    }

    pub fn get(&self, depth: usize, state: &S) -> Option<CacheEntry> {
        self.layers.get(depth)?.get(state).copied()
    }

    /// Decides whether a node met during compilation can be pruned.
    pub fn lookup_prune(&self, depth: usize, state: &S, value: Value) -> CompileCheck {
        match self.get(depth, state) {
            Some(e) if value <= e.theta => CompileCheck::Prune(e.theta),
            _ => CompileCheck::Keep,
        }
    }

    /// Decides whether a node popped from the fringe still needs exploring.
    pub fn fringe_check(&self, depth: usize, state: &S, value: Value) -> FringeCheck {
        match self.get(depth, state) {
            Some(e) if value < e.theta || (value == e.theta && e.expanded) => FringeCheck::Skip,
            _ => FringeCheck::Explore,
        }
    }

    /// Overwrites any previous entry for the state.
    pub fn insert(&mut self, depth: usize, state: Arc<S>, theta: Value, expanded: bool) {
        if self.layers[depth].insert(state, CacheEntry { theta, expanded }).is_none() {
            self.entries += 1;
            self.stats.peak_entries = self.stats.peak_entries.max(self.entries);
        }
    }

    pub(crate) fn record_compile_prunes(&mut self, n: usize) {
        self.stats.compile_prunes += n;
    }

    pub(crate) fn record_fringe_skip(&mut self) {
        self.stats.fringe_skips += 1;
    }

    /// Drops every entry at a depth shallower than `first_active_depth`.
    /// Returns the number of entries removed.
    pub fn gc(&mut self, first_active_depth: usize) -> usize {
        let mut removed = 0;
        for layer in self.layers.iter_mut().take(first_active_depth) {
            removed += layer.len();
            layer.clear();
        }
        self.entries -= removed;
        self.stats.gc_removed += removed;
        removed
    }

    /// Keeps only the entries for which `keep` returns true.
    pub fn retain(&mut self, mut keep: impl FnMut(usize, &S, &CacheEntry) -> bool) {
        for (depth, layer) in self.layers.iter_mut().enumerate() {
            let before = layer.len();
            layer.retain(|s, e| keep(depth, s, e));
            self.entries -= before - layer.len();
        }
    }

    pub fn clear(&mut self) {
        self.layers.iter_mut().for_each(HashMap::clear);
        self.entries = 0;
    }
}

/// Computes expansion thresholds bottom-up over a relaxed diagram whose local
/// bounds and cutset have already been computed, and records those of exact
/// nodes in `cache`.
///
/// `lb` must be the incumbent value the diagram was compiled against. When the
/// cutset is the last exact layer, exact nodes below it are left out of the
/// cache so that they can be reached again from the cutset.
pub fn compute_thresholds<S: Clone + Eq + Hash + Ord>(
    dd: &mut DecisionDiagram<S>,
    lb: Value,
    cache: &mut ThresholdCache<S>,
) {
    let best_known = dd
        .best_exact_terminal()
        .map_or(lb, |id| lb.max(dd.nodes[id].value_top));
    let terminal_depth = dd.terminal_depth();
    let write_limit = match dd.cutset_policy {
        Some(CutsetPolicy::Lel) => dd.lel_depth.unwrap_or(terminal_depth),
        _ => terminal_depth,
    };
    for layer in &dd.layers {
        for &id in layer {
            dd.nodes[id].theta = INFINITY;
        }
    }
    for k in (0..dd.layers.len()).rev() {
        for i in 0..dd.layers[k].len() {
            let id = dd.layers[k][i];
            let node = &mut dd.nodes[id];
            if node.flags.pruned_by_cache {
                node.theta = node.cached_theta;
            } else {
                if node.flags.pruned_by_rub {
                    node.theta = sub(lb, node.rub);
                } else if node.flags.cutset {
                    if add(node.value_top, node.locb) <= lb {
                        node.theta = node.theta.min(sub(lb, node.locb));
                    } else {
                        node.theta = node.value_top;
                    }
                } else if node.depth == terminal_depth && !node.is_relaxed {
                    node.theta = best_known;
                }
                if !node.is_relaxed && node.depth <= write_limit {
                    cache.insert(node.depth, node.state.clone(), node.theta, !node.flags.cutset);
                }
            }
            let theta = node.theta;
            for a in 0..dd.nodes[id].inbound.len() {
                let arc = dd.nodes[id].inbound[a];
                let parent = &mut dd.nodes[arc.parent];
                parent.theta = parent.theta.min(sub(theta, arc.value));
            }
        }
    }
}
