//! Priority queue of open subproblems with at most one live entry per state.

use std::cmp::Ordering;
use std::collections::hash_map::Entry;
use std::collections::{BinaryHeap, HashMap};
use std::sync::Arc;

use crate::model::Problem;
use crate::path::Path;
use crate::value::{add, Value, INFINITY};

/// An open subproblem: an exact state reached by `path` with accumulated `value`,
/// whose completions are worth at most `value + ub`.
#[derive(Debug, Clone)]
pub struct FringeNode<S> {
    pub state: Arc<S>,
    pub depth: usize,
    pub value: Value,
    pub ub: Value,
    pub path: Path,
}

impl<S> FringeNode<S> {
    /// The whole problem as a subproblem.
    pub fn root<P: Problem<State = S>>(problem: &P) -> Self {
        FringeNode {
            state: Arc::new(problem.root_state()),
            depth: 0,
            value: problem.root_value(),
            ub: INFINITY,
            path: Path::empty(),
        }
    }

    pub fn bound(&self) -> Value {
        add(self.value, self.ub)
    }
}

struct Queued<S> {
    node: FringeNode<S>,
    seq: u64,
}

impl<S> Queued<S> {
    fn key(&self) -> (Value, usize, std::cmp::Reverse<u64>) {
        (self.node.bound(), self.node.depth, std::cmp::Reverse(self.seq))
    }
}

impl<S> PartialEq for Queued<S> {
    fn eq(&self, other: &Self) -> bool {
        self.seq == other.seq
    }
}
impl<S> Eq for Queued<S> {}
impl<S> PartialOrd for Queued<S> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<S> Ord for Queued<S> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

/// Max-heap on `value + ub`; ties go to the deeper node, then to the oldest one.
///
/// Pushing a state that is already queued keeps whichever copy has the
/// strictly larger `value`; superseded heap entries are skipped lazily on pop.
pub struct Fringe<S> {
    heap: BinaryHeap<Queued<S>>,
    live: HashMap<(usize, Arc<S>), (Value, u64)>,
    per_depth: Vec<usize>,
    next_seq: u64,
    peak: usize,
}

impl<S: Eq + std::hash::Hash> Fringe<S> {
    pub fn new(nb_variables: usize) -> Self {
        Fringe {
            heap: BinaryHeap::new(),
            live: HashMap::new(),
            per_depth: vec![0; nb_variables + 1],
            next_seq: 0,
            peak: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }

    pub fn peak_len(&self) -> usize {
        self.peak
    }

    /// Returns true when the node was queued (new state or strictly better value).
    pub fn push(&mut self, node: FringeNode<S>) -> bool {
        let seq = self.next_seq;
        match self.live.entry((node.depth, node.state.clone())) {
            Entry::Occupied(mut e) => {
                if node.value <= e.get().0 {
                    return false;
                }
                e.insert((node.value, seq));
            }
            Entry::Vacant(e) => {
                e.insert((node.value, seq));
                self.per_depth[node.depth] += 1;
            }
        }
        self.next_seq += 1;
        self.heap.push(Queued { node, seq });
        self.peak = self.peak.max(self.live.len());
        true
    }

    pub fn pop(&mut self) -> Option<FringeNode<S>> {
        while let Some(q) = self.heap.pop() {
            let key = (q.node.depth, q.node.state.clone());
            if self.live.get(&key).map(|&(_, s)| s) == Some(q.seq) {
                self.live.remove(&key);
                self.per_depth[q.node.depth] -= 1;
                return Some(q.node);
            }
        }
        None
    }

    /// Highest `value + ub` among live nodes.
    pub fn best_bound(&mut self) -> Option<Value> {
        loop {
            let q = self.heap.peek()?;
            let key = (q.node.depth, q.node.state.clone());
            if self.live.get(&key).map(|&(_, s)| s) == Some(q.seq) {
                return Some(q.node.bound());
            }
            self.heap.pop();
        }
    }

    /// Shallowest depth holding a live node.
    pub fn min_depth(&self) -> Option<usize> {
        self.per_depth.iter().position(|&c| c > 0)
    }

    pub fn clear(&mut self) {
        self.heap.clear();
        self.live.clear();
        self.per_depth.iter_mut().for_each(|c| *c = 0);
    }
}
