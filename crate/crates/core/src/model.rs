//! The contract between a problem model and the solver.

use std::fmt::Debug;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::value::{add, neg, Value, INFINITY};

/// Assigns `value` to the variable decided at layer `variable`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Decision {
    pub variable: usize,
    pub value: i64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ObjectiveSense {
    Maximize,
    Minimize,
}

/// A dynamic-programming model. Variables are decided in order `0..nb_variables()`,
/// so the depth of a state equals the index of the next variable to decide.
pub trait Problem {
    type State: Clone + Eq + Hash + Ord + Debug;

    fn nb_variables(&self) -> usize;
    fn root_state(&self) -> Self::State;
    fn root_value(&self) -> Value;

    /// Calls `f` once per feasible value of the variable at `depth`.
    /// Infeasible values must not be reported.
    fn for_each_in_domain(&self, state: &Self::State, depth: usize, f: &mut dyn FnMut(i64));

    fn transition(&self, state: &Self::State, decision: Decision) -> Self::State;
    fn transition_value(&self, state: &Self::State, decision: Decision) -> Value;

    /// Optimistic estimate of the best value reachable from `state` to the
    /// terminal, in the model's own objective sense. `INFINITY` means "no
    /// information" for maximization models and "infeasible" for minimization models.
    fn rough_bound(&self, _state: &Self::State, _depth: usize) -> Value {
        INFINITY
    }

    fn domain(&self, state: &Self::State, depth: usize) -> Vec<i64> {
        let mut out = Vec::new();
        self.for_each_in_domain(state, depth, &mut |v| out.push(v));
        out
    }
}

pub trait Relaxation: Problem {
    /// Returns a state that over-approximates every state in `states`.
    fn merge(&self, states: &[&Self::State]) -> Self::State;

    /// Adjusts the value of an arc redirected from `merged_from` to the merged node.
    fn relax_arc_value(&self, value: Value, _merged_from: &Self::State) -> Value {
        value
    }
}

/// Presents a model to the maximizing core. For `Minimize` every value
/// (root, arcs and rough bounds) is negated; for `Maximize` it is a pass-through.
#[derive(Debug, Clone)]
pub struct Oriented<P> {
    inner: P,
    sense: ObjectiveSense,
}

pub fn adapt_to_maximization<P: Relaxation>(model: P, sense: ObjectiveSense) -> Oriented<P> {
    Oriented { inner: model, sense }
}

impl<P> Oriented<P> {
    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn sense(&self) -> ObjectiveSense {
        self.sense
    }

    #[inline]
    fn orient(&self, v: Value) -> Value {
        match self.sense {
            ObjectiveSense::Maximize => v,
            ObjectiveSense::Minimize => neg(v),
        }
    }
}

impl<P: Problem> Problem for Oriented<P> {
    type State = P::State;

    fn nb_variables(&self) -> usize {
        self.inner.nb_variables()
    }
    fn root_state(&self) -> Self::State {
        self.inner.root_state()
    }
    fn root_value(&self) -> Value {
        self.orient(self.inner.root_value())
    }
    fn for_each_in_domain(&self, state: &Self::State, depth: usize, f: &mut dyn FnMut(i64)) {
        self.inner.for_each_in_domain(state, depth, f)
    }
    fn transition(&self, state: &Self::State, decision: Decision) -> Self::State {
        self.inner.transition(state, decision)
    }
    fn transition_value(&self, state: &Self::State, decision: Decision) -> Value {
        self.orient(self.inner.transition_value(state, decision))
    }
    fn rough_bound(&self, state: &Self::State, depth: usize) -> Value {
        self.orient(self.inner.rough_bound(state, depth))
    }
}

impl<P: Relaxation> Relaxation for Oriented<P> {
    fn merge(&self, states: &[&Self::State]) -> Self::State {
        self.inner.merge(states)
    }
    fn relax_arc_value(&self, value: Value, merged_from: &Self::State) -> Value {
        let inner = self.inner.relax_arc_value(self.orient(value), merged_from);
        self.orient(inner)
    }
}

/// Replays `decisions` from the root. Returns the accumulated value, or `None`
/// when a decision is out of order or not in its domain.
pub fn replay<P: Problem>(problem: &P, decisions: &[Decision]) -> Option<Value> {
    let mut state = problem.root_state();
    let mut value = problem.root_value();
    for (depth, d) in decisions.iter().enumerate() {
        if d.variable != depth || !problem.domain(&state, depth).contains(&d.value) {
            return None;
        }
        value = add(value, problem.transition_value(&state, *d));
        state = problem.transition(&state, *d);
    }
    Some(value)
}
