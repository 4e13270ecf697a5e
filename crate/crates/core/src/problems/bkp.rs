//! Bounded knapsack.
//!
//! Item `j` may be taken up to `quantities[j]` times; each copy is worth
//! `values[j]` and weighs `weights[j]`. The state is the remaining capacity.

use rand::Rng;

use super::text::{invalid, write_row, InstanceError, Tokens};
use crate::model::{Decision, Problem, Relaxation};
use crate::value::Value;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bkp {
    pub capacity: i64,
    pub values: Vec<i64>,
    pub weights: Vec<i64>,
    pub quantities: Vec<i64>,
    /// `suffix_value[j]` = value of taking every remaining copy of items `j..`.
    suffix_value: Vec<i64>,
}

impl Bkp {
    pub fn new(
        capacity: i64,
        values: Vec<i64>,
        weights: Vec<i64>,
        quantities: Vec<i64>,
    ) -> Result<Self, InstanceError> {
        let n = values.len();
        if weights.len() != n || quantities.len() != n {
            return Err(invalid("values, weights and quantities must have the same length"));
        }
        if capacity < 0 {
            return Err(invalid("capacity must be non-negative"));
        }
        if values.iter().any(|&v| v < 0) {
            return Err(invalid("values must be non-negative"));
        }
        if weights.iter().any(|&w| w <= 0) {
            return Err(invalid("weights must be positive"));
        }
        if quantities.iter().any(|&q| q < 0) {
            return Err(invalid("quantities must be non-negative"));
        }
        let mut suffix_value = vec![0; n + 1];
        for j in (0..n).rev() {
            suffix_value[j] = suffix_value[j + 1] + values[j] * quantities[j];
        }
        Ok(Bkp { capacity, values, weights, quantities, suffix_value })
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Format: `n C`, then one line each of values, weights and quantities.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut t = Tokens::new(text);
        let n = t.count("item count", 1 << 20)?;
        let capacity = t.int("capacity")?;
        let values = t.ints(n, "value")?;
        let weights = t.ints(n, "weight")?;
        let quantities = t.ints(n, "quantity")?;
        t.finish()?;
        Bkp::new(capacity, values, weights, quantities)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.len(), self.capacity);
        write_row(&mut out, &self.values);
        write_row(&mut out, &self.weights);
        write_row(&mut out, &self.quantities);
        out
    }

    /// Random instance with `n` items; capacity is about a third of the total weight.
    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let values: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
        let weights: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=10)).collect();
        let quantities: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=3)).collect();
        let total: i64 = weights.iter().zip(&quantities).map(|(w, q)| w * q).sum();
        let capacity = rng.gen_range(total / 4..=total / 2 + 1);
        Bkp::new(capacity, values, weights, quantities).expect("generated instance is valid")
    }
}

impl Problem for Bkp {
    type State = i64;

    fn nb_variables(&self) -> usize {
        self.len()
    }

    fn root_state(&self) -> i64 {
        self.capacity
    }

    fn root_value(&self) -> Value {
        0
    }

    fn for_each_in_domain(&self, state: &i64, depth: usize, f: &mut dyn FnMut(i64)) {
        let max = self.quantities[depth].min(state / self.weights[depth]);
        for x in 0..=max {
            f(x);
        }
    }

    fn transition(&self, state: &i64, d: Decision) -> i64 {
        state - d.value * self.weights[d.variable]
    }

    fn transition_value(&self, _state: &i64, d: Decision) -> Value {
        d.value * self.values[d.variable]
    }

    fn rough_bound(&self, _state: &i64, depth: usize) -> Value {
        self.suffix_value[depth]
    }
}

impl Relaxation for Bkp {
    fn merge(&self, states: &[&i64]) -> i64 {
        states.iter().map(|s| **s).max().expect("merge of an empty set")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn figure_instance() -> Bkp {
        Bkp::new(15, vec![2, 3, 6, 6, 1], vec![4, 6, 4, 2, 5], vec![1, 1, 2, 2, 1]).unwrap()
    }

    #[test]
    fn rough_bound_is_suffix_value() {
        let b = figure_instance();
        assert_eq!(b.rough_bound(&0, 3), 13);
        assert_eq!(b.rough_bound(&0, 0), 2 + 3 + 12 + 12 + 1);
        assert_eq!(b.rough_bound(&0, 5), 0);
    }

    #[test]
    fn domain_respects_capacity_and_quantity() {
        let b = figure_instance();
        assert_eq!(b.domain(&15, 2), vec![0, 1, 2]);
        assert_eq!(b.domain(&5, 2), vec![0, 1]);
        assert_eq!(b.domain(&3, 0), vec![0]);
    }

    #[test]
    fn text_round_trip() {
        let b = figure_instance();
        assert_eq!(Bkp::parse(&b.to_text()).unwrap(), b);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Bkp::parse("2 10\n1 2\n3"), Err(InstanceError::Parse { .. })));
        assert!(matches!(Bkp::parse("1 10\n1\n0\n1"), Err(InstanceError::Invalid(_))));
    }
}
