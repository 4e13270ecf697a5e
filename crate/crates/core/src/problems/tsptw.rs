//! Traveling salesman with time windows (minimize travel distance).
//!
//! Node 0 is the depot; the tour leaves it at time 0, visits every customer
//! once within its window (arriving early means waiting) and returns to the
//! depot no later than the depot's window closes.

use rand::seq::SliceRandom;
use rand::Rng;

use super::text::{invalid, write_row, InstanceError, Tokens};
use crate::model::{Decision, Problem, Relaxation};
use crate::value::{Value, INFINITY};

pub const MAX_NODES: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tsptw {
    pub distances: Vec<Vec<i64>>,
    /// `(earliest, latest)` per node; the depot's latest time is the horizon.
    pub windows: Vec<(i64, i64)>,
    cheapest_in: Vec<i64>,
}

/// `position` is the set of nodes the tour may currently stand at, `must` the
/// customers every merged path still has to visit and `maybe` those that only
/// some of them still have to visit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TsptwState {
    pub position: u64,
    pub time: i64,
    pub must: u64,
    pub maybe: u64,
}

fn bits(set: u64) -> impl Iterator<Item = usize> {
    let mut s = set;
    std::iter::from_fn(move || {
        if s == 0 {
            None
        } else {
            let i = s.trailing_zeros() as usize;
            s &= s - 1;
            Some(i)
        }
    })
}

impl Tsptw {
    pub fn new(distances: Vec<Vec<i64>>, windows: Vec<(i64, i64)>) -> Result<Self, InstanceError> {
        let n = distances.len();
        if n == 0 || n > MAX_NODES {
            return Err(invalid(format!("node count must be between 1 and {MAX_NODES}")));
        }
        if distances.iter().any(|row| row.len() != n) || windows.len() != n {
            return Err(invalid("distance matrix and windows must match the node count"));
        }
        if distances.iter().flatten().any(|&d| d < 0) {
            return Err(invalid("distances must be non-negative"));
        }
        if windows.iter().any(|&(e, l)| e > l || e < 0) {
            return Err(invalid("time windows must satisfy 0 <= earliest <= latest"));
        }
        let cheapest_in = (0..n)
            .map(|i| (0..n).filter(|&k| k != i).map(|k| distances[k][i]).min().unwrap_or(0))
            .collect();
        Ok(Tsptw { distances, windows, cheapest_in })
    }

    pub fn len(&self) -> usize {
        self.distances.len()
    }

    pub fn is_empty(&self) -> bool {
        self.distances.is_empty()
    }

    pub fn horizon(&self) -> i64 {
        self.windows[0].1
    }

    /// Format: `n`, an `n x n` distance matrix, then `n` lines `earliest latest`.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut t = Tokens::new(text);
        let n = t.count("node count", MAX_NODES)?;
        let distances = t.matrix(n, n, "distance")?;
        let mut windows = Vec::with_capacity(n);
        for i in 0..n {
            let e = t.int(&format!("earliest[{i}]"))?;
            let l = t.int(&format!("latest[{i}]"))?;
            windows.push((e, l));
        }
        t.finish()?;
        Tsptw::new(distances, windows)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        for row in &self.distances {
            write_row(&mut out, row);
        }
        for &(e, l) in &self.windows {
            write_row(&mut out, &[e, l]);
        }
        out
    }

    /// Random Euclidean instance whose windows are centred on a random tour,
    /// so that most instances are feasible. `slack` widens every window.
    pub fn random<R: Rng>(rng: &mut R, n: usize, slack: i64) -> Self {
        let pts: Vec<(f64, f64)> =
            (0..n).map(|_| (rng.gen_range(0.0..100.0), rng.gen_range(0.0..100.0))).collect();
        let distances: Vec<Vec<i64>> = pts
            .iter()
            .map(|a| pts.iter().map(|b| ((a.0 - b.0).hypot(a.1 - b.1)).round() as i64).collect())
            .collect();
        let mut order: Vec<usize> = (1..n).collect();
        order.shuffle(rng);
        let mut windows = vec![(0, 0); n];
        let (mut t, mut at) = (0i64, 0usize);
        for &c in &order {
            t += distances[at][c];
            let lo = (t - rng.gen_range(0..=slack)).max(0);
            windows[c] = (lo, t + rng.gen_range(0..=slack));
            at = c;
        }
        t += distances[at][0];
        windows[0] = (0, t + slack);
        Tsptw::new(distances, windows).expect("generated instance is valid")
    }

    fn closest(&self, from: u64, to: usize) -> i64 {
        bits(from).map(|l| self.distances[l][to]).min().unwrap_or(INFINITY)
    }

    fn customers_left(&self, depth: usize) -> usize {
        (self.len() - 1).saturating_sub(depth)
    }
}

impl Problem for Tsptw {
    type State = TsptwState;

    fn nb_variables(&self) -> usize {
        self.len()
    }

    fn root_state(&self) -> TsptwState {
        let all = if self.len() == 64 { u64::MAX } else { (1u64 << self.len()) - 1 };
        TsptwState { position: 1, time: 0, must: all & !1, maybe: 0 }
    }

    fn root_value(&self) -> Value {
        0
    }

    fn for_each_in_domain(&self, s: &TsptwState, depth: usize, f: &mut dyn FnMut(i64)) {
        let left = self.customers_left(depth);
        if left == 0 {
            if s.must == 0 && s.time + self.closest(s.position, 0) <= self.horizon() {
                f(0);
            }
            return;
        }
        let must_count = s.must.count_ones() as usize;
        let candidates = if must_count < left { s.must | s.maybe } else { s.must };
        for c in bits(candidates) {
            if s.time + self.closest(s.position, c) <= self.windows[c].1 {
                f(c as i64);
            }
        }
    }

    fn transition(&self, s: &TsptwState, d: Decision) -> TsptwState {
        let c = d.value as usize;
        let arrival = s.time + self.closest(s.position, c);
        TsptwState {
            position: 1 << c,
            time: arrival.max(self.windows[c].0),
            must: s.must & !(1 << c),
            maybe: s.maybe & !(1 << c),
        }
    }

    fn transition_value(&self, s: &TsptwState, d: Decision) -> Value {
        self.closest(s.position, d.value as usize)
    }

    /// Cheapest incoming edge of every node still to be entered, including the
    /// depot; `INFINITY` when some required customer is already out of reach.
    fn rough_bound(&self, s: &TsptwState, depth: usize) -> Value {
        let left = self.customers_left(depth);
        let must_count = s.must.count_ones() as usize;
        if must_count > left {
            return INFINITY;
        }
        let reachable = |c: usize| s.time + self.closest(s.position, c) <= self.windows[c].1;
        let mut bound = 0;
        for c in bits(s.must) {
            if !reachable(c) {
                return INFINITY;
            }
            bound += self.cheapest_in[c];
        }
        let extra = left - must_count;
        if extra > 0 {
            let mut optional: Vec<i64> =
                bits(s.maybe).filter(|&c| reachable(c)).map(|c| self.cheapest_in[c]).collect();
            if optional.len() < extra {
                return INFINITY;
            }
            optional.sort_unstable();
            bound += optional[..extra].iter().sum::<i64>();
        }
        bound += if left == 0 { self.closest(s.position, 0) } else { self.cheapest_in[0] };
        if s.time + bound > self.horizon() {
            return INFINITY;
        }
        bound
    }
}

impl Relaxation for Tsptw {
    fn merge(&self, states: &[&TsptwState]) -> TsptwState {
        let mut position = 0;
        let mut time = i64::MAX;
        let mut must = u64::MAX;
        let mut union = 0;
        for s in states {
            position |= s.position;
            time = time.min(s.time);
            must &= s.must;
            union |= s.must | s.maybe;
        }
        TsptwState { position, time, must, maybe: union & !must }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Tsptw {
        let d = vec![vec![0, 2, 9, 10], vec![1, 0, 6, 4], vec![15, 7, 0, 8], vec![6, 3, 12, 0]];
        Tsptw::new(d, vec![(0, 100), (0, 10), (5, 30), (0, 50)]).unwrap()
    }

    #[test]
    fn merge_builds_must_and_maybe() {
        let t = small();
        let a = TsptwState { position: 0b0010, time: 5, must: 0b1100, maybe: 0 };
        let b = TsptwState { position: 0b0100, time: 3, must: 0b1010, maybe: 0 };
        let m = t.merge(&[&a, &b]);
        assert_eq!(m, TsptwState { position: 0b0110, time: 3, must: 0b1000, maybe: 0b0110 });
    }

    #[test]
    fn final_decision_returns_to_depot() {
        let t = small();
        let s = TsptwState { position: 0b1000, time: 20, must: 0, maybe: 0 };
        assert_eq!(t.domain(&s, 3), vec![0]);
        assert_eq!(t.transition_value(&s, Decision { variable: 3, value: 0 }), 6);
        let late = TsptwState { time: 95, ..s };
        assert!(t.domain(&late, 3).is_empty());
    }

    #[test]
    fn windows_filter_the_domain() {
        let t = small();
        let s = TsptwState { position: 0b0100, time: 20, must: 0b1010, maybe: 0 };
        assert_eq!(t.domain(&s, 1), vec![3]);
        assert_eq!(t.rough_bound(&s, 1), INFINITY);
    }

    #[test]
    fn text_round_trip() {
        let t = small();
        assert_eq!(Tsptw::parse(&t.to_text()).unwrap(), t);
    }
}
