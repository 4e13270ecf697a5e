//! Exhaustive-enumeration oracles, written directly from the problem
//! definitions without reusing any of the solver's models.

#![allow(dead_code)]

use ddbb::problems::{Bkp, Psp, Srflp, Tsptw};
use ddbb::{Instance, ProblemKind};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub mod checks;

/// Best objective of `instance` in its natural sense, `None` if infeasible.
pub fn optimum(instance: &Instance) -> Option<f64> {
    match instance {
        Instance::Bkp(b) => Some(bkp(b) as f64),
        Instance::Tsptw(t) => tsptw(t).map(|v| v as f64),
        Instance::Psp(p) => psp(p).map(|v| v as f64),
        Instance::Srflp(s) => Some(srflp_twice(s) as f64 / 2.0),
    }
}

pub fn bkp(b: &Bkp) -> i64 {
    fn go(b: &Bkp, j: usize, room: i64) -> i64 {
        if j == b.values.len() {
            return 0;
        }
        let mut best = 0;
        let mut x = 0;
        while x <= b.quantities[j] && x * b.weights[j] <= room {
            best = best.max(x * b.values[j] + go(b, j + 1, room - x * b.weights[j]));
            x += 1;
        }
        best
    }
    go(b, 0, b.capacity)
}

/// Calls `f` on every permutation of `items`.
pub fn permutations(items: &mut Vec<usize>, k: usize, f: &mut dyn FnMut(&[usize])) {
    if k == items.len() {
        f(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, f);
        items.swap(k, i);
    }
}

pub fn tsptw(t: &Tsptw) -> Option<i64> {
    let n = t.distances.len();
    let d = &t.distances;
    let mut best: Option<i64> = None;
    let mut customers: Vec<usize> = (1..n).collect();
    permutations(&mut customers, 0, &mut |tour| {
        let (mut time, mut cost, mut at) = (0i64, 0i64, 0usize);
        for &c in tour {
            time = (time + d[at][c]).max(t.windows[c].0);
            if time > t.windows[c].1 {
                return;
            }
            cost += d[at][c];
            at = c;
        }
        if time + d[at][0] > t.windows[0].1 {
            return;
        }
        cost += d[at][0];
        best = Some(best.map_or(cost, |b| b.min(cost)));
    });
    best
}

/// Forward enumeration over periods. Units of an item are delivered in the
/// order they are produced, so the stocking cost of an item is
/// `S_i * (sum of due periods - sum of production periods)`.
pub fn psp(p: &Psp) -> Option<i64> {
    let n = p.stocking.len();
    let h = p.demand.len();
    // cumulative demand due by the end of each period
    let mut due_by = vec![vec![0i64; n]; h];
    let mut due_sum = vec![0i64; n];
    for period in 0..h {
        for i in 0..n {
            due_by[period][i] = p.demand[period][i] + if period > 0 { due_by[period - 1][i] } else { 0 };
            due_sum[i] += p.demand[period][i] * period as i64;
        }
    }
    let total = due_by[h - 1].clone();

    struct Search<'a> {
        p: &'a Psp,
        due_by: Vec<Vec<i64>>,
        total: Vec<i64>,
        made: Vec<i64>,
        best: Option<i64>,
    }
    impl Search<'_> {
        fn go(&mut self, period: usize, last: Option<usize>, cost: i64) {
            let h = self.due_by.len();
            if period == h {
                if self.made == self.total {
                    self.best = Some(self.best.map_or(cost, |b| b.min(cost)));
                }
                return;
            }
            let n = self.made.len();
            let mut options: Vec<Option<usize>> = (0..n).map(Some).collect();
            options.push(None);
            for choice in options {
                let mut step = 0;
                if let Some(i) = choice {
                    if self.made[i] == self.total[i] {
                        continue;
                    }
                    self.made[i] += 1;
                    // stocking is charged as minus the production period
                    step -= self.p.stocking[i] * period as i64;
                    if let Some(l) = last {
                        step += self.p.changeover[l][i];
                    }
                }
                let ok = (0..n).all(|k| self.made[k] >= self.due_by[period][k]);
                if ok {
                    self.go(period + 1, choice.or(last), cost + step);
                }
                if let Some(i) = choice {
                    self.made[i] -= 1;
                }
            }
        }
    }
    let mut s = Search { p, due_by, total, made: vec![0; n], best: None };
    s.go(0, None, 0);
    let stock_due: i64 = (0..n).map(|i| p.stocking[i] * due_sum[i]).sum();
    s.best.map(|b| b + stock_due)
}

/// Twice the best layout cost: centre positions are doubled to stay integral.
pub fn srflp_twice(s: &Srflp) -> i64 {
    let n = s.lengths.len();
    let mut best = i64::MAX;
    let mut order: Vec<usize> = (0..n).collect();
    permutations(&mut order, 0, &mut |order| {
        let mut centre = vec![0i64; n];
        let mut left = 0;
        for &d in order {
            centre[d] = 2 * left + s.lengths[d];
            left += s.lengths[d];
        }
        let mut cost = 0;
        for i in 0..n {
            for j in i + 1..n {
                cost += s.traffic[i][j] * (centre[i] - centre[j]).abs();
            }
        }
        best = best.min(cost);
    });
    best
}

/// The `count` seeded random instances of `kind` used by the equivalence
/// suites. TSPTW instances without a feasible tour are skipped.
pub fn random_suite(kind: ProblemKind, count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let instance = Instance::random(kind, &mut rng);
        if let Instance::Tsptw(t) = &instance {
            if tsptw(t).is_none() {
                continue;
            }
        }
        out.push(instance);
    }
    out
}
