//! Single-machine production scheduling with stocking and changeover costs.
//!
//! Periods are scheduled backwards: depth `d` decides what is produced in
//! period `H - 1 - d`. A decision is an item index, or [`IDLE`].

use super::text::{invalid, write_row, InstanceError, Tokens};
use crate::model::{Decision, Problem, Relaxation};
use crate::value::{Value, INFINITY};

pub const IDLE: i64 = -1;
pub const MAX_ITEMS: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Psp {
    pub horizon: usize,
    /// `changeover[a][b]`: cost of producing `b` right after `a`.
    pub changeover: Vec<Vec<i64>>,
    pub stocking: Vec<i64>,
    /// `demand[p][i]` units of item `i` due at the end of period `p`.
    pub demand: Vec<Vec<i64>>,
    /// `due[i][r - 1]`: period of the `r`-th earliest unit of item `i`.
    due: Vec<Vec<usize>>,
    mst: Vec<i64>,
    /// Shortest-path closure of `changeover`, charged by merged states.
    closure: Vec<Vec<i64>>,
    closure_mst: Vec<i64>,
    /// True when `changeover` already satisfies the triangle inequality.
    metric: bool,
}

/// `next` is the item produced in the period after the one being decided,
/// `None` when that is unknown or nothing has been produced yet; `remaining`
/// counts the units of each item still to produce.
///
/// `relaxed` marks states derived from a merge on an instance whose changeover
/// costs are not metric. Such states pay shortest-path changeover costs: a
/// merged state skips the units some of its paths still had to produce, and
/// skipping an item can only make the sequence cheaper under a metric.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PspState {
    pub next: Option<u8>,
    pub remaining: Box<[u16]>,
    pub relaxed: bool,
}

impl Psp {
    pub fn new(
        horizon: usize,
        changeover: Vec<Vec<i64>>,
        stocking: Vec<i64>,
        demand: Vec<Vec<i64>>,
    ) -> Result<Self, InstanceError> {
        let n = stocking.len();
        if n == 0 || n > MAX_ITEMS {
            return Err(invalid(format!("item count must be between 1 and {MAX_ITEMS}")));
        }
        if changeover.len() != n || changeover.iter().any(|r| r.len() != n) {
            return Err(invalid("changeover matrix must be n x n"));
        }
        if demand.len() != horizon || demand.iter().any(|r| r.len() != n) {
            return Err(invalid("demand matrix must be H x n"));
        }
        if changeover.iter().flatten().chain(&stocking).chain(demand.iter().flatten()).any(|&v| v < 0)
        {
            return Err(invalid("costs and demands must be non-negative"));
        }
        let mut due = vec![Vec::new(); n];
        for (p, row) in demand.iter().enumerate() {
            for (i, &q) in row.iter().enumerate() {
                due[i].extend(std::iter::repeat(p).take(q as usize));
            }
        }
        if due.iter().any(|d| d.len() > u16::MAX as usize) {
            return Err(invalid("too many units of a single item"));
        }
        let mut cumulative = 0;
        for (p, row) in demand.iter().enumerate() {
            cumulative += row.iter().sum::<i64>();
            if cumulative > p as i64 + 1 {
                return Err(invalid(format!(
                    "demands due by period {p} exceed the machine capacity"
                )));
            }
        }
        let mst = mst_table(&changeover);
        let closure = shortest_paths(&changeover);
        let metric = closure == changeover;
        let closure_mst = if metric { mst.clone() } else { mst_table(&closure) };
        Ok(Psp { horizon, changeover, stocking, demand, due, mst, closure, closure_mst, metric })
    }

    pub fn items(&self) -> usize {
        self.stocking.len()
    }

    /// Format: `n H`, the `n x n` changeover matrix, the stocking costs, then
    /// `H` lines of `n` demands.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut t = Tokens::new(text);
        let n = t.count("item count", MAX_ITEMS)?;
        let h = t.count("horizon", 1 << 16)?;
        let changeover = t.matrix(n, n, "changeover")?;
        let stocking = t.ints(n, "stocking")?;
        let demand = t.matrix(h, n, "demand")?;
        t.finish()?;
        Psp::new(h, changeover, stocking, demand)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.items(), self.horizon);
        for row in &self.changeover {
            write_row(&mut out, row);
        }
        write_row(&mut out, &self.stocking);
        for row in &self.demand {
            write_row(&mut out, row);
        }
        out
    }

    fn period(&self, depth: usize) -> usize {
        self.horizon - 1 - depth
    }

    /// Due period of the last unit still to produce when `r` units remain.
    fn due_of(&self, item: usize, r: u16) -> usize {
        self.due[item][r as usize - 1]
    }

    fn total_remaining(s: &PspState) -> usize {
        s.remaining.iter().map(|&r| r as usize).sum()
    }

    /// Cost of producing the remaining units of each item as late as possible,
    /// ignoring the other items; `None` if some unit cannot be placed.
    fn stocking_bound(&self, s: &PspState, period: usize) -> Option<i64> {
        let mut total = 0;
        for (i, &r) in s.remaining.iter().enumerate() {
            let mut slot = period as i64 + 1;
            for k in (1..=r).rev() {
                let due = self.due_of(i, k) as i64;
                slot = (slot - 1).min(due);
                if slot < 0 {
                    return None;
                }
                total += self.stocking[i] * (due - slot);
            }
        }
        Some(total)
    }
}

fn shortest_paths(c: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let n = c.len();
    let mut d = c.to_vec();
    for k in 0..n {
        for a in 0..n {
            for b in 0..n {
                d[a][b] = d[a][b].min(d[a][k] + d[k][b]);
            }
        }
    }
    d
}

/// Weight of a minimum spanning tree over every subset of items, with edge
/// weight `min(c[a][b], c[b][a])`.
fn mst_table(c: &[Vec<i64>]) -> Vec<i64> {
    let n = c.len();
    let w = |a: usize, b: usize| c[a][b].min(c[b][a]);
    (0..1usize << n)
        .map(|mask| {
            let nodes: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
            if nodes.len() <= 1 {
                return 0;
            }
            let mut best: Vec<i64> = nodes.iter().map(|&v| w(nodes[0], v)).collect();
            let mut used = vec![false; nodes.len()];
            used[0] = true;
            let mut total = 0;
            for _ in 1..nodes.len() {
                let (k, _) = best
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| !used[*k])
                    .min_by_key(|(_, &b)| b)
                    .expect("unvisited node");
                used[k] = true;
                total += best[k];
                for j in 0..nodes.len() {
                    if !used[j] {
                        best[j] = best[j].min(w(nodes[k], nodes[j]));
                    }
                }
            }
            total
        })
        .collect()
}

impl Problem for Psp {
    type State = PspState;

    fn nb_variables(&self) -> usize {
        self.horizon
    }

    fn root_state(&self) -> PspState {
        PspState {
            next: None,
            remaining: self.due.iter().map(|d| d.len() as u16).collect(),
            relaxed: false,
        }
    }

    fn root_value(&self) -> Value {
        0
    }

    fn for_each_in_domain(&self, s: &PspState, depth: usize, f: &mut dyn FnMut(i64)) {
        let period = self.period(depth);
        let total = Self::total_remaining(s);
        if total > period + 1 {
            return;
        }
        for (i, &r) in s.remaining.iter().enumerate() {
            if r > 0 && period <= self.due_of(i, r) {
                f(i as i64);
            }
        }
        if total < period + 1 {
            f(IDLE);
        }
    }

    fn transition(&self, s: &PspState, d: Decision) -> PspState {
        if d.value == IDLE {
            return s.clone();
        }
        let i = d.value as usize;
        let mut remaining = s.remaining.clone();
        remaining[i] -= 1;
        PspState { next: Some(i as u8), remaining, relaxed: s.relaxed }
    }

    fn transition_value(&self, s: &PspState, d: Decision) -> Value {
        if d.value == IDLE {
            return 0;
        }
        let i = d.value as usize;
        let period = self.period(d.variable);
        let stock = self.stocking[i] * (self.due_of(i, s.remaining[i]) - period) as i64;
        let costs = if s.relaxed { &self.closure } else { &self.changeover };
        let change = s.next.map_or(0, |next| costs[i][next as usize]);
        stock + change
    }

    /// Per-item latest-possible stocking cost plus a spanning tree over the
    /// items that still need to be linked into the sequence.
    fn rough_bound(&self, s: &PspState, depth: usize) -> Value {
        if depth >= self.horizon {
            return 0;
        }
        let period = self.period(depth);
        if Self::total_remaining(s) > period + 1 {
            return INFINITY;
        }
        let Some(stock) = self.stocking_bound(s, period) else {
            return INFINITY;
        };
        let mut mask = 0usize;
        for (i, &r) in s.remaining.iter().enumerate() {
            if r > 0 {
                mask |= 1 << i;
            }
        }
        if mask == 0 {
            return stock;
        }
        if let Some(next) = s.next {
            mask |= 1 << next;
        }
        let mst = if s.relaxed { &self.closure_mst } else { &self.mst };
        stock + mst[mask]
    }
}

impl Relaxation for Psp {
    fn merge(&self, states: &[&PspState]) -> PspState {
        let n = self.items();
        let remaining =
            (0..n).map(|i| states.iter().map(|s| s.remaining[i]).min().unwrap_or(0)).collect();
        PspState { next: None, remaining, relaxed: !self.metric }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Psp {
        // two items, five periods; item 0 due at 1 and 4, item 1 due at 3
        Psp::new(
            5,
            vec![vec![0, 5], vec![3, 0]],
            vec![2, 4],
            vec![vec![0, 0], vec![1, 0], vec![0, 0], vec![0, 1], vec![1, 0]],
        )
        .unwrap()
    }

    #[test]
    fn due_periods_and_root() {
        let p = small();
        assert_eq!(p.due, vec![vec![1, 4], vec![3]]);
        assert_eq!(*p.root_state().remaining, [2, 1]);
    }

    #[test]
    fn domain_allows_idle_only_with_spare_periods() {
        let p = small();
        let root = p.root_state();
        // period 4: only item 0 is due by then; 3 units left for 5 periods
        assert_eq!(p.domain(&root, 0), vec![0, IDLE]);
        let tight = PspState { next: None, remaining: vec![1, 1].into(), relaxed: false };
        // period 1 with 2 units left and 2 periods: no idling
        assert_eq!(p.domain(&tight, 3), vec![0, 1]);
        // period 0 with 2 units left: infeasible
        assert!(p.domain(&tight, 4).is_empty());
    }

    #[test]
    fn transition_value_charges_stock_and_changeover() {
        let p = small();
        let s = PspState { next: Some(0), remaining: vec![1, 1].into(), relaxed: false };
        // item 1 (due 3) produced in period 2 before item 0
        let d = Decision { variable: 2, value: 1 };
        assert_eq!(p.transition_value(&s, d), 4 + 3);
    }

    #[test]
    fn spanning_tree_table() {
        let c = vec![vec![0, 5, 1], vec![3, 0, 7], vec![9, 2, 0]];
        let t = mst_table(&c);
        assert_eq!(t[0b011], 3);
        assert_eq!(t[0b111], 1 + 2);
        assert_eq!(t[0b100], 0);
    }

    #[test]
    fn merged_states_use_shortest_changeovers_on_non_metric_costs() {
        // 0 -> 2 directly costs 10, through 1 only 2
        let c = vec![vec![0, 1, 10], vec![1, 0, 1], vec![10, 1, 0]];
        let p = Psp::new(3, c, vec![0, 0, 0], vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]])
            .unwrap();
        assert!(!p.metric);
        let a = PspState { next: Some(2), remaining: vec![1, 1, 0].into(), relaxed: false };
        let b = PspState { next: Some(2), remaining: vec![1, 0, 0].into(), relaxed: false };
        let m = p.merge(&[&a, &b]);
        assert!(m.relaxed);
        let exact = PspState { next: Some(2), ..b };
        let merged = PspState { next: Some(2), ..m };
        let d = Decision { variable: 2, value: 0 };
        assert_eq!(p.transition_value(&exact, d), 10);
        assert_eq!(p.transition_value(&merged, d), 2);
        assert!(p.transition(&merged, d).relaxed);

        let metric = small();
        assert!(metric.metric);
        assert!(!metric.merge(&[&metric.root_state()]).relaxed);
    }

    #[test]
    fn overloaded_instances_are_rejected() {
        let r = Psp::new(1, vec![vec![0]], vec![1], vec![vec![2]]);
        assert!(matches!(r, Err(InstanceError::Invalid(_))));
    }

    #[test]
    fn text_round_trip() {
        let p = small();
        assert_eq!(Psp::parse(&p.to_text()).unwrap(), p);
    }
}
