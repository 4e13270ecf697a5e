//! Single-row facility layout (minimize weighted center-to-center distances).
//!
//! Departments are placed left to right. The state tracks which departments
//! still have to be placed and, for each of them, the traffic crossing the
//! current right end of the row ("cut").

use rand::Rng;

use super::text::{invalid, write_row, InstanceError, Tokens};
use crate::model::{Decision, Problem, Relaxation};
use crate::value::{Value, INFINITY};

pub const MAX_DEPARTMENTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Srflp {
    pub lengths: Vec<i64>,
    /// Symmetric traffic matrix; the diagonal is ignored.
    pub traffic: Vec<Vec<i64>>,
    /// `sum_{i<j} C_ij (L_i + L_j)`, i.e. twice the constant part of the objective.
    constant_twice: i64,
}

/// `must` holds departments every merged path still has to place, `maybe`
/// those only some paths still have to place.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SrflpState {
    pub must: u64,
    pub maybe: u64,
    pub cuts: Box<[i64]>,
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

fn sum_smallest(mut v: Vec<i64>, k: usize) -> i64 {
    if k == 0 {
        return 0;
    }
    v.sort_unstable();
    v.iter().take(k).sum()
}

impl Srflp {
    pub fn new(lengths: Vec<i64>, traffic: Vec<Vec<i64>>) -> Result<Self, InstanceError> {
        let n = lengths.len();
        if n == 0 || n > MAX_DEPARTMENTS {
            return Err(invalid(format!("department count must be between 1 and {MAX_DEPARTMENTS}")));
        }
        if traffic.len() != n || traffic.iter().any(|r| r.len() != n) {
            return Err(invalid("traffic matrix must be n x n"));
        }
        if lengths.iter().any(|&l| l <= 0) {
            return Err(invalid("lengths must be positive"));
        }
        for i in 0..n {
            for j in 0..n {
                if i != j && traffic[i][j] < 0 {
                    return Err(invalid("traffic must be non-negative"));
                }
                if traffic[i][j] != traffic[j][i] {
                    return Err(invalid(format!("traffic matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        let mut constant_twice = 0;
        for i in 0..n {
            for j in i + 1..n {
                constant_twice += traffic[i][j] * (lengths[i] + lengths[j]);
            }
        }
        Ok(Srflp { lengths, traffic, constant_twice })
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    /// Twice the objective's constant term. The objective of a layout is
    /// `value + constant_twice / 2`, which may end in `.5`.
    pub fn constant_twice(&self) -> i64 {
        self.constant_twice
    }

    /// Format: `n`, the `n` lengths, then the `n x n` traffic matrix.
    pub fn parse(text: &str) -> Result<Self, InstanceError> {
        let mut t = Tokens::new(text);
        let n = t.count("department count", MAX_DEPARTMENTS)?;
        let lengths = t.ints(n, "length")?;
        let traffic = t.matrix(n, n, "traffic")?;
        t.finish()?;
        Srflp::new(lengths, traffic)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}\n", self.len());
        write_row(&mut out, &self.lengths);
        for row in &self.traffic {
            write_row(&mut out, row);
        }
        out
    }

    pub fn random<R: Rng>(rng: &mut R, n: usize) -> Self {
        let lengths = (0..n).map(|_| rng.gen_range(1..=10)).collect();
        let mut traffic = vec![vec![0; n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let c = if rng.gen_bool(0.7) { rng.gen_range(0..=10) } else { 0 };
                traffic[i][j] = c;
                traffic[j][i] = c;
            }
        }
        Srflp::new(lengths, traffic).expect("generated instance is valid")
    }

    /// Exact objective of a complete left-to-right layout, doubled to stay integral.
    pub fn layout_cost_twice(&self, order: &[usize]) -> i64 {
        let mut pos = vec![0i64; self.len()];
        let mut x = 0;
        for &d in order {
            pos[d] = 2 * x + self.lengths[d];
            x += self.lengths[d];
        }
        let mut total = 0;
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                total += self.traffic[i][j] * (pos[i] - pos[j]).abs();
            }
        }
        total
    }

    fn remaining(&self, depth: usize) -> usize {
        self.len() - depth
    }

    fn cut_bound(&self, s: &SrflpState, n_maybe: usize) -> i64 {
        let mut items: Vec<(i64, i64)> = bits(s.must).map(|i| (s.cuts[i], self.lengths[i])).collect();
        if n_maybe > 0 {
            let mut lens: Vec<i64> = bits(s.maybe).map(|i| self.lengths[i]).collect();
            let mut cuts: Vec<i64> = bits(s.maybe).map(|i| s.cuts[i]).collect();
            lens.sort_unstable();
            cuts.sort_unstable();
            for k in 0..n_maybe {
                items.push((cuts[n_maybe - 1 - k], lens[k]));
            }
        }
        // place departments by decreasing cut/length ratio
        items.sort_by(|a, b| (b.0 as i128 * a.1 as i128).cmp(&(a.0 as i128 * b.1 as i128)));
        let mut before = 0;
        let mut total = 0;
        for (c, l) in items {
            total += c * before;
            before += l;
        }
        total
    }

    fn edge_bound(&self, s: &SrflpState, r: usize, n_maybe: usize) -> i64 {
        if r < 3 {
            return 0;
        }
        let must: Vec<usize> = bits(s.must).collect();
        let maybe: Vec<usize> = bits(s.maybe).collect();
        let mut traffic = Vec::with_capacity(r * (r - 1) / 2);
        for (a, &i) in must.iter().enumerate() {
            for &j in &must[a + 1..] {
                traffic.push(self.traffic[i][j]);
            }
        }
        let mut mixed: Vec<i64> =
            must.iter().flat_map(|&i| maybe.iter().map(move |&j| self.traffic[i][j])).collect();
        mixed.sort_unstable();
        traffic.extend(mixed.into_iter().take(must.len() * n_maybe));
        let mut pp = Vec::new();
        for (a, &i) in maybe.iter().enumerate() {
            for &j in &maybe[a + 1..] {
                pp.push(self.traffic[i][j]);
            }
        }
        pp.sort_unstable();
        traffic.extend(pp.into_iter().take(n_maybe * n_maybe.saturating_sub(1) / 2));
        traffic.sort_unstable();

        let mut lens: Vec<i64> = must.iter().map(|&i| self.lengths[i]).collect();
        let mut maybe_lens: Vec<i64> = maybe.iter().map(|&i| self.lengths[i]).collect();
        maybe_lens.sort_unstable();
        lens.extend(maybe_lens.into_iter().take(n_maybe));
        lens.sort_unstable();
        let mut prefix = vec![0; lens.len() + 1];
        for (i, l) in lens.iter().enumerate() {
            prefix[i + 1] = prefix[i] + l;
        }

        // pairs at distance k (k departments in between) number r - 1 - k;
        // the largest traffics go to the closest pairs
        let mut total = 0;
        let mut idx = 0;
        for gap in (1..r - 1).rev() {
            let count = r - 1 - gap;
            for _ in 0..count {
                if idx < traffic.len() {
                    total += traffic[idx] * prefix[gap];
                    idx += 1;
                }
            }
        }
        total
    }
}

impl Problem for Srflp {
    type State = SrflpState;

    fn nb_variables(&self) -> usize {
        self.len()
    }

    fn root_state(&self) -> SrflpState {
        let all = if self.len() == 64 { u64::MAX } else { (1u64 << self.len()) - 1 };
        SrflpState { must: all, maybe: 0, cuts: vec![0; self.len()].into() }
    }

    fn root_value(&self) -> Value {
        self.constant_twice / 2
    }

    fn for_each_in_domain(&self, s: &SrflpState, depth: usize, f: &mut dyn FnMut(i64)) {
        let r = self.remaining(depth);
        let candidates =
            if (s.must.count_ones() as usize) < r { s.must | s.maybe } else { s.must };
        for d in bits(candidates) {
            f(d as i64);
        }
    }

    fn transition(&self, s: &SrflpState, d: Decision) -> SrflpState {
        let x = d.value as usize;
        let bit = 1u64 << x;
        let must = s.must & !bit;
        let maybe = s.maybe & !bit;
        let open = must | maybe;
        let cuts = (0..self.len())
            .map(|i| if open & (1 << i) != 0 { s.cuts[i] + self.traffic[x][i] } else { 0 })
            .collect();
        SrflpState { must, maybe, cuts }
    }

    /// Length of `x` times the traffic that crosses it: every required
    /// department's cut plus the smallest cuts among optional ones.
    fn transition_value(&self, s: &SrflpState, d: Decision) -> Value {
        let x = d.value as usize;
        let bit = 1u64 << x;
        let must = s.must & !bit;
        let maybe = s.maybe & !bit;
        let after = self.remaining(d.variable) - 1;
        let n_must = must.count_ones() as usize;
        let n_maybe = after.saturating_sub(n_must).min(maybe.count_ones() as usize);
        let crossing: i64 = bits(must).map(|i| s.cuts[i]).sum::<i64>()
            + sum_smallest(bits(maybe).map(|i| s.cuts[i]).collect(), n_maybe);
        self.lengths[x] * crossing
    }

    fn rough_bound(&self, s: &SrflpState, depth: usize) -> Value {
        let r = self.remaining(depth);
        let n_must = s.must.count_ones() as usize;
        if n_must > r {
            return INFINITY;
        }
        let n_maybe = r - n_must;
        if n_maybe > s.maybe.count_ones() as usize {
            return INFINITY;
        }
        self.cut_bound(s, n_maybe) + self.edge_bound(s, r, n_maybe)
    }
}

impl Relaxation for Srflp {
    fn merge(&self, states: &[&SrflpState]) -> SrflpState {
        let mut must = u64::MAX;
        let mut union = 0;
        for s in states {
            must &= s.must;
            union |= s.must | s.maybe;
        }
        let cuts = (0..self.len())
            .map(|i| {
                states
                    .iter()
                    .filter(|s| (s.must | s.maybe) & (1 << i) != 0)
                    .map(|s| s.cuts[i])
                    .min()
                    .unwrap_or(0)
            })
            .collect();
        SrflpState { must, maybe: union & !must, cuts }
    }
}
