//! Exhaustive cut enumeration: the sparsest-cut oracle, the Cheeger constant
//! and conductance.
//!
//! Cuts are enumerated in Gray-code order with vertex 0 pinned inside `S`, so
//! each of the `2^(n-1) - 1` nontrivial partitions is visited once and every
//! step moves a single vertex. Crossing weights are updated from neighbor
//! lists; a rank-1 demand graph needs only the running measure `mu(S)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{rank1_decompose, sparsity, Cut, InstancePair, SparsityReport, WeightedGraph, RANK1_TOL};

/// Largest vertex count accepted by the default oracle entry points.
pub const ORACLE_MAX_N: usize = 24;

/// Hard ceiling for [`brute_force_opt_bounded`].
pub const ORACLE_HARD_MAX_N: usize = 40;

const TIE_REL: f64 = 1e-12;
const TIE_ABS: f64 = 1e-14;

/// Running unordered crossing weight `sum_{u in S, v not in S} w(u,v)`.
struct CrossTracker {
    adj: Vec<Vec<(usize, f64)>>,
    off_degree: Vec<f64>,
    /// `sum_{u in S, u != v} w(v,u)` for every `v`.
    toward_s: Vec<f64>,
    cross: f64,
}

impl CrossTracker {
    fn new(g: &WeightedGraph) -> Self {
        let n = g.n();
        Self {
            adj: g.adjacency(),
            off_degree: (0..n).map(|v| g.degree_without_loop(v)).collect(),
            toward_s: vec![0.0; n],
            cross: 0.0,
        }
    }

    fn enter(&mut self, v: usize) {
        self.cross += self.off_degree[v] - 2.0 * self.toward_s[v];
        for &(u, w) in &self.adj[v] {
            self.toward_s[u] += w;
        }
    }

    fn leave(&mut self, v: usize) {
        self.cross += 2.0 * self.toward_s[v] - self.off_degree[v];
        for &(u, w) in &self.adj[v] {
            self.toward_s[u] -= w;
        }
    }
}

enum DemandTracker {
    General { tracker: CrossTracker, total: f64 },
    RankOne { mu: Vec<f64>, mass: f64 },
}

impl DemandTracker {
    fn for_graph(h: &WeightedGraph) -> Self {
        match rank1_decompose(h, RANK1_TOL).measure() {
            Some(m) => DemandTracker::RankOne { mu: m.mu, mass: 0.0 },
            None => DemandTracker::General {
                tracker: CrossTracker::new(h),
                total: h.total(),
            },
        }
    }

    fn enter(&mut self, v: usize) {
        match self {
            DemandTracker::General { tracker, .. } => tracker.enter(v),
            DemandTracker::RankOne { mu, mass } => *mass += mu[v],
        }
    }

    fn leave(&mut self, v: usize) {
        match self {
            DemandTracker::General { tracker, .. } => tracker.leave(v),
            DemandTracker::RankOne { mu, mass } => *mass -= mu[v],
        }
    }

    /// Normalized crossing mass `Hbar(S)`.
    fn normalized_cut(&self) -> f64 {
        match self {
            DemandTracker::General { tracker, total } => 2.0 * tracker.cross / total,
            DemandTracker::RankOne { mass, .. } => 2.0 * mass * (1.0 - mass),
        }
    }
}

enum Step {
    Enter(usize),
    Leave(usize),
    Visit { bits: u64, size: usize },
}

/// Gray-code walk over the nontrivial cuts containing vertex 0. `Visit` is
/// emitted after the `Enter`/`Leave` of the move that produced the cut.
fn gray_walk(n: usize, mut step: impl FnMut(Step)) {
    if n < 2 {
        return;
    }
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut bits: u64 = 1;
    let mut size = 1;
    step(Step::Enter(0));
    step(Step::Visit { bits, size });
    for i in 1..(1u64 << (n - 1)) {
        let v = i.trailing_zeros() as usize + 1;
        let b = 1u64 << v;
        if bits & b == 0 {
            bits |= b;
            size += 1;
            step(Step::Enter(v));
        } else {
            bits &= !b;
            size -= 1;
            step(Step::Leave(v));
        }
        if bits != full {
            step(Step::Visit { bits, size });
        }
    }
}

/// Lexicographic comparison of the member lists encoded by two bitmasks.
fn lex_cmp_bits(a: u64, b: u64) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    let above = if low >= 63 { 0 } else { !((2u64 << low) - 1) };
    let a_holds = a >> low & 1 == 1;
    let other = if a_holds { b } else { a };
    // the set holding the lowest differing element is smaller unless the
    // other set is a prefix of it
    let holder_less = other & above != 0;
    if a_holds == holder_less {
        Ordering::Less
    } else {
        Ordering::Greater
    }
}

/// Keeps the minimum value with lexicographic tie-breaking on the member set.
struct ArgMin {
    value: f64,
    bits: u64,
    found: bool,
}

impl ArgMin {
    fn new() -> Self {
        Self {
            value: f64::INFINITY,
            bits: 0,
            found: false,
        }
    }

    fn offer(&mut self, value: f64, bits: u64) {
        if !self.found {
            *self = Self {
                value,
                bits,
                found: true,
            };
            return;
        }
        let tol = TIE_ABS + TIE_REL * self.value.abs().max(value.abs());
        if value < self.value - tol
            || (value <= self.value + tol && lex_cmp_bits(bits, self.bits) == Ordering::Less)
        {
            self.value = value;
            self.bits = bits;
        }
    }
}

/// Minimum-sparsity cut over all nontrivial cuts with positive demand mass,
/// for `n <= ORACLE_MAX_N`.
pub fn brute_force_opt(pair: &InstancePair) -> Result<(Cut, SparsityReport)> {
    brute_force_opt_bounded(pair, ORACLE_MAX_N)
}

/// As [`brute_force_opt`] with a caller-chosen size limit (at most
/// [`ORACLE_HARD_MAX_N`]). Rank-1 demand graphs take a constant-time demand
/// update per step, which makes n around 32 practical.
pub fn brute_force_opt_bounded(pair: &InstancePair, max_n: usize) -> Result<(Cut, SparsityReport)> {
    let n = pair.n();
    let max = max_n.min(ORACLE_HARD_MAX_N);
    if n > max {
        return Err(Error::TooLarge { n, max });
    }
    let g_total = pair.g.total();
    let mut g = CrossTracker::new(&pair.g);
    let mut h = DemandTracker::for_graph(&pair.h);
    let demand_floor = 1e-12;
    let mut best = ArgMin::new();
    gray_walk(n, |step| match step {
        Step::Enter(v) => {
            g.enter(v);
            h.enter(v);
        }
        Step::Leave(v) => {
            g.leave(v);
            h.leave(v);
        }
        Step::Visit { bits, .. } => {
            let hc = h.normalized_cut();
            if hc > demand_floor {
                best.offer((2.0 * g.cross / g_total) / hc, bits);
            }
        }
    });

    if !best.found {
        return Err(Error::NoFeasibleCut);
    }
    let cut = Cut::from_bits(n, best.bits);
    let report = sparsity(pair, &cut);
    Ok((cut, report))
}

/// Normalized Cheeger constant
/// `min_S cut(S) / (dbar * min(|S|, |V - S|))` with `dbar = G_tot / n`,
/// by exhaustive enumeration.
pub fn cheeger_constant(g: &WeightedGraph) -> Result<(f64, Cut)> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let dbar = g.total() / n as f64;
    let mut tracker = CrossTracker::new(g);
    let mut best = ArgMin::new();
    gray_walk(n, |step| match step {
        Step::Enter(v) => tracker.enter(v),
        Step::Leave(v) => tracker.leave(v),
        Step::Visit { bits, size } => {
            let side = size.min(n - size) as f64;
            best.offer(tracker.cross / (dbar * side), bits);
        }
    });
    if !best.found {
        return Err(Error::NoFeasibleCut);
    }
    Ok((best.value, Cut::from_bits(n, best.bits)))
}

/// Conductance `min_S cut(S) / min(vol(S), vol(V - S))`, by exhaustive
/// enumeration. Sides of zero volume are skipped.
pub fn conductance(g: &WeightedGraph) -> Result<(f64, Cut)> {
    let n = g.n();
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    let degree = g.degrees();
    let total = g.total();
    let mut tracker = CrossTracker::new(g);
    let mut vol = 0.0;
    let mut best = ArgMin::new();
    gray_walk(n, |step| match step {
        Step::Enter(v) => {
            tracker.enter(v);
            vol += degree[v];
        }
        Step::Leave(v) => {
            tracker.leave(v);
            vol -= degree[v];
        }
        Step::Visit { bits, .. } => {
            let small = vol.min(total - vol);
            if small > 1e-12 * total {
                best.offer(tracker.cross / small, bits);
            }
        }
    });
    if !best.found {
        return Err(Error::NoFeasibleCut);
    }
    Ok((best.value, Cut::from_bits(n, best.bits)))
}

/// Visits every nontrivial cut (vertex 0 inside) as a bitmask. Intended for
/// small `n` checks that need per-cut quantities.
pub fn for_each_cut(n: usize, mut visit: impl FnMut(u64)) -> Result<()> {
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge {
            n,
            max: ORACLE_MAX_N,
        });
    }
    gray_walk(n, |step| {
        if let Step::Visit { bits, .. } = step {
            visit(bits)
        }
    });
    Ok(())
}
