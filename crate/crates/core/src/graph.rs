//! Weighted graph pairs, cuts and the sparsity objective.
//!
//! All sums range over ordered pairs `(u, v)`: an off-diagonal edge of weight
//! `w` contributes `2w` to the total, a self-loop contributes `w` once and
//! never crosses a cut.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Default tolerance for rank-1 detection, relative to the largest entry of the
/// normalized demand distribution.
pub const RANK1_TOL: f64 = 1e-9;

/// Symmetric nonnegative weight matrix with its ordered-pair total.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedGraph {
    n: usize,
    w: Vec<f64>,
    total: f64,
}

impl WeightedGraph {
    /// Builds a graph from undirected edges `(u, v, w)`; `u == v` is a self-loop.
    /// Repeated pairs accumulate.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<Self> {
        let mut w = vec![0.0; n * n];
        for &(u, v, x) in edges {
            if u >= n || v >= n {
                return Err(Error::IndexOutOfRange {
                    line: 0,
                    index: u.max(v),
                    n,
                });
            }
            if !x.is_finite() {
                return Err(Error::InvalidWeight(u, v));
            }
            if x < 0.0 {
                return Err(Error::NegativeWeight { line: 0, weight: x });
            }
            w[u * n + v] += x;
            if u != v {
                w[v * n + u] += x;
            }
        }
        Self::from_dense(n, w)
    }

    /// Builds a graph from a row-major `n * n` matrix. The matrix must be
    /// exactly symmetric and nonnegative. A zero total is allowed here; callers
    /// that need a probability distribution check [`WeightedGraph::total`].
    pub fn from_dense(n: usize, w: Vec<f64>) -> Result<Self> {
        if w.len() != n * n {
            return Err(Error::SizeMismatch(w.len(), n * n));
        }
        for u in 0..n {
            for v in 0..n {
                let x = w[u * n + v];
                if !x.is_finite() {
                    return Err(Error::InvalidWeight(u, v));
                }
                if x < 0.0 {
                    return Err(Error::NegativeWeight { line: 0, weight: x });
                }
                if x != w[v * n + u] {
                    return Err(Error::Asymmetric(u, v));
                }
            }
        }
        let total = w.iter().sum();
        Ok(Self { n, w, total })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.w[u * self.n + v]
    }

    /// Ordered-pair total weight (off-diagonal edges counted twice).
    pub fn total(&self) -> f64 {
        self.total
    }

    /// `w(u, v) / total`; a probability distribution over ordered pairs.
    #[inline]
    pub fn normalized(&self, u: usize, v: usize) -> f64 {
        self.weight(u, v) / self.total
    }

    pub fn dense(&self) -> &[f64] {
        &self.w
    }

    /// Weighted degree, self-loop included once.
    pub fn degree(&self, v: usize) -> f64 {
        self.w[v * self.n..(v + 1) * self.n].iter().sum()
    }

    pub fn degrees(&self) -> Vec<f64> {
        (0..self.n).map(|v| self.degree(v)).collect()
    }

    /// Sum of off-diagonal weights at `v`.
    pub fn degree_without_loop(&self, v: usize) -> f64 {
        self.degree(v) - self.weight(v, v)
    }

    /// Undirected edges `(u, v, w)` with `u <= v`, sorted, positive weight only.
    pub fn edges(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in u..self.n {
                let x = self.weight(u, v);
                if x > 0.0 {
                    out.push((u, v, x));
                }
            }
        }
        out
    }

    /// Neighbor lists (self-loops excluded).
    pub fn adjacency(&self) -> Vec<Vec<(usize, f64)>> {
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .filter(|&v| v != u && self.weight(u, v) > 0.0)
                    .map(|v| (v, self.weight(u, v)))
                    .collect()
            })
            .collect()
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).any(|v| self.weight(v, v) > 0.0)
    }

    /// Copy with weights divided by the total, so the new total is 1.
    pub fn normalize(&self) -> Self {
        let w = self.w.iter().map(|x| x / self.total).collect::<Vec<_>>();
        let total = w.iter().sum();
        Self { n: self.n, w, total }
    }

    /// Ordered-pair crossing weight `sum_{u,v} w(u,v) |1_S(u) - 1_S(v)|`,
    /// not normalized.
    pub fn crossing_weight(&self, s: &Cut) -> f64 {
        let mut acc = 0.0;
        for u in 0..self.n {
            if !s.contains(u) {
                continue;
            }
            for v in 0..self.n {
                if !s.contains(v) {
                    acc += self.weight(u, v);
                }
            }
        }
        2.0 * acc
    }

    pub fn is_connected(&self) -> bool {
        self.components().iter().all(|&c| c == 0)
    }

    /// Component label per vertex, labels in order of first appearance.
    pub fn components(&self) -> Vec<usize> {
        let adj = self.adjacency();
        let mut label = vec![usize::MAX; self.n];
        let mut next = 0;
        for root in 0..self.n {
            if label[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            label[root] = next;
            while let Some(u) = stack.pop() {
                for &(v, _) in &adj[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }
}

/// A graph `g` and a demand graph `h` on the same vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct InstancePair {
    pub g: WeightedGraph,
    pub h: WeightedGraph,
}

impl InstancePair {
    pub fn new(g: WeightedGraph, h: WeightedGraph) -> Result<Self> {
        if g.n() != h.n() {
            return Err(Error::SizeMismatch(g.n(), h.n()));
        }
        if g.total() <= 0.0 {
            return Err(Error::ZeroTotal);
        }
        if h.total() <= 0.0 {
            return Err(Error::EmptyDemand);
        }
        Ok(Self { g, h })
    }

    pub fn n(&self) -> usize {
        self.g.n()
    }
}

/// A vertex subset `S` of `{0, .., n-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    mask: Vec<bool>,
}

impl Cut {
    pub fn empty(n: usize) -> Self {
        Self {
            mask: vec![false; n],
        }
    }

    pub fn from_members(n: usize, members: &[usize]) -> Self {
        let mut mask = vec![false; n];
        for &v in members {
            mask[v] = true;
        }
        Self { mask }
    }

    pub fn from_mask(mask: Vec<bool>) -> Self {
        Self { mask }
    }

    /// Cut from the low `n` bits of `bits`.
    pub fn from_bits(n: usize, bits: u64) -> Self {
        Self {
            mask: (0..n).map(|v| bits >> v & 1 == 1).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.mask.len()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.mask[v]
    }

    pub fn indicator(&self, v: usize) -> f64 {
        if self.mask[v] {
            1.0
        } else {
            0.0
        }
    }

    pub fn members(&self) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.mask[v]).collect()
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// `0 < |S| < n`.
    pub fn is_nontrivial(&self) -> bool {
        let k = self.len();
        k > 0 && k < self.n()
    }

    pub fn complement(&self) -> Self {
        Self {
            mask: self.mask.iter().map(|b| !b).collect(),
        }
    }

    /// `min(|S|, |V - S|)`.
    pub fn smaller_side(&self) -> usize {
        let k = self.len();
        k.min(self.n() - k)
    }

    /// True if `self` and `other` induce the same partition of the vertices.
    pub fn same_partition(&self, other: &Cut) -> bool {
        self == other || *self == other.complement()
    }

    /// Lexicographic order of the sorted member lists.
    pub fn lex_cmp(&self, other: &Cut) -> std::cmp::Ordering {
        self.members().cmp(&other.members())
    }
}

impl std::fmt::Display for Cut {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let m = self.members();
        write!(f, "{{")?;
        for (i, v) in m.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Sparsity of a cut, with the normalized cut masses it was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SparsityReport {
    /// `g_cut / h_cut`, or `+inf` when `h_cut == 0`.
    pub sigma: f64,
    pub g_cut: f64,
    pub h_cut: f64,
}

impl SparsityReport {
    pub fn from_masses(g_cut: f64, h_cut: f64) -> Self {
        let sigma = if h_cut > 0.0 {
            g_cut / h_cut
        } else {
            f64::INFINITY
        };
        Self {
            sigma,
            g_cut,
            h_cut,
        }
    }

    pub fn is_defined(&self) -> bool {
        self.sigma.is_finite()
    }
}

/// Normalized cut mass `G(S) / G_tot`.
pub fn cut_weight(g: &WeightedGraph, s: &Cut) -> f64 {
    g.crossing_weight(s) / g.total()
}

pub fn sparsity(pair: &InstancePair, s: &Cut) -> SparsityReport {
    SparsityReport::from_masses(cut_weight(&pair.g, s), cut_weight(&pair.h, s))
}

/// Laplacian of the normalized graph, scaled so that
/// `x' L x = sum_{u,v ordered} Gbar(u,v) (x_u - x_v)^2`.
pub fn laplacian(g: &WeightedGraph) -> DMatrix<f64> {
    let n = g.n();
    let mut l = DMatrix::zeros(n, n);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let x = 2.0 * g.normalized(u, v);
            l[(u, v)] = -x;
            l[(u, u)] += x;
        }
    }
    l
}

/// `sum_{u,v ordered} Gbar(u,v) (x_u - x_v)^2` evaluated directly.
pub fn quadratic_energy(g: &WeightedGraph, x: &[f64]) -> f64 {
    let n = g.n();
    let mut acc = 0.0;
    for u in 0..n {
        for v in 0..n {
            let d = x[u] - x[v];
            acc += g.normalized(u, v) * d * d;
        }
    }
    acc
}

/// Product measure behind a rank-1 demand graph: `Hbar(u,v) = mu(u) mu(v)`
/// and `H(u,v) = f(u) f(v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rank1Measure {
    pub mu: Vec<f64>,
    pub f: Vec<f64>,
}

impl Rank1Measure {
    pub fn n(&self) -> usize {
        self.mu.len()
    }

    /// `E_{u,v ~ mu} d(u,v)` for a dense row-major distance matrix.
    pub fn expected_distance(&self, d: &[f64]) -> f64 {
        let n = self.n();
        let mut acc = 0.0;
        for u in 0..n {
            for v in 0..n {
                acc += self.mu[u] * self.mu[v] * d[u * n + v];
            }
        }
        acc
    }
}

/// Outcome of [`rank1_decompose`]: either the measure or the deviation that
/// ruled it out.
#[derive(Debug, Clone, PartialEq)]
pub enum Rank1Result {
    RankOne(Rank1Measure),
    NotRankOne { deviation: f64 },
}

impl Rank1Result {
    pub fn measure(self) -> Option<Rank1Measure> {
        match self {
            Rank1Result::RankOne(m) => Some(m),
            Rank1Result::NotRankOne { .. } => None,
        }
    }

    pub fn into_result(self) -> Result<Rank1Measure> {
        match self {
            Rank1Result::RankOne(m) => Ok(m),
            Rank1Result::NotRankOne { deviation } => Err(Error::NotRankOne { deviation }),
        }
    }
}

/// Marginal-based rank-1 test: `mu(v)` is the normalized row sum of `h`, and
/// the decomposition succeeds iff `Hbar` matches `mu x mu` entrywise within
/// `tol` times the largest entry of `Hbar`.
pub fn rank1_decompose(h: &WeightedGraph, tol: f64) -> Rank1Result {
    let n = h.n();
    if h.total() <= 0.0 {
        return Rank1Result::NotRankOne {
            deviation: f64::INFINITY,
        };
    }
    let mu: Vec<f64> = (0..n).map(|v| h.degree(v) / h.total()).collect();
    let mut max_entry: f64 = 0.0;
    let mut deviation: f64 = 0.0;
    for u in 0..n {
        for v in 0..n {
            let hb = h.normalized(u, v);
            max_entry = max_entry.max(hb);
            deviation = deviation.max((hb - mu[u] * mu[v]).abs());
        }
    }
    if deviation <= tol * max_entry {
        let scale = h.total().sqrt();
        let f = mu.iter().map(|m| m * scale).collect();
        Rank1Result::RankOne(Rank1Measure { mu, f })
    } else {
        Rank1Result::NotRankOne { deviation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> WeightedGraph {
        WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 0, 1.0)]).unwrap()
    }

    fn uniform(n: usize) -> WeightedGraph {
        WeightedGraph::from_dense(n, vec![1.0; n * n]).unwrap()
    }

    #[test]
    fn c4_single_vertex_cut() {
        let g = c4();
        assert_eq!(g.total(), 8.0);
        assert_eq!(cut_weight(&g, &Cut::from_members(4, &[0])), 0.5);
        assert_eq!(cut_weight(&g, &Cut::empty(4)), 0.0);
    }

    #[test]
    fn unit_edge_crosses_fully() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        assert_eq!(cut_weight(&g, &Cut::from_members(2, &[0])), 1.0);
    }

    #[test]
    fn self_loops_never_cross() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0), (0, 0, 3.0)]).unwrap();
        assert_eq!(g.total(), 5.0);
        assert_eq!(g.crossing_weight(&Cut::from_members(2, &[0])), 2.0);
    }

    #[test]
    fn sparsity_examples() {
        let path = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let edge = WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap();
        let pair = InstancePair::new(path.clone(), edge).unwrap();
        let r = sparsity(&pair, &Cut::from_members(3, &[0]));
        assert_eq!(r.sigma, 0.5);

        let same = InstancePair::new(path.clone(), path).unwrap();
        assert_eq!(sparsity(&same, &Cut::from_members(3, &[1])).sigma, 1.0);

        let pair = InstancePair::new(c4(), uniform(4)).unwrap();
        assert_eq!(pair.h.total(), 16.0);
        assert_eq!(sparsity(&pair, &Cut::from_members(4, &[0, 1])).sigma, 1.0);
    }

    #[test]
    fn sparsity_is_infinite_without_demand_crossing() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let h = WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap();
        let pair = InstancePair::new(g, h).unwrap();
        let r = sparsity(&pair, &Cut::from_members(3, &[2]));
        assert!(r.sigma.is_infinite());
        assert!(!r.is_defined());
    }

    #[test]
    fn pair_validation() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let empty = WeightedGraph::from_edges(2, &[]).unwrap();
        assert_eq!(
            InstancePair::new(g.clone(), empty.clone()).unwrap_err(),
            Error::EmptyDemand
        );
        assert_eq!(InstancePair::new(empty, g).unwrap_err(), Error::ZeroTotal);
        assert!(matches!(
            WeightedGraph::from_edges(2, &[(0, 1, -1.0)]),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(
            WeightedGraph::from_dense(2, vec![0.0, 1.0, 2.0, 0.0]),
            Err(Error::Asymmetric(0, 1))
        ));
    }

    #[test]
    fn laplacian_examples() {
        let edge = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let l = laplacian(&edge);
        let x = nalgebra::DVector::from_vec(vec![0.0, 1.0]);
        assert!(((x.transpose() * &l * &x)[0] - 1.0).abs() < 1e-15);

        let l = laplacian(&c4());
        let ones = nalgebra::DVector::from_element(4, 1.0);
        assert!((&l * &ones).norm() < 1e-15);
        let x = nalgebra::DVector::from_vec(vec![1.0, 0.0, -1.0, 0.0]);
        assert!(((x.transpose() * &l * &x)[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rank1_clique_on_subset() {
        let n = 5;
        let support = [1, 2, 4];
        let mut w = vec![0.0; n * n];
        for &u in &support {
            for &v in &support {
                w[u * n + v] = 1.0;
            }
        }
        let h = WeightedGraph::from_dense(n, w).unwrap();
        let m = rank1_decompose(&h, RANK1_TOL).measure().unwrap();
        for v in 0..n {
            let want = if support.contains(&v) { 1.0 / 3.0 } else { 0.0 };
            assert!((m.mu[v] - want).abs() < 1e-15);
        }
        for u in 0..n {
            for v in 0..n {
                assert!((m.f[u] * m.f[v] - h.weight(u, v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rank1_single_edge_fails() {
        let h = WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap();
        assert!(matches!(
            rank1_decompose(&h, RANK1_TOL),
            Rank1Result::NotRankOne { .. }
        ));
    }

    #[test]
    fn rank1_degree_product() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 2, 2.0), (2, 3, 1.0), (1, 3, 0.5)])
            .unwrap();
        let d = g.degrees();
        let n = 4;
        let w: Vec<f64> = (0..n * n).map(|i| d[i / n] * d[i % n]).collect();
        let h = WeightedGraph::from_dense(n, w).unwrap();
        let m = rank1_decompose(&h, RANK1_TOL).measure().unwrap();
        let sd: f64 = d.iter().sum();
        for v in 0..n {
            assert!((m.mu[v] - d[v] / sd).abs() < 1e-15);
        }
    }

    #[test]
    fn lex_order_and_partitions() {
        let a = Cut::from_members(4, &[0, 2]);
        let b = Cut::from_members(4, &[0, 3]);
        assert_eq!(a.lex_cmp(&b), std::cmp::Ordering::Less);
        assert!(a.same_partition(&Cut::from_members(4, &[1, 3])));
        assert_eq!(a.to_string(), "{0,2}");
        assert_eq!(Cut::from_bits(4, 0b1010).members(), vec![1, 3]);
    }
}
