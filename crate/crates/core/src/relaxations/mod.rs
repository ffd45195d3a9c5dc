//! Spectral, Leighton-Rao and Goemans-Linial relaxations of sparsest cut.
//!
//! Every solver returns a [`RelaxationValue`] carrying its witness so that
//! [`verify_solution`] can recompute objective and constraints without
//! trusting the solver.

mod conic;
mod lp;
mod sdp;
mod spectral;
mod verify;
mod witness;

pub use lp::solve_leighton_rao;
pub use sdp::solve_goemans_linial;
pub use spectral::{solve_spectral, spectral_ratio};
pub use verify::{verify_solution, ResidualReport};
pub use witness::{parse_witness, write_witness};

use crate::graph::InstancePair;

/// Tolerances shared by the LP and SDP solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Target accuracy of objective and normalization.
    pub solver_tol: f64,
    /// Largest accepted triangle-inequality violation of a returned witness.
    pub metric_tol: f64,
    /// Cutting-plane rounds before giving up.
    pub max_rounds: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            solver_tol: 1e-6,
            metric_tol: 1e-6,
            max_rounds: 200,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelaxationKind {
    Spectral,
    Lp,
    Sdp,
}

impl RelaxationKind {
    pub fn name(&self) -> &'static str {
        match self {
            RelaxationKind::Spectral => "spectral",
            RelaxationKind::Lp => "lp",
            RelaxationKind::Sdp => "sdp",
        }
    }
}

impl std::str::FromStr for RelaxationKind {
    type Err = crate::Error;

    fn from_str(s: &str) -> crate::Result<Self> {
        match s {
            "spectral" => Ok(RelaxationKind::Spectral),
            "lp" | "lr" => Ok(RelaxationKind::Lp),
            "sdp" | "gl" => Ok(RelaxationKind::Sdp),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown relaxation kind '{other}'"
            ))),
        }
    }
}

/// Symmetric nonnegative distances with zero diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct SemiMetric {
    n: usize,
    d: Vec<f64>,
}

impl SemiMetric {
    /// Takes a row-major matrix; symmetry and the zero diagonal are enforced
    /// by reading the upper triangle only.
    pub fn from_dense(n: usize, d: &[f64]) -> Self {
        let mut out = vec![0.0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                out[u * n + v] = d[u * n + v];
                out[v * n + u] = d[u * n + v];
            }
        }
        Self { n, d: out }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    pub fn set(&mut self, u: usize, v: usize, value: f64) {
        self.d[u * self.n + v] = value;
        self.d[v * self.n + u] = value;
    }

    pub fn dense(&self) -> &[f64] {
        &self.d
    }

    /// `max_{u,v,w} d(u,v) - d(u,w) - d(w,v)`, clipped below at zero.
    pub fn max_triangle_violation(&self) -> f64 {
        let n = self.n;
        let mut worst: f64 = 0.0;
        for u in 0..n {
            for v in (u + 1)..n {
                let duv = self.get(u, v);
                for w in 0..n {
                    if w != u && w != v {
                        worst = worst.max(duv - self.get(u, w) - self.get(w, v));
                    }
                }
            }
        }
        worst
    }

    /// Largest amount by which an entry is negative.
    pub fn max_negativity(&self) -> f64 {
        self.d
            .iter()
            .fold(0.0f64, |acc, &x| if x < 0.0 { acc.max(-x) } else { acc })
    }

    /// `sum_{u,v ordered} weight(u,v) d(u,v)` with normalized weights.
    pub fn weighted_sum(&self, g: &crate::WeightedGraph) -> f64 {
        let n = self.n;
        let mut acc = 0.0;
        for u in 0..n {
            for v in 0..n {
                if u != v {
                    acc += g.normalized(u, v) * self.get(u, v);
                }
            }
        }
        acc
    }
}

/// One vector per vertex; all vectors share the same dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorEmbedding {
    points: Vec<Vec<f64>>,
}

impl VectorEmbedding {
    pub fn new(points: Vec<Vec<f64>>) -> crate::Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if points.iter().any(|p| p.len() != dim) {
            return Err(crate::Error::InvalidParameter(
                "embedding points have different dimensions".into(),
            ));
        }
        Ok(Self { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn point(&self, v: usize) -> &[f64] {
        &self.points[v]
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    /// `||x_u - x_v||^2`.
    pub fn squared_distance(&self, u: usize, v: usize) -> f64 {
        self.points[u]
            .iter()
            .zip(&self.points[v])
            .map(|(a, b)| (a - b) * (a - b))
            .sum()
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.squared_distance(u, v).sqrt()
    }

    /// The negative-type semimetric `d(u,v) = ||x_u - x_v||^2`.
    pub fn squared_metric(&self) -> SemiMetric {
        let n = self.len();
        let mut d = vec![0.0; n * n];
        for u in 0..n {
            for v in (u + 1)..n {
                d[u * n + v] = self.squared_distance(u, v);
            }
        }
        SemiMetric::from_dense(n, &d)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            points: self
                .points
                .iter()
                .map(|p| p.iter().map(|c| c * factor).collect())
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Vertex potentials for the ratio form.
    Spectral(Vec<f64>),
    Metric(SemiMetric),
    Points(VectorEmbedding),
}

impl Witness {
    pub fn kind(&self) -> RelaxationKind {
        match self {
            Witness::Spectral(_) => RelaxationKind::Spectral,
            Witness::Metric(_) => RelaxationKind::Lp,
            Witness::Points(_) => RelaxationKind::Sdp,
        }
    }
}

/// A relaxation optimum `epsilon` with the solution attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxationValue {
    pub value: f64,
    pub witness: Witness,
    /// Cutting-plane rounds used (0 for the spectral solver).
    pub rounds: usize,
    /// Triangle constraints active in the final round.
    pub active_cuts: usize,
}

impl RelaxationValue {
    pub fn kind(&self) -> RelaxationKind {
        self.witness.kind()
    }
}

/// Demand mass on ordered pairs `u != v`.
pub(crate) fn demand_off_diagonal_mass(pair: &InstancePair) -> f64 {
    let n = pair.n();
    let mut acc = 0.0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                acc += pair.h.normalized(u, v);
            }
        }
    }
    acc
}

/// Triangle `d(u,v) <= d(u,w) + d(w,v)` with `u < v`, `w` distinct.
pub(crate) type Triangle = (usize, usize, usize);

/// Triangles violated by more than `floor`, most violated first. Ties keep
/// the enumeration order.
pub(crate) fn violated_triangles(d: &SemiMetric, floor: f64) -> Vec<(f64, Triangle)> {
    let n = d.n();
    let mut out = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let duv = d.get(u, v);
            for w in 0..n {
                if w == u || w == v {
                    continue;
                }
                let gap = duv - d.get(u, w) - d.get(w, v);
                if gap > floor {
                    out.push((gap, (u, v, w)));
                }
            }
        }
    }
    out.sort_by(|a, b| b.0.total_cmp(&a.0));
    out
}
