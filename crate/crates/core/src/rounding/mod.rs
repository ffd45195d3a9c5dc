//! Cheeger-type rounding of the Goemans-Linial relaxation for rank-1 demand
//! graphs.
//!
//! The SDP vectors are normalized so that `E_{u,v ~ mu} ||x_u - x_v||^2 = 1`.
//! If some ball of squared radius 1/4 carries half of `mu`, the distance to
//! its center is swept ([`frechet_round`], sparsity at most `8 eps`).
//! Otherwise the vectors themselves are embedded into l1 and swept
//! coordinate-wise ([`cs_round`], sparsity at most `8 sqrt(eps)`).

mod dichotomy;
mod embed;
mod sweep;

use std::fmt::Write as _;

pub use dichotomy::{
    ball, ball_mass, dichotomy_case, dichotomy_evidence, far_pair_mass, DichotomyEvidence,
    DichotomyOutcome, BALL_RADIUS, NORM_TOL,
};
pub use embed::{l2_to_l1_embed, sandwich_holds, L1Embedding, EMBED_C, EMBED_MAX_DOUBLINGS, EMBED_RETRIES};
pub use sweep::{l1_ratio, l1_round, sweep_cut};
pub(crate) use sweep::{better, sweep_with};

use crate::error::{Error, Result};
use crate::graph::{rank1_decompose, sparsity, Cut, InstancePair, Rank1Measure, SparsityReport, WeightedGraph, RANK1_TOL};
use crate::oracle::{for_each_cut, ORACLE_MAX_N};
use crate::relaxations::{solve_goemans_linial, SolverConfig, VectorEmbedding, Witness};

/// Absolute slack on every bound comparison.
pub const CERT_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Branch {
    Frechet,
    CauchySchwarz,
}

impl Branch {
    pub fn name(&self) -> &'static str {
        match self {
            Branch::Frechet => "frechet",
            Branch::CauchySchwarz => "cauchy-schwarz",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundConfig {
    pub solver: SolverConfig,
    /// Seed of the l1 embedding.
    pub seed: u64,
}

impl Default for RoundConfig {
    fn default() -> Self {
        Self {
            solver: SolverConfig::default(),
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoundingCertificate {
    pub cut: Cut,
    pub report: SparsityReport,
    /// Relaxation value `eps` of the normalized vectors.
    pub relax_value: f64,
    pub branch: Branch,
    /// `8 eps` (Frechet) or `8 sqrt(eps)` (Cauchy-Schwarz).
    pub bound: f64,
    pub bound_holds: bool,
    /// Ball center used and its mass, when the ball condition held there.
    pub center: Option<(usize, f64)>,
    pub far_pair_mass: f64,
    /// Attempts of the l1 embedding; 0 on the Frechet branch.
    pub embed_attempts: usize,
}

impl RoundingCertificate {
    pub fn sigma(&self) -> f64 {
        self.report.sigma
    }

    /// `8 sqrt(eps)`, valid whichever branch produced the cut.
    pub fn sqrt_bound(&self) -> f64 {
        8.0 * self.relax_value.max(0.0).sqrt()
    }

    pub fn sqrt_bound_holds(&self) -> bool {
        self.report.sigma <= self.sqrt_bound() + CERT_TOL
    }
}

/// `E_{mu x mu} ||x_u - x_v||^2` and the squared-distance metric.
fn normalization(emb: &VectorEmbedding, mu: &Rank1Measure) -> Result<crate::relaxations::SemiMetric> {
    if emb.len() != mu.n() {
        return Err(Error::SizeMismatch(emb.len(), mu.n()));
    }
    let d = emb.squared_metric();
    let e = mu.expected_distance(d.dense());
    if (e - 1.0).abs() > NORM_TOL {
        return Err(Error::Precondition(format!(
            "expected squared distance under mu is {e}, not 1"
        )));
    }
    Ok(d)
}

/// Sweeps `g(v) = ||x_z - x_v||^2` for a center `z` whose quarter ball holds
/// at least half of `mu`.
pub fn frechet_round(
    emb: &VectorEmbedding,
    mu: &Rank1Measure,
    z: usize,
    pair: &InstancePair,
) -> Result<RoundingCertificate> {
    let d = normalization(emb, mu)?;
    if z >= d.n() {
        return Err(Error::InvalidParameter(format!("center {z} out of range")));
    }
    let mass = ball_mass(&d, mu, z);
    if mass < 0.5 {
        return Err(Error::Precondition(format!(
            "ball around {z} holds mass {mass} < 1/2"
        )));
    }
    let eps = d.weighted_sum(&pair.g);
    let g: Vec<f64> = (0..d.n()).map(|v| d.get(z, v)).collect();
    let (cut, report) = sweep_cut(&g, pair)?;
    let bound = 8.0 * eps;
    Ok(RoundingCertificate {
        bound_holds: report.sigma <= bound + CERT_TOL,
        cut,
        report,
        relax_value: eps,
        branch: Branch::Frechet,
        bound,
        center: Some((z, mass)),
        far_pair_mass: far_pair_mass(&d, mu),
        embed_attempts: 0,
    })
}

/// Embeds the vectors (not their squared distances) into l1 and sweeps each
/// coordinate. Requires the spread condition.
pub fn cs_round(
    emb: &VectorEmbedding,
    mu: &Rank1Measure,
    pair: &InstancePair,
    seed: u64,
) -> Result<RoundingCertificate> {
    let d = normalization(emb, mu)?;
    let far = far_pair_mass(&d, mu);
    if far < 0.5 {
        return Err(Error::Precondition(format!(
            "far-pair mass {far} < 1/2"
        )));
    }
    let eps = d.weighted_sum(&pair.g);
    let f = l2_to_l1_embed(emb, seed)?;
    let (cut, report) = l1_round(&f, pair)?;
    let bound = 8.0 * eps.max(0.0).sqrt();
    Ok(RoundingCertificate {
        bound_holds: report.sigma <= bound + CERT_TOL,
        cut,
        report,
        relax_value: eps,
        branch: Branch::CauchySchwarz,
        bound,
        center: None,
        far_pair_mass: far,
        embed_attempts: f.attempts,
    })
}

/// Solves the SDP, normalizes the vectors under `mu`, and runs every branch
/// whose condition holds (each qualifying ball center, and the spread
/// branch), keeping the sparsest cut.
pub fn round_rank1(pair: &InstancePair, config: &RoundConfig) -> Result<RoundingCertificate> {
    let mu = rank1_decompose(&pair.h, RANK1_TOL).into_result()?;
    let rv = solve_goemans_linial(pair, &config.solver)?;
    let Witness::Points(points) = rv.witness else {
        return Err(Error::Solver("SDP returned no vectors".into()));
    };
    round_points(pair, &mu, &points, config.seed)
}

/// The rounding step of [`round_rank1`] on given vectors, rescaled so the
/// normalization under `mu` is exact.
pub fn round_points(
    pair: &InstancePair,
    mu: &Rank1Measure,
    points: &VectorEmbedding,
    seed: u64,
) -> Result<RoundingCertificate> {
    let e = mu.expected_distance(points.squared_metric().dense());
    if !(e > 0.0) || !e.is_finite() {
        return Err(Error::Solver("vectors carry no demand-weighted spread".into()));
    }
    let points = points.scaled(1.0 / e.sqrt());
    let ev = dichotomy_evidence(&points.squared_metric(), mu)?;
    let mut best: Option<RoundingCertificate> = None;
    let mut offer = |c: RoundingCertificate| match &best {
        Some(b) if !better(c.report.sigma, &c.cut, b.report.sigma, &b.cut) => {}
        _ => best = Some(c),
    };
    for &(z, _) in &ev.balls {
        offer(frechet_round(&points, mu, z, pair)?);
    }
    if ev.spread_holds() {
        offer(cs_round(&points, mu, pair, seed)?);
    }
    best.ok_or_else(|| Error::Verification("neither dichotomy condition holds".into()))
}

/// Rounding through a rank-1 demand graph `h_approx` that sandwiches the
/// true demand cut by cut.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate {
    /// Certificate of the rank-1 instance `(G, h_approx)`.
    pub inner: RoundingCertificate,
    /// `min_S H(S) / H'(S)`.
    pub c1: f64,
    /// `max_S H(S) / H'(S)`.
    pub c2: f64,
    /// `H_tot / H'_tot`.
    pub total_ratio: f64,
    /// Sparsity of the returned cut on the original instance.
    pub report: SparsityReport,
    /// `8 max(c2, H_tot/H'_tot) / c1 * sqrt(eps')`.
    pub bound: f64,
    pub bound_holds: bool,
}

/// Exact `(c1, c2)` over all nontrivial cuts with `H'(S) > 0`.
pub fn approximation_factors(h: &WeightedGraph, h_approx: &WeightedGraph) -> Result<(f64, f64)> {
    let n = h.n();
    if h_approx.n() != n {
        return Err(Error::SizeMismatch(h_approx.n(), n));
    }
    if n > ORACLE_MAX_N {
        return Err(Error::TooLarge { n, max: ORACLE_MAX_N });
    }
    let off_diag = |g: &WeightedGraph| -> Vec<(usize, usize, f64)> {
        g.edges().into_iter().filter(|&(u, v, _)| u != v).collect()
    };
    let (he, ae) = (off_diag(h), off_diag(h_approx));
    let crossing = |edges: &[(usize, usize, f64)], bits: u64| -> f64 {
        edges
            .iter()
            .filter(|&&(u, v, _)| (bits >> u & 1) != (bits >> v & 1))
            .map(|&(_, _, w)| w)
            .sum()
    };
    let zero = 1e-15 * h_approx.total();
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    let mut unbounded = false;
    for_each_cut(n, |bits| {
        let hp = crossing(&ae, bits);
        let hc = crossing(&he, bits);
        if hp > zero {
            let r = hc / hp;
            c1 = c1.min(r);
            c2 = c2.max(r);
        } else if hc > 0.0 {
            unbounded = true;
        }
    })?;
    if unbounded {
        return Err(Error::InvalidParameter(
            "a cut crossed by demand is not crossed by the approximation (c2 infinite)".into(),
        ));
    }
    if !c1.is_finite() || c1 <= 0.0 {
        return Err(Error::Precondition(format!("approximation factor c1 = {c1} is not positive")));
    }
    Ok((c1, c2))
}

pub fn round_rank1_via_approx(
    pair: &InstancePair,
    h_approx: &WeightedGraph,
    config: &RoundConfig,
) -> Result<ApproxCertificate> {
    let (c1, c2) = approximation_factors(&pair.h, h_approx)?;
    let approx = InstancePair::new(pair.g.clone(), h_approx.clone())?;
    let inner = round_rank1(&approx, config)?;
    let report = sparsity(pair, &inner.cut);
    let total_ratio = pair.h.total() / h_approx.total();
    let bound = 8.0 * c2.max(total_ratio) / c1 * inner.relax_value.max(0.0).sqrt();
    Ok(ApproxCertificate {
        inner,
        c1,
        c2,
        total_ratio,
        bound_holds: report.sigma <= bound + CERT_TOL,
        report,
        bound,
    })
}

/// Text form: one `key value` line per field.
pub fn write_certificate(c: &RoundingCertificate) -> String {
    let mut out = String::new();
    writeln!(out, "# rounding certificate").unwrap();
    writeln!(out, "cut {}", c.cut).unwrap();
    writeln!(out, "sigma {}", c.report.sigma).unwrap();
    writeln!(out, "branch {}", c.branch.name()).unwrap();
    writeln!(out, "epsilon {}", c.relax_value).unwrap();
    writeln!(out, "bound {}", c.bound).unwrap();
    writeln!(out, "bound_holds {}", c.bound_holds).unwrap();
    writeln!(out, "sqrt_bound {}", c.sqrt_bound()).unwrap();
    match c.center {
        Some((z, m)) => writeln!(out, "ball center {z} mass {m}").unwrap(),
        None => writeln!(out, "ball none").unwrap(),
    }
    writeln!(out, "far_pair_mass {}", c.far_pair_mass).unwrap();
    if c.embed_attempts > 0 {
        writeln!(out, "embed_attempts {}", c.embed_attempts).unwrap();
    }
    out
}

pub fn write_approx_certificate(c: &ApproxCertificate) -> String {
    let mut out = write_certificate(&c.inner);
    writeln!(out, "c1 {}", c.c1).unwrap();
    writeln!(out, "c2 {}", c.c2).unwrap();
    writeln!(out, "total_ratio {}", c.total_ratio).unwrap();
    writeln!(out, "original_sigma {}", c.report.sigma).unwrap();
    writeln!(out, "approx_bound {}", c.bound).unwrap();
    writeln!(out, "approx_bound_holds {}", c.bound_holds).unwrap();
    out
}
