//! Minimum s-t cut through the spectral relaxation with a single-edge demand:
//! harmonic potentials with `x_s = 0`, `x_t = 1`, a threshold cut of
//! capacity at most `sqrt(eps)`, and the electrical flow of value `eps`.
//!
//! Capacities are `2 Gbar(u,v)` per undirected edge, which makes the flow
//! value equal to the energy `eps`.

use std::collections::VecDeque;
use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::graph::{cut_weight, quadratic_energy, Cut, WeightedGraph};
use crate::oracle::for_each_cut;
use crate::rounding::sweep_with;

/// Largest residual of the grounded Laplacian system, relative to the
/// largest degree.
pub const SOLVE_TOL: f64 = 1e-10;
/// Conservation and value tolerance of the extracted flow.
pub const FLOW_TOL: f64 = 1e-8;
/// Interior sizes above this use conjugate gradients.
pub const DENSE_MAX: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LinearSolver {
    Auto,
    Dense,
    ConjugateGradient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Potentials {
    pub x: Vec<f64>,
    pub s: usize,
    pub t: usize,
    /// `eps = sum_{u,v ordered} Gbar(u,v) (x_u - x_v)^2`.
    pub energy: f64,
    /// Largest Laplacian residual at a non-terminal, relative to the largest
    /// degree.
    pub residual: f64,
    /// `s` and `t` lie in different components; `x` is the component
    /// indicator and the energy is zero.
    pub disconnected: bool,
}

/// Vertices reachable from `from` without passing through `blocked`.
fn reach(adj: &[Vec<(usize, f64)>], from: usize, blocked: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(u) = queue.pop_front() {
        for &(v, w) in &adj[u] {
            if w > 0.0 && v != blocked && !seen[v] {
                seen[v] = true;
                queue.push_back(v);
            }
        }
    }
    seen
}

pub fn electrical_potentials(g: &WeightedGraph, s: usize, t: usize) -> Result<Potentials> {
    electrical_potentials_with(g, s, t, LinearSolver::Auto)
}

/// Harmonic extension of `x_s = 0`, `x_t = 1`. Vertices cut off from `t` by
/// `s` (or from everything) are exactly 0, those cut off from `s` by `t` are
/// exactly 1, and the rest come from the grounded Laplacian system.
pub fn electrical_potentials_with(
    g: &WeightedGraph,
    s: usize,
    t: usize,
    solver: LinearSolver,
) -> Result<Potentials> {
    let n = g.n();
    if s >= n || t >= n {
        return Err(Error::InvalidParameter(format!("terminal out of range for n = {n}")));
    }
    if s == t {
        return Err(Error::InvalidParameter("terminals must differ".into()));
    }
    let adj = g.adjacency();
    let from_s = reach(&adj, s, usize::MAX);
    if !from_s[t] {
        let x = (0..n).map(|v| if from_s[v] { 0.0 } else { 1.0 }).collect();
        return Ok(Potentials {
            x,
            s,
            t,
            energy: 0.0,
            residual: 0.0,
            disconnected: true,
        });
    }
    let reaches_t = reach(&adj, t, s);
    let reaches_s = reach(&adj, s, t);
    let mut x = vec![0.0; n];
    let mut interior = Vec::new();
    for v in 0..n {
        if v == s {
            continue;
        }
        if v == t || (reaches_t[v] && !reaches_s[v]) {
            x[v] = 1.0;
        } else if reaches_t[v] && reaches_s[v] {
            interior.push(v);
        }
    }
    let use_cg = match solver {
        LinearSolver::Auto => interior.len() > DENSE_MAX,
        LinearSolver::Dense => false,
        LinearSolver::ConjugateGradient => true,
    };
    if !interior.is_empty() {
        let values = if use_cg {
            solve_cg(&adj, &interior, &x)?
        } else {
            solve_dense(g, &interior, &x)?
        };
        for (&v, val) in interior.iter().zip(values) {
            x[v] = val;
        }
    }
    if let Some(v) = (0..n).find(|&v| !(0.0..=1.0).contains(&x[v])) {
        return Err(Error::Verification(format!(
            "potential {} at vertex {v} violates the maximum principle",
            x[v]
        )));
    }
    let scale = g.degrees().into_iter().fold(0.0f64, f64::max).max(f64::MIN_POSITIVE);
    let residual = interior
        .iter()
        .map(|&v| {
            adj[v]
                .iter()
                .filter(|&&(u, _)| u != v)
                .map(|&(u, w)| w * (x[v] - x[u]))
                .sum::<f64>()
                .abs()
                / scale
        })
        .fold(0.0, f64::max);
    if residual > SOLVE_TOL {
        return Err(Error::Verification(format!(
            "Laplacian residual {residual:e} exceeds {SOLVE_TOL:e}"
        )));
    }
    Ok(Potentials {
        energy: quadratic_energy(g, &x),
        x,
        s,
        t,
        residual,
        disconnected: false,
    })
}

/// `L_II x_I = -L_IB x_B` by Cholesky.
fn solve_dense(g: &WeightedGraph, interior: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    let k = interior.len();
    let n = g.n();
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in interior.iter().enumerate() {
        pos[v] = i;
    }
    let mut a = DMatrix::zeros(k, k);
    let mut b = DVector::zeros(k);
    for (i, &v) in interior.iter().enumerate() {
        for u in 0..n {
            if u == v {
                continue;
            }
            let w = g.weight(v, u);
            if w == 0.0 {
                continue;
            }
            a[(i, i)] += w;
            if pos[u] != usize::MAX {
                a[(i, pos[u])] -= w;
            } else {
                b[i] += w * x[u];
            }
        }
    }
    let chol = a
        .cholesky()
        .ok_or_else(|| Error::Solver("grounded Laplacian is not positive definite".into()))?;
    let mut sol = chol.solve(&b);
    // one step of iterative refinement
    let r = &b - &chol.l() * (chol.l().transpose() * &sol);
    sol += chol.solve(&r);
    Ok(sol.iter().copied().collect())
}

/// Jacobi-preconditioned conjugate gradients on the sparse grounded system.
fn solve_cg(adj: &[Vec<(usize, f64)>], interior: &[usize], x: &[f64]) -> Result<Vec<f64>> {
    let k = interior.len();
    let mut pos = vec![usize::MAX; adj.len()];
    for (i, &v) in interior.iter().enumerate() {
        pos[v] = i;
    }
    let mut diag = vec![0.0; k];
    let mut b = vec![0.0; k];
    for (i, &v) in interior.iter().enumerate() {
        for &(u, w) in &adj[v] {
            if u == v {
                continue;
            }
            diag[i] += w;
            if pos[u] == usize::MAX {
                b[i] += w * x[u];
            }
        }
    }
    let apply = |p: &[f64], out: &mut [f64]| {
        for (i, &v) in interior.iter().enumerate() {
            let mut acc = diag[i] * p[i];
            for &(u, w) in &adj[v] {
                if u != v && pos[u] != usize::MAX {
                    acc -= w * p[pos[u]];
                }
            }
            out[i] = acc;
        }
    };
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
    let bnorm = dot(&b, &b).sqrt().max(f64::MIN_POSITIVE);
    let mut sol = vec![0.0; k];
    let mut r = b.clone();
    let mut z: Vec<f64> = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut ap = vec![0.0; k];
    for _ in 0..(10 * k).max(1000) {
        if dot(&r, &r).sqrt() <= 1e-14 * bnorm {
            return Ok(sol);
        }
        apply(&p, &mut ap);
        let alpha = rz / dot(&p, &ap);
        for i in 0..k {
            sol[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        z = r.iter().zip(&diag).map(|(r, d)| r / d).collect();
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..k {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(Error::Solver("conjugate gradients did not converge".into()))
}

/// Best threshold cut `{v : x_v <= theta}` for `theta` in `[0, 1)`, by cut
/// fraction `Gbar(S)`. The cut contains `s` and not `t`.
pub fn st_sweep(g: &WeightedGraph, pot: &Potentials) -> Result<(Cut, f64)> {
    let (cut, _) = sweep_with(&pot.x, g, None, |gc, _| gc)?
        .ok_or_else(|| Error::Verification("no threshold cut".into()))?;
    if !cut.contains(pot.s) || cut.contains(pot.t) {
        return Err(Error::Verification("threshold cut does not separate s from t".into()));
    }
    let fraction = cut_weight(g, &cut);
    Ok((cut, fraction))
}

/// Electrical flow `2 Gbar(u,v) (x_v - x_u)` from `u` to `v`.
#[derive(Debug, Clone, PartialEq)]
pub struct Flow {
    pub s: usize,
    pub t: usize,
    /// `(u, v, f)` with `u < v`; positive `f` runs from `u` to `v`.
    pub edges: Vec<(usize, usize, f64)>,
    /// Net flow into `t`.
    pub value: f64,
    pub conservation_residual: f64,
    /// Largest `|f| - 2 Gbar(u,v)`, clipped at zero.
    pub capacity_excess: f64,
}

/// Builds the electrical flow and audits conservation, capacities and value
/// before returning it.
pub fn extract_flow(g: &WeightedGraph, pot: &Potentials) -> Result<Flow> {
    let n = g.n();
    let x = &pot.x;
    let mut net = vec![0.0; n];
    let mut edges = Vec::new();
    let mut capacity_excess: f64 = 0.0;
    for (u, v, _) in g.edges() {
        if u == v {
            continue;
        }
        let cap = 2.0 * g.normalized(u, v);
        let f = cap * (x[v] - x[u]);
        net[v] += f;
        net[u] -= f;
        capacity_excess = capacity_excess.max(f.abs() - cap);
        edges.push((u, v, f));
    }
    let conservation_residual = (0..n)
        .filter(|&v| v != pot.s && v != pot.t)
        .map(|v| net[v].abs())
        .fold(0.0, f64::max);
    let value = net[pot.t];
    let flow = Flow {
        s: pot.s,
        t: pot.t,
        edges,
        value,
        conservation_residual,
        capacity_excess,
    };
    if conservation_residual > FLOW_TOL {
        return Err(Error::Verification(format!(
            "flow conservation residual {conservation_residual:e}"
        )));
    }
    if capacity_excess > 0.0 {
        return Err(Error::Verification(format!("flow exceeds capacity by {capacity_excess:e}")));
    }
    if (value - pot.energy).abs() > FLOW_TOL {
        return Err(Error::Verification(format!(
            "flow value {value} differs from energy {}",
            pot.energy
        )));
    }
    Ok(flow)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StCertificate {
    pub potentials: Potentials,
    pub cut: Cut,
    /// `Gbar(S)`, the cut capacity.
    pub cut_fraction: f64,
    pub flow: Flow,
    /// `cut_fraction / eps` (0 when both vanish).
    pub ratio: f64,
    /// `(1 / sqrt(eps)) (1 + 1e-6)`.
    pub ratio_bound: f64,
    pub holds: bool,
}

impl StCertificate {
    pub fn epsilon(&self) -> f64 {
        self.potentials.energy
    }
}

pub fn st_certificate(g: &WeightedGraph, s: usize, t: usize) -> Result<StCertificate> {
    let potentials = electrical_potentials(g, s, t)?;
    let (cut, cut_fraction) = st_sweep(g, &potentials)?;
    let flow = extract_flow(g, &potentials)?;
    let eps = potentials.energy;
    let (ratio, ratio_bound) = if eps > 0.0 {
        (cut_fraction / eps, (1.0 + 1e-6) / eps.sqrt())
    } else {
        (if cut_fraction == 0.0 { 0.0 } else { f64::INFINITY }, f64::INFINITY)
    };
    let holds = cut_fraction <= eps.sqrt() + 1e-9 && ratio <= ratio_bound;
    Ok(StCertificate {
        potentials,
        cut,
        cut_fraction,
        flow,
        ratio,
        ratio_bound,
        holds,
    })
}

/// Summary header followed by `flow <u> <v> <f>` lines.
pub fn write_flow(c: &StCertificate) -> String {
    let mut out = String::new();
    writeln!(out, "# s {} t {}", c.potentials.s, c.potentials.t).unwrap();
    writeln!(out, "# epsilon {}", c.epsilon()).unwrap();
    writeln!(out, "# cut {} fraction {}", c.cut, c.cut_fraction).unwrap();
    writeln!(out, "# ratio {} bound {}", c.ratio, c.ratio_bound).unwrap();
    if c.potentials.disconnected {
        writeln!(out, "# disconnected").unwrap();
    }
    for &(u, v, f) in &c.flow.edges {
        writeln!(out, "flow {u} {v} {f}").unwrap();
    }
    out
}

/// Minimum `Gbar(S)` over cuts separating `s` from `t`, by enumeration.
pub fn brute_force_min_st_cut(g: &WeightedGraph, s: usize, t: usize) -> Result<(Cut, f64)> {
    let n = g.n();
    if s >= n || t >= n || s == t {
        return Err(Error::InvalidParameter("invalid terminals".into()));
    }
    let mut best: Option<(u64, f64)> = None;
    for_each_cut(n, |bits| {
        if (bits >> s & 1) == (bits >> t & 1) {
            return;
        }
        let value = cut_weight(g, &Cut::from_bits(n, bits));
        if best.is_none_or(|(_, b)| value < b) {
            best = Some((bits, value));
        }
    })?;
    let (bits, value) = best.ok_or(Error::NoFeasibleCut)?;
    let cut = Cut::from_bits(n, bits);
    Ok((if cut.contains(s) { cut } else { cut.complement() }, value))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> WeightedGraph {
        WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn path_potentials_and_certificate() {
        let g = path3();
        let pot = electrical_potentials(&g, 0, 2).unwrap();
        assert_eq!((pot.x[0], pot.x[2]), (0.0, 1.0));
        assert!((pot.x[1] - 0.5).abs() < 1e-15);
        assert!((pot.energy - 0.25).abs() < 1e-15);
        let cert = st_certificate(&g, 0, 2).unwrap();
        assert!((cert.cut_fraction - 0.5).abs() < 1e-15);
        assert!((cert.ratio - 2.0).abs() < 1e-12);
        for &(_, _, f) in &cert.flow.edges {
            assert!((f - 0.25).abs() < 1e-15);
        }
        assert!((cert.flow.value - 0.25).abs() < 1e-15);
        assert!(cert.holds);
    }

    #[test]
    fn single_edge() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 3.0)]).unwrap();
        let cert = st_certificate(&g, 0, 1).unwrap();
        assert_eq!(cert.epsilon(), 1.0);
        assert_eq!(cert.cut_fraction, 1.0);
        assert_eq!(cert.ratio, 1.0);
        assert_eq!(cert.flow.value, 1.0);
    }

    #[test]
    fn parallel_paths_are_symmetric() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (1, 3, 1.0), (0, 2, 1.0), (2, 3, 1.0)]).unwrap();
        let cert = st_certificate(&g, 0, 3).unwrap();
        assert!((cert.potentials.x[1] - 0.5).abs() < 1e-15);
        assert!((cert.potentials.x[2] - 0.5).abs() < 1e-15);
        // G_tot = 8, each edge carries 2/8 * 1/2
        for &(_, _, f) in &cert.flow.edges {
            assert!((f - 0.125).abs() < 1e-15);
        }
        assert!((cert.flow.value - 0.25).abs() < 1e-15);
    }

    #[test]
    fn disconnected_terminals_give_the_component_cut() {
        let g = WeightedGraph::from_edges(4, &[(0, 1, 1.0), (2, 3, 1.0)]).unwrap();
        let cert = st_certificate(&g, 0, 3).unwrap();
        assert!(cert.potentials.disconnected);
        assert_eq!(cert.epsilon(), 0.0);
        assert_eq!(cert.cut.members(), vec![0, 1]);
        assert_eq!(cert.cut_fraction, 0.0);
        assert!(cert.holds);
    }

    #[test]
    fn pendant_vertices_take_exact_boundary_values() {
        // 3 hangs off s, 4 hangs off t
        let g = WeightedGraph::from_edges(5, &[(0, 1, 1.0), (1, 2, 1.0), (0, 3, 1.0), (2, 4, 1.0)]).unwrap();
        let pot = electrical_potentials(&g, 0, 2).unwrap();
        assert_eq!(pot.x[3], 0.0);
        assert_eq!(pot.x[4], 1.0);
    }

    #[test]
    fn dense_and_cg_agree() {
        let mut edges = Vec::new();
        for i in 0..30usize {
            edges.push((i, (i + 1) % 30, 1.0 + (i % 3) as f64));
            edges.push((i, (i * 7 + 3) % 30, 0.5));
        }
        let g = WeightedGraph::from_edges(30, &edges).unwrap();
        let a = electrical_potentials_with(&g, 0, 15, LinearSolver::Dense).unwrap();
        let b = electrical_potentials_with(&g, 0, 15, LinearSolver::ConjugateGradient).unwrap();
        for v in 0..30 {
            assert!((a.x[v] - b.x[v]).abs() < 1e-10);
        }
    }

    #[test]
    fn energy_is_below_min_cut() {
        let g = WeightedGraph::from_edges(5, &[(0, 1, 2.0), (1, 2, 1.0), (0, 3, 1.0), (3, 2, 3.0), (1, 3, 1.0), (2, 4, 5.0)]).unwrap();
        let pot = electrical_potentials(&g, 0, 4).unwrap();
        let (cut, cap) = brute_force_min_st_cut(&g, 0, 4).unwrap();
        assert!(cut.contains(0) && !cut.contains(4));
        assert!(pot.energy <= cap + 1e-12);
    }

    #[test]
    fn equal_terminals_are_rejected() {
        assert!(electrical_potentials(&path3(), 1, 1).is_err());
    }
}
