use std::cmp::Ordering;

use super::L1Embedding;
use crate::error::{Error, Result};
use crate::graph::{sparsity, Cut, InstancePair, SparsityReport, WeightedGraph};

const TIE_REL: f64 = 1e-12;

/// Vertex order by value, ties by index. Rejects non-finite entries.
pub(crate) fn sorted_order(x: &[f64]) -> Result<Vec<usize>> {
    if let Some(v) = x.iter().position(|a| !a.is_finite()) {
        return Err(Error::InvalidParameter(format!("non-finite value at vertex {v}")));
    }
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| x[a].total_cmp(&x[b]).then(a.cmp(&b)));
    Ok(order)
}

/// Change of the unordered crossing weight when `v` joins `inside`.
fn crossing_delta(g: &WeightedGraph, inside: &[bool], v: usize) -> f64 {
    let mut delta = 0.0;
    for u in 0..g.n() {
        if u == v {
            continue;
        }
        let w = g.weight(v, u);
        if inside[u] {
            delta -= w;
        } else {
            delta += w;
        }
    }
    delta
}

/// Lower is better: value first (relative tolerance), then the smaller side,
/// then lexicographic order of the member lists.
pub(crate) fn better(value: f64, cut: &Cut, best_value: f64, best: &Cut) -> bool {
    if !best_value.is_finite() {
        return value.is_finite();
    }
    let tol = TIE_REL * value.abs().max(best_value.abs());
    if value < best_value - tol {
        return true;
    }
    if value > best_value + tol {
        return false;
    }
    match cut.smaller_side().cmp(&best.smaller_side()) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => cut.lex_cmp(best) == Ordering::Less,
    }
}

/// Threshold cuts `{v : x_v <= t}` between consecutive distinct values,
/// scored by `score(g_cross, h_cross)` on normalized crossing masses. Returns
/// the best cut and its score, or `None` if every score is infinite.
pub(crate) fn sweep_with(
    x: &[f64],
    g: &WeightedGraph,
    h: Option<&WeightedGraph>,
    score: impl Fn(f64, f64) -> f64,
) -> Result<Option<(Cut, f64)>> {
    let n = x.len();
    let order = sorted_order(x)?;
    if n < 2 || x[order[0]] == x[order[n - 1]] {
        return Err(Error::ConstantVector);
    }
    let mut inside = vec![false; n];
    let (mut g_cross, mut h_cross) = (0.0, 0.0);
    let mut best: Option<(Cut, f64)> = None;
    for i in 0..n - 1 {
        let v = order[i];
        g_cross += crossing_delta(g, &inside, v);
        if let Some(h) = h {
            h_cross += crossing_delta(h, &inside, v);
        }
        inside[v] = true;
        if x[v] == x[order[i + 1]] {
            continue;
        }
        let gn = (2.0 * g_cross / g.total()).max(0.0);
        let hn = h.map_or(0.0, |h| (2.0 * h_cross / h.total()).max(0.0));
        let value = score(gn, hn);
        if !value.is_finite() {
            continue;
        }
        let cut = Cut::from_mask(inside.clone());
        match &best {
            Some((b, bv)) if !better(value, &cut, *bv, b) => {}
            _ => best = Some((cut, value)),
        }
    }
    Ok(best)
}

/// Best threshold cut of a one-dimensional embedding by sparsity. Threshold
/// cuts with no demand mass are skipped.
pub fn sweep_cut(x: &[f64], pair: &InstancePair) -> Result<(Cut, SparsityReport)> {
    if x.len() != pair.n() {
        return Err(Error::SizeMismatch(x.len(), pair.n()));
    }
    let (cut, _) = sweep_with(x, &pair.g, Some(&pair.h), |g, h| {
        if h > 1e-15 {
            g / h
        } else {
            f64::INFINITY
        }
    })?
    .ok_or(Error::NoFeasibleCut)?;
    let report = sparsity(pair, &cut);
    Ok((cut, report))
}

/// `sum Gbar ||f(u)-f(v)||_1 / sum Hbar ||f(u)-f(v)||_1`.
pub fn l1_ratio(f: &L1Embedding, pair: &InstancePair) -> f64 {
    let n = pair.n();
    let (mut num, mut den) = (0.0, 0.0);
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            let d = f.distance(u, v);
            num += pair.g.normalized(u, v) * d;
            den += pair.h.normalized(u, v) * d;
        }
    }
    if den > 0.0 {
        num / den
    } else {
        f64::INFINITY
    }
}

/// Sweeps every non-constant coordinate and keeps the sparsest cut; its
/// sparsity is at most [`l1_ratio`].
pub fn l1_round(f: &L1Embedding, pair: &InstancePair) -> Result<(Cut, SparsityReport)> {
    if f.len() != pair.n() {
        return Err(Error::SizeMismatch(f.len(), pair.n()));
    }
    let mut best: Option<(Cut, SparsityReport)> = None;
    let mut any_varying = false;
    for c in 0..f.dim() {
        let x = f.coordinate(c);
        match sweep_cut(&x, pair) {
            Ok((cut, rep)) => {
                any_varying = true;
                match &best {
                    Some((b, br)) if !better(rep.sigma, &cut, br.sigma, b) => {}
                    _ => best = Some((cut, rep)),
                }
            }
            Err(Error::ConstantVector) => {}
            Err(Error::NoFeasibleCut) => any_varying = true,
            Err(e) => return Err(e),
        }
    }
    match best {
        Some(b) => Ok(b),
        None if any_varying => Err(Error::NoFeasibleCut),
        None => Err(Error::ConstantVector),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::brute_force_opt;

    fn path_edge() -> InstancePair {
        InstancePair::new(
            WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap(),
            WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn path_potentials_give_half() {
        let (cut, rep) = sweep_cut(&[0.0, 0.5, 1.0], &path_edge()).unwrap();
        assert!((rep.sigma - 0.5).abs() < 1e-15);
        // both thresholds tie; the smaller side and then lex order pick {0}
        assert_eq!(cut.members(), vec![0]);
    }

    #[test]
    fn indicator_reproduces_the_cut() {
        let pair = path_edge();
        let (opt, _) = brute_force_opt(&pair).unwrap();
        let x: Vec<f64> = (0..3).map(|v| opt.indicator(v)).collect();
        let (cut, _) = sweep_cut(&x, &pair).unwrap();
        assert!(cut.same_partition(&opt));
    }

    #[test]
    fn constant_vector_is_rejected() {
        assert_eq!(sweep_cut(&[1.0; 3], &path_edge()).unwrap_err(), Error::ConstantVector);
        let f = L1Embedding::new(vec![vec![2.0, 1.0]; 3]).unwrap();
        assert_eq!(l1_round(&f, &path_edge()).unwrap_err(), Error::ConstantVector);
    }

    #[test]
    fn one_dimensional_l1_round_is_sweep() {
        let pair = path_edge();
        let x = [0.3, -1.0, 2.0];
        let f = L1Embedding::new(x.iter().map(|&a| vec![a]).collect()).unwrap();
        assert_eq!(l1_round(&f, &pair).unwrap(), sweep_cut(&x, &pair).unwrap());
    }

    #[test]
    fn tied_values_stay_together() {
        let pair = InstancePair::new(
            WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap(),
            WeightedGraph::from_edges(3, &[(0, 1, 1.0)]).unwrap(),
        )
        .unwrap();
        let (cut, _) = sweep_cut(&[0.0, 1.0, 0.0], &pair).unwrap();
        assert_eq!(cut.members(), vec![0, 2]);
    }
}
