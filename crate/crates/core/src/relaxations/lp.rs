use std::collections::HashSet;

use super::conic::{ConicProblem, Row};
use super::{demand_off_diagonal_mass, violated_triangles, RelaxationValue, SemiMetric, SolverConfig, Triangle, Witness};
use crate::error::{Error, Result};
use crate::graph::InstancePair;

/// Variable index of the pair `u < v`.
fn pair_index(n: usize, u: usize, v: usize) -> usize {
    let (u, v) = if u < v { (u, v) } else { (v, u) };
    u * (2 * n - u - 1) / 2 + (v - u - 1)
}

fn triangle_row(n: usize, (u, v, w): Triangle) -> Row {
    vec![
        (pair_index(n, u, v), 1.0),
        (pair_index(n, u, w), -1.0),
        (pair_index(n, w, v), -1.0),
    ]
}

/// Leighton-Rao metric relaxation by cutting planes: the LP starts with the
/// normalization and nonnegativity constraints and gains the most violated
/// triangle inequalities each round until none is violated beyond the
/// separation floor.
pub fn solve_leighton_rao(pair: &InstancePair, config: &SolverConfig) -> Result<RelaxationValue> {
    let n = pair.n();
    if demand_off_diagonal_mass(pair) <= 0.0 {
        return Err(Error::Precondition(
            "demand graph has no mass off the diagonal".into(),
        ));
    }
    let m = n * (n - 1) / 2;
    let mut base = ConicProblem::new(m);
    let mut norm_row = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = pair_index(n, u, v);
            base.objective[p] = 2.0 * pair.g.normalized(u, v);
            let hv = 2.0 * pair.h.normalized(u, v);
            if hv > 0.0 {
                norm_row.push((p, hv));
            }
            base.inequalities.push((vec![(p, -1.0)], 0.0));
        }
    }
    base.equalities.push((norm_row, 1.0));

    let floor = separation_floor(config);
    let per_round = (8 * n).max(32);
    let mut active: HashSet<Triangle> = HashSet::new();
    let mut problem = base;
    for round in 1..=config.max_rounds {
        let x = problem.solve(inner_tol(config))?;
        let mut d = SemiMetric::from_dense(n, &vec![0.0; n * n]);
        for u in 0..n {
            for v in (u + 1)..n {
                d.set(u, v, x[pair_index(n, u, v)].max(0.0));
            }
        }
        let fresh: Vec<Triangle> = violated_triangles(&d, floor)
            .into_iter()
            .map(|(_, t)| t)
            .filter(|t| !active.contains(t))
            .take(per_round)
            .collect();
        if fresh.is_empty() && d.max_triangle_violation() <= config.metric_tol {
            let norm = d.weighted_sum(&pair.h);
            let scale = 1.0 / norm;
            for u in 0..n {
                for v in (u + 1)..n {
                    d.set(u, v, d.get(u, v) * scale);
                }
            }
            let value = d.weighted_sum(&pair.g);
            return Ok(RelaxationValue {
                value,
                witness: Witness::Metric(d),
                rounds: round,
                active_cuts: active.len(),
            });
        }
        for t in fresh {
            problem.inequalities.push((triangle_row(n, t), 0.0));
            active.insert(t);
        }
    }
    Err(Error::Solver(format!(
        "cutting planes did not converge in {} rounds",
        config.max_rounds
    )))
}

/// Violations below this are not worth a new constraint.
pub(super) fn separation_floor(config: &SolverConfig) -> f64 {
    (config.metric_tol * 1e-2).max(1e-10)
}

pub(super) fn inner_tol(config: &SolverConfig) -> f64 {
    (config.solver_tol * 1e-3).clamp(1e-10, 1e-8)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::WeightedGraph;

    #[test]
    fn pair_indices_are_dense() {
        let n = 6;
        let mut seen = vec![false; n * (n - 1) / 2];
        for u in 0..n {
            for v in (u + 1)..n {
                let p = pair_index(n, u, v);
                assert!(!seen[p]);
                seen[p] = true;
                assert_eq!(p, pair_index(n, v, u));
            }
        }
        assert!(seen.into_iter().all(|b| b));
    }

    #[test]
    fn single_edge_pair_has_value_one() {
        let e = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let rv = solve_leighton_rao(&InstancePair::new(e.clone(), e).unwrap(), &SolverConfig::default())
            .unwrap();
        assert!((rv.value - 1.0).abs() < 1e-7);
    }

    #[test]
    fn path_vs_far_edge() {
        let g = WeightedGraph::from_edges(3, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
        let h = WeightedGraph::from_edges(3, &[(0, 2, 1.0)]).unwrap();
        let rv = solve_leighton_rao(&InstancePair::new(g, h).unwrap(), &SolverConfig::default())
            .unwrap();
        assert!((rv.value - 0.5).abs() < 1e-7, "{}", rv.value);
        let Witness::Metric(d) = &rv.witness else { unreachable!() };
        assert!((d.get(0, 2) - 1.0).abs() < 1e-7);
        assert!(d.max_triangle_violation() <= 1e-6);
    }

    #[test]
    fn loop_only_demand_is_rejected() {
        let g = WeightedGraph::from_edges(2, &[(0, 1, 1.0)]).unwrap();
        let h = WeightedGraph::from_edges(2, &[(1, 1, 1.0)]).unwrap();
        assert!(matches!(
            solve_leighton_rao(&InstancePair::new(g, h).unwrap(), &SolverConfig::default()),
            Err(Error::Precondition(_))
        ));
    }
}
