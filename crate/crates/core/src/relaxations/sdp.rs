use std::collections::HashSet;

use nalgebra::{DMatrix, SymmetricEigen};

use super::conic::{triu_index, ConicProblem, Row};
use super::lp::{inner_tol, separation_floor};
use super::{demand_off_diagonal_mass, violated_triangles, RelaxationValue, SemiMetric, SolverConfig, Triangle, VectorEmbedding, Witness};
use crate::error::{Error, Result};
use crate::graph::InstancePair;

/// Eigenvalues of the Gram matrix below `-GRAM_NEG_TOL * max(1, lambda_max)`
/// are an error; anything above is clipped to zero.
const GRAM_NEG_TOL: f64 = 1e-9;

/// `d(u,v) = X_uu + X_vv - 2 X_uv` as a row over the Gram variables, where
/// vertex `root` sits at the origin and has no variables.
fn distance_row(u: usize, v: usize, root: usize) -> Row {
    if u == root {
        vec![(triu_index(v, v), 1.0)]
    } else if v == root {
        vec![(triu_index(u, u), 1.0)]
    } else {
        vec![
            (triu_index(u, u), 1.0),
            (triu_index(v, v), 1.0),
            (triu_index(u, v), -2.0),
        ]
    }
}

fn scaled(row: Row, factor: f64) -> Row {
    row.into_iter().map(|(i, c)| (i, c * factor)).collect()
}

/// Full `n x n` Gram matrix with the last vertex at the origin.
fn gram_from(n: usize, x: &[f64]) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| {
        if i + 1 == n || j + 1 == n {
            0.0
        } else {
            x[triu_index(i, j)]
        }
    })
}

fn metric_from_gram(x: &DMatrix<f64>) -> SemiMetric {
    let n = x.nrows();
    let mut d = vec![0.0; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            d[u * n + v] = x[(u, u)] + x[(v, v)] - 2.0 * x[(u, v)];
        }
    }
    SemiMetric::from_dense(n, &d)
}

/// Goemans-Linial relaxation over the Gram matrix `X` of the vectors, with the
/// last vertex pinned at the origin to fix the translation freedom and the
/// squared-distance triangle inequalities separated by cutting planes.
///
/// The returned embedding comes from the eigendecomposition of `X`
/// (dimension = numerical rank) and is rescaled so the demand normalization
/// holds exactly; `value` is recomputed from those points.
pub fn solve_goemans_linial(pair: &InstancePair, config: &SolverConfig) -> Result<RelaxationValue> {
    let n = pair.n();
    if demand_off_diagonal_mass(pair) <= 0.0 {
        return Err(Error::Precondition(
            "demand graph has no mass off the diagonal".into(),
        ));
    }
    let root = n - 1;
    let nvars = root * (root + 1) / 2;
    let mut problem = ConicProblem::new(nvars);
    problem.psd_order = Some(root);
    let mut norm_row: Row = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            for (i, c) in distance_row(u, v, root) {
                problem.objective[i] += 2.0 * pair.g.normalized(u, v) * c;
            }
            let hv = 2.0 * pair.h.normalized(u, v);
            if hv > 0.0 {
                norm_row.extend(scaled(distance_row(u, v, root), hv));
            }
        }
    }
    problem.equalities.push((norm_row, 1.0));

    let floor = separation_floor(config);
    let per_round = (8 * n).max(32);
    let mut active: HashSet<Triangle> = HashSet::new();
    for round in 1..=config.max_rounds {
        let x = problem.solve(inner_tol(config))?;
        let gram = gram_from(n, &x);
        let d = metric_from_gram(&gram);
        let fresh: Vec<Triangle> = violated_triangles(&d, floor)
            .into_iter()
            .map(|(_, t)| t)
            .filter(|t| !active.contains(t))
            .take(per_round)
            .collect();
        if fresh.is_empty() && d.max_triangle_violation() <= config.metric_tol {
            let points = factor_gram(&gram)?;
            let norm = points.squared_metric().weighted_sum(&pair.h);
            if !(norm > 0.0) {
                return Err(Error::Solver("embedding lost the demand normalization".into()));
            }
            let points = points.scaled(1.0 / norm.sqrt());
            let value = points.squared_metric().weighted_sum(&pair.g);
            return Ok(RelaxationValue {
                value,
                witness: Witness::Points(points),
                rounds: round,
                active_cuts: active.len(),
            });
        }
        for t in fresh {
            let (u, v, w) = t;
            let mut row = distance_row(u, v, root);
            row.extend(scaled(distance_row(u, w, root), -1.0));
            row.extend(scaled(distance_row(w, v, root), -1.0));
            problem.inequalities.push((row, 0.0));
            active.insert(t);
        }
    }
    Err(Error::Solver(format!(
        "cutting planes did not converge in {} rounds",
        config.max_rounds
    )))
}

/// Rows of `V sqrt(Lambda)` over the numerically nonzero eigenvalues, largest
/// first.
pub(crate) fn factor_gram(gram: &DMatrix<f64>) -> Result<VectorEmbedding> {
    let n = gram.nrows();
    let sym = 0.5 * (gram + gram.transpose());
    let e = SymmetricEigen::new(sym);
    let top = e.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let floor = -GRAM_NEG_TOL * top.max(1.0);
    if let Some(&worst) = e.eigenvalues.iter().find(|&&l| l < floor) {
        return Err(Error::Solver(format!(
            "Gram matrix has eigenvalue {worst:e}, not positive semidefinite"
        )));
    }
    let mut order: Vec<usize> = (0..n).filter(|&i| e.eigenvalues[i] > 1e-12 * top).collect();
    order.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    if order.is_empty() {
        return VectorEmbedding::new(vec![vec![0.0]; n]);
    }
    let points = (0..n)
        .map(|v| {
            order
                .iter()
                .map(|&k| e.eigenvalues[k].sqrt() * e.eigenvectors[(v, k)])
                .collect()
        })
        .collect();
    VectorEmbedding::new(points)
}
