//! Thin wrapper over the Clarabel interior-point solver for problems of the
//! form `min q'x` s.t. equalities, `<=` inequalities and an optional PSD
//! block on the leading variables.

use clarabel::algebra::CscMatrix;
use clarabel::solver::{
    DefaultSettingsBuilder, DefaultSolver, IPSolver, SolverStatus, SupportedConeT,
};

use crate::error::{Error, Result};

/// Sparse row `sum_k coef_k x_{var_k}`.
pub(crate) type Row = Vec<(usize, f64)>;

pub(crate) struct ConicProblem {
    pub nvars: usize,
    pub objective: Vec<f64>,
    pub equalities: Vec<(Row, f64)>,
    /// `row . x <= rhs`
    pub inequalities: Vec<(Row, f64)>,
    /// If set, `x[0..k(k+1)/2]` is the upper triangle (column-major, unscaled)
    /// of a `k x k` matrix constrained to be PSD.
    pub psd_order: Option<usize>,
}

/// Position of entry `(i, j)`, `i <= j`, in the column-major upper triangle.
#[inline]
pub(crate) fn triu_index(i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    j * (j + 1) / 2 + i
}

impl ConicProblem {
    pub fn new(nvars: usize) -> Self {
        Self {
            nvars,
            objective: vec![0.0; nvars],
            equalities: Vec::new(),
            inequalities: Vec::new(),
            psd_order: None,
        }
    }

    pub fn solve(&self, tol: f64) -> Result<Vec<f64>> {
        let mut rows = Vec::new();
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        let mut b = Vec::new();
        let mut cones = Vec::new();
        let mut r = 0;

        let mut push_rows = |block: &[(Row, f64)], r: &mut usize, b: &mut Vec<f64>| {
            for (row, rhs) in block {
                for &(var, coef) in row {
                    rows.push(*r);
                    cols.push(var);
                    vals.push(coef);
                }
                b.push(*rhs);
                *r += 1;
            }
        };
        push_rows(&self.equalities, &mut r, &mut b);
        if !self.equalities.is_empty() {
            cones.push(SupportedConeT::ZeroConeT(self.equalities.len()));
        }
        push_rows(&self.inequalities, &mut r, &mut b);
        if !self.inequalities.is_empty() {
            cones.push(SupportedConeT::NonnegativeConeT(self.inequalities.len()));
        }
        if let Some(k) = self.psd_order {
            // slack s = svec(X) = -A x with sqrt(2) on off-diagonal entries
            for j in 0..k {
                for i in 0..=j {
                    let var = triu_index(i, j);
                    rows.push(r);
                    cols.push(var);
                    vals.push(if i == j { -1.0 } else { -std::f64::consts::SQRT_2 });
                    b.push(0.0);
                    r += 1;
                }
            }
            cones.push(SupportedConeT::PSDTriangleConeT(k));
        }

        let a = CscMatrix::new_from_triplets(r, self.nvars, rows, cols, vals);
        let p = CscMatrix::<f64>::zeros((self.nvars, self.nvars));
        let settings = DefaultSettingsBuilder::default()
            .verbose(false)
            .max_iter(400)
            .tol_gap_abs(tol)
            .tol_gap_rel(tol)
            .tol_feas(tol)
            .build()
            .map_err(|e| Error::Solver(format!("settings: {e}")))?;
        let mut solver = DefaultSolver::new(&p, &self.objective, &a, &b, &cones, settings)
            .map_err(|e| Error::Solver(format!("setup: {e:?}")))?;
        solver.solve();
        match solver.solution.status {
            SolverStatus::Solved | SolverStatus::AlmostSolved => Ok(solver.solution.x.clone()),
            status => Err(Error::Solver(format!("interior point status {status:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_indexing() {
        assert_eq!(triu_index(0, 0), 0);
        assert_eq!(triu_index(0, 1), 1);
        assert_eq!(triu_index(1, 1), 2);
        assert_eq!(triu_index(2, 1), 4);
        assert_eq!(triu_index(2, 2), 5);
    }

    #[test]
    fn small_lp() {
        // min x0 + 2 x1  s.t. x0 + x1 = 1, x >= 0
        let mut p = ConicProblem::new(2);
        p.objective = vec![1.0, 2.0];
        p.equalities.push((vec![(0, 1.0), (1, 1.0)], 1.0));
        p.inequalities.push((vec![(0, -1.0)], 0.0));
        p.inequalities.push((vec![(1, -1.0)], 0.0));
        let x = p.solve(1e-9).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-7 && x[1].abs() < 1e-7);
    }

    #[test]
    fn small_sdp_extreme_off_diagonal() {
        // max X01 s.t. trace X = 1, X psd  ->  X01 = 1/2
        let mut p = ConicProblem::new(3);
        p.objective = vec![0.0, -1.0, 0.0];
        p.equalities.push((vec![(0, 1.0), (2, 1.0)], 1.0));
        p.psd_order = Some(2);
        let x = p.solve(1e-9).unwrap();
        assert!((x[1] - 0.5).abs() < 1e-6, "{x:?}");
    }
}
