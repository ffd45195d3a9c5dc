use super::spectral::spectral_ratio;
use super::{RelaxationValue, SemiMetric, SolverConfig, Witness};
use crate::graph::InstancePair;

/// Independent recomputation of a relaxation witness.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// Objective recomputed from the witness alone.
    pub objective: f64,
    /// Named residuals; each must be within `tolerance`.
    pub checks: Vec<(&'static str, f64)>,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualReport {
    /// The largest residual and its constraint name.
    pub fn worst(&self) -> Option<(&'static str, f64)> {
        self.checks
            .iter()
            .copied()
            .max_by(|a, b| a.1.total_cmp(&b.1))
    }

    /// Names of the checks above tolerance.
    pub fn violated(&self) -> Vec<&'static str> {
        self.checks
            .iter()
            .filter(|(_, r)| !(*r <= self.tolerance))
            .map(|(name, _)| *name)
            .collect()
    }
}

fn metric_checks(pair: &InstancePair, d: &SemiMetric, value: f64) -> (f64, Vec<(&'static str, f64)>) {
    let objective = d.weighted_sum(&pair.g);
    let checks = vec![
        ("objective", (objective - value).abs()),
        ("normalization", (d.weighted_sum(&pair.h) - 1.0).abs()),
        ("nonnegativity", d.max_negativity()),
        ("triangle", d.max_triangle_violation()),
    ];
    (objective, checks)
}

/// Recomputes objective and constraint residuals without consulting the
/// solver; passes iff every residual is at most `10 * solver_tol`.
///
/// Spectral witnesses are checked in ratio form, so any rescaling or shift of
/// the potentials verifies.
pub fn verify_solution(pair: &InstancePair, rv: &RelaxationValue, config: &SolverConfig) -> ResidualReport {
    let tolerance = 10.0 * config.solver_tol;
    let (objective, checks) = match &rv.witness {
        Witness::Spectral(x) => {
            let ratio = spectral_ratio(pair, x);
            let residual = if ratio.is_finite() {
                (ratio - rv.value).abs() / rv.value.abs().max(1.0)
            } else {
                f64::INFINITY
            };
            (ratio, vec![("objective", residual)])
        }
        Witness::Metric(d) => metric_checks(pair, d, rv.value),
        Witness::Points(p) => metric_checks(pair, &p.squared_metric(), rv.value),
    };
    let pass = checks.iter().all(|(_, r)| *r <= tolerance);
    ResidualReport {
        objective,
        checks,
        tolerance,
        pass,
    }
}
