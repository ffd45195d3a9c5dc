use crate::error::{Error, Result};
use crate::graph::{Cut, Rank1Measure};
use crate::relaxations::SemiMetric;

/// Allowed deviation of `E_{mu x mu} d` from 1.
pub const NORM_TOL: f64 = 1e-9;
pub const BALL_RADIUS: f64 = 0.25;

#[derive(Debug, Clone, PartialEq)]
pub enum DichotomyOutcome {
    /// `mu(B) >= 1/2` for `B = {v : d(center, v) <= 1/4}`.
    BallCase { center: usize, ball: Cut, mass: f64 },
    /// `P_{u,v ~ mu}[d(u,v) >= 1/4] >= 1/2`.
    SpreadCase { far_pair_mass: f64 },
}

/// Both conditions evaluated on one semimetric.
#[derive(Debug, Clone, PartialEq)]
pub struct DichotomyEvidence {
    /// Every center whose ball holds half the mass, with that mass.
    pub balls: Vec<(usize, f64)>,
    pub far_pair_mass: f64,
}

impl DichotomyEvidence {
    pub fn spread_holds(&self) -> bool {
        self.far_pair_mass >= 0.5
    }
}

fn check_normalization(d: &SemiMetric, mu: &Rank1Measure) -> Result<()> {
    if d.n() != mu.n() {
        return Err(Error::SizeMismatch(d.n(), mu.n()));
    }
    let e = mu.expected_distance(d.dense());
    if (e - 1.0).abs() > NORM_TOL {
        return Err(Error::Precondition(format!(
            "expected distance under mu is {e}, not 1"
        )));
    }
    Ok(())
}

pub fn ball(d: &SemiMetric, z: usize) -> Cut {
    Cut::from_mask((0..d.n()).map(|v| d.get(z, v) <= BALL_RADIUS).collect())
}

pub fn ball_mass(d: &SemiMetric, mu: &Rank1Measure, z: usize) -> f64 {
    (0..d.n())
        .filter(|&v| d.get(z, v) <= BALL_RADIUS)
        .map(|v| mu.mu[v])
        .sum()
}

/// `P_{u,v ~ mu}[d(u,v) >= 1/4]` over ordered pairs.
pub fn far_pair_mass(d: &SemiMetric, mu: &Rank1Measure) -> f64 {
    let n = d.n();
    let mut acc = 0.0;
    for u in 0..n {
        for v in 0..n {
            if d.get(u, v) >= BALL_RADIUS {
                acc += mu.mu[u] * mu.mu[v];
            }
        }
    }
    acc
}

/// Evaluates the ball condition at every center and the spread condition.
pub fn dichotomy_evidence(d: &SemiMetric, mu: &Rank1Measure) -> Result<DichotomyEvidence> {
    check_normalization(d, mu)?;
    let balls = (0..d.n())
        .map(|z| (z, ball_mass(d, mu, z)))
        .filter(|&(_, m)| m >= 0.5)
        .collect();
    Ok(DichotomyEvidence {
        balls,
        far_pair_mass: far_pair_mass(d, mu),
    })
}

/// Ball case at the heaviest qualifying center (lowest index on ties) if
/// there is one, the spread case otherwise.
pub fn dichotomy_case(d: &SemiMetric, mu: &Rank1Measure) -> Result<DichotomyOutcome> {
    let ev = dichotomy_evidence(d, mu)?;
    let heaviest = ev
        .balls
        .iter()
        .copied()
        .fold(None, |acc: Option<(usize, f64)>, (z, m)| match acc {
            Some((_, bm)) if bm >= m => acc,
            _ => Some((z, m)),
        });
    Ok(match heaviest {
        Some((center, mass)) => DichotomyOutcome::BallCase {
            center,
            ball: ball(d, center),
            mass,
        },
        None => DichotomyOutcome::SpreadCase {
            far_pair_mass: ev.far_pair_mass,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(n: usize) -> Rank1Measure {
        Rank1Measure {
            mu: vec![1.0 / n as f64; n],
            f: vec![1.0; n],
        }
    }

    fn equilateral(n: usize, c: f64) -> SemiMetric {
        let mut d = vec![c; n * n];
        for v in 0..n {
            d[v * n + v] = 0.0;
        }
        SemiMetric::from_dense(n, &d)
    }

    #[test]
    fn two_points_at_distance_two() {
        let d = equilateral(2, 2.0);
        let mu = uniform(2);
        match dichotomy_case(&d, &mu).unwrap() {
            DichotomyOutcome::BallCase { center, ball, mass } => {
                assert_eq!(center, 0);
                assert_eq!(ball.members(), vec![0]);
                assert_eq!(mass, 0.5);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(far_pair_mass(&d, &mu), 0.5);
    }

    #[test]
    fn equilateral_is_spread() {
        for n in [4usize, 5, 9] {
            let d = equilateral(n, n as f64 / (n - 1) as f64);
            let out = dichotomy_case(&d, &uniform(n)).unwrap();
            let want = 1.0 - 1.0 / n as f64;
            match out {
                DichotomyOutcome::SpreadCase { far_pair_mass } => {
                    assert!((far_pair_mass - want).abs() < 1e-12)
                }
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn point_mass_fails_normalization() {
        let d = equilateral(3, 5.0);
        let mu = Rank1Measure {
            mu: vec![1.0, 0.0, 0.0],
            f: vec![1.0, 0.0, 0.0],
        };
        assert!(matches!(dichotomy_case(&d, &mu), Err(Error::Precondition(_))));
    }
}
