use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::relaxations::VectorEmbedding;

/// `m = ceil(EMBED_C * ln n)` projections on the first attempt.
pub const EMBED_C: f64 = 64.0;
/// Consecutive failed attempts before the dimension doubles.
pub const EMBED_RETRIES: usize = 4;
/// Doublings allowed before giving up.
pub const EMBED_MAX_DOUBLINGS: usize = 64;

/// Vertex map into `R^m` under the l1 norm.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Embedding {
    points: Vec<Vec<f64>>,
    /// Attempts the Las Vegas loop needed (1 if the first draw passed).
    pub attempts: usize,
}

impl L1Embedding {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let m = points.first().map_or(0, Vec::len);
        if m == 0 || points.iter().any(|p| p.len() != m) {
            return Err(Error::InvalidParameter(
                "l1 embedding needs equal, nonzero dimensions".into(),
            ));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite embedding coordinate".into()));
        }
        Ok(Self { points, attempts: 1 })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// The dimension `m`.
    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn point(&self, v: usize) -> &[f64] {
        &self.points[v]
    }

    pub fn coordinate(&self, c: usize) -> Vec<f64> {
        self.points.iter().map(|p| p[c]).collect()
    }

    /// `||f(u) - f(v)||_1`.
    pub fn distance(&self, u: usize, v: usize) -> f64 {
        self.points[u]
            .iter()
            .zip(&self.points[v])
            .map(|(a, b)| (a - b).abs())
            .sum()
    }
}

/// Checks `||f(u)-f(v)||_1 <= ||x_u-x_v|| <= 2 ||f(u)-f(v)||_1` on all pairs.
pub fn sandwich_holds(points: &VectorEmbedding, f: &L1Embedding) -> bool {
    let n = points.len();
    (0..n).all(|u| {
        ((u + 1)..n).all(|v| {
            let l1 = f.distance(u, v);
            let l2 = points.distance(u, v);
            l1 <= l2 && l2 <= 2.0 * l1
        })
    })
}

fn project(points: &VectorEmbedding, m: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let dim = points.dim();
    let scale = (std::f64::consts::PI / 2.0).sqrt() * 0.75 / m as f64;
    let gauss: Vec<f64> = (0..m * dim).map(|_| StandardNormal.sample(rng)).collect();
    points
        .points()
        .iter()
        .map(|p| {
            (0..m)
                .map(|i| {
                    let row = &gauss[i * dim..(i + 1) * dim];
                    scale * row.iter().zip(p).map(|(g, x)| g * x).sum::<f64>()
                })
                .collect()
        })
        .collect()
}

/// Gaussian projections scaled so the expected l1 distance is 3/4 of the
/// Euclidean one, redrawn until the two-sided bound holds on every pair.
pub fn l2_to_l1_embed(points: &VectorEmbedding, seed: u64) -> Result<L1Embedding> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InvalidParameter("embedding needs at least two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut m = ((EMBED_C * (n as f64).ln()).ceil() as usize).max(1);
    if points.dim() == 0 {
        return L1Embedding::new(vec![vec![0.0]; n]);
    }
    let mut attempts = 0;
    for _ in 0..=EMBED_MAX_DOUBLINGS {
        for _ in 0..EMBED_RETRIES {
            attempts += 1;
            let mut f = L1Embedding::new(project(points, m, &mut rng))?;
            if sandwich_holds(points, &f) {
                f.attempts = attempts;
                return Ok(f);
            }
        }
        m *= 2;
    }
    Err(Error::EmbeddingBudget { attempts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_pair_lands_in_half_to_one() {
        let p = VectorEmbedding::new(vec![vec![0.0, 0.0], vec![0.6, 0.8]]).unwrap();
        let f = l2_to_l1_embed(&p, 3).unwrap();
        let d = f.distance(0, 1);
        assert!((0.5..=1.0).contains(&d), "{d}");
    }

    #[test]
    fn identical_points_embed_to_zero() {
        let p = VectorEmbedding::new(vec![vec![1.0, -2.0]; 4]).unwrap();
        let f = l2_to_l1_embed(&p, 0).unwrap();
        assert_eq!(f.attempts, 1);
        for u in 0..4 {
            for v in 0..4 {
                assert!(f.distance(u, v).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seeded_runs_are_identical() {
        let p = VectorEmbedding::new((0..6).map(|i| vec![i as f64, (i * i) as f64 * 0.1]).collect())
            .unwrap();
        assert_eq!(l2_to_l1_embed(&p, 11).unwrap(), l2_to_l1_embed(&p, 11).unwrap());
    }

    #[test]
    fn single_point_is_rejected() {
        let p = VectorEmbedding::new(vec![vec![1.0]]).unwrap();
        assert!(l2_to_l1_embed(&p, 0).is_err());
    }
}
