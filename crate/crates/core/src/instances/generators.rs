use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{InstancePair, WeightedGraph};

/// Required second eigenvalue of the normalized Laplacian.
pub const GAP_MIN: f64 = 0.1;
/// Sampling attempts for a certified expander.
pub const RESAMPLE_BUDGET: usize = 1000;
/// Lollipop heads up to this size are complete graphs.
pub const COMPLETE_HEAD_MAX: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RandomSpec {
    pub n: usize,
    /// Edge probability in `(0, 1]`.
    pub density: f64,
    /// Rank-1 demand `f f'` instead of a general loop-free one.
    pub rank1: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorSpec {
    Lollipop { k: usize },
    ExpanderClique { n: usize, d: usize },
    Random(RandomSpec),
}

/// A path attached to an expander, with a rank-1 clique demand on the far
/// path end and the expander.
#[derive(Debug, Clone, PartialEq)]
pub struct Lollipop {
    pub pair: InstancePair,
    pub k: usize,
    /// `x_i = i/k` along the path, 1 on the expander.
    pub witness: Vec<f64>,
}

/// Generated pair, plus the witness vector for lollipops.
pub fn generate(spec: &GeneratorSpec, seed: u64) -> Result<(InstancePair, Option<Vec<f64>>)> {
    match *spec {
        GeneratorSpec::Lollipop { k } => {
            let l = gen_lollipop(k, seed)?;
            Ok((l.pair, Some(l.witness)))
        }
        GeneratorSpec::ExpanderClique { n, d } => Ok((gen_expander_clique(n, d, seed)?, None)),
        GeneratorSpec::Random(r) => Ok((gen_random(&r, seed)?, None)),
    }
}

/// Second smallest eigenvalue of `I - D^{-1/2} A D^{-1/2}`.
pub fn normalized_gap(g: &WeightedGraph) -> f64 {
    let n = g.n();
    let deg = g.degrees();
    let m = DMatrix::from_fn(n, n, |u, v| {
        let a = g.weight(u, v);
        let id = if u == v { 1.0 } else { 0.0 };
        if deg[u] > 0.0 && deg[v] > 0.0 {
            id - a / (deg[u] * deg[v]).sqrt()
        } else {
            id
        }
    });
    let mut ev: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.get(1).copied().unwrap_or(0.0)
}

/// Simple `d`-regular graph from the pairing model, resampled until it is
/// simple, connected and has normalized gap at least [`GAP_MIN`].
pub fn random_regular(n: usize, d: usize, rng: &mut ChaCha8Rng) -> Result<WeightedGraph> {
    if d == 0 || d >= n || (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!(
            "no simple {d}-regular graph on {n} vertices"
        )));
    }
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'attempt: for _ in 0..RESAMPLE_BUDGET {
        stubs.shuffle(rng);
        let mut w = vec![0.0; n * n];
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || w[u * n + v] != 0.0 {
                continue 'attempt;
            }
            w[u * n + v] = 1.0;
            w[v * n + u] = 1.0;
        }
        let g = WeightedGraph::from_dense(n, w)?;
        if g.is_connected() && normalized_gap(&g) >= GAP_MIN {
            return Ok(g);
        }
    }
    Err(Error::Solver(format!(
        "no certified {d}-regular expander on {n} vertices after {RESAMPLE_BUDGET} samples"
    )))
}

/// Uniform clique demand with self-loops on `members` (rank-1).
fn clique_demand(n: usize, members: &[usize]) -> Result<WeightedGraph> {
    let mut w = vec![0.0; n * n];
    for &u in members {
        for &v in members {
            w[u * n + v] = 1.0;
        }
    }
    WeightedGraph::from_dense(n, w)
}

/// Vertices `0..=k` form a unit path, `k..2k` the expander head (complete up
/// to [`COMPLETE_HEAD_MAX`], random 3-regular beyond, 4-regular for odd `k`).
/// The demand is a clique with loops on `{0} + {k..2k}`.
pub fn gen_lollipop(k: usize, seed: u64) -> Result<Lollipop> {
    if k < 2 {
        return Err(Error::InvalidParameter("lollipop needs k >= 2".into()));
    }
    let n = 2 * k;
    let mut w = vec![0.0; n * n];
    for i in 0..k {
        w[i * n + i + 1] = 1.0;
        w[(i + 1) * n + i] = 1.0;
    }
    let head: Vec<usize> = (k..n).collect();
    if k <= COMPLETE_HEAD_MAX {
        for &u in &head {
            for &v in &head {
                if u != v {
                    w[u * n + v] = 1.0;
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let d = if k % 2 == 0 { 3 } else { 4 };
        let expander = random_regular(k, d, &mut rng)?;
        for (u, v, x) in expander.edges() {
            w[(k + u) * n + k + v] = x;
            w[(k + v) * n + k + u] = x;
        }
    }
    let g = WeightedGraph::from_dense(n, w)?;
    let mut members = vec![0];
    members.extend(&head);
    let h = clique_demand(n, &members)?;
    let witness = (0..n).map(|i| (i.min(k)) as f64 / k as f64).collect();
    Ok(Lollipop {
        pair: InstancePair::new(g, h)?,
        k,
        witness,
    })
}

/// Certified random `d`-regular expander against the uniform demand with
/// self-loops.
pub fn gen_expander_clique(n: usize, d: usize, seed: u64) -> Result<InstancePair> {
    if d < 3 {
        return Err(Error::InvalidParameter("expander degree must be at least 3".into()));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::InvalidParameter(format!("n * d must be even, got {n} * {d}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = random_regular(n, d, &mut rng)?;
    let h = clique_demand(n, &(0..n).collect::<Vec<_>>())?;
    InstancePair::new(g, h)
}

/// Random weighted `G` (each pair with probability `density`, plus a random
/// spanning path) and a rank-1 or general demand.
pub fn gen_random(spec: &RandomSpec, seed: u64) -> Result<InstancePair> {
    let n = spec.n;
    if n < 2 {
        return Err(Error::InvalidParameter("random instance needs n >= 2".into()));
    }
    if !(spec.density > 0.0 && spec.density <= 1.0) {
        return Err(Error::InvalidParameter(format!(
            "density must lie in (0, 1], got {}",
            spec.density
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = vec![0.0; n * n];
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < spec.density {
                let x = rng.random_range(0.1..1.0);
                g[u * n + v] = x;
                g[v * n + u] = x;
            }
        }
    }
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    for pair in perm.windows(2) {
        let (u, v) = (pair[0], pair[1]);
        if g[u * n + v] == 0.0 {
            let x = rng.random_range(0.1..1.0);
            g[u * n + v] = x;
            g[v * n + u] = x;
        }
    }
    let mut h = vec![0.0; n * n];
    if spec.rank1 {
        let mut f: Vec<f64> = (0..n)
            .map(|_| {
                if rng.random::<f64>() < 0.2 {
                    0.0
                } else {
                    rng.random_range(0.1..1.0)
                }
            })
            .collect();
        for v in 0..n {
            if f.iter().filter(|&&x| x > 0.0).count() >= 2 {
                break;
            }
            if f[v] == 0.0 {
                f[v] = rng.random_range(0.1..1.0);
            }
        }
        for u in 0..n {
            for v in 0..n {
                h[u * n + v] = f[u] * f[v];
            }
        }
    } else {
        for u in 0..n {
            for v in (u + 1)..n {
                if rng.random::<f64>() < spec.density {
                    let x = rng.random_range(0.1..1.0);
                    h[u * n + v] = x;
                    h[v * n + u] = x;
                }
            }
        }
        if h.iter().all(|&x| x == 0.0) {
            let u = rng.random_range(0..n - 1);
            h[u * n + n - 1] = 1.0;
            h[(n - 1) * n + u] = 1.0;
        }
    }
    InstancePair::new(WeightedGraph::from_dense(n, g)?, WeightedGraph::from_dense(n, h)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{rank1_decompose, RANK1_TOL};
    use crate::io::write_instance;

    #[test]
    fn lollipop_shape() {
        let l = gen_lollipop(4, 0).unwrap();
        assert_eq!(l.pair.n(), 8);
        assert_eq!(l.pair.g.edges().len(), 4 + 6);
        assert!(rank1_decompose(&l.pair.h, RANK1_TOL).measure().is_some());
        assert_eq!(l.witness, vec![0.0, 0.25, 0.5, 0.75, 1.0, 1.0, 1.0, 1.0]);
        assert_eq!(l.pair.h.weight(0, 5), 1.0);
        assert_eq!(l.pair.h.weight(1, 1), 0.0);
    }

    #[test]
    fn large_lollipop_has_a_regular_head() {
        for k in [16usize, 9] {
            let l = gen_lollipop(k, 3).unwrap();
            let d = if k % 2 == 0 { 3.0 } else { 4.0 };
            for v in (k + 1)..(2 * k) {
                assert_eq!(l.pair.g.degree(v), d);
            }
        }
    }

    #[test]
    fn expander_is_certified() {
        let pair = gen_expander_clique(16, 3, 5).unwrap();
        assert!(pair.g.is_connected());
        assert!(normalized_gap(&pair.g) >= GAP_MIN);
        for v in 0..16 {
            assert_eq!(pair.g.degree(v), 3.0);
        }
        assert!(gen_expander_clique(15, 3, 0).is_err());
    }

    #[test]
    fn random_instances() {
        let spec = RandomSpec { n: 10, density: 0.3, rank1: true };
        let a = gen_random(&spec, 42).unwrap();
        assert_eq!(write_instance(&a), write_instance(&gen_random(&spec, 42).unwrap()));
        assert!(a.g.is_connected());
        assert!(rank1_decompose(&a.h, RANK1_TOL).measure().is_some());
        let general = gen_random(&RandomSpec { rank1: false, ..spec }, 1).unwrap();
        assert!(!general.h.has_self_loops());
        assert!(gen_random(&RandomSpec { density: 0.0, ..spec }, 1).is_err());
    }
}
