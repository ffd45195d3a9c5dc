use proptest::prelude::*;

use sparsecut::graph::quadratic_energy;
use sparsecut::instances::{mix_instance, unmix_cut_check, MixParams};
use sparsecut::io::{parse_instance, write_instance};
use sparsecut::oracle::for_each_cut;
use sparsecut::relaxations::{spectral_ratio, SemiMetric, VectorEmbedding};
use sparsecut::rounding::{
    dichotomy_case, far_pair_mass, l1_ratio, l1_round, l2_to_l1_embed, sandwich_holds, sweep_cut,
    DichotomyOutcome, L1Embedding,
};
use sparsecut::stcut::{brute_force_min_st_cut, st_certificate};
use sparsecut::*;

fn weights(n: usize, density: f64, loops: bool) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec((0.0..1.0f64, 0.05..2.0f64), n * n).prop_map(move |cells| {
        let mut w = vec![0.0; n * n];
        for u in 0..n {
            for v in u..n {
                if u == v && !loops {
                    continue;
                }
                let (coin, x) = cells[u * n + v];
                if coin < density {
                    w[u * n + v] = x;
                    w[v * n + u] = x;
                }
            }
        }
        w
    })
}

/// Connected G (path backbone) and a demand with at least one off-diagonal pair.
fn instance(max_n: usize) -> impl Strategy<Value = InstancePair> {
    (3..=max_n).prop_flat_map(|n| {
        (weights(n, 0.5, false), weights(n, 0.5, true), 0..n - 1).prop_map(move |(mut g, mut h, e)| {
            for v in 0..n - 1 {
                if g[v * n + v + 1] == 0.0 {
                    g[v * n + v + 1] = 0.5;
                    g[(v + 1) * n + v] = 0.5;
                }
            }
            h[e * n + e + 1] += 1.0;
            h[(e + 1) * n + e] += 1.0;
            InstancePair::new(
                WeightedGraph::from_dense(n, g).unwrap(),
                WeightedGraph::from_dense(n, h).unwrap(),
            )
            .unwrap()
        })
    })
}

fn rank1_instance(max_n: usize) -> impl Strategy<Value = InstancePair> {
    (3..=max_n).prop_flat_map(|n| {
        (weights(n, 0.5, false), prop::collection::vec(0.1..1.0f64, n)).prop_map(move |(mut g, f)| {
            for v in 0..n - 1 {
                if g[v * n + v + 1] == 0.0 {
                    g[v * n + v + 1] = 0.5;
                    g[(v + 1) * n + v] = 0.5;
                }
            }
            let h = (0..n * n).map(|i| f[i / n] * f[i % n]).collect();
            InstancePair::new(
                WeightedGraph::from_dense(n, g).unwrap(),
                WeightedGraph::from_dense(n, h).unwrap(),
            )
            .unwrap()
        })
    })
}

fn points(max_n: usize, max_dim: usize) -> impl Strategy<Value = VectorEmbedding> {
    (2..=max_n, 1..=max_dim).prop_flat_map(|(n, dim)| {
        prop::collection::vec(prop::collection::vec(-3.0..3.0f64, dim), n)
            .prop_map(|p| VectorEmbedding::new(p).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn sparsity_is_complement_invariant(pair in instance(8), bits in any::<u64>()) {
        let n = pair.n();
        let cut = Cut::from_bits(n, bits);
        let a = sparsity(&pair, &cut);
        let b = sparsity(&pair, &cut.complement());
        prop_assert!((a.g_cut - b.g_cut).abs() <= 1e-15 && (a.h_cut - b.h_cut).abs() <= 1e-15);
        prop_assert!((0.0..=1.0 + 1e-12).contains(&a.g_cut));
    }

    #[test]
    fn oracle_is_a_lower_bound(pair in instance(8), bits in any::<u64>()) {
        let (cut, opt) = brute_force_opt(&pair).unwrap();
        prop_assert!(cut.contains(0));
        let other = sparsity(&pair, &Cut::from_bits(pair.n(), bits));
        prop_assert!(opt.sigma <= other.sigma * (1.0 + 1e-12));
    }

    #[test]
    fn spectral_value_is_a_minimum(pair in instance(8), x in prop::collection::vec(-1.0..1.0f64, 8)) {
        let rv = solve_spectral(&pair).unwrap();
        let r = spectral_ratio(&pair, &x[..pair.n()]);
        prop_assert!(rv.value <= r * (1.0 + 1e-9) + 1e-12);
    }

    #[test]
    fn rank1_form_matches_variance(pair in rank1_instance(8), x in prop::collection::vec(-1.0..1.0f64, 8)) {
        // for Hbar = mu x mu the demand energy is 2 Var_mu(x)
        let mu = rank1_decompose(&pair.h, graph::RANK1_TOL).measure().unwrap();
        let x = &x[..pair.n()];
        let mean: f64 = mu.mu.iter().zip(x).map(|(m, v)| m * v).sum();
        let var: f64 = mu.mu.iter().zip(x).map(|(m, v)| m * (v - mean) * (v - mean)).sum();
        prop_assert!((quadratic_energy(&pair.h, x) - 2.0 * var).abs() <= 1e-12);
    }

    #[test]
    fn sweep_beats_the_one_dimensional_ratio(pair in instance(8), x in prop::collection::vec(-1.0..1.0f64, 8)) {
        let x = &x[..pair.n()];
        let f = L1Embedding::new(x.iter().map(|&v| vec![v]).collect()).unwrap();
        if let Ok((_, rep)) = sweep_cut(x, &pair) {
            prop_assert!(rep.sigma <= l1_ratio(&f, &pair) + 1e-9);
        }
    }

    #[test]
    fn l1_round_meets_the_l1_ratio(pair in instance(8), f in prop::collection::vec(prop::collection::vec(-1.0..1.0f64, 3), 8)) {
        let f = L1Embedding::new(f[..pair.n()].to_vec()).unwrap();
        if let Ok((_, rep)) = l1_round(&f, &pair) {
            prop_assert!(rep.sigma <= l1_ratio(&f, &pair) + 1e-9);
        }
    }

    #[test]
    fn embedding_sandwich(p in points(16, 6), seed in any::<u64>()) {
        let f = l2_to_l1_embed(&p, seed).unwrap();
        prop_assert!(sandwich_holds(&p, &f));
        prop_assert_eq!(f, l2_to_l1_embed(&p, seed).unwrap());
    }

    #[test]
    fn dichotomy_is_total(p in points(10, 4), w in prop::collection::vec(0.05..1.0f64, 10)) {
        let n = p.len();
        let w = &w[..n];
        let total: f64 = w.iter().sum();
        let mu = graph::Rank1Measure {
            mu: w.iter().map(|x| x / total).collect(),
            f: w.to_vec(),
        };
        let d = p.squared_metric();
        let e = mu.expected_distance(d.dense());
        prop_assume!(e > 1e-9);
        let scaled = p.scaled(1.0 / e.sqrt());
        let d = scaled.squared_metric();
        match dichotomy_case(&d, &mu).unwrap() {
            DichotomyOutcome::BallCase { center, ball, mass } => {
                let direct: f64 = ball.members().iter().map(|&v| mu.mu[v]).sum();
                prop_assert!(mass >= 0.5 && (direct - mass).abs() < 1e-15);
                prop_assert!(ball.members().iter().all(|&v| d.get(center, v) <= 0.25));
            }
            DichotomyOutcome::SpreadCase { far_pair_mass: m } => {
                prop_assert!(m >= 0.5);
                prop_assert_eq!(m, far_pair_mass(&d, &mu));
            }
        }
    }

    #[test]
    fn mixing_invariants(pair in instance(7), eps in 0.01..0.5f64, stretch in 1.0..4.0f64, bits in any::<u64>()) {
        let delta = (eps * stretch).min(1.0);
        let p = MixParams::new(eps, delta).unwrap();
        let mixed = mix_instance(&pair, &p).unwrap();
        prop_assert!((mixed.g.total() - 1.0).abs() < 1e-12);
        prop_assert!((mixed.h.total() - 1.0).abs() < 1e-12);
        let rep = unmix_cut_check(&pair, &p, &Cut::from_bits(pair.n(), bits)).unwrap();
        prop_assert!(rep.holds() || rep.original_sigma <= p.ratio() * (1.0 + 1e-12));
    }

    #[test]
    fn st_certificate_properties(pair in instance(10), s in 0usize..10, t in 0usize..10) {
        let n = pair.n();
        let (s, t) = (s % n, t % n);
        prop_assume!(s != t);
        let cert = st_certificate(&pair.g, s, t).unwrap();
        let eps = cert.epsilon();
        prop_assert!(cert.potentials.x.iter().all(|x| (0.0..=1.0).contains(x)));
        prop_assert!(cert.cut_fraction <= eps.sqrt() + 1e-9);
        prop_assert!((cert.flow.value - eps).abs() <= 1e-8);
        prop_assert!(cert.flow.conservation_residual <= 1e-8);
        let (_, cap) = brute_force_min_st_cut(&pair.g, s, t).unwrap();
        prop_assert!(eps <= cap + 1e-12);
        let spectral = solve_spectral(&InstancePair::new(
            pair.g.clone(),
            WeightedGraph::from_edges(n, &[(s, t, 1.0)]).unwrap(),
        ).unwrap()).unwrap();
        prop_assert!((spectral.value - eps).abs() <= 1e-8);
    }

    #[test]
    fn instance_text_round_trips(pair in instance(8)) {
        let text = write_instance(&pair);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(write_instance(&back), text);
        prop_assert_eq!(back, pair);
    }

    #[test]
    fn semimetric_weighted_sum_matches_cut_weight(pair in instance(8), bits in any::<u64>()) {
        // a cut metric evaluated against G is the normalized cut weight
        let n = pair.n();
        let cut = Cut::from_bits(n, bits);
        let d: Vec<f64> = (0..n * n)
            .map(|i| (cut.indicator(i / n) - cut.indicator(i % n)).abs())
            .collect();
        let m = SemiMetric::from_dense(n, &d);
        prop_assert!((m.weighted_sum(&pair.g) - cut_weight(&pair.g, &cut)).abs() < 1e-14);
        prop_assert_eq!(m.max_triangle_violation(), 0.0);
    }
}

#[test]
fn every_cut_is_visited_once() {
    let mut seen = std::collections::HashSet::new();
    for_each_cut(7, |bits| assert!(seen.insert(bits))).unwrap();
    assert_eq!(seen.len(), (1 << 6) - 1);
}
