mod common;

use common::*;
use proptest::prelude::*;
use rand::Rng;
use sgdp_core::partition::*;
use sgdp_core::util::normalize_log_weights;

#[test]
fn dirichlet_case_sequential_rule_is_crp_for_every_prefix_of_six() {
    // alpha * beta = 1: GDP allocation equals the CRP with concentration alpha - 1
    let (alpha, beta) = (2.0, 0.5);
    for z in enumerate_partitions(6) {
        for t in 1..6 {
            let prefix = z.prefix(t);
            let probs = gdp_alloc_probs(&prefix, alpha, beta).unwrap();
            let den = alpha - 1.0 + t as f64;
            for (j, &s) in prefix.sizes().iter().enumerate() {
                assert!((probs[j] - s as f64 / den).abs() < 1e-14);
            }
            assert!((probs[prefix.n_clusters()] - (alpha - 1.0) / den).abs() < 1e-14);
        }
    }
}

#[test]
fn gdp_joint_matches_ewens_on_all_partitions_of_eight() {
    for z in enumerate_partitions(8) {
        let got = gdp_joint_log_prob(&z, 2.0, 0.5).unwrap();
        assert!((got - ewens_log_prob(&z, 1.0)).abs() < 1e-10);
        assert!((got - crp_sequential_log_prob(&z, 1.0)).abs() < 1e-10);
    }
}

#[test]
fn sgdp_joint_sums_to_one_over_all_partitions_of_eight() {
    let mut r = rng(1);
    let adj = random_adjacency(8, 0.4, &mut r);
    let prior = PartitionPrior::sgdp(&adj, SgdpParams::new(5.0, 0.9, 0.3).unwrap()).unwrap();
    let total: f64 = enumerate_partitions(8)
        .iter()
        .map(|z| prior.joint_log_prob(z).unwrap().exp())
        .sum();
    assert!((total - 1.0).abs() < 1e-10, "{total}");
}

#[test]
fn gdp_joint_sums_to_one() {
    let total: f64 = enumerate_partitions(7)
        .iter()
        .map(|z| gdp_joint_log_prob(z, 3.3, 0.6).unwrap().exp())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn complete_graph_with_equal_cluster_sizes_matches_gdp() {
    // the similarity weights are uniform whenever the prefix clusters have equal sizes
    let adj = Adjacency::complete(7);
    let params = SgdpParams::new(3.0, 0.7, 0.2).unwrap();
    for z in [
        Partition::from_labels(&[0, 1, 0, 1, 2, 2]),
        Partition::from_labels(&[0, 1, 2, 3]),
        Partition::from_labels(&[0, 0, 0]),
    ] {
        let s = sgdp_alloc_probs(&z, &adj, &params).unwrap();
        let g = gdp_alloc_probs(&z, 3.0, 0.7).unwrap();
        for (a, b) in s.iter().zip(&g) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}

#[test]
fn prior_sampling_matches_enumerated_probabilities() {
    let mut r = rng(2);
    let adj = random_adjacency(6, 0.5, &mut r);
    let params = SgdpParams::new(3.0, 0.6, 0.25).unwrap();
    let prior = PartitionPrior::sgdp(&adj, params).unwrap();
    let (all, index) = partition_index(6);
    let probs: Vec<f64> = all.iter().map(|z| prior.joint_log_prob(z).unwrap().exp()).collect();
    let mut counts = vec![0usize; all.len()];
    for _ in 0..100_000 {
        let z = sample_prior_partition(6, &adj, &params, &mut r).unwrap();
        counts[index[z.labels()]] += 1;
    }
    let p = chi_squared_p(&counts, &probs);
    assert!(p > 0.001, "chi-squared p = {p}");
}

#[test]
fn dirichlet_case_prior_sampling_matches_ewens() {
    let mut r = rng(3);
    let prior = PartitionPrior::gdp(GdpParams::new(2.0, 0.5).unwrap());
    let (all, index) = partition_index(6);
    let probs: Vec<f64> = all.iter().map(|z| ewens_log_prob(z, 1.0).exp()).collect();
    let mut counts = vec![0usize; all.len()];
    for _ in 0..100_000 {
        counts[index[prior.sample(6, &mut r).unwrap().labels()]] += 1;
    }
    let p = chi_squared_p(&counts, &probs);
    assert!(p > 0.001, "chi-squared p = {p}");
}

#[test]
fn prior_sampling_is_deterministic() {
    let adj = Adjacency::lattice(3, 3);
    let params = SgdpParams::new(4.0, 0.5, 0.5).unwrap();
    let a = sample_prior_partition(9, &adj, &params, &mut rng(4)).unwrap();
    let b = sample_prior_partition(9, &adj, &params, &mut rng(4)).unwrap();
    assert_eq!(a, b);
    assert_eq!(
        sample_prior_partition(1, &adj, &params, &mut rng(5)).unwrap(),
        Partition::one_cluster(1)
    );
}

/// Exact conditionals against ratios of enumerated joints.
fn check_exact_conditional(n: usize, seed: u64) {
    let mut r = rng(seed);
    let adj = random_adjacency(n, 0.5, &mut r);
    let params = SgdpParams::new(1.5 + 4.0 * r.random::<f64>(), 0.05 + 0.9 * r.random::<f64>(), 0.05 + 0.9 * r.random::<f64>()).unwrap();
    let prior = PartitionPrior::sgdp(&adj, params).unwrap();
    for z in enumerate_partitions(n) {
        for item in 0..n {
            let cond = full_conditional_assignment_prior(item, &z, &adj, &params, ConditionalMode::Exact).unwrap();
            let got = normalize_log_weights(&cond.iter().map(|c| c.1).collect::<Vec<_>>());
            let joints: Vec<f64> = cond
                .iter()
                .map(|&(c, _)| {
                    let mut labels = z.labels().to_vec();
                    labels[item] = match c {
                        Candidate::Existing(l) => l,
                        Candidate::New => z.n_clusters(),
                    };
                    prior.joint_log_prob(&Partition::from_labels(&labels)).unwrap().exp()
                })
                .collect();
            let total: f64 = joints.iter().sum();
            for (g, j) in got.iter().zip(&joints) {
                assert!((g - j / total).abs() < 1e-12, "item {item} of {:?}", z.labels());
            }
        }
    }
}

#[test]
fn exact_conditional_matches_enumerated_joint_ratios() {
    for seed in 10..13 {
        check_exact_conditional(5, seed);
    }
}

#[test]
fn treat_as_last_is_exact_for_the_last_item() {
    let mut r = rng(6);
    let adj = random_adjacency(6, 0.5, &mut r);
    let params = SgdpParams::new(3.0, 0.4, 0.3).unwrap();
    for z in enumerate_partitions(6) {
        let a = full_conditional_assignment_prior(5, &z, &adj, &params, ConditionalMode::Exact).unwrap();
        let b = full_conditional_assignment_prior(5, &z, &adj, &params, ConditionalMode::TreatAsLast).unwrap();
        let pa = normalize_log_weights(&a.iter().map(|c| c.1).collect::<Vec<_>>());
        let pb = normalize_log_weights(&b.iter().map(|c| c.1).collect::<Vec<_>>());
        for (x, y) in pa.iter().zip(&pb) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}

#[test]
fn dirichlet_case_exact_conditional_is_the_exchangeable_crp_conditional() {
    // with the plain GDP at alpha * beta = 1 the law is exchangeable
    let prior = PartitionPrior::gdp(GdpParams::new(2.0, 0.5).unwrap());
    let c = 1.0;
    for z in enumerate_partitions(6) {
        for item in 0..6 {
            let cond = prior.full_conditional(item, &z, ConditionalMode::Exact).unwrap();
            let got = normalize_log_weights(&cond.iter().map(|c| c.1).collect::<Vec<_>>());
            let own = z.label(item);
            let weights: Vec<f64> = cond
                .iter()
                .map(|&(cand, _)| match cand {
                    Candidate::Existing(l) => (z.sizes()[l] - (l == own) as usize) as f64,
                    Candidate::New => c,
                })
                .collect();
            let total: f64 = weights.iter().sum();
            for (g, w) in got.iter().zip(&weights) {
                assert!((g - w / total).abs() < 1e-12);
            }
        }
    }
}

/// Random prefix, adjacency and parameters with alpha > 1.
fn random_config(r: &mut sgdp_core::util::ChainRng, max_n: usize) -> (Partition, Adjacency, SgdpParams) {
    let n = r.random_range(2..=max_n);
    let t = r.random_range(1..n);
    let adj = random_adjacency(n, r.random::<f64>(), r);
    let z = random_partition(t, 1 + r.random_range(0..t), r);
    let params = SgdpParams::new(
        1.0 + 1e-3 + 9.0 * r.random::<f64>(),
        1e-3 + 0.998 * r.random::<f64>(),
        1e-3 + 0.998 * r.random::<f64>(),
    )
    .unwrap();
    (z, adj, params)
}

#[test]
fn adding_an_adjacency_raises_the_cluster_probability() {
    let mut r = rng(7);
    let mut tested = 0;
    while tested < 200 {
        let (z, adj, params) = random_config(&mut r, 12);
        if z.n_clusters() < 2 {
            continue;
        }
        let item = z.n_items();
        let j = r.random_range(0..z.n_clusters());
        let Some(member) = z.members(j).find(|&m| !adj.is_adjacent(item, m)) else {
            continue;
        };
        let before = sgdp_alloc_probs(&z, &adj, &params).unwrap()[j];
        let mut more = adj.clone();
        more.set(item, member, true);
        let after = sgdp_alloc_probs(&z, &more, &params).unwrap()[j];
        assert!(after > before, "{before} -> {after}");
        tested += 1;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn allocation_invariants(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let (z, adj, params) = random_config(&mut r, 20);
        let s = sgdp_alloc_probs(&z, &adj, &params).unwrap();
        let g = gdp_alloc_probs(&z, params.alpha, params.beta).unwrap();
        let k = z.n_clusters();
        prop_assert!((s.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert!((g.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        prop_assert_eq!(s[k], g[k]);
        prop_assert_eq!(s[k], new_cluster_prob(&z, params.alpha, params.beta).unwrap());
        prop_assert!((s[..k].iter().sum::<f64>() - g[..k].iter().sum::<f64>()).abs() < 1e-12);
        let star = omega_star(&z, &adj, &params).unwrap();
        let w = omega(&z, &adj, &params).unwrap();
        prop_assert!((star.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let ratio = w[0] / star[0];
        for (a, b) in w.iter().zip(&star) {
            prop_assert!((a / b - ratio).abs() < 1e-12 * ratio.max(1.0));
        }
    }

    #[test]
    fn new_cluster_prob_decreases_in_beta(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let t = r.random_range(1..15);
        let z = random_partition(t, 5, &mut r);
        let alpha = 1.5 + 5.0 * r.random::<f64>();
        let b1 = 0.01 + 0.9 * r.random::<f64>();
        let b2 = b1 + 0.08 * r.random::<f64>() + 1e-3;
        prop_assert!(new_cluster_prob(&z, alpha, b2).unwrap() < new_cluster_prob(&z, alpha, b1).unwrap());
    }

    #[test]
    fn sampled_partitions_are_canonical(seed in 0u64..1_000_000) {
        let mut r = rng(seed);
        let (_, adj, params) = random_config(&mut r, 15);
        let z = sample_prior_partition(adj.n(), &adj, &params, &mut r).unwrap();
        prop_assert!(Partition::from_canonical(z.labels().to_vec()).is_ok());
        prop_assert_eq!(z.sizes().iter().sum::<usize>(), adj.n());
    }
}
