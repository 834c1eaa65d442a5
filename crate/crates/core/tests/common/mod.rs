//! Oracles and helpers shared by the integration tests.
#![allow(dead_code)]

use rand::Rng;
use sgdp_core::partition::{enumerate_partitions, Adjacency, Partition};
use sgdp_core::util::{substream, ChainRng};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use statrs::function::gamma::ln_gamma;

pub fn rng(seed: u64) -> ChainRng {
    substream(seed, 99, 0)
}

/// Ewens joint law with concentration `c` in closed form:
/// `c^(K-1) Gamma(c + 1) / Gamma(c + n) prod_j (N_j - 1)!`.
pub fn ewens_log_prob(z: &Partition, c: f64) -> f64 {
    let n = z.n_items() as f64;
    let k = z.n_clusters() as f64;
    (k - 1.0) * c.ln() + ln_gamma(c + 1.0) - ln_gamma(c + n)
        + z.sizes().iter().map(|&s| ln_gamma(s as f64)).sum::<f64>()
}

/// Ewens law built from the Chinese-restaurant sequential rule.
pub fn crp_sequential_log_prob(z: &Partition, c: f64) -> f64 {
    let mut sizes: Vec<usize> = Vec::new();
    let mut total = 0.0;
    for (t, &l) in z.labels().iter().enumerate() {
        if t > 0 {
            let den = c + t as f64;
            total += if l == sizes.len() { (c / den).ln() } else { (sizes[l] as f64 / den).ln() };
        }
        if l == sizes.len() {
            sizes.push(0);
        }
        sizes[l] += 1;
    }
    total
}

pub fn random_adjacency<R: Rng>(n: usize, density: f64, rng: &mut R) -> Adjacency {
    let mut adj = Adjacency::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                adj.set(i, j, true);
            }
        }
    }
    adj
}

/// A random canonical partition of `n` items with at most `max_k` clusters.
pub fn random_partition<R: Rng>(n: usize, max_k: usize, rng: &mut R) -> Partition {
    let labels: Vec<usize> = (0..n).map(|_| rng.random_range(0..max_k)).collect();
    Partition::from_labels(&labels)
}

/// Chi-squared goodness-of-fit p-value of `counts` against `probs`, pooling
/// cells with expected count below 5 into one.
pub fn chi_squared_p(counts: &[usize], probs: &[f64]) -> f64 {
    let total: usize = counts.iter().sum();
    let mut stat = 0.0;
    let mut cells = 0usize;
    let (mut pool_obs, mut pool_exp) = (0.0, 0.0);
    for (&c, &p) in counts.iter().zip(probs) {
        let e = p * total as f64;
        if e < 5.0 {
            pool_obs += c as f64;
            pool_exp += e;
        } else {
            stat += (c as f64 - e).powi(2) / e;
            cells += 1;
        }
    }
    if pool_exp > 0.0 {
        stat += (pool_obs - pool_exp).powi(2) / pool_exp.max(1e-300);
        cells += 1;
    }
    let df = (cells.max(2) - 1) as f64;
    1.0 - ChiSquared::new(df).unwrap().cdf(stat)
}

/// Index of each canonical partition of `n` items in [`enumerate_partitions`].
pub fn partition_index(n: usize) -> (Vec<Partition>, std::collections::HashMap<Vec<usize>, usize>) {
    let all = enumerate_partitions(n);
    let index = all.iter().enumerate().map(|(i, z)| (z.labels().to_vec(), i)).collect();
    (all, index)
}

pub mod geweke {
    use sgdp_core::partition::Adjacency;
    use sgdp_core::sampler::*;
    use sgdp_core::spatiotemporal::{FunctionalDataset, PeriodDesign};
    use sgdp_core::util::substream;

    pub const NAMES: [&str; 8] = ["alpha", "beta", "tau", "eta_y^2", "K", "eta_theta^2", "phi_y", "m_theta(x0)"];

    /// Hyperpriors with finite variances for every tested quantity.
    pub fn priors() -> HyperPriors {
        HyperPriors {
            eta: [10.0, 10.0],
            phi: InvGammaPrior { shape: 10.0, scale: 15.0 },
            m_var: 1.0,
            ..HyperPriors::prior1()
        }
    }

    /// Six areas on a 2 x 3 lattice, one day, four grid points.
    pub fn shape() -> FunctionalDataset {
        shape_with(6, 4, PeriodDesign::single(1), Adjacency::lattice(2, 3))
    }

    pub fn shape_with(n: usize, d: usize, design: PeriodDesign, adj: Adjacency) -> FunctionalDataset {
        let days = design.n_days();
        FunctionalDataset::new(
            (0..d).map(|x| x as f64).collect(),
            n,
            days,
            vec![nalgebra::DVector::zeros(d); n * days],
            design,
            adj,
        )
        .unwrap()
    }

    fn g(s: &McmcState) -> [f64; 8] {
        let p = s.periods.last().unwrap();
        [
            p.alpha,
            p.beta,
            p.tau.unwrap_or(1.0),
            s.eta_y * s.eta_y,
            p.n_clusters() as f64,
            p.eta_theta * p.eta_theta,
            s.phi_y,
            p.m_theta[0],
        ]
    }

    pub struct Comparison {
        pub name: &'static str,
        pub prior_mean: f64,
        pub chain_mean: f64,
        pub chain_ess: f64,
        pub z: f64,
    }

    /// Marginal-conditional against successive-conditional simulation, with
    /// `cycles` (sweep, data refresh) pairs between recorded chain draws.
    pub fn run(draws: usize, cycles: usize, model: Model, seed: u64) -> Vec<Comparison> {
        run_on(&shape(), draws, cycles, model, seed)
    }

    /// As [`run`], on a custom data shape; statistics refer to the last period.
    pub fn run_on(shape: &FunctionalDataset, draws: usize, cycles: usize, model: Model, seed: u64) -> Vec<Comparison> {
        let priors = priors();
        let cfg = ChainConfig { model, ..ChainConfig::default() };
        let mut rng = substream(seed, 0, 0);
        let forward: Vec<[f64; 8]> = (0..draws)
            .map(|_| g(&sample_prior_state(shape, &priors, &cfg, &mut rng).unwrap()))
            .collect();

        let mut rng = substream(seed, 1, 0);
        let mut state = sample_prior_state(shape, &priors, &cfg, &mut rng).unwrap();
        let mut chain = Vec::with_capacity(draws);
        for _ in 0..draws {
            for _ in 0..cycles {
                let data = simulate_observations(shape, &state, &mut rng).unwrap();
                let mut sampler = Sampler::from_state(&data, &priors, &cfg, state).unwrap();
                sampler.sweep(&mut rng).unwrap();
                state = sampler.into_state();
            }
            chain.push(g(&state));
        }

        (0..8)
            .map(|k| {
                let a: Vec<f64> = forward.iter().map(|v| v[k]).collect();
                let b: Vec<f64> = chain.iter().map(|v| v[k]).collect();
                let (ma, va) = mean_var(&a);
                let (mb, vb) = mean_var(&b);
                let ess = effective_sample_size(&b);
                let se = (va / a.len() as f64 + vb / ess).sqrt();
                Comparison {
                    name: NAMES[k],
                    prior_mean: ma,
                    chain_mean: mb,
                    chain_ess: ess,
                    z: if se > 0.0 { (ma - mb) / se } else { 0.0 },
                }
            })
            .collect()
    }

    fn mean_var(x: &[f64]) -> (f64, f64) {
        let m = x.iter().sum::<f64>() / x.len() as f64;
        let v = x.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (x.len() as f64 - 1.0);
        (m, v)
    }
}
