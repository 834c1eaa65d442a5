use rand::Rng;

use super::params::{GdpParams, SgdpParams, UNIT_MASS_TOL};
use super::{Adjacency, Partition, PartitionPrior};
use crate::error::{Error, Result};

/// Tail correction factor `(alpha - alpha*beta + S) / (alpha - 1 + S)` where
/// `S` is the total size of the clusters labeled after the current one.
pub fn a_factor(tail_sum: usize, alpha: f64, beta: f64) -> Result<f64> {
    let s = tail_sum as f64;
    let den = alpha - 1.0 + s;
    if den <= 0.0 || den.is_nan() {
        return Err(Error::domain(format!(
            "tail factor denominator alpha - 1 + S = {den} is not positive (alpha = {alpha}, S = {tail_sum})"
        )));
    }
    Ok((alpha - alpha * beta + s) / den)
}

/// Unnormalized GDP weights of the existing clusters and of a new cluster.
/// Dividing by `alpha + t - 1` (t = items allocated so far) gives probabilities.
pub(crate) fn gdp_numerators(sizes: &[usize], gdp: GdpParams) -> Result<(Vec<f64>, f64)> {
    let GdpParams { alpha, beta } = gdp;
    let unit_mass = (alpha * beta - 1.0).abs() <= UNIT_MASS_TOL;
    let k = sizes.len();
    let mut tail: usize = sizes.iter().sum();
    let mut prod = 1.0;
    let mut existing = Vec::with_capacity(k);
    for (j, &size) in sizes.iter().enumerate() {
        existing.push((alpha * beta + size as f64 - 1.0) * prod);
        tail -= size;
        if j + 1 < k && !unit_mass {
            prod *= a_factor(tail, alpha, beta)?;
        }
    }
    Ok((existing, alpha * (1.0 - beta) * prod))
}

/// Allocation probabilities for the item following a prefix of `t` items.
/// `cluster_sims[j]` holds the summed transformed similarity between the item
/// and the prefix members of cluster `j`; `None` gives the plain GDP rule.
pub(crate) fn alloc_core(
    sizes: &[usize],
    t: usize,
    gdp: GdpParams,
    cluster_sims: Option<&[f64]>,
) -> Result<Vec<f64>> {
    if t == 0 {
        return Ok(vec![1.0]);
    }
    let (mut probs, new) = gdp_numerators(sizes, gdp)?;
    let den = gdp.alpha + t as f64 - 1.0;
    if let Some(sims) = cluster_sims {
        let factor = omega_factor(&probs, sims)?;
        let total: f64 = sims.iter().sum();
        for (p, &c) in probs.iter_mut().zip(sims) {
            *p *= factor * (c / total);
        }
    }
    for p in probs.iter_mut() {
        *p /= den;
    }
    probs.push(new / den);
    Ok(probs)
}

/// Normalized similarity weights `omega*_j`.
pub(crate) fn omega_star_from_sims(sims: &[f64]) -> Result<Vec<f64>> {
    let total: f64 = sims.iter().sum();
    if total <= 0.0 || !total.is_finite() {
        return Err(Error::domain(
            "similarity weights of the prefix sum to zero; omega* is undefined",
        ));
    }
    Ok(sims.iter().map(|c| c / total).collect())
}

/// The common factor `sum_j g_j / sum_j omega*_j g_j` that turns omega* into omega.
fn omega_factor(gdp_numerators: &[f64], sims: &[f64]) -> Result<f64> {
    let star = omega_star_from_sims(sims)?;
    let mass: f64 = gdp_numerators.iter().sum();
    let weighted: f64 = gdp_numerators.iter().zip(&star).map(|(g, w)| g * w).sum();
    if weighted <= 0.0 || !weighted.is_finite() {
        return Err(Error::domain("omega normalizer is not positive"));
    }
    Ok(mass / weighted)
}

/// Per-cluster summed similarity between `item` and the items of `prefix`.
pub(crate) fn cluster_sims_for(labels: &[usize], k: usize, row: &[f64]) -> Vec<f64> {
    let mut sims = vec![0.0; k];
    for (&l, &w) in labels.iter().zip(row) {
        sims[l] += w;
    }
    sims
}

fn sgdp_sims(prefix: &Partition, adj: &Adjacency, params: &SgdpParams) -> Result<Vec<f64>> {
    let item = prefix.n_items();
    if item >= adj.n() {
        return Err(Error::invalid(format!(
            "item {item} is outside the adjacency over {} items",
            adj.n()
        )));
    }
    let row: Vec<f64> = (0..item)
        .map(|j| params.lambda.apply(adj.similarity(item, j, params.tau)))
        .collect();
    Ok(cluster_sims_for(prefix.labels(), prefix.n_clusters(), &row))
}

/// GDP probabilities for the next item: `k` existing clusters then a new one.
pub fn gdp_alloc_probs(prefix: &Partition, alpha: f64, beta: f64) -> Result<Vec<f64>> {
    alloc_core(
        prefix.sizes(),
        prefix.n_items(),
        GdpParams { alpha, beta },
        None,
    )
}

/// Probability that the next item opens a new cluster. Identical for the GDP
/// and the SGDP: similarity only redistributes mass among existing clusters.
pub fn new_cluster_prob(prefix: &Partition, alpha: f64, beta: f64) -> Result<f64> {
    let probs = gdp_alloc_probs(prefix, alpha, beta)?;
    Ok(probs[probs.len() - 1])
}

/// Similarity weights `omega*_j` of the next item (index `prefix.n_items()`).
pub fn omega_star(prefix: &Partition, adj: &Adjacency, params: &SgdpParams) -> Result<Vec<f64>> {
    omega_star_from_sims(&sgdp_sims(prefix, adj, params)?)
}

/// Rescaled weights `omega_j` that keep the existing-cluster mass of the GDP.
pub fn omega(prefix: &Partition, adj: &Adjacency, params: &SgdpParams) -> Result<Vec<f64>> {
    let sims = sgdp_sims(prefix, adj, params)?;
    let (g, _) = gdp_numerators(prefix.sizes(), params.gdp())?;
    let factor = omega_factor(&g, &sims)?;
    Ok(omega_star_from_sims(&sims)?
        .into_iter()
        .map(|w| w * factor)
        .collect())
}

/// SGDP probabilities for the next item: `k` existing clusters then a new one.
pub fn sgdp_alloc_probs(prefix: &Partition, adj: &Adjacency, params: &SgdpParams) -> Result<Vec<f64>> {
    if prefix.n_items() == 0 {
        return Ok(vec![1.0]);
    }
    let sims = sgdp_sims(prefix, adj, params)?;
    alloc_core(prefix.sizes(), prefix.n_items(), params.gdp(), Some(&sims))
}

/// Log-probability of the whole label sequence under the SGDP.
pub fn joint_log_prob(z: &Partition, adj: &Adjacency, params: &SgdpParams) -> Result<f64> {
    PartitionPrior::sgdp(adj, *params)?.joint_log_prob(z)
}

/// Log-probability of the whole label sequence under the GDP.
pub fn gdp_joint_log_prob(z: &Partition, alpha: f64, beta: f64) -> Result<f64> {
    PartitionPrior::gdp(GdpParams::new(alpha, beta)?).joint_log_prob(z)
}

/// Draws a partition of `n` items by sequential allocation.
pub fn sample_prior_partition<R: Rng + ?Sized>(
    n: usize,
    adj: &Adjacency,
    params: &SgdpParams,
    rng: &mut R,
) -> Result<Partition> {
    PartitionPrior::sgdp(adj, *params)?.sample(n, rng)
}
