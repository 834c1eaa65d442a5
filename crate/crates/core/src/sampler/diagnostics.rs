//! Effective sample size and partition point estimation.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::partition::Partition;

fn autocorrelation(centered: &[f64], var: f64, lag: usize) -> f64 {
    let m = centered.len();
    let s: f64 = centered[..m - lag]
        .iter()
        .zip(&centered[lag..])
        .map(|(a, b)| a * b)
        .sum();
    s / m as f64 / var
}

/// `M / (1 + 2 sum_k rho_k)` with Geyer's initial monotone positive-pair
/// truncation. A constant trace yields 1.
pub fn effective_sample_size(trace: &[f64]) -> f64 {
    let m = trace.len();
    if m < 2 {
        return m as f64;
    }
    let mean = trace.iter().sum::<f64>() / m as f64;
    let centered: Vec<f64> = trace.iter().map(|v| v - mean).collect();
    let var = centered.iter().map(|v| v * v).sum::<f64>() / m as f64;
    if var.is_nan() || var <= 0.0 || !var.is_finite() {
        return 1.0;
    }
    // Gamma_k = rho_{2k} + rho_{2k+1}, summed while positive and kept non-increasing
    let mut tau = -1.0;
    let mut prev = f64::INFINITY;
    let mut k = 0;
    while 2 * k + 1 < m {
        let rho0 = if k == 0 { 1.0 } else { autocorrelation(&centered, var, 2 * k) };
        let pair = rho0 + autocorrelation(&centered, var, 2 * k + 1);
        if pair <= 0.0 {
            break;
        }
        let pair = pair.min(prev);
        tau += 2.0 * pair;
        prev = pair;
        k += 1;
    }
    m as f64 / tau.max(1.0 / m as f64)
}

/// Posterior co-clustering frequencies, row-major `n x n`.
pub fn posterior_similarity(draws: &[Partition]) -> Result<Vec<f64>> {
    let Some(first) = draws.first() else {
        return Err(Error::invalid("no partitions to summarize"));
    };
    let n = first.n_items();
    let mut psm = vec![0.0; n * n];
    for z in draws {
        if z.n_items() != n {
            return Err(Error::invalid("partitions cover different item counts"));
        }
        accumulate_coclustering(&mut psm, z);
    }
    let w = 1.0 / draws.len() as f64;
    psm.iter_mut().for_each(|v| *v *= w);
    Ok(psm)
}

pub(crate) fn accumulate_coclustering(acc: &mut [f64], z: &Partition) {
    let n = z.n_items();
    let labels = z.labels();
    for a in 0..n {
        for b in 0..n {
            if labels[a] == labels[b] {
                acc[a * n + b] += 1.0;
            }
        }
    }
}

/// Binder loss with equal costs: `sum_{a<b} |1{z_a = z_b} - psm_ab|`.
pub fn binder_loss(z: &Partition, psm: &[f64]) -> f64 {
    let n = z.n_items();
    let labels = z.labels();
    let mut loss = 0.0;
    for a in 0..n {
        for b in a + 1..n {
            let same = if labels[a] == labels[b] { 1.0 } else { 0.0 };
            loss += (same - psm[a * n + b]).abs();
        }
    }
    loss
}

/// The sampled partition with the smallest Binder loss against the posterior
/// co-clustering matrix; ties go to the earliest draw. Returns the index of
/// that draw.
pub fn point_partition_index(draws: &[Partition]) -> Result<usize> {
    let psm = posterior_similarity(draws)?;
    let mut seen: HashMap<&[usize], f64> = HashMap::new();
    let mut best = (0, f64::INFINITY);
    for (idx, z) in draws.iter().enumerate() {
        let loss = *seen.entry(z.labels()).or_insert_with(|| binder_loss(z, &psm));
        if loss < best.1 {
            best = (idx, loss);
        }
    }
    Ok(best.0)
}

pub fn point_partition(draws: &[Partition]) -> Result<Partition> {
    Ok(draws[point_partition_index(draws)?].clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::substream;
    use rand::Rng;
    use rand_distr::StandardNormal;

    #[test]
    fn white_noise_ess() {
        let mut rng = substream(3, 0, 0);
        let trace: Vec<f64> = (0..4000).map(|_| rng.sample(StandardNormal)).collect();
        let ess = effective_sample_size(&trace);
        assert!((ess - 4000.0).abs() < 0.15 * 4000.0, "{ess}");
    }

    #[test]
    fn ar1_ess() {
        let mut rng = substream(4, 0, 0);
        let rho: f64 = 0.5;
        let mut x = 0.0;
        let m = 100_000;
        let trace: Vec<f64> = (0..m)
            .map(|_| {
                let e: f64 = rng.sample(StandardNormal);
                x = rho * x + (1.0 - rho * rho).sqrt() * e;
                x
            })
            .collect();
        let ess = effective_sample_size(&trace);
        let target = m as f64 / 3.0;
        assert!((ess - target).abs() < 0.1 * target, "{ess}");
    }

    #[test]
    fn constant_trace_is_minimal() {
        assert_eq!(effective_sample_size(&[2.0; 50]), 1.0);
    }

    #[test]
    fn point_partition_cases() {
        let a = Partition::from_labels(&[0, 0, 1, 1]);
        let b = Partition::from_labels(&[0, 1, 1, 1]);
        assert_eq!(point_partition(&[a.clone(), a.clone()]).unwrap(), a);
        let mut draws = vec![a.clone(); 9];
        draws.push(b.clone());
        assert_eq!(point_partition(&draws).unwrap(), a);
        // equal weights: both have the same loss, earliest wins
        assert_eq!(point_partition_index(&[b.clone(), a.clone()]).unwrap(), 0);
        assert!(point_partition(&[]).is_err());
    }

    #[test]
    fn binder_loss_against_own_indicator_is_zero() {
        let a = Partition::from_labels(&[0, 1, 0, 2, 1]);
        let psm = posterior_similarity(std::slice::from_ref(&a)).unwrap();
        assert_eq!(binder_loss(&a, &psm), 0.0);
        assert_eq!(binder_loss(&Partition::one_cluster(5), &psm), 8.0);
    }
}
