//! Agreement between partitions and accuracy of estimated mean functions.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::partition::Partition;

/// A true and an estimated partition of the same items.
#[derive(Debug, Clone, Copy)]
pub struct LabeledPartitionPair<'a> {
    pub truth: &'a Partition,
    pub estimate: &'a Partition,
}

impl<'a> LabeledPartitionPair<'a> {
    pub fn new(truth: &'a Partition, estimate: &'a Partition) -> Result<Self> {
        if truth.n_items() != estimate.n_items() {
            return Err(Error::invalid(format!(
                "partitions cover {} and {} items",
                truth.n_items(),
                estimate.n_items()
            )));
        }
        if truth.n_items() == 0 {
            return Err(Error::invalid("cannot compare empty partitions"));
        }
        Ok(Self { truth, estimate })
    }

    /// `table[a][b]` counts items in truth cluster `a` and estimate cluster `b`.
    pub fn contingency(&self) -> Vec<Vec<usize>> {
        let mut table = vec![vec![0; self.estimate.n_clusters()]; self.truth.n_clusters()];
        for (&a, &b) in self.truth.labels().iter().zip(self.estimate.labels()) {
            table[a][b] += 1;
        }
        table
    }

    pub fn adjusted_rand_index(&self) -> f64 {
        let pairs = |m: usize| (m * m.saturating_sub(1) / 2) as f64;
        let table = self.contingency();
        let index: f64 = table.iter().flatten().map(|&c| pairs(c)).sum();
        let rows: f64 = self.truth.sizes().iter().map(|&c| pairs(c)).sum();
        let cols: f64 = self.estimate.sizes().iter().map(|&c| pairs(c)).sum();
        let total = pairs(self.truth.n_items());
        let expected = if total > 0.0 { rows * cols / total } else { 0.0 };
        let max = 0.5 * (rows + cols);
        if max == expected {
            // both partitions are a single cluster, or both all singletons
            return 1.0;
        }
        (index - expected) / (max - expected)
    }

    pub fn purity(&self) -> f64 {
        let table = self.contingency();
        let n_est = self.estimate.n_clusters();
        let hits: usize = (0..n_est)
            .map(|b| table.iter().map(|row| row[b]).max().unwrap_or(0))
            .sum();
        hits as f64 / self.truth.n_items() as f64
    }
}

pub fn adjusted_rand_index(truth: &Partition, estimate: &Partition) -> Result<f64> {
    Ok(LabeledPartitionPair::new(truth, estimate)?.adjusted_rand_index())
}

pub fn purity(truth: &Partition, estimate: &Partition) -> Result<f64> {
    Ok(LabeledPartitionPair::new(truth, estimate)?.purity())
}

/// Root mean squared error over all (curve, grid point) pairs.
pub fn rmse(estimated: &[DVector<f64>], truth: &[DVector<f64>]) -> Result<f64> {
    if estimated.len() != truth.len() || estimated.is_empty() {
        return Err(Error::invalid(format!(
            "rmse needs equally many curves, got {} and {}",
            estimated.len(),
            truth.len()
        )));
    }
    let mut sum = 0.0;
    let mut count = 0usize;
    for (e, t) in estimated.iter().zip(truth) {
        if e.len() != t.len() {
            return Err(Error::invalid("rmse curves differ in length"));
        }
        sum += (e - t).norm_squared();
        count += e.len();
    }
    Ok((sum / count as f64).sqrt())
}
