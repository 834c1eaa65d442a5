use rand::Rng;

use super::alloc::{alloc_core, cluster_sims_for};
use super::params::{GdpParams, SgdpParams};
use super::{Adjacency, Partition, SimilarityWeights};
use crate::error::{Error, Result};
use crate::util::sample_categorical;

/// A GDP or SGDP partition distribution over a fixed item set, with the
/// transformed similarity matrix cached.
#[derive(Debug, Clone)]
pub struct PartitionPrior {
    gdp: GdpParams,
    similarity: Option<SimilarityWeights>,
}

impl PartitionPrior {
    pub fn gdp(params: GdpParams) -> Self {
        Self {
            gdp: params,
            similarity: None,
        }
    }

    pub fn sgdp(adj: &Adjacency, params: SgdpParams) -> Result<Self> {
        // re-run validation, the fields are public
        let params = SgdpParams::with_map(params.alpha, params.beta, params.tau, params.lambda)?;
        Ok(Self {
            gdp: params.gdp(),
            similarity: Some(SimilarityWeights::new(adj, params.tau, params.lambda)),
        })
    }

    /// Same similarity cache, new `(alpha, beta)`.
    pub fn with_gdp(&self, params: GdpParams) -> Self {
        Self {
            gdp: params,
            similarity: self.similarity.clone(),
        }
    }

    pub fn params(&self) -> GdpParams {
        self.gdp
    }

    pub fn similarity(&self) -> Option<&SimilarityWeights> {
        self.similarity.as_ref()
    }

    fn check_items(&self, n: usize) -> Result<()> {
        match &self.similarity {
            Some(w) if w.n() < n => Err(Error::invalid(format!(
                "partition over {n} items exceeds the {} items of the adjacency",
                w.n()
            ))),
            _ => Ok(()),
        }
    }

    /// Allocation probabilities for the item following `prefix` (item index
    /// `prefix.n_items()`).
    pub fn alloc_probs(&self, prefix: &Partition) -> Result<Vec<f64>> {
        self.check_items(prefix.n_items() + 1)?;
        let t = prefix.n_items();
        let sims = self
            .similarity
            .as_ref()
            .map(|w| cluster_sims_for(prefix.labels(), prefix.n_clusters(), &w.row(t)[..t]));
        alloc_core(prefix.sizes(), t, self.gdp, sims.as_deref())
    }

    /// `sum_{t >= from} log p(z_t | z_0..z_{t-1})` for canonical labels.
    pub fn log_prob_from(&self, labels: &[usize], from: usize) -> Result<f64> {
        self.check_items(labels.len())?;
        let mut sizes: Vec<usize> = Vec::new();
        for &l in &labels[..from.min(labels.len())] {
            if l == sizes.len() {
                sizes.push(0);
            }
            sizes[l] += 1;
        }
        let mut total = 0.0;
        for t in from..labels.len() {
            let z = labels[t];
            if t > 0 {
                let sims = self
                    .similarity
                    .as_ref()
                    .map(|w| cluster_sims_for(&labels[..t], sizes.len(), &w.row(t)[..t]));
                let probs = alloc_core(&sizes, t, self.gdp, sims.as_deref())?;
                let p = probs.get(z).copied().ok_or_else(|| {
                    Error::invalid(format!("label {z} at item {t} is not canonical"))
                })?;
                total += p.ln();
            } else if z != 0 {
                return Err(Error::invalid("the first item must carry label 0"));
            }
            if z == sizes.len() {
                sizes.push(0);
            }
            sizes[z] += 1;
        }
        Ok(total)
    }

    pub fn joint_log_prob(&self, z: &Partition) -> Result<f64> {
        self.log_prob_from(z.labels(), 0)
    }

    /// Sequential simulation of a partition of `n` items.
    pub fn sample<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Partition> {
        self.check_items(n)?;
        let mut z = Partition::empty();
        // running per-cluster similarity sums are rebuilt for each item: O(n^2)
        for _ in 0..n {
            let probs = self.alloc_probs(&z)?;
            let label = sample_categorical(&probs, rng);
            z.push(label)?;
        }
        Ok(z)
    }
}
