//! Random partitions induced by the generalized Dirichlet process (GDP) and
//! its similarity-weighted extension (SGDP).
//!
//! Partitions are stored as label sequences in order of first appearance:
//! item 0 is always in cluster 0, and a new cluster always receives the next
//! unused label. Both distributions are only partially exchangeable, so item
//! order is part of the model.

mod adjacency;
mod alloc;
mod conditional;
mod params;
mod prior;

pub use adjacency::{Adjacency, SimilarityWeights};
pub use alloc::{
    a_factor, gdp_alloc_probs, gdp_joint_log_prob, joint_log_prob, new_cluster_prob, omega,
    omega_star, sample_prior_partition, sgdp_alloc_probs,
};
pub use conditional::{full_conditional_assignment_prior, Candidate, ConditionalMode};
pub use params::{GdpParams, SgdpParams, SimilarityMap};
pub use prior::PartitionPrior;

use crate::error::{Error, Result};

/// Cluster assignments with canonical (first-appearance) labels.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    labels: Vec<usize>,
    sizes: Vec<usize>,
}

impl Partition {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn one_cluster(n: usize) -> Self {
        Self {
            labels: vec![0; n],
            sizes: if n > 0 { vec![n] } else { Vec::new() },
        }
    }

    pub fn singletons(n: usize) -> Self {
        Self {
            labels: (0..n).collect(),
            sizes: vec![1; n],
        }
    }

    /// Builds a partition from arbitrary integer labels, relabeling them in
    /// order of first appearance.
    pub fn from_labels(labels: &[usize]) -> Self {
        let (canonical, _) = canonicalize(labels);
        Self::from_canonical_unchecked(canonical)
    }

    /// Accepts labels that must already be canonical.
    pub fn from_canonical(labels: Vec<usize>) -> Result<Self> {
        let mut next = 0;
        for (i, &l) in labels.iter().enumerate() {
            if l > next {
                return Err(Error::invalid(format!(
                    "label {l} at item {i} skips ahead of the next unused label {next}"
                )));
            }
            if l == next {
                next += 1;
            }
        }
        Ok(Self::from_canonical_unchecked(labels))
    }

    /// Accepts 1-based labels as written in output files.
    pub fn from_one_based(labels: &[usize]) -> Result<Self> {
        if labels.contains(&0) {
            return Err(Error::invalid("1-based labels must be >= 1"));
        }
        Self::from_canonical(labels.iter().map(|l| l - 1).collect())
    }

    fn from_canonical_unchecked(labels: Vec<usize>) -> Self {
        let k = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
        let mut sizes = vec![0; k];
        for &l in &labels {
            sizes[l] += 1;
        }
        Self { labels, sizes }
    }

    pub fn n_items(&self) -> usize {
        self.labels.len()
    }

    pub fn n_clusters(&self) -> usize {
        self.sizes.len()
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn label(&self, item: usize) -> usize {
        self.labels[item]
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l + 1).collect()
    }

    /// The partition induced on the first `len` items.
    pub fn prefix(&self, len: usize) -> Partition {
        Self::from_canonical_unchecked(self.labels[..len].to_vec())
    }

    /// Appends an item to cluster `label`; `label == n_clusters()` opens a new one.
    pub fn push(&mut self, label: usize) -> Result<()> {
        let k = self.sizes.len();
        if label > k {
            return Err(Error::invalid(format!(
                "label {label} exceeds next unused label {k}"
            )));
        }
        if label == k {
            self.sizes.push(0);
        }
        self.sizes[label] += 1;
        self.labels.push(label);
        Ok(())
    }

    pub fn members(&self, cluster: usize) -> impl Iterator<Item = usize> + '_ {
        self.labels
            .iter()
            .enumerate()
            .filter_map(move |(i, &l)| (l == cluster).then_some(i))
    }

    pub fn same_cluster(&self, a: usize, b: usize) -> bool {
        self.labels[a] == self.labels[b]
    }
}

/// Relabels in order of first appearance. Returns the canonical labels and a
/// map from old label to new label (`None` for unused old labels).
pub fn canonicalize(labels: &[usize]) -> (Vec<usize>, Vec<Option<usize>>) {
    let bound = labels.iter().map(|&l| l + 1).max().unwrap_or(0);
    let mut map = vec![None; bound];
    let mut next = 0;
    let canonical = labels
        .iter()
        .map(|&l| {
            *map[l].get_or_insert_with(|| {
                next += 1;
                next - 1
            })
        })
        .collect();
    (canonical, map)
}

/// All set partitions of `n` items as canonical label sequences
/// (restricted growth strings). There are Bell(n) of them.
pub fn enumerate_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    if n == 0 {
        out.push(Partition::empty());
        return out;
    }
    let mut labels = vec![0usize; n];
    fn rec(pos: usize, next: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if pos == labels.len() {
            out.push(Partition::from_canonical_unchecked(labels.clone()));
            return;
        }
        for l in 0..=next {
            labels[pos] = l;
            rec(pos + 1, next.max(l + 1), labels, out);
        }
    }
    rec(1, 1, &mut labels, &mut out);
    out
}
