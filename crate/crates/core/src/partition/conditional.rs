use serde::{Deserialize, Serialize};

use super::alloc::{alloc_core, cluster_sims_for};
use super::params::SgdpParams;
use super::{canonicalize, Adjacency, Partition, PartitionPrior};
use crate::error::Result;

/// How the prior part of an assignment's full conditional is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum ConditionalMode {
    /// Re-evaluate the joint sequence probability for every candidate.
    #[default]
    Exact,
    /// Approximate: score the item as if it were the last one allocated.
    TreatAsLast,
}

impl ConditionalMode {
    pub fn is_approximate(&self) -> bool {
        matches!(self, ConditionalMode::TreatAsLast)
    }
}

/// A destination for a reallocated item.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Candidate {
    /// Cluster carrying this label in the current partition.
    Existing(usize),
    New,
}

/// Labels of `z` with item `item` moved to `to`, canonicalized.
pub(crate) fn relabeled(z: &Partition, item: usize, to: Candidate) -> Vec<usize> {
    let mut labels = z.labels().to_vec();
    labels[item] = match to {
        Candidate::Existing(l) => l,
        Candidate::New => z.n_clusters(),
    };
    canonicalize(&labels).0
}

/// Clusters item `item` may join: every cluster with another member, plus a new one.
pub(crate) fn candidates(z: &Partition, item: usize) -> Vec<Candidate> {
    let own = z.label(item);
    let mut out: Vec<Candidate> = (0..z.n_clusters())
        .filter(|&l| l != own || z.sizes()[l] > 1)
        .map(Candidate::Existing)
        .collect();
    out.push(Candidate::New);
    out
}

impl PartitionPrior {
    /// Unnormalized log prior weights of every candidate for item `item`.
    pub fn full_conditional(
        &self,
        item: usize,
        z: &Partition,
        mode: ConditionalMode,
    ) -> Result<Vec<(Candidate, f64)>> {
        let cands = candidates(z, item);
        match mode {
            ConditionalMode::Exact => cands
                .into_iter()
                .map(|c| {
                    let labels = relabeled(z, item, c);
                    // terms before `item` do not depend on the candidate
                    Ok((c, self.log_prob_from(&labels, item)?))
                })
                .collect(),
            ConditionalMode::TreatAsLast => {
                let others: Vec<usize> = (0..z.n_items()).filter(|&o| o != item).collect();
                let other_labels: Vec<usize> = others.iter().map(|&o| z.label(o)).collect();
                let (canon, map) = canonicalize(&other_labels);
                let rest = Partition::from_labels(&canon);
                let sims = self.similarity().map(|w| {
                    let row: Vec<f64> = others.iter().map(|&o| w.get(item, o)).collect();
                    cluster_sims_for(rest.labels(), rest.n_clusters(), &row)
                });
                let probs = alloc_core(rest.sizes(), rest.n_items(), self.params(), sims.as_deref())?;
                Ok(cands
                    .into_iter()
                    .map(|c| {
                        let p = match c {
                            Candidate::Existing(l) => {
                                probs[map[l].expect("candidate cluster has another member")]
                            }
                            Candidate::New => probs[probs.len() - 1],
                        };
                        (c, p.ln())
                    })
                    .collect())
            }
        }
    }
}

/// Log prior weight of every candidate for item `i` under the SGDP.
pub fn full_conditional_assignment_prior(
    i: usize,
    z: &Partition,
    adj: &Adjacency,
    params: &SgdpParams,
    mode: ConditionalMode,
) -> Result<Vec<(Candidate, f64)>> {
    PartitionPrior::sgdp(adj, *params)?.full_conditional(i, z, mode)
}
