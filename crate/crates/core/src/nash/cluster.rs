use serde::{Deserialize, Serialize};

use super::solver::{exploitability, solve_symmetric, MixedStrategy, SolverOptions};
use crate::error::{Error, Result};
use crate::payoff::PayoffMatrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    /// Strategy indices, ascending.
    pub members: Vec<usize>,
    /// Maximum-entropy Nash of the game restricted to the strategies not
    /// yet clustered, over `members`.
    pub mixture: MixedStrategy,
    /// Exploitability of `mixture` in that restricted game.
    pub exploitability: f64,
}

/// Ordered partition of the strategies into Nash clusters; cluster 0 is
/// the support of the full game's maximum-entropy Nash.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct NashClustering {
    pub clusters: Vec<Cluster>,
}

impl NashClustering {
    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.clusters.iter().map(|c| c.members.len()).collect()
    }

    /// Cluster index of every strategy in `0..n`; `usize::MAX` if missing.
    pub fn cluster_of(&self, n: usize) -> Vec<usize> {
        let mut out = vec![usize::MAX; n];
        for (k, c) in self.clusters.iter().enumerate() {
            for &i in &c.members {
                out[i] = k;
            }
        }
        out
    }

    /// Disjoint, nonempty clusters covering `0..n`.
    pub fn is_partition(&self, n: usize) -> bool {
        let mut seen = vec![false; n];
        for c in &self.clusters {
            if c.members.is_empty() {
                return false;
            }
            for &i in &c.members {
                if i >= n || std::mem::replace(&mut seen[i], true) {
                    return false;
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Repeatedly peels off the support of the maximum-entropy Nash of the
/// game restricted to the remaining strategies.
pub fn nash_clustering(p: &PayoffMatrix, opts: &SolverOptions) -> Result<NashClustering> {
    let mut remaining: Vec<usize> = (0..p.len()).collect();
    let mut out = NashClustering::default();
    while !remaining.is_empty() {
        let (mix, support) = match solve_symmetric(p, &remaining, opts) {
            Ok(s) => s,
            Err(e) => {
                return Err(Error::Clustering {
                    partial: Box::new(out),
                    source: Box::new(e),
                })
            }
        };
        let expl = exploitability(p, &mix);
        let mut members = Vec::new();
        let mut weights = Vec::new();
        let mut rest = Vec::new();
        for (k, &i) in remaining.iter().enumerate() {
            if support[k] {
                members.push(i);
                weights.push(mix.weights[k]);
            } else {
                rest.push(i);
            }
        }
        out.clusters.push(Cluster {
            mixture: MixedStrategy {
                indices: members.clone(),
                weights,
            },
            members,
            exploitability: expl,
        });
        remaining = rest;
    }
    Ok(out)
}
