use serde::{Deserialize, Serialize};

use super::cycles::{count_3cycles, CycleCounts};
use super::fit::{fit_spinning_top, ProfileFit, MIN_POINTS};
use crate::error::Result;
use crate::nash::{nash_clustering, rpp_matrix, NashClustering, SolverOptions};
use crate::payoff::{Matrix, PayoffMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GameProfile {
    pub clustering: NashClustering,
    pub rpp: Matrix,
    /// Mean RPP of every cluster against all clusters (the x-axis).
    pub mean_rpp: Vec<f64>,
    /// Cluster sizes (the y-axis).
    pub cluster_sizes: Vec<usize>,
    pub cycles: CycleCounts,
    /// Absent when there are fewer than five clusters or all mean RPP
    /// values coincide.
    pub fit: Option<ProfileFit>,
}

impl GameProfile {
    /// The `(mean RPP, cluster size)` dataset.
    pub fn points(&self) -> Vec<(f64, usize)> {
        self.mean_rpp.iter().copied().zip(self.cluster_sizes.iter().copied()).collect()
    }
}

pub fn game_profile(p: &PayoffMatrix, opts: &SolverOptions) -> Result<GameProfile> {
    let clustering = nash_clustering(p, opts)?;
    let rpp = rpp_matrix(p, &clustering, opts)?;
    let cluster_sizes = clustering.sizes();
    let y: Vec<f64> = cluster_sizes.iter().map(|&s| s as f64).collect();
    let spread = rpp.mean.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b))
        - rpp.mean.iter().fold(f64::INFINITY, |a, &b| a.min(b));
    let fit = if rpp.mean.len() >= MIN_POINTS && spread > 0.0 {
        Some(fit_spinning_top(&rpp.mean, &y)?)
    } else {
        None
    };
    Ok(GameProfile {
        cycles: count_3cycles(p),
        mean_rpp: rpp.mean,
        rpp: rpp.values,
        cluster_sizes,
        clustering,
        fit,
    })
}
