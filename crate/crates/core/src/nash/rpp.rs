use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::cluster::NashClustering;
use super::solver::{solve_game, MixedStrategy, SolverOptions};
use crate::error::{Error, Result};
use crate::payoff::{Matrix, PayoffMatrix};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RppResult {
    pub value: f64,
    pub p_a: MixedStrategy,
    pub p_b: MixedStrategy,
}

/// Relative population performance: value of the game in which one side
/// picks from `a` and the other from `b`, with maximum-entropy optimal
/// mixtures for both.
pub fn rpp(p: &PayoffMatrix, a: &[usize], b: &[usize], opts: &SolverOptions) -> Result<RppResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::invalid("rpp needs nonempty strategy sets"));
    }
    if a.iter().chain(b).any(|&i| i >= p.len()) {
        return Err(Error::invalid("strategy index out of range"));
    }
    let m = p.matrix().select(a, b);
    let s = solve_game(&m, opts)?;
    let value: f64 = (0..a.len())
        .map(|i| s.row[i] * (0..b.len()).map(|j| m.get(i, j) * s.col[j]).sum::<f64>())
        .sum();
    Ok(RppResult {
        value,
        p_a: MixedStrategy {
            indices: a.to_vec(),
            weights: s.row,
        },
        p_b: MixedStrategy {
            indices: b.to_vec(),
            weights: s.col,
        },
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RppMatrix {
    /// `values[i][j] = RPP(C_i, C_j)`.
    pub values: Matrix,
    /// Row means, the transitive coordinate of every cluster.
    pub mean: Vec<f64>,
}

/// RPP between every pair of clusters. Pairs are solved in parallel and
/// the lower triangle is mirrored from the upper one.
pub fn rpp_matrix(p: &PayoffMatrix, clustering: &NashClustering, opts: &SolverOptions) -> Result<RppMatrix> {
    let k = clustering.len();
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
    let vals: Vec<f64> = pairs
        .par_iter()
        .map(|&(i, j)| {
            rpp(p, &clustering.clusters[i].members, &clustering.clusters[j].members, opts).map(|r| r.value)
        })
        .collect::<Result<_>>()?;
    let mut values = Matrix::zeros(k, k);
    for (&(i, j), &v) in pairs.iter().zip(&vals) {
        values.set(i, j, v);
        values.set(j, i, -v);
    }
    let mean = (0..k)
        .map(|i| values.row(i).iter().sum::<f64>() / k as f64)
        .collect();
    Ok(RppMatrix { values, mean })
}
