use serde::{Deserialize, Serialize};

use crate::payoff::PayoffMatrix;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleCounts {
    /// `diag(A³)`: closed 3-walks through every strategy.
    pub per_strategy: Vec<u64>,
    /// Distinct 3-cycles, `Σ diag(A³) / 3`.
    pub total: u64,
}

/// 3-cycles of the dominance graph `A_ij = [P_ij > 0]`.
pub fn count_3cycles(p: &PayoffMatrix) -> CycleCounts {
    let n = p.len();
    let words = n.div_ceil(64);
    let mut out = vec![vec![0u64; words]; n];
    let mut inc = vec![vec![0u64; words]; n];
    for i in 0..n {
        for j in 0..n {
            if p.get(i, j) > 0.0 {
                out[i][j / 64] |= 1 << (j % 64);
                inc[j][i / 64] |= 1 << (i % 64);
            }
        }
    }
    let per_strategy: Vec<u64> = (0..n)
        .map(|i| {
            // i → j → k → i
            (0..n)
                .filter(|&j| out[i][j / 64] >> (j % 64) & 1 == 1)
                .map(|j| {
                    out[j]
                        .iter()
                        .zip(&inc[i])
                        .map(|(a, b)| (a & b).count_ones() as u64)
                        .sum::<u64>()
                })
                .sum()
        })
        .collect();
    let total = per_strategy.iter().sum::<u64>() / 3;
    CycleCounts { per_strategy, total }
}
