use std::path::Path;
use std::sync::atomic::{AtomicUsize, Ordering};

use rayon::prelude::*;
use serde::Serialize;

use super::search::AgentContext;
use super::spec::AgentSpec;
use crate::error::{Error, Result};
use crate::games::io::{load_payoff_csv, save_json, save_payoff_csv};
use crate::games::ExtensiveGame;
use crate::payoff::{dedup_rows, standardize, Matrix, PayoffMatrix};

/// A normal-form game whose strategies are sampled agents, with identical
/// rows merged.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EmpiricalGame {
    #[serde(skip)]
    pub payoff: PayoffMatrix,
    /// Every agent that was played, in input order. Empty for external
    /// payoffs.
    pub agents: Vec<AgentSpec>,
    /// Label of every surviving strategy.
    pub labels: Vec<String>,
    /// For every surviving strategy, the original indices it stands for;
    /// the first is the representative.
    pub dedup_map: Vec<Vec<usize>>,
}

impl EmpiricalGame {
    fn from_raw(raw: &Matrix, labels: Vec<String>, agents: Vec<AgentSpec>) -> Result<Self> {
        let full = standardize(raw)?;
        let (keep, dedup_map) = dedup_rows(&full);
        Ok(EmpiricalGame {
            payoff: full.restrict(&keep),
            labels: keep.iter().map(|&i| labels[i].clone()).collect(),
            agents,
            dedup_map,
        })
    }

    pub fn len(&self) -> usize {
        self.payoff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoff.is_empty()
    }

    /// Writes `<stem>.csv` (payoff) and `<stem>.json` (agents, labels,
    /// dedup map) into `dir`.
    pub fn save(&self, dir: &Path, stem: &str) -> Result<()> {
        save_payoff_csv(&dir.join(format!("{stem}.csv")), &self.labels, self.payoff.matrix())?;
        save_json(&dir.join(format!("{stem}.json")), self)
    }
}

/// Plays every pair of agents (two matches each, one per seat), then
/// standardizes and merges identical rows, keeping the earliest.
///
/// Matches run on a pool of `parallelism` threads (0 means rayon's
/// default); the result does not depend on it.
pub fn build_empirical_payoff<G: ExtensiveGame>(game: &G, agents: &[AgentSpec], parallelism: usize) -> Result<EmpiricalGame> {
    build_empirical_payoff_with_progress(game, agents, parallelism, &|_, _| {})
}

/// As [`build_empirical_payoff`], calling `progress(done, total)` as
/// matches complete.
pub fn build_empirical_payoff_with_progress<G: ExtensiveGame>(
    game: &G,
    agents: &[AgentSpec],
    parallelism: usize,
    progress: &(dyn Fn(usize, usize) + Sync),
) -> Result<EmpiricalGame> {
    let n = agents.len();
    if n < 2 {
        return Err(Error::invalid("need at least two agents"));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let total = pairs.len();
    let done = AtomicUsize::new(0);
    let step = (total / 100).max(1);
    let ctx = AgentContext::new(game);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(parallelism)
        .build()
        .map_err(|e| Error::invalid(format!("thread pool: {e}")))?;
    let values: Vec<f64> = pool.install(|| {
        pairs
            .par_iter()
            .map(|&(i, j)| {
                let v = ctx.play_match(&agents[i], &agents[j]);
                let d = done.fetch_add(1, Ordering::Relaxed) + 1;
                if d.is_multiple_of(step) || d == total {
                    progress(d, total);
                }
                v
            })
            .collect()
    });
    let mut raw = Matrix::zeros(n, n);
    for (&(i, j), &v) in pairs.iter().zip(&values) {
        raw.set(i, j, v);
        raw.set(j, i, -v);
    }
    let labels = agents.iter().map(|a| a.to_string()).collect();
    EmpiricalGame::from_raw(&raw, labels, agents.to_vec())
}

/// Reads a payoff CSV (label header, then one row per strategy),
/// standardizes it and merges identical rows.
pub fn load_external_payoff(path: &Path) -> Result<EmpiricalGame> {
    let (labels, raw) = load_payoff_csv(path)?;
    if raw.rows() == 0 {
        return Err(Error::invalid("payoff CSV has no strategies"));
    }
    EmpiricalGame::from_raw(&raw, labels, Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::agents::{sample_agent_grid, AgentKind, GridConfig};
    use crate::games::tictactoe;

    #[test]
    fn identical_specs_merge() {
        let g = tictactoe();
        let a = AgentSpec::new(AgentKind::MinMax, 2, 1);
        let b = AgentSpec::new(AgentKind::Random, 0, 4);
        let e = build_empirical_payoff(&g, &[a, b, a], 1).unwrap();
        assert_eq!(e.dedup_map, vec![vec![0, 2], vec![1]]);
        assert_eq!(e.len(), 2);
    }

    #[test]
    fn too_few_agents() {
        let g = tictactoe();
        assert!(build_empirical_payoff(&g, &[AgentSpec::new(AgentKind::Random, 0, 1)], 1).is_err());
    }

    #[test]
    fn independent_of_parallelism() {
        let g = tictactoe();
        let agents = sample_agent_grid(&GridConfig::small()).unwrap();
        let a = build_empirical_payoff(&g, &agents, 1).unwrap();
        let b = build_empirical_payoff(&g, &agents, 16).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.payoff, b.payoff);
        for i in 0..a.len() {
            for j in 0..a.len() {
                assert!(a.payoff.get(i, j).abs() <= 1.0);
                assert!((a.payoff.get(i, j) + a.payoff.get(j, i)).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn external_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("rps.csv");
        std::fs::write(&p, "r,p,s\n0,-1,1\n1,0,-1\n-1,1,0\n").unwrap();
        assert_eq!(load_external_payoff(&p).unwrap().len(), 3);

        std::fs::write(&p, "a,b,c\n0,1,1\n-1,0,0\n-1,0,0\n").unwrap();
        let e = load_external_payoff(&p).unwrap();
        assert_eq!(e.dedup_map, vec![vec![0], vec![1, 2]]);

        std::fs::write(&p, "a,b\n0,1\n").unwrap();
        assert!(load_external_payoff(&p).is_err());
        std::fs::write(&p, "a,b\n0,NaN\n1,0\n").unwrap();
        assert!(load_external_payoff(&p).is_err());
    }
}
