//! Population-based training on a fixed strategy set.
//!
//! A population of strategies is improved by an oracle that proposes a
//! strategy beating the current members; the new strategy replaces one
//! member. Runs stop when the population has converged to the strongest
//! Nash cluster, when no candidate exists, or at a step cap.

mod drift;

pub use drift::{random_gos_drift, DriftStats};

use std::collections::VecDeque;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::nash::{max_entropy_nash, SolverOptions};
use crate::payoff::PayoffMatrix;
use crate::rng::{self, tags};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleKind {
    /// Positive summed payoff against the population.
    BeatAverage,
    /// Positive payoff against every member.
    BeatAll,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Replacement {
    Oldest,
    /// A uniformly chosen member, drawn from the run's seeded stream.
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TerminalStatus {
    Converged,
    NoCandidate,
    StepCap,
}

impl TerminalStatus {
    pub fn name(self) -> &'static str {
        match self {
            TerminalStatus::Converged => "converged",
            TerminalStatus::NoCandidate => "no_candidate",
            TerminalStatus::StepCap => "step_cap",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PopulationState {
    /// Oldest first.
    pub members: Vec<usize>,
    pub step: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    /// Population after the step, oldest first.
    pub population: Vec<usize>,
    /// Mean over members of their mean payoff against all strategies.
    pub mean_strength: f64,
    pub candidate: usize,
    pub replaced: usize,
    pub converged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub initial: PopulationState,
    pub records: Vec<StepRecord>,
    pub terminal_status: TerminalStatus,
}

impl Trajectory {
    pub fn final_population(&self) -> &[usize] {
        self.records.last().map_or(&self.initial.members, |r| &r.population)
    }
}

/// A payoff matrix together with the data training needs: row means and
/// the strongest Nash cluster.
#[derive(Clone, Debug)]
pub struct TrainingGame {
    pub payoff: PayoffMatrix,
    pub means: Vec<f64>,
    /// Membership in the support of the maximum-entropy Nash equilibrium.
    pub top: Vec<bool>,
}

impl TrainingGame {
    pub fn new(payoff: PayoffMatrix, opts: &SolverOptions) -> Result<Self> {
        let all: Vec<usize> = (0..payoff.len()).collect();
        let support = max_entropy_nash(&payoff, &all, opts)?.support();
        Ok(Self::with_top(payoff, &support))
    }

    /// Uses `top` as the strongest cluster instead of solving for it.
    pub fn with_top(payoff: PayoffMatrix, top: &[usize]) -> Self {
        let mut mask = vec![false; payoff.len()];
        for &i in top {
            mask[i] = true;
        }
        TrainingGame {
            means: payoff.row_means(),
            payoff,
            top: mask,
        }
    }

    pub fn len(&self) -> usize {
        self.payoff.len()
    }

    pub fn is_empty(&self) -> bool {
        self.payoff.is_empty()
    }

    fn strength(&self, members: &[usize]) -> f64 {
        members.iter().map(|&i| self.means[i]).sum::<f64>() / members.len() as f64
    }

    /// Holds every strategy of the strongest cluster.
    fn covers_top(&self, members: &[usize]) -> bool {
        self.top.iter().enumerate().all(|(i, &t)| !t || members.contains(&i))
    }

    fn touches_top(&self, members: &[usize]) -> bool {
        members.iter().any(|&i| self.top[i])
    }
}

/// The weakest (lowest row mean, then lowest index) strategy outside the
/// population satisfying `ok`.
fn pessimistic(p: &PayoffMatrix, means: &[f64], population: &[usize], ok: impl Fn(usize) -> bool) -> Option<usize> {
    let mut best: Option<usize> = None;
    for c in 0..p.len() {
        if population.contains(&c) || !ok(c) {
            continue;
        }
        if best.is_none_or(|b| means[c] < means[b]) {
            best = Some(c);
        }
    }
    best
}

/// Weakest strategy outside the population whose summed payoff against it
/// is positive.
pub fn oracle_beat_average(p: &PayoffMatrix, population: &[usize]) -> Option<usize> {
    oracle_with_means(p, &p.row_means(), population, OracleKind::BeatAverage)
}

/// Weakest strategy outside the population that beats every member.
pub fn oracle_beat_all(p: &PayoffMatrix, population: &[usize]) -> Option<usize> {
    oracle_with_means(p, &p.row_means(), population, OracleKind::BeatAll)
}

fn oracle_with_means(p: &PayoffMatrix, means: &[f64], population: &[usize], kind: OracleKind) -> Option<usize> {
    match kind {
        OracleKind::BeatAverage => pessimistic(p, means, population, |c| {
            population.iter().map(|&m| p.get(c, m)).sum::<f64>() > 0.0
        }),
        OracleKind::BeatAll => pessimistic(p, means, population, |c| population.iter().all(|&m| p.get(c, m) > 0.0)),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingConfig {
    pub pop_size: usize,
    pub oracle: OracleKind,
    pub replacement: Replacement,
    /// Defaults to ten times the number of strategies.
    pub step_cap: Option<usize>,
    pub seed: u64,
}

impl TrainingConfig {
    pub fn new(pop_size: usize, oracle: OracleKind) -> Self {
        TrainingConfig {
            pop_size,
            oracle,
            replacement: Replacement::Oldest,
            step_cap: None,
            seed: 0,
        }
    }
}

/// The `k` weakest strategies by row mean (ties by index), weakest first.
pub fn weakest(means: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..means.len()).collect();
    idx.sort_by(|&a, &b| means[a].total_cmp(&means[b]).then(a.cmp(&b)));
    idx.truncate(k);
    idx
}

/// Fixed-size population training from the `pop_size` weakest strategies.
///
/// The population has converged when it holds the whole strongest Nash
/// cluster, or when the oracle has nothing to offer while the population
/// holds part of it.
pub fn run_training(game: &TrainingGame, cfg: &TrainingConfig) -> Result<Trajectory> {
    let n = game.len();
    if cfg.pop_size == 0 || cfg.pop_size > n {
        return Err(Error::invalid(format!("population size {} not in 1..={n}", cfg.pop_size)));
    }
    let cap = cfg.step_cap.unwrap_or(10 * n);
    let mut rng = rng::stream(cfg.seed, &[tags::TRAIN]);
    let mut pop: VecDeque<usize> = weakest(&game.means, cfg.pop_size).into();
    let initial = PopulationState {
        members: pop.iter().copied().collect(),
        step: 0,
    };
    let mut records = Vec::new();
    let status = loop {
        let members = pop.make_contiguous();
        if game.covers_top(members) {
            break TerminalStatus::Converged;
        }
        let Some(c) = oracle_with_means(&game.payoff, &game.means, members, cfg.oracle) else {
            break if game.touches_top(members) {
                TerminalStatus::Converged
            } else {
                TerminalStatus::NoCandidate
            };
        };
        if records.len() >= cap {
            break TerminalStatus::StepCap;
        }
        let slot = match cfg.replacement {
            Replacement::Oldest => 0,
            Replacement::Random => rng.random_range(0..pop.len()),
        };
        let replaced = pop.remove(slot).expect("slot within population");
        pop.push_back(c);
        let members = pop.make_contiguous();
        records.push(StepRecord {
            population: members.to_vec(),
            mean_strength: game.strength(members),
            candidate: c,
            replaced,
            converged: game.covers_top(members),
        });
    };
    Ok(Trajectory {
        initial,
        records,
        terminal_status: status,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub size: usize,
    pub seed: u64,
    pub steps: usize,
    pub terminal_status: TerminalStatus,
    pub final_mean_strength: f64,
}

/// One training run per `(size, seed)`, run in parallel; rows are in
/// size-major order.
pub fn population_sweep(
    game: &TrainingGame,
    sizes: &[usize],
    oracle: OracleKind,
    replacement: Replacement,
    step_cap: Option<usize>,
    seeds: &[u64],
) -> Result<Vec<(SweepRow, Trajectory)>> {
    if let Some(&s) = sizes.iter().find(|&&s| s == 0 || s > game.len()) {
        return Err(Error::invalid(format!("population size {s} not in 1..={}", game.len())));
    }
    let cells: Vec<(usize, u64)> = sizes.iter().flat_map(|&s| seeds.iter().map(move |&d| (s, d))).collect();
    cells
        .par_iter()
        .map(|&(size, seed)| {
            let cfg = TrainingConfig {
                pop_size: size,
                oracle,
                replacement,
                step_cap,
                seed,
            };
            let t = run_training(game, &cfg)?;
            let row = SweepRow {
                size,
                seed,
                steps: t.records.len(),
                terminal_status: t.terminal_status,
                final_mean_strength: game.strength(t.final_population()),
            };
            Ok((row, t))
        })
        .collect()
}

/// Fraction of converged runs per population size, in first-seen order.
pub fn convergence_fractions(rows: &[SweepRow]) -> Vec<(usize, f64)> {
    let mut out: Vec<(usize, usize, usize)> = Vec::new();
    for r in rows {
        let k = match out.iter().position(|e| e.0 == r.size) {
            Some(k) => k,
            None => {
                out.push((r.size, 0, 0));
                out.len() - 1
            }
        };
        out[k].2 += 1;
        if r.terminal_status == TerminalStatus::Converged {
            out[k].1 += 1;
        }
    }
    out.into_iter().map(|(s, c, t)| (s, c as f64 / t as f64)).collect()
}

pub fn write_sweep_csv<W: std::io::Write>(w: W, rows: &[SweepRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    wr.write_record(["size", "seed", "steps", "terminal_status", "final_mean_strength"])?;
    for r in rows {
        wr.write_record([
            r.size.to_string(),
            r.seed.to_string(),
            r.steps.to_string(),
            r.terminal_status.name().to_string(),
            format!("{:?}", r.final_mean_strength),
        ])?;
    }
    wr.flush()?;
    Ok(())
}
