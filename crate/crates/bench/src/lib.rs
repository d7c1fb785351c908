//! Fixed workloads shared by the benchmarks, so a regression in a bench
//! number can be reproduced from a test or a debugger.

use spintop_core::agents::{sample_agent_grid, AgentSpec, GridConfig};
use spintop_core::games::disc_game;
use spintop_core::nash::SolverOptions;
use spintop_core::training::TrainingGame;
use spintop_core::PayoffMatrix;

pub const SEED: u64 = 2024;

pub fn disc(n: usize) -> PayoffMatrix {
    disc_game(n, SEED).expect("valid size").standardized()
}

pub fn small_agents() -> Vec<AgentSpec> {
    sample_agent_grid(&GridConfig::small()).expect("preset grid is valid")
}

pub fn disc_training(n: usize) -> TrainingGame {
    TrainingGame::new(disc(n), &SolverOptions::default()).expect("solver converges")
}
