//! Game-tree and payoff geometry: communicativeness, strategy counts,
//! cycles and spinning-top profiles.

pub mod comm;
pub mod counting;
pub mod cycles;
pub mod fit;
pub mod profile;
pub mod theorem1;
pub mod tree;

pub use comm::{communicativeness, log2_factorial, restricted_communicativeness, subset_max_solver, CommResult};
pub use counting::{count_pure_strategies, enumerate_pure_strategies, enumerated_game, PureStrategy, StrategyCount};
pub use cycles::{count_3cycles, CycleCounts};
pub use fit::{fit_spinning_top, ProfileFit};
pub use profile::{game_profile, GameProfile};
pub use theorem1::{simulate, theorem1_construct, IdStrategy};
pub use tree::{log10_big, log2_big, node_budget, prune_determined, GameGraph, PrunedTree, DEFAULT_NODE_BUDGET};
