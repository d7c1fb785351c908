//! Game engines and normal-form game generators.

pub mod connect_four;
pub mod extensive;
pub mod fixtures;
pub mod io;
pub mod normal_form;
pub mod parity;
pub mod tictactoe;

pub use connect_four::{connect_four, ConnectFour};
pub use extensive::{misere, play, replay, ActionId, ExtensiveGame, Misere, Policy, StateKey};
pub use fixtures::{one_step_game, random_tree, three_step_xor_game, TreeGame, TreeNode};
pub use normal_form::{
    blotto, disc_game, elo_game, layered_game, noisy_elo_game, random_game_of_skill, rps, LayeredGame,
    LayeredSpec, NormalFormGame, Provenance, RandomGoS, RandomGoSSpec,
};
pub use parity::{parity_game, ParityGame};
pub use tictactoe::{tictactoe, TicTacToe};
