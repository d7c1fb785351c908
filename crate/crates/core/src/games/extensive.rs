use std::fmt::Debug;

use crate::error::{Error, Result};

/// Index of an action as returned by [`ExtensiveGame::legal_actions`].
pub type ActionId = u32;

/// Canonical, platform-independent encoding of a game state. Two states
/// with equal keys must be indistinguishable to every algorithm in the
/// crate (same mover, same legal actions, same subtree).
pub type StateKey = u128;

/// A turn-based, fully observable, deterministic two-player game with
/// outcomes in `[-1, 1]` from player 0's perspective.
///
/// `legal_actions` must return actions in a fixed order; tie-breaking
/// throughout the crate relies on it.
pub trait ExtensiveGame: Send + Sync {
    type State: Clone + Debug + Send + Sync;

    fn name(&self) -> String;

    fn initial_state(&self) -> Self::State;

    /// 0 or 1. Unspecified on terminal states.
    fn player_to_move(&self, state: &Self::State) -> usize;

    fn legal_actions(&self, state: &Self::State) -> Vec<ActionId>;

    fn apply(&self, state: &Self::State, action: ActionId) -> Self::State;

    fn is_terminal(&self, state: &Self::State) -> bool;

    /// Outcome for player 0. Only meaningful on terminal states.
    fn outcome(&self, state: &Self::State) -> f64;

    fn state_key(&self, state: &Self::State) -> StateKey;
}

/// Replays `actions` from the initial state, checking legality.
pub fn replay<G: ExtensiveGame>(game: &G, actions: &[ActionId]) -> Result<G::State> {
    let mut s = game.initial_state();
    for (ply, &a) in actions.iter().enumerate() {
        if game.is_terminal(&s) {
            return Err(Error::TerminalState);
        }
        if !game.legal_actions(&s).contains(&a) {
            return Err(Error::invalid(format!("illegal action {a} at ply {ply}")));
        }
        s = game.apply(&s, a);
    }
    Ok(s)
}

/// A deterministic pure strategy: the action it takes in every state it
/// may face.
pub trait Policy<G: ExtensiveGame> {
    fn act(&self, game: &G, state: &G::State) -> ActionId;
}

impl<G: ExtensiveGame, F: Fn(&G, &G::State) -> ActionId> Policy<G> for F {
    fn act(&self, game: &G, state: &G::State) -> ActionId {
        self(game, state)
    }
}

/// Plays one game with `p0` moving for player 0 and `p1` for player 1;
/// returns player 0's outcome.
pub fn play<G: ExtensiveGame>(game: &G, p0: &dyn Policy<G>, p1: &dyn Policy<G>) -> f64 {
    let mut s = game.initial_state();
    while !game.is_terminal(&s) {
        let a = if game.player_to_move(&s) == 0 {
            p0.act(game, &s)
        } else {
            p1.act(game, &s)
        };
        s = game.apply(&s, a);
    }
    game.outcome(&s)
}

/// Negates the outcome of the wrapped game: a line made by a player is a
/// loss for that player.
#[derive(Clone, Debug)]
pub struct Misere<G>(pub G);

pub fn misere<G: ExtensiveGame>(game: G) -> Misere<G> {
    Misere(game)
}

impl<G: ExtensiveGame> ExtensiveGame for Misere<G> {
    type State = G::State;

    fn name(&self) -> String {
        format!("misere({})", self.0.name())
    }
    fn initial_state(&self) -> Self::State {
        self.0.initial_state()
    }
    fn player_to_move(&self, s: &Self::State) -> usize {
        self.0.player_to_move(s)
    }
    fn legal_actions(&self, s: &Self::State) -> Vec<ActionId> {
        self.0.legal_actions(s)
    }
    fn apply(&self, s: &Self::State, a: ActionId) -> Self::State {
        self.0.apply(s, a)
    }
    fn is_terminal(&self, s: &Self::State) -> bool {
        self.0.is_terminal(s)
    }
    fn outcome(&self, s: &Self::State) -> f64 {
        // `0.0 - x` keeps draws at +0.0.
        0.0 - self.0.outcome(s)
    }
    fn state_key(&self, s: &Self::State) -> StateKey {
        self.0.state_key(s)
    }
}
