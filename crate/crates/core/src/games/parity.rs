use super::extensive::{ActionId, ExtensiveGame, StateKey};

/// Flip the shared bit.
pub const FLIP: ActionId = 0;
/// Guess that the bit is 0; ends the game.
pub const GUESS0: ActionId = 1;
/// Guess that the bit is 1; ends the game.
pub const GUESS1: ActionId = 2;
/// Leave the bit unchanged.
pub const KEEP: ActionId = 3;

/// Largest supported `n_steps`; keeps the action history inside a `u128` key.
pub const MAX_STEPS: usize = 30;

/// Two players alternate on a single bit that starts at 0. On each of
/// their first `n_steps - 1` turns a player may flip, keep or guess; on
/// their `n_steps`-th turn only the two guesses are legal. A guess ends the
/// game and the guesser wins iff it matches the bit.
///
/// Actions are ordered `FLIP < GUESS0 < GUESS1 < KEEP`.
#[derive(Clone, Copy, Debug)]
pub struct ParityGame {
    n_steps: usize,
}

pub fn parity_game(n_steps: usize) -> ParityGame {
    assert!(
        (1..=MAX_STEPS).contains(&n_steps),
        "parity_game needs 1 <= n_steps <= {MAX_STEPS}"
    );
    ParityGame { n_steps }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ParityState {
    pub bit: u8,
    /// Two bits per action, oldest in the lowest bits.
    pub history: u128,
    pub len: u8,
    /// Set once somebody guessed: +1 if player 0 won.
    pub result: Option<i8>,
}

impl ParityGame {
    pub fn n_steps(&self) -> usize {
        self.n_steps
    }

    /// 1-based turn index of the player about to move.
    pub fn step_of(&self, s: &ParityState) -> usize {
        s.len as usize / 2 + 1
    }
}

impl ExtensiveGame for ParityGame {
    type State = ParityState;

    fn name(&self) -> String {
        format!("parity({})", self.n_steps)
    }

    fn initial_state(&self) -> ParityState {
        ParityState {
            bit: 0,
            history: 0,
            len: 0,
            result: None,
        }
    }

    fn player_to_move(&self, s: &ParityState) -> usize {
        s.len as usize % 2
    }

    fn legal_actions(&self, s: &ParityState) -> Vec<ActionId> {
        if s.result.is_some() {
            Vec::new()
        } else if self.step_of(s) >= self.n_steps {
            vec![GUESS0, GUESS1]
        } else {
            vec![FLIP, GUESS0, GUESS1, KEEP]
        }
    }

    fn apply(&self, s: &ParityState, a: ActionId) -> ParityState {
        let p = self.player_to_move(s);
        let mut n = *s;
        n.history |= (a as u128) << (2 * s.len as u32);
        n.len += 1;
        match a {
            FLIP => n.bit ^= 1,
            KEEP => {}
            _ => {
                let guess = (a == GUESS1) as u8;
                let guesser_wins = guess == s.bit;
                n.result = Some(if guesser_wins == (p == 0) { 1 } else { -1 });
            }
        }
        n
    }

    fn is_terminal(&self, s: &ParityState) -> bool {
        s.result.is_some()
    }

    fn outcome(&self, s: &ParityState) -> f64 {
        s.result.unwrap_or(0) as f64
    }

    fn state_key(&self, s: &ParityState) -> StateKey {
        // The bit and the result are functions of the history.
        (s.len as u128) << 120 | s.history
    }
}
