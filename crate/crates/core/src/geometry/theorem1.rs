//! Realising an arbitrary ±1 tournament in the parity game.
//!
//! Strategy `i` spends its first `n − 1` turns sending the bits of `i`
//! (flip = 1, keep = 0). Player 0 must guess on its `n`-th turn, at which
//! point it has seen all `n − 1` bits of the opponent's identity, and it
//! guesses right exactly when the target says it should win.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::parity::{ParityGame, ParityState, FLIP, GUESS0, GUESS1, KEEP};
use crate::games::{play, ActionId, ExtensiveGame, Policy};
use crate::payoff::Matrix;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdStrategy {
    pub id: usize,
    /// Whether this strategy should beat each opponent id.
    pub beats: Vec<bool>,
}

impl IdStrategy {
    fn bit(&self, step: usize) -> bool {
        self.id >> step & 1 == 1
    }
}

impl Policy<ParityGame> for IdStrategy {
    fn act(&self, game: &ParityGame, s: &ParityState) -> ActionId {
        let step = game.step_of(s);
        if step < game.n_steps() {
            return if self.bit(step - 1) { FLIP } else { KEEP };
        }
        let me = game.player_to_move(s);
        let opp_id = (0..game.n_steps() - 1)
            .map(|t| {
                let ply = 2 * t + (1 - me);
                let action = (s.history >> (2 * ply)) & 3;
                ((action as ActionId == FLIP) as usize) << t
            })
            .sum::<usize>();
        let win = self.beats.get(opp_id).copied().unwrap_or(true);
        let right = if s.bit == 0 { GUESS0 } else { GUESS1 };
        let wrong = if s.bit == 0 { GUESS1 } else { GUESS0 };
        if win {
            right
        } else {
            wrong
        }
    }
}

/// One strategy per row of `target`, an antisymmetric matrix with ±1 off
/// the diagonal and at most `2^(n−1)` rows for an `n`-step parity game.
pub fn theorem1_construct(game: &ParityGame, target: &Matrix) -> Result<Vec<IdStrategy>> {
    let m = target.rows();
    if !target.is_square() {
        return Err(Error::NotSquare {
            rows: m,
            cols: target.cols(),
        });
    }
    let capacity = 1usize << (game.n_steps() - 1).min(usize::BITS as usize - 1);
    if m > capacity {
        return Err(Error::invalid(format!(
            "{m} strategies exceed the {capacity} identities of {}",
            game.name()
        )));
    }
    for i in 0..m {
        for j in 0..m {
            let v = target.get(i, j);
            let ok = if i == j { v == 0.0 } else { v.abs() == 1.0 && v == -target.get(j, i) };
            if !ok {
                return Err(Error::invalid(format!("target entry ({i},{j}) = {v}")));
            }
        }
    }
    Ok((0..m)
        .map(|i| IdStrategy {
            id: i,
            beats: (0..m).map(|j| target.get(i, j) > 0.0).collect(),
        })
        .collect())
}

/// Symmetrised match results between all constructed strategies.
pub fn simulate(game: &ParityGame, strategies: &[IdStrategy]) -> Matrix {
    let n = strategies.len();
    Matrix::from_fn(n, n, |i, j| {
        let (a, b) = (&strategies[i], &strategies[j]);
        0.5 * (play(game, a, b) - play(game, b, a))
    })
}
