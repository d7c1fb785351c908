use super::extensive::{ActionId, ExtensiveGame, StateKey};

const LINES: [[usize; 3]; 8] = [
    [0, 1, 2],
    [3, 4, 5],
    [6, 7, 8],
    [0, 3, 6],
    [1, 4, 7],
    [2, 5, 8],
    [0, 4, 8],
    [2, 4, 6],
];

/// Standard 3×3 Tic-Tac-Toe. Player 0 plays X and moves first. Actions are
/// cell indices 0..9 in row-major order.
#[derive(Clone, Copy, Debug, Default)]
pub struct TicTacToe;

pub fn tictactoe() -> TicTacToe {
    TicTacToe
}

/// Cells hold 0 (empty), 1 (X, player 0) or 2 (O, player 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Board(pub [u8; 9]);

impl Board {
    pub fn winner(&self) -> Option<u8> {
        LINES.iter().find_map(|l| {
            let c = self.0[l[0]];
            (c != 0 && c == self.0[l[1]] && c == self.0[l[2]]).then_some(c)
        })
    }

    fn filled(&self) -> usize {
        self.0.iter().filter(|&&c| c != 0).count()
    }
}

impl ExtensiveGame for TicTacToe {
    type State = Board;

    fn name(&self) -> String {
        "tictactoe".into()
    }

    fn initial_state(&self) -> Board {
        Board([0; 9])
    }

    fn player_to_move(&self, s: &Board) -> usize {
        s.filled() % 2
    }

    fn legal_actions(&self, s: &Board) -> Vec<ActionId> {
        if self.is_terminal(s) {
            return Vec::new();
        }
        (0..9u32).filter(|&i| s.0[i as usize] == 0).collect()
    }

    fn apply(&self, s: &Board, a: ActionId) -> Board {
        let mut b = *s;
        debug_assert_eq!(b.0[a as usize], 0);
        b.0[a as usize] = self.player_to_move(s) as u8 + 1;
        b
    }

    fn is_terminal(&self, s: &Board) -> bool {
        s.winner().is_some() || s.filled() == 9
    }

    fn outcome(&self, s: &Board) -> f64 {
        match s.winner() {
            Some(1) => 1.0,
            Some(_) => -1.0,
            None => 0.0,
        }
    }

    fn state_key(&self, s: &Board) -> StateKey {
        s.0.iter().fold(0u128, |k, &c| k * 3 + c as u128)
    }
}
