use super::extensive::{ActionId, ExtensiveGame, StateKey};

const COLS: usize = 7;
const ROWS: usize = 6;
const H: usize = ROWS + 1;

/// Standard 7×6 Connect Four. Player 0 moves first; actions are column
/// indices 0..7 from left to right.
#[derive(Clone, Copy, Debug, Default)]
pub struct ConnectFour;

pub fn connect_four() -> ConnectFour {
    ConnectFour
}

/// Bitboards with one guard bit per column: bit `col * 7 + row`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct C4State {
    stones: [u64; 2],
    heights: [u8; COLS],
    moves: u8,
}

impl C4State {
    pub fn stones(&self, player: usize) -> u64 {
        self.stones[player]
    }
}

fn has_four(b: u64) -> bool {
    // vertical, horizontal, both diagonals
    [1, H, H + 1, H - 1].iter().any(|&d| {
        let m = b & (b >> d);
        m & (m >> (2 * d)) != 0
    })
}

impl ExtensiveGame for ConnectFour {
    type State = C4State;

    fn name(&self) -> String {
        "connect_four".into()
    }

    fn initial_state(&self) -> C4State {
        C4State {
            stones: [0; 2],
            heights: [0; COLS],
            moves: 0,
        }
    }

    fn player_to_move(&self, s: &C4State) -> usize {
        (s.moves % 2) as usize
    }

    fn legal_actions(&self, s: &C4State) -> Vec<ActionId> {
        if self.is_terminal(s) {
            return Vec::new();
        }
        (0..COLS as u32)
            .filter(|&c| (s.heights[c as usize] as usize) < ROWS)
            .collect()
    }

    fn apply(&self, s: &C4State, a: ActionId) -> C4State {
        let c = a as usize;
        let mut n = *s;
        let p = self.player_to_move(s);
        n.stones[p] |= 1u64 << (c * H + n.heights[c] as usize);
        n.heights[c] += 1;
        n.moves += 1;
        n
    }

    fn is_terminal(&self, s: &C4State) -> bool {
        s.moves as usize == COLS * ROWS || has_four(s.stones[0]) || has_four(s.stones[1])
    }

    fn outcome(&self, s: &C4State) -> f64 {
        if has_four(s.stones[0]) {
            1.0
        } else if has_four(s.stones[1]) {
            -1.0
        } else {
            0.0
        }
    }

    fn state_key(&self, s: &C4State) -> StateKey {
        s.stones[0] as u128 | (s.stones[1] as u128) << 64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::extensive::replay;

    #[test]
    fn first_move_has_seven_actions() {
        let g = connect_four();
        assert_eq!(g.legal_actions(&g.initial_state()).len(), 7);
    }

    #[test]
    fn vertical_four_wins_for_mover() {
        let g = connect_four();
        let s = replay(&g, &[0, 1, 0, 1, 0, 1, 0]).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(g.outcome(&s), 1.0);
        let s = replay(&g, &[6, 0, 1, 0, 1, 0, 1, 0]).unwrap();
        assert_eq!(g.outcome(&s), -1.0);
    }

    #[test]
    fn horizontal_and_diagonal_wins() {
        let g = connect_four();
        let s = replay(&g, &[0, 0, 1, 1, 2, 2, 3]).unwrap();
        assert_eq!(g.outcome(&s), 1.0);
        // X on (0,0),(1,1),(2,2),(3,3)
        let s = replay(&g, &[0, 1, 1, 2, 2, 3, 2, 3, 3, 6, 3]).unwrap();
        assert!(g.is_terminal(&s));
        assert_eq!(g.outcome(&s), 1.0);
    }

    #[test]
    fn full_board_without_line_is_draw() {
        // Column pairs filled so that colours alternate in blocks of three
        // rows; no line of four forms anywhere.
        let g = connect_four();
        let mut seq = Vec::new();
        for &(a, b) in &[(0u32, 1u32), (2, 3), (4, 5)] {
            for _ in 0..3 {
                seq.extend([a, b]);
            }
            for _ in 0..3 {
                seq.extend([b, a]);
            }
        }
        seq.extend([6; 6]);
        let s = replay(&g, &seq).unwrap();
        assert_eq!(s.moves, 42);
        assert!(g.is_terminal(&s));
        assert_eq!(g.outcome(&s), 0.0);
    }
}
