//! Small hand-built trees used for tests and as reference games.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::extensive::{ActionId, ExtensiveGame, StateKey};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum TreeNode {
    Terminal(f64),
    Decision { player: usize, children: Vec<usize> },
}

/// A game given as an explicit tree; node 0 is the root and the state is
/// the node index. Action `i` leads to the `i`-th child.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeGame {
    name: String,
    nodes: Vec<TreeNode>,
}

impl TreeGame {
    pub fn new(name: impl Into<String>, nodes: Vec<TreeNode>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("tree has no nodes"));
        }
        let mut parent = vec![None; nodes.len()];
        for (i, n) in nodes.iter().enumerate() {
            match n {
                TreeNode::Terminal(v) if !(-1.0..=1.0).contains(v) => {
                    return Err(Error::invalid(format!("outcome {v} at node {i}")));
                }
                TreeNode::Decision { player, children } => {
                    if *player > 1 || children.is_empty() {
                        return Err(Error::invalid(format!("malformed decision node {i}")));
                    }
                    for &c in children {
                        if c == 0 || c >= nodes.len() || parent[c].is_some() {
                            return Err(Error::invalid(format!("bad child {c} of node {i}")));
                        }
                        parent[c] = Some(i);
                    }
                }
                _ => {}
            }
        }
        if parent.iter().skip(1).any(Option::is_none) {
            return Err(Error::invalid("unreachable node"));
        }
        Ok(TreeGame {
            name: name.into(),
            nodes,
        })
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }
}

impl ExtensiveGame for TreeGame {
    type State = usize;

    fn name(&self) -> String {
        self.name.clone()
    }
    fn initial_state(&self) -> usize {
        0
    }
    fn player_to_move(&self, &s: &usize) -> usize {
        match &self.nodes[s] {
            TreeNode::Decision { player, .. } => *player,
            TreeNode::Terminal(_) => 0,
        }
    }
    fn legal_actions(&self, &s: &usize) -> Vec<ActionId> {
        match &self.nodes[s] {
            TreeNode::Decision { children, .. } => (0..children.len() as ActionId).collect(),
            TreeNode::Terminal(_) => Vec::new(),
        }
    }
    fn apply(&self, &s: &usize, a: ActionId) -> usize {
        match &self.nodes[s] {
            TreeNode::Decision { children, .. } => children[a as usize],
            TreeNode::Terminal(_) => panic!("apply on terminal node {s}"),
        }
    }
    fn is_terminal(&self, &s: &usize) -> bool {
        matches!(self.nodes[s], TreeNode::Terminal(_))
    }
    fn outcome(&self, &s: &usize) -> f64 {
        match self.nodes[s] {
            TreeNode::Terminal(v) => v,
            TreeNode::Decision { .. } => 0.0,
        }
    }
    fn state_key(&self, &s: &usize) -> StateKey {
        s as StateKey
    }
}

/// Builder that appends nodes depth-first.
struct Builder(Vec<TreeNode>);

impl Builder {
    fn leaf(&mut self, v: f64) -> usize {
        self.0.push(TreeNode::Terminal(v));
        self.0.len() - 1
    }
    fn decision(&mut self, player: usize) -> usize {
        self.0.push(TreeNode::Decision {
            player,
            children: Vec::new(),
        });
        self.0.len() - 1
    }
    fn attach(&mut self, node: usize, child: usize) {
        if let TreeNode::Decision { children, .. } = &mut self.0[node] {
            children.push(child);
        }
    }
}

/// One move by player 0 whose action directly selects an outcome. With
/// outcomes `[1, 0, -1]` this is rock-paper-scissors unrolled into a single
/// step: no information can be transmitted.
pub fn one_step_game(outcomes: &[f64]) -> Result<TreeGame> {
    let mut b = Builder(Vec::new());
    let root = b.decision(0);
    for &v in outcomes {
        let l = b.leaf(v);
        b.attach(root, l);
    }
    TreeGame::new(format!("one_step({})", outcomes.len()), b.0)
}

/// Three alternating binary moves (players 0, 1, 0); player 0 wins iff the
/// XOR of the three actions is 0. The second move is the one bit that
/// survives pruning, so the game is 1-bit communicative.
pub fn three_step_xor_game() -> TreeGame {
    let mut b = Builder(Vec::new());
    let root = b.decision(0);
    for a1 in 0..2u8 {
        let n1 = b.decision(1);
        b.attach(root, n1);
        for a2 in 0..2u8 {
            let n2 = b.decision(0);
            b.attach(n1, n2);
            for a3 in 0..2u8 {
                let v = if a1 ^ a2 ^ a3 == 0 { 1.0 } else { -1.0 };
                let l = b.leaf(v);
                b.attach(n2, l);
            }
        }
    }
    TreeGame::new("three_step_xor", b.0).expect("well-formed fixture")
}

/// Random tree with at most `max_nodes` nodes and branching in `1..=max_branch`.
/// Movers are random, so consecutive moves by the same player occur.
pub fn random_tree<R: Rng>(rng: &mut R, max_nodes: usize, max_branch: usize, max_depth: usize) -> TreeGame {
    let mut b = Builder(Vec::new());
    let root = b.decision(rng.random_range(0..2));
    let mut frontier = vec![(root, 0usize)];
    // Every decision node keeps one child paid for in advance.
    let mut budget = max_nodes.max(2) - 2;
    while let Some((node, depth)) = frontier.pop() {
        let k = rng.random_range(1..=max_branch).min(budget + 1);
        budget -= k - 1;
        for _ in 0..k {
            let deeper = depth + 1 < max_depth && budget >= 1 && rng.random_bool(0.55);
            let c = if deeper {
                budget -= 1;
                b.decision(rng.random_range(0..2))
            } else {
                b.leaf([-1.0, 0.0, 1.0][rng.random_range(0..3)])
            };
            b.attach(node, c);
            if deeper {
                frontier.push((c, depth + 1));
            }
        }
    }
    TreeGame::new("random_tree", b.0).expect("well-formed random tree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::extensive::replay;
    use crate::rng::stream;

    #[test]
    fn xor_game_outcomes() {
        let g = three_step_xor_game();
        assert_eq!(g.outcome(&replay(&g, &[0, 0, 0]).unwrap()), 1.0);
        assert_eq!(g.outcome(&replay(&g, &[1, 0, 0]).unwrap()), -1.0);
        assert_eq!(g.outcome(&replay(&g, &[1, 1, 0]).unwrap()), 1.0);
        assert_eq!(g.player_to_move(&replay(&g, &[1]).unwrap()), 1);
    }

    #[test]
    fn rejects_malformed_trees() {
        assert!(TreeGame::new("x", vec![]).is_err());
        let bad = vec![TreeNode::Decision { player: 0, children: vec![1, 1] }, TreeNode::Terminal(0.0)];
        assert!(TreeGame::new("x", bad).is_err());
        assert!(TreeGame::new("x", vec![TreeNode::Terminal(2.0)]).is_err());
    }

    #[test]
    fn random_trees_respect_node_bound() {
        let mut rng = stream(3, &[]);
        for _ in 0..50 {
            let g = random_tree(&mut rng, 60, 3, 6);
            assert!(g.nodes().len() <= 60, "{}", g.nodes().len());
        }
    }
}
