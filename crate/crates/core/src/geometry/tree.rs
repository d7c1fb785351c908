//! Explicit game graphs. States are merged by [`StateKey`], so the graph is
//! a DAG; every recursion over it is memoised per state.

use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::ToPrimitive;

use crate::error::{Error, Result};
use crate::games::{ExtensiveGame, StateKey};

pub const DEFAULT_NODE_BUDGET: usize = 10_000_000;
pub const NODE_BUDGET_ENV: &str = "SPINTOP_NODE_BUDGET";

/// Budget from the environment override, or the default.
pub fn node_budget() -> usize {
    std::env::var(NODE_BUDGET_ENV)
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_NODE_BUDGET)
}

#[derive(Clone, Debug)]
pub struct Node {
    pub key: StateKey,
    pub player: u8,
    pub terminal: bool,
    pub outcome: f64,
    /// Successors in action order.
    pub children: Vec<u32>,
    /// Set by the caller-supplied marker when the graph was built.
    pub marked: bool,
}

#[derive(Clone, Debug)]
pub struct GameGraph {
    pub nodes: Vec<Node>,
    /// Every node after all of its children.
    pub post_order: Vec<u32>,
}

const WIN: u8 = 1;
const LOSS: u8 = 2;

impl GameGraph {
    pub fn build<G: ExtensiveGame>(game: &G, budget: usize) -> Result<Self> {
        Self::build_marked(game, budget, |_, _| false)
    }

    pub fn build_marked<G: ExtensiveGame>(
        game: &G,
        budget: usize,
        mark: impl Fn(&G, &G::State) -> bool,
    ) -> Result<Self> {
        let mut index: HashMap<StateKey, u32> = HashMap::new();
        let mut nodes: Vec<Node> = Vec::new();
        let mut states: Vec<G::State> = Vec::new();
        let mut add = |s: G::State, nodes: &mut Vec<Node>, states: &mut Vec<G::State>| -> Result<u32> {
            let key = game.state_key(&s);
            if let Some(&i) = index.get(&key) {
                return Ok(i);
            }
            if nodes.len() >= budget {
                return Err(Error::BudgetExceeded { budget });
            }
            let terminal = game.is_terminal(&s);
            let i = nodes.len() as u32;
            nodes.push(Node {
                key,
                player: if terminal { 0 } else { game.player_to_move(&s) as u8 },
                terminal,
                outcome: if terminal { game.outcome(&s) } else { 0.0 },
                children: Vec::new(),
                marked: mark(game, &s),
            });
            states.push(s);
            index.insert(key, i);
            Ok(i)
        };
        add(game.initial_state(), &mut nodes, &mut states)?;
        let mut next = 0;
        while next < nodes.len() {
            if !nodes[next].terminal {
                let s = states[next].clone();
                let mut ch = Vec::new();
                for a in game.legal_actions(&s) {
                    ch.push(add(game.apply(&s, a), &mut nodes, &mut states)?);
                }
                nodes[next].children = ch;
            }
            next += 1;
        }
        drop(states);

        let mut post_order = Vec::with_capacity(nodes.len());
        let mut done = vec![false; nodes.len()];
        done[0] = true;
        let mut stack: Vec<(u32, usize)> = vec![(0, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, k) = *top;
            let ch = &nodes[v as usize].children;
            if k < ch.len() {
                top.1 += 1;
                let c = ch[k];
                if !done[c as usize] {
                    done[c as usize] = true;
                    stack.push((c, 0));
                }
            } else {
                post_order.push(v);
                stack.pop();
            }
        }
        Ok(GameGraph { nodes, post_order })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// For every node, which signs of outcome are reachable.
    fn reachable(&self) -> Vec<u8> {
        let mut r = vec![0u8; self.len()];
        for &v in &self.post_order {
            let n = &self.nodes[v as usize];
            r[v as usize] = if n.terminal {
                (if n.outcome > 0.0 { WIN } else { 0 }) | (if n.outcome < 0.0 { LOSS } else { 0 })
            } else {
                n.children.iter().fold(0, |acc, &c| acc | r[c as usize])
            };
        }
        r
    }

    /// Non-terminal nodes from which both a win and a loss are reachable.
    pub fn undetermined(&self) -> Vec<bool> {
        self.reachable()
            .iter()
            .zip(&self.nodes)
            .map(|(&r, n)| !n.terminal && r == WIN | LOSS)
            .collect()
    }
}

/// The graph restricted to states whose outcome is not yet decided.
#[derive(Clone, Debug)]
pub struct PrunedTree {
    pub graph: GameGraph,
    pub kept: Vec<bool>,
}

impl PrunedTree {
    pub fn kept_count(&self) -> usize {
        self.kept.iter().filter(|&&k| k).count()
    }

    /// True when the root itself is removed: the game is 0-bit
    /// communicative.
    pub fn root_pruned(&self) -> bool {
        !self.kept[0]
    }
}

pub fn prune_determined<G: ExtensiveGame>(game: &G, budget: usize) -> Result<PrunedTree> {
    let graph = GameGraph::build(game, budget)?;
    let kept = graph.undetermined();
    Ok(PrunedTree { graph, kept })
}

/// `log₂ x` for arbitrarily large `x > 0`.
pub fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("fits in f64").log2();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64 bits fit");
    top.log2() + shift as f64
}

pub fn log10_big(x: &BigUint) -> f64 {
    log2_big(x) * std::f64::consts::LOG10_2
}
