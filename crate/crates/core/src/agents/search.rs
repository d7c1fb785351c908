use dashmap::DashMap;
use rand::Rng;

use super::spec::{AgentKind, AgentSpec};
use crate::error::{Error, Result};
use crate::games::{ActionId, ExtensiveGame, Policy, StateKey};
use crate::rng::{self, tags};

/// UCT exploration constant.
const UCT_C: f64 = std::f64::consts::SQRT_2;

/// Bit flags selecting the search variant.
const NEGATE: u8 = 1;
const ZERO: u8 = 2;

/// Evaluation context for agents on one game.
///
/// Holds memo tables of pure functions of the state (depth-limited search
/// values, MCTS decisions), so sharing one context between matches only
/// saves time; it never changes what an agent does. Safe to share across
/// threads.
pub struct AgentContext<'g, G: ExtensiveGame> {
    game: &'g G,
    /// `(state, depth, variant) ↦ [lo, hi]` bounds on player 0's value.
    values: DashMap<(StateKey, u32, u8), (f64, f64)>,
    mcts: DashMap<(StateKey, u32, u64), ActionId>,
}

impl<'g, G: ExtensiveGame> AgentContext<'g, G> {
    pub fn new(game: &'g G) -> Self {
        AgentContext {
            game,
            values: DashMap::new(),
            mcts: DashMap::new(),
        }
    }

    pub fn game(&self) -> &'g G {
        self.game
    }

    /// The action `spec` takes in `state`.
    pub fn act(&self, spec: &AgentSpec, state: &G::State) -> Result<ActionId> {
        let g = self.game;
        if g.is_terminal(state) {
            return Err(Error::TerminalState);
        }
        let key = g.state_key(state);
        let legal = g.legal_actions(state);
        let variant = match spec.kind {
            AgentKind::Random => return Ok(seeded_pick(spec.seed, key, &legal)),
            AgentKind::Mcts => return Ok(self.mcts_act(spec.param, spec.seed, state, key)),
            AgentKind::MinMax => 0,
            AgentKind::MaxMin => NEGATE,
            AgentKind::MinMaxZero => ZERO,
            AgentKind::MaxMinZero => NEGATE | ZERO,
        };
        match self.best_actions(state, &legal, spec.param, variant) {
            Some(best) => Ok(seeded_pick(spec.seed, key, &best)),
            None => Ok(seeded_pick(spec.seed, key, &legal)),
        }
    }

    /// Plays `a` against `b` once in each seat; `a`'s mean outcome.
    pub fn play_match(&self, a: &AgentSpec, b: &AgentSpec) -> f64 {
        let first = crate::games::play(self.game, &self.policy(a), &self.policy(b));
        let second = crate::games::play(self.game, &self.policy(b), &self.policy(a));
        0.5 * (first - second)
    }

    /// Adapter for [`crate::games::play`].
    pub fn policy<'a>(&'a self, spec: &'a AgentSpec) -> impl Policy<G> + 'a {
        move |_: &G, s: &G::State| {
            self.act(spec, s)
                .expect("play only queries non-terminal states")
        }
    }

    /// Actions attaining the searched value when the depth-limited search
    /// settles it; `None` when the horizon leaves it open.
    fn best_actions(&self, state: &G::State, legal: &[ActionId], depth: u32, variant: u8) -> Option<Vec<ActionId>> {
        if depth == 0 {
            return None;
        }
        let g = self.game;
        let maximise = g.player_to_move(state) == 0;
        let kids: Vec<(ActionId, (f64, f64))> = legal
            .iter()
            .map(|&a| (a, self.value(&g.apply(state, a), depth - 1, variant)))
            .collect();
        let (lo, hi) = combine(maximise, kids.iter().map(|k| k.1));
        if lo != hi {
            return None;
        }
        // A child attaining the settled value is itself settled at it.
        Some(
            kids.into_iter()
                .filter(|&(_, (l, h))| l == lo && h == hi)
                .map(|(a, _)| a)
                .collect(),
        )
    }

    /// Bounds on player 0's minimax value under the variant's payoff,
    /// looking `depth` plies ahead. Cut-off states are worth `[-1, 1]`
    /// (unknown) or exactly 0 for the zero variants.
    fn value(&self, state: &G::State, depth: u32, variant: u8) -> (f64, f64) {
        let g = self.game;
        if g.is_terminal(state) {
            let z = g.outcome(state);
            let v = if variant & NEGATE != 0 { 0.0 - z } else { z };
            return (v, v);
        }
        if depth == 0 {
            return if variant & ZERO != 0 { (0.0, 0.0) } else { (-1.0, 1.0) };
        }
        let key = (g.state_key(state), depth, variant);
        if let Some(v) = self.values.get(&key) {
            return *v;
        }
        let maximise = g.player_to_move(state) == 0;
        let v = combine(
            maximise,
            g.legal_actions(state)
                .into_iter()
                .map(|a| self.value(&g.apply(state, a), depth - 1, variant)),
        );
        self.values.insert(key, v);
        v
    }

    fn mcts_act(&self, sims: u32, seed: u64, state: &G::State, key: StateKey) -> ActionId {
        let k = (key, sims, seed);
        if let Some(a) = self.mcts.get(&k) {
            return *a;
        }
        let a = uct_search(self.game, state, sims, seed, key);
        self.mcts.insert(k, a);
        a
    }
}

fn combine(maximise: bool, kids: impl Iterator<Item = (f64, f64)>) -> (f64, f64) {
    if maximise {
        kids.fold((f64::NEG_INFINITY, f64::NEG_INFINITY), |(l, h), (a, b)| (l.max(a), h.max(b)))
    } else {
        kids.fold((f64::INFINITY, f64::INFINITY), |(l, h), (a, b)| (l.min(a), h.min(b)))
    }
}

/// Uniform choice keyed by `(seed, state)`: the same agent always picks the
/// same action in the same state.
fn seeded_pick(seed: u64, key: StateKey, options: &[ActionId]) -> ActionId {
    let h = rng::derive_seed_u128(seed, tags::AGENT, key);
    options[(h % options.len() as u64) as usize]
}

struct Node<S> {
    state: S,
    terminal: bool,
    mover: usize,
    untried: Vec<ActionId>,
    children: Vec<(ActionId, usize)>,
    visits: u32,
    /// Summed reward, in `[0, 1]` per visit, for the player who moved into
    /// this node.
    reward: f64,
}

fn uct_search<G: ExtensiveGame>(game: &G, root: &G::State, sims: u32, seed: u64, key: StateKey) -> ActionId {
    let mut rng = rng::stream(seed, &[tags::MCTS, key as u64, (key >> 64) as u64]);
    let node = |s: G::State| {
        let terminal = game.is_terminal(&s);
        Node {
            mover: if terminal { 0 } else { game.player_to_move(&s) },
            untried: if terminal { Vec::new() } else { game.legal_actions(&s) },
            terminal,
            state: s,
            children: Vec::new(),
            visits: 0,
            reward: 0.0,
        }
    };
    let mut tree = vec![node(root.clone())];
    let mut path = Vec::new();
    for _ in 0..sims.max(1) {
        path.clear();
        let mut cur = 0;
        path.push(cur);
        // Selection.
        while !tree[cur].terminal && tree[cur].untried.is_empty() {
            let ln_n = f64::from(tree[cur].visits).ln();
            let mut best = (f64::NEG_INFINITY, 0);
            for &(_, c) in &tree[cur].children {
                let n = f64::from(tree[c].visits);
                let score = tree[c].reward / n + UCT_C * (ln_n / n).sqrt();
                if score > best.0 {
                    best = (score, c);
                }
            }
            cur = best.1;
            path.push(cur);
        }
        // Expansion, in action order.
        if !tree[cur].terminal {
            let a = tree[cur].untried.remove(0);
            let s = game.apply(&tree[cur].state, a);
            tree.push(node(s));
            let child = tree.len() - 1;
            tree[cur].children.push((a, child));
            cur = child;
            path.push(cur);
        }
        // Uniform random rollout.
        let mut s = tree[cur].state.clone();
        while !game.is_terminal(&s) {
            let legal = game.legal_actions(&s);
            s = game.apply(&s, legal[rng.random_range(0..legal.len())]);
        }
        let z = game.outcome(&s);
        // Back-propagation: each node is credited from its parent's view.
        for w in 0..path.len() {
            let id = path[w];
            tree[id].visits += 1;
            if w > 0 {
                let mover = tree[path[w - 1]].mover;
                let r = if mover == 0 { z } else { -z };
                tree[id].reward += 0.5 * (1.0 + r);
            }
        }
    }
    let mut best = (0u32, None);
    for &(a, c) in &tree[0].children {
        if best.1.is_none() || tree[c].visits > best.0 {
            best = (tree[c].visits, Some(a));
        }
    }
    best.1.expect("a non-terminal root is expanded on the first simulation")
}

/// One-off convenience around [`AgentContext::act`].
pub fn act<G: ExtensiveGame>(spec: &AgentSpec, game: &G, state: &G::State) -> Result<ActionId> {
    AgentContext::new(game).act(spec, state)
}

/// One-off convenience around [`AgentContext::play_match`].
pub fn play_match<G: ExtensiveGame>(game: &G, a: &AgentSpec, b: &AgentSpec) -> f64 {
    AgentContext::new(game).play_match(a, b)
}
