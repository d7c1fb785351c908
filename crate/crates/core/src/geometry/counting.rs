//! Pure-strategy counting and explicit enumeration.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::tree::{log10_big, GameGraph};
use crate::error::{Error, Result};
use crate::games::{play, ActionId, ExtensiveGame, NormalFormGame, Provenance, StateKey};
use crate::payoff::Matrix;

fn as_string<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StrategyCount {
    #[serde(serialize_with = "as_string")]
    pub z_player0: BigUint,
    #[serde(serialize_with = "as_string")]
    pub z_player1: BigUint,
    #[serde(serialize_with = "as_string")]
    pub product: BigUint,
}

impl StrategyCount {
    pub fn log10(&self) -> [f64; 3] {
        [log10_big(&self.z_player0), log10_big(&self.z_player1), log10_big(&self.product)]
    }
}

/// Behaviourally distinct pure strategies per player: a player's own
/// decision sums over its choices, an opponent decision multiplies the
/// counts of all its branches, a terminal contributes 1.
pub fn count_pure_strategies<G: ExtensiveGame>(game: &G, budget: usize) -> Result<StrategyCount> {
    let graph = GameGraph::build(game, budget)?;
    let mut z = [vec![BigUint::one(); graph.len()], vec![BigUint::one(); graph.len()]];
    for &v in &graph.post_order {
        let node = &graph.nodes[v as usize];
        if node.terminal {
            continue;
        }
        for (j, zj) in z.iter_mut().enumerate() {
            let kids = node.children.iter().map(|&c| &zj[c as usize]);
            zj[v as usize] = if node.player as usize == j {
                kids.sum()
            } else {
                kids.product()
            };
        }
    }
    let [z0, z1] = z;
    let (a, b) = (z0[0].clone(), z1[0].clone());
    Ok(StrategyCount {
        product: &a * &b,
        z_player0: a,
        z_player1: b,
    })
}

/// A pure strategy given by its choice at every own decision state it can
/// reach.
pub type PureStrategy = BTreeMap<StateKey, ActionId>;

/// Every behaviourally distinct pure strategy of `player`, in
/// lexicographic order of actions along the tree. Fails when more than
/// `limit` strategies exist.
///
/// Strategies are keyed by state, so the enumeration matches
/// [`count_pure_strategies`] on games without transpositions.
pub fn enumerate_pure_strategies<G: ExtensiveGame>(game: &G, player: usize, limit: usize) -> Result<Vec<PureStrategy>> {
    fn rec<G: ExtensiveGame>(
        game: &G,
        s: &G::State,
        player: usize,
        limit: usize,
    ) -> Result<Vec<Vec<(StateKey, ActionId)>>> {
        if game.is_terminal(s) {
            return Ok(vec![Vec::new()]);
        }
        let actions = game.legal_actions(s);
        if game.player_to_move(s) == player {
            let key = game.state_key(s);
            let mut out = Vec::new();
            for a in actions {
                for mut sub in rec(game, &game.apply(s, a), player, limit)? {
                    sub.push((key, a));
                    out.push(sub);
                    if out.len() > limit {
                        return Err(Error::BudgetExceeded { budget: limit });
                    }
                }
            }
            Ok(out)
        } else {
            let mut acc: Vec<Vec<(StateKey, ActionId)>> = vec![Vec::new()];
            for a in actions {
                let sub = rec(game, &game.apply(s, a), player, limit)?;
                if acc.len().saturating_mul(sub.len()) > limit {
                    return Err(Error::BudgetExceeded { budget: limit });
                }
                acc = acc
                    .iter()
                    .flat_map(|x| {
                        sub.iter().map(move |y| {
                            let mut z = x.clone();
                            z.extend_from_slice(y);
                            z
                        })
                    })
                    .collect();
            }
            Ok(acc)
        }
    }
    Ok(rec(game, &game.initial_state(), player, limit)?
        .into_iter()
        .map(|v| v.into_iter().collect())
        .collect())
}

struct Lookup<'a>(&'a PureStrategy);

impl<G: ExtensiveGame> crate::games::Policy<G> for Lookup<'_> {
    fn act(&self, game: &G, state: &G::State) -> ActionId {
        self.0[&game.state_key(state)]
    }
}

/// The symmetric game over all pure strategies: one strategy is a pair
/// (plan as player 0, plan as player 1) and a match averages both
/// seatings. Role plans with identical outcomes against every opponent
/// plan are merged first, so every strategy differs in payoff.
pub fn enumerated_game<G: ExtensiveGame>(game: &G, limit: usize) -> Result<NormalFormGame> {
    let s0 = enumerate_pure_strategies(game, 0, limit)?;
    let s1 = enumerate_pure_strategies(game, 1, limit)?;
    let outcome: Vec<Vec<f64>> = s0
        .iter()
        .map(|a| s1.iter().map(|b| play(game, &Lookup(a), &Lookup(b))).collect())
        .collect();
    let distinct_rows = first_distinct((0..s0.len()).map(|i| outcome[i].clone()));
    let distinct_cols = first_distinct((0..s1.len()).map(|j| outcome.iter().map(|r| r[j]).collect()));
    let pairs: Vec<(usize, usize)> = distinct_rows
        .iter()
        .flat_map(|&a| distinct_cols.iter().map(move |&b| (a, b)))
        .collect();
    let n = pairs.len();
    if n > limit {
        return Err(Error::BudgetExceeded { budget: limit });
    }
    let raw = Matrix::from_fn(n, n, |x, y| {
        let ((a0, a1), (b0, b1)) = (pairs[x], pairs[y]);
        0.5 * (outcome[a0][b1] - outcome[b0][a1])
    });
    let labels = pairs.iter().map(|(a, b)| format!("p0:{a}/p1:{b}")).collect();
    NormalFormGame::new(
        raw,
        labels,
        Provenance {
            generator: "enumerated".into(),
            params: serde_json::json!({
                "game": game.name(),
                "plans_player0": s0.len(),
                "plans_player1": s1.len(),
                "distinct_player0": distinct_rows.len(),
                "distinct_player1": distinct_cols.len(),
            }),
            seed: None,
        },
    )
}

fn first_distinct(rows: impl Iterator<Item = Vec<f64>>) -> Vec<usize> {
    let mut seen = std::collections::HashSet::new();
    rows.enumerate()
        .filter(|(_, r)| seen.insert(r.iter().map(|v| (v + 0.0).to_bits()).collect::<Vec<u64>>()))
        .map(|(i, _)| i)
        .collect()
}
