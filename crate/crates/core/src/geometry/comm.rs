//! n-bit communicativeness.
//!
//! After pruning states whose outcome is already decided, every state gets
//! a pair `φ = (φ₀, φ₁)`: the bits each player can still transmit. Leaves of
//! the pruned tree have `φ = (0, 0)`. At a state where `p` moves,
//! `φ_p = max_A { log₂|A| + min_{s′∈A} min_q φ_q(s′) }` over subsets `A` of
//! the surviving children, and the opponent keeps the smallest of its values
//! over the chosen subset. The game is `min_q φ_q(root)`-bit communicative.
//!
//! Every `φ` is `log₂` of a positive integer, so the recursion runs on
//! those integers and `⌊2ⁿ⌋` is exact.

use num_bigint::BigUint;
use num_traits::One;
use serde::{Serialize, Serializer};

use super::tree::{log2_big, GameGraph};
use crate::error::Result;
use crate::games::ExtensiveGame;

fn as_string<S: Serializer>(x: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CommResult {
    pub n_bits: f64,
    pub per_player: [f64; 2],
    /// `⌊2ⁿ⌋`, exactly.
    #[serde(serialize_with = "as_string")]
    pub floor_pow2: BigUint,
    pub pruned_state_count: usize,
    pub root_pruned: bool,
}

/// Maximises `g0(|A|) + min_{a∈A} g1[a]` over nonempty subsets `A` of the
/// indices of `g1`. The optimum is always a prefix of the indices sorted by
/// decreasing `g1`; ties prefer the smaller subset.
pub fn subset_max_solver(g0: impl Fn(usize) -> f64, g1: &[f64]) -> (Vec<usize>, f64) {
    assert!(!g1.is_empty(), "subset_max_solver needs a nonempty set");
    let mut order: Vec<usize> = (0..g1.len()).collect();
    order.sort_by(|&a, &b| g1[b].total_cmp(&g1[a]));
    let mut best = (1, f64::NEG_INFINITY);
    for i in 1..=order.len() {
        let v = g0(i) + g1[order[i - 1]];
        if v > best.1 {
            best = (i, v);
        }
    }
    order.truncate(best.0);
    (order, best.1)
}

/// `φ` values as integers `2^φ`.
type Phi = [BigUint; 2];

fn aggregate(p: usize, children: &[&Phi]) -> Phi {
    let mut pairs: Vec<(BigUint, BigUint)> = children
        .iter()
        .map(|c| (c[0].clone().min(c[1].clone()), c[1 - p].clone()))
        .collect();
    // Stable: equal values keep action order.
    pairs.sort_by(|a, b| b.0.cmp(&a.0));
    let mut best: Phi = [BigUint::one(), BigUint::one()];
    let mut other_min: Option<BigUint> = None;
    for (i, (m, o)) in pairs.iter().enumerate() {
        other_min = Some(match other_min {
            Some(x) => x.min(o.clone()),
            None => o.clone(),
        });
        let own = m * BigUint::from(i + 1);
        if own > best[p] {
            best[p] = own;
            best[1 - p] = other_min.clone().expect("set above");
        }
    }
    best
}

fn evaluate(graph: &GameGraph, kept: &[bool]) -> CommResult {
    let n = graph.len();
    let mut phi: Vec<Option<Phi>> = vec![None; n];
    for &v in &graph.post_order {
        let v = v as usize;
        if !kept[v] {
            continue;
        }
        let node = &graph.nodes[v];
        let kids: Vec<&Phi> = if node.marked {
            Vec::new()
        } else {
            node.children
                .iter()
                .filter(|&&c| kept[c as usize])
                .map(|&c| phi[c as usize].as_ref().expect("post order"))
                .collect()
        };
        phi[v] = Some(if kids.is_empty() {
            [BigUint::one(), BigUint::one()]
        } else {
            aggregate(node.player as usize, &kids)
        });
    }
    let pruned_state_count = kept.iter().filter(|&&k| k).count();
    match phi[0].take() {
        Some(root) => {
            let floor = root[0].clone().min(root[1].clone());
            CommResult {
                n_bits: log2_big(&floor),
                per_player: [log2_big(&root[0]), log2_big(&root[1])],
                floor_pow2: floor,
                pruned_state_count,
                root_pruned: false,
            }
        }
        None => CommResult {
            n_bits: 0.0,
            per_player: [0.0, 0.0],
            floor_pow2: BigUint::one(),
            pruned_state_count,
            root_pruned: true,
        },
    }
}

pub fn communicativeness<G: ExtensiveGame>(game: &G, budget: usize) -> Result<CommResult> {
    restricted_communicativeness(game, budget, |_, _| false)
}

/// Same recursion, with states flagged by `deterministic` treated as
/// leaves (`φ = 0`): from there on the policy class transmits nothing.
pub fn restricted_communicativeness<G: ExtensiveGame>(
    game: &G,
    budget: usize,
    deterministic: impl Fn(&G, &G::State) -> bool,
) -> Result<CommResult> {
    let graph = GameGraph::build_marked(game, budget, deterministic)?;
    let kept = graph.undetermined();
    Ok(evaluate(&graph, &kept))
}

/// `Σ_{i=1}^{n} log₂ i`, i.e. `log₂ n!`.
pub fn log2_factorial(n: u64) -> f64 {
    (1..=n).map(|i| (i as f64).log2()).sum()
}
