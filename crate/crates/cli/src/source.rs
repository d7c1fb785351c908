//! Resolving game names and payoff files.

use anyhow::{anyhow, bail, Context, Result};
use spintop_core::agents::{
    build_empirical_payoff_with_progress, load_external_payoff, sample_agent_grid, EmpiricalGame, GridConfig,
};
use spintop_core::games::parity::MAX_STEPS;
use spintop_core::games::{
    blotto, connect_four, disc_game, elo_game, layered_game, misere, noisy_elo_game, parity_game,
    random_game_of_skill, rps, tictactoe, ConnectFour, LayeredSpec, Misere, NormalFormGame, ParityGame,
    RandomGoSSpec, TicTacToe,
};
use spintop_core::geometry::enumerated_game;
use spintop_core::PayoffMatrix;

use crate::{AgentArgs, GameArgs};

/// Strategy limit per role when enumerating a game tree.
pub const ENUMERATION_LIMIT: usize = 100_000;

pub enum Tree {
    TicTacToe(TicTacToe),
    Misere(Misere<TicTacToe>),
    ConnectFour(ConnectFour),
    Parity(ParityGame),
}

/// Runs `$body` with `$g` bound to the concrete game.
macro_rules! with_tree {
    ($tree:expr, $g:ident => $body:expr) => {
        match $tree {
            $crate::source::Tree::TicTacToe($g) => $body,
            $crate::source::Tree::Misere($g) => $body,
            $crate::source::Tree::ConnectFour($g) => $body,
            $crate::source::Tree::Parity($g) => $body,
        }
    };
}
pub(crate) use with_tree;

pub fn tree(name: &str, steps: usize) -> Result<Tree> {
    Ok(match name {
        "tictactoe" => Tree::TicTacToe(tictactoe()),
        "misere_tictactoe" => Tree::Misere(misere(tictactoe())),
        "connect_four" => Tree::ConnectFour(connect_four()),
        "parity" => {
            if !(1..=MAX_STEPS).contains(&steps) {
                bail!("--steps must be in 1..={MAX_STEPS}");
            }
            Tree::Parity(parity_game(steps))
        }
        _ => bail!("unknown extensive game {name:?}"),
    })
}

pub fn grid(args: &AgentArgs) -> Result<GridConfig> {
    match &args.grid {
        Some(path) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            Ok(GridConfig::parse(&text)?)
        }
        None => GridConfig::preset(&args.preset).ok_or_else(|| anyhow!("unknown grid preset {:?}", args.preset)),
    }
}

pub fn empirical(tree: &Tree, agents: &AgentArgs, parallelism: usize) -> Result<EmpiricalGame> {
    let specs = sample_agent_grid(&grid(agents)?)?;
    let progress = |done: usize, total: usize| eprintln!("matches {done}/{total}");
    Ok(with_tree!(tree, g => build_empirical_payoff_with_progress(g, &specs, parallelism, &progress))?)
}

/// A synthetic game by name.
pub fn synthetic(args: &GameArgs, name: &str, seed: u64) -> Result<NormalFormGame> {
    Ok(match name {
        "rps" => rps(),
        "elo" => elo_game(args.n, seed)?,
        "noisy_elo" => noisy_elo_game(args.n, args.epsilon, seed)?,
        "disc" => disc_game(args.n, seed)?,
        "gos" => random_game_of_skill(&RandomGoSSpec::new(args.n, args.sigma_w, args.sigma_s, seed))?.game,
        "blotto" => blotto(args.units, args.fields)?,
        "layered" => layered_game(&LayeredSpec::unimodal(args.layers.clone())?, seed)?.game,
        "parity" => {
            let Tree::Parity(g) = tree("parity", args.steps)? else { unreachable!() };
            enumerated_game(&g, ENUMERATION_LIMIT)?
        }
        _ => bail!("unknown synthetic game {name:?}"),
    })
}

/// A payoff matrix from any source.
pub struct Loaded {
    pub payoff: PayoffMatrix,
    pub labels: Vec<String>,
    pub description: serde_json::Value,
}

pub fn load(args: &GameArgs, seed: u64, parallelism: usize) -> Result<Loaded> {
    if let Some(path) = &args.payoff {
        let e = load_external_payoff(path).with_context(|| format!("loading {}", path.display()))?;
        return Ok(Loaded {
            description: serde_json::json!({ "payoff": path, "dedup_map": e.dedup_map }),
            payoff: e.payoff,
            labels: e.labels,
        });
    }
    let Some(name) = args.game.as_deref() else {
        bail!("give --game or --payoff");
    };
    if matches!(name, "tictactoe" | "misere_tictactoe" | "connect_four") {
        let e = empirical(&tree(name, args.steps)?, &args.agents, parallelism)?;
        return Ok(Loaded {
            description: serde_json::json!({ "game": name, "agents": e.agents, "dedup_map": e.dedup_map }),
            payoff: e.payoff,
            labels: e.labels,
        });
    }
    let g = synthetic(args, name, seed)?;
    Ok(Loaded {
        payoff: g.standardized(),
        labels: g.labels.clone(),
        description: serde_json::to_value(&g.provenance)?,
    })
}
