mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};
use spintop_core::geometry::DEFAULT_NODE_BUDGET;

/// Spinning-top geometry of two-player zero-sum games.
#[derive(Parser, Clone, Debug, Serialize, Deserialize)]
#[command(name = "spintop", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct Global {
    /// Root seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads; 0 uses every core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    pub parallelism: usize,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    pub out: PathBuf,
    /// Nash exploitability tolerance.
    #[arg(long, global = true, default_value_t = spintop_core::nash::DEFAULT_TOL)]
    pub tol: f64,
    /// Maximum number of distinct states a tree walk may visit.
    #[arg(long, global = true, env = "SPINTOP_NODE_BUDGET", default_value_t = DEFAULT_NODE_BUDGET)]
    pub node_budget: usize,
}

/// Where a payoff matrix comes from.
#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct GameArgs {
    /// Named game: rps, elo, noisy_elo, disc, gos, blotto, layered, parity
    /// (fully enumerated), or an extensive game played by sampled agents:
    /// tictactoe, misere_tictactoe, connect_four.
    #[arg(long, conflicts_with = "payoff")]
    pub game: Option<String>,
    /// Payoff CSV: a header of labels, then one row per strategy.
    #[arg(long)]
    pub payoff: Option<PathBuf>,
    /// Number of strategies for elo, noisy_elo, disc and gos.
    #[arg(long, default_value_t = 50)]
    pub n: usize,
    /// Noise level (standard deviation) for noisy_elo.
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Standard deviation of the cyclic part of gos; 0 gives a transitive game
    #[arg(long, default_value_t = 1.0)]
    pub sigma_w: f64,
    /// Standard deviation of the skill levels of gos
    #[arg(long, default_value_t = 1.0)]
    pub sigma_s: f64,
    /// Units to distribute in blotto
    #[arg(long, default_value_t = 10)]
    pub units: usize,
    /// Fields in blotto
    #[arg(long, default_value_t = 5)]
    pub fields: usize,
    /// Steps per player for the parity game.
    #[arg(long, default_value_t = 2)]
    pub steps: usize,
    /// Layer sizes for the layered game, strongest first.
    #[arg(long, value_delimiter = ',', default_value = "1,2,4,2,1")]
    pub layers: Vec<usize>,
    #[command(flatten)]
    pub agents: AgentArgs,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct AgentArgs {
    /// Agent grid preset: paper, reduced or small.
    #[arg(long, default_value = "reduced", conflicts_with = "grid")]
    pub preset: String,
    /// Agent grid file (`kind params seeds` per line).
    #[arg(long)]
    pub grid: Option<PathBuf>,
}

#[derive(Args, Clone, Debug, Serialize, Deserialize)]
pub struct TreeGameArgs {
    /// tictactoe, misere_tictactoe, connect_four or parity.
    #[arg(long)]
    pub game: String,
    /// Steps per player for the parity game.
    #[arg(long, default_value_t = 2)]
    pub steps: usize,
}

#[derive(Subcommand, Clone, Debug, Serialize, Deserialize)]
pub enum Command {
    /// Play an agent grid on an extensive game and write the empirical payoff.
    Payoff {
        /// tictactoe, misere_tictactoe, connect_four or parity.
        #[arg(long)]
        game: String,
        #[arg(long, default_value_t = 2)]
        steps: usize,
        #[command(flatten)]
        agents: AgentArgs,
    },
    /// Nash clustering, RPP, cycles and the skew-normal fit.
    Profile {
        #[command(flatten)]
        source: GameArgs,
    },
    /// Communicativeness of an extensive game.
    Comm {
        #[command(flatten)]
        game: TreeGameArgs,
    },
    /// Pure-strategy counts of an extensive game.
    Count {
        #[command(flatten)]
        game: TreeGameArgs,
    },
    /// Population-size sweep of fixed-memory training.
    Train {
        #[command(flatten)]
        source: GameArgs,
        /// Population sizes: a list (1,2,4) or an inclusive range (1..64).
        #[arg(long, default_value = "1,2,4,8")]
        sizes: String,
        /// Number of seeds per size, derived from --seed.
        #[arg(long, default_value_t = 1)]
        seeds: u64,
        /// beat_average or beat_all.
        #[arg(long, default_value = "beat_average")]
        oracle: String,
        /// oldest or random.
        #[arg(long, default_value = "oldest")]
        replacement: String,
        /// Defaults to ten times the number of strategies.
        #[arg(long)]
        step_cap: Option<usize>,
    },
    /// Write a synthetic normal-form game as CSV plus JSON provenance.
    Synth {
        #[command(flatten)]
        source: GameArgs,
    },
    /// Re-run the command recorded in a manifest.
    Rerun {
        manifest: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report("usage", &e.to_string(), 2);
            return ExitCode::from(2);
        }
    };
    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let code = commands::exit_code(&e);
            let kind = if code == 3 { "budget_or_solver" } else { "usage" };
            report(kind, &format!("{e:#}"), code);
            ExitCode::from(code)
        }
    }
}

/// One JSON object per failure on stderr.
fn report(kind: &str, message: &str, code: u8) {
    let v = serde_json::json!({ "error": kind, "message": message.trim_end(), "exit_code": code });
    eprintln!("{v}");
}
