use std::fs;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Serialize;
use spintop_core::games::io::{save_json, save_payoff_csv};
use spintop_core::geometry::{communicativeness, count_pure_strategies, game_profile, log2_big};
use spintop_core::nash::SolverOptions;
use spintop_core::rng::derive_seed;
use spintop_core::training::{
    convergence_fractions, population_sweep, write_sweep_csv, OracleKind, Replacement, SweepRow, TrainingGame,
};
use spintop_core::Error;

use crate::source::{self, with_tree};
use crate::{Cli, Command};

#[derive(Serialize, serde::Deserialize)]
struct Manifest {
    tool: String,
    version: String,
    cli: Cli,
}

/// 3 for budget and solver failures, 2 for everything else.
pub fn exit_code(e: &anyhow::Error) -> u8 {
    match e.downcast_ref::<Error>() {
        Some(err) if err.is_budget_or_solver() => 3,
        _ => 2,
    }
}

pub fn run(cli: Cli) -> Result<()> {
    if let Command::Rerun { manifest } = &cli.command {
        let text = fs::read_to_string(manifest).with_context(|| format!("reading {}", manifest.display()))?;
        let m: Manifest = serde_json::from_str(&text).context("parsing manifest")?;
        if matches!(m.cli.command, Command::Rerun { .. }) {
            bail!("a manifest cannot record a rerun");
        }
        return run(m.cli);
    }
    let out = cli.global.out.clone();
    fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
    save_json(
        &out.join("manifest.json"),
        &Manifest {
            tool: "spintop".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            cli: cli.clone(),
        },
    )?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cli.global.parallelism)
        .build()
        .context("building thread pool")?;
    pool.install(|| dispatch(&cli, &out))
}

fn dispatch(cli: &Cli, out: &Path) -> Result<()> {
    let g = &cli.global;
    let opts = SolverOptions {
        tol: g.tol,
        ..SolverOptions::default()
    };
    match &cli.command {
        Command::Payoff { game, steps, agents } => {
            let tree = source::tree(game, *steps)?;
            let e = source::empirical(&tree, agents, g.parallelism)?;
            e.save(out, "payoff")?;
            println!("{} agents, {} distinct strategies", e.agents.len(), e.len());
        }
        Command::Profile { source: src } => {
            let loaded = source::load(src, g.seed, g.parallelism)?;
            let profile = match game_profile(&loaded.payoff, &opts) {
                Ok(p) => p,
                Err(Error::Clustering { partial, source }) => {
                    save_json(
                        &out.join("profile.partial.json"),
                        &serde_json::json!({ "partial": true, "error": source.to_string(), "clustering": partial }),
                    )?;
                    return Err(Error::Clustering { partial, source }.into());
                }
                Err(e) => return Err(e.into()),
            };
            save_json(
                &out.join("profile.json"),
                &serde_json::json!({ "source": loaded.description, "labels": loaded.labels, "profile": profile }),
            )?;
            let mut w = csv::Writer::from_path(out.join("points.csv"))?;
            w.write_record(["mean_rpp", "cluster_size"])?;
            for (x, y) in profile.points() {
                w.write_record([format!("{x:?}"), y.to_string()])?;
            }
            w.flush()?;
            if let Some(fit) = &profile.fit {
                let (lo, hi) = range(&profile.mean_rpp);
                let mut w = csv::Writer::from_path(out.join("fit_curve.csv"))?;
                w.write_record(["x", "fitted_size"])?;
                for k in 0..=200 {
                    let x = lo + (hi - lo) * k as f64 / 200.0;
                    w.write_record([format!("{x:?}"), format!("{:?}", fit.eval(x))])?;
                }
                w.flush()?;
            }
            println!(
                "{} strategies, {} clusters, sizes {:?}, {} three-cycles",
                loaded.payoff.len(),
                profile.cluster_sizes.len(),
                profile.cluster_sizes,
                profile.cycles.total
            );
            if let Some(f) = profile.fit {
                println!("fit: mu {:.4} sigma {:.4} alpha {:.4} a {:.4} b {:.4}", f.mu, f.sigma, f.alpha, f.a, f.b);
            }
        }
        Command::Comm { game } => {
            let tree = source::tree(&game.game, game.steps)?;
            let r = with_tree!(&tree, t => communicativeness(t, g.node_budget))?;
            save_json(&out.join("comm.json"), &r)?;
            println!(
                "n = {:.5} bits (players {:.5}, {:.5}), floor(2^n) = {}, {} states kept",
                r.n_bits, r.per_player[0], r.per_player[1], r.floor_pow2, r.pruned_state_count
            );
        }
        Command::Count { game } => {
            let tree = source::tree(&game.game, game.steps)?;
            let c = with_tree!(&tree, t => count_pure_strategies(t, g.node_budget))?;
            let [l0, l1, lp] = c.log10();
            // Payoff-distinct strategies of the symmetrised game, when small.
            let distinct = if log2_big(&c.product) <= 40.0 {
                let nf = with_tree!(&tree, t => spintop_core::geometry::enumerated_game(t, source::ENUMERATION_LIMIT));
                nf.ok().map(|nf| nf.len())
            } else {
                None
            };
            save_json(
                &out.join("count.json"),
                &serde_json::json!({
                    "counts": c,
                    "log10": { "player0": l0, "player1": l1, "product": lp },
                    "distinct_symmetric_strategies": distinct,
                }),
            )?;
            println!("player 0: {} (10^{l0:.3})", c.z_player0);
            println!("player 1: {} (10^{l1:.3})", c.z_player1);
            println!("product: {} (10^{lp:.3})", c.product);
            if let Some(d) = distinct {
                println!("distinct strategies of the symmetric game: {d}");
            }
        }
        Command::Train {
            source: src,
            sizes,
            seeds,
            oracle,
            replacement,
            step_cap,
        } => {
            let sizes = parse_sizes(sizes)?;
            let oracle = match oracle.as_str() {
                "beat_average" => OracleKind::BeatAverage,
                "beat_all" => OracleKind::BeatAll,
                o => bail!("unknown oracle {o:?}"),
            };
            let replacement = match replacement.as_str() {
                "oldest" => Replacement::Oldest,
                "random" => Replacement::Random,
                r => bail!("unknown replacement {r:?}"),
            };
            if *seeds == 0 {
                bail!("--seeds must be positive");
            }
            let loaded = source::load(src, g.seed, g.parallelism)?;
            let game = TrainingGame::new(loaded.payoff, &opts)?;
            let seed_list: Vec<u64> = (0..*seeds).map(|i| derive_seed(g.seed, &[i])).collect();
            let runs = population_sweep(&game, &sizes, oracle, replacement, *step_cap, &seed_list)?;
            let rows: Vec<SweepRow> = runs.iter().map(|r| r.0.clone()).collect();
            write_sweep_csv(fs::File::create(out.join("sweep.csv"))?, &rows)?;
            let trajectories: Vec<_> = runs.iter().map(|(row, t)| serde_json::json!({ "size": row.size, "seed": row.seed, "trajectory": t })).collect();
            save_json(&out.join("trajectories.json"), &trajectories)?;
            println!("size,convergence_fraction");
            for (s, f) in convergence_fractions(&rows) {
                println!("{s},{f}");
            }
        }
        Command::Synth { source: src } => {
            let Some(name) = src.game.as_deref() else {
                bail!("synth needs --game");
            };
            let game = source::synthetic(src, name, g.seed)?;
            save_payoff_csv(&out.join("game.csv"), &game.labels, &game.raw)?;
            save_json(&out.join("game.json"), &game.provenance)?;
            println!("{} strategies", game.len());
        }
        Command::Rerun { .. } => unreachable!("handled in run"),
    }
    Ok(())
}

fn range(v: &[f64]) -> (f64, f64) {
    v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &x| (a.min(x), b.max(x)))
}

/// `1,2,4` or `1..64`.
fn parse_sizes(s: &str) -> Result<Vec<usize>> {
    let bad = || anyhow!("bad --sizes {s:?}");
    let v: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        (a..=b).collect()
    } else {
        s.split(',').map(|x| x.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if v.is_empty() {
        return Err(bad());
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(parse_sizes("1,2,4").unwrap(), vec![1, 2, 4]);
        assert_eq!(parse_sizes("2..4").unwrap(), vec![2, 3, 4]);
        assert!(parse_sizes("4..2").is_err());
        assert!(parse_sizes("a").is_err());
    }
}
