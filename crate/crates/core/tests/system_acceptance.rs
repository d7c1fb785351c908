//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any criterion fails.

use std::sync::OnceLock;
use std::time::Instant;

use rand::Rng;
use spintop_core::agents::{build_empirical_payoff, sample_agent_grid, GridConfig};
use spintop_core::games::{
    blotto, disc_game, elo_game, layered_game, noisy_elo_game, parity_game, rps, tictactoe, LayeredSpec, RandomGoSSpec,
};
use spintop_core::geometry::{
    communicativeness, count_pure_strategies, enumerated_game, game_profile, log2_factorial, simulate,
    theorem1_construct, DEFAULT_NODE_BUDGET,
};
use spintop_core::nash::{brute_force_nash, exploitability, max_entropy_nash, SolverOptions};
use spintop_core::rng::stream;
use spintop_core::stats::gos_row_mean_experiment;
use spintop_core::training::{
    population_sweep, random_gos_drift, run_training, OracleKind, Replacement, TerminalStatus, TrainingConfig,
    TrainingGame,
};
use spintop_core::{Matrix, PayoffMatrix};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// The three-move parity game of the figure: two steps per player.
fn figure_parity() -> PayoffMatrix {
    enumerated_game(&parity_game(2), 100_000).unwrap().standardized()
}

fn ttt_reduced() -> PayoffMatrix {
    static CELL: OnceLock<PayoffMatrix> = OnceLock::new();
    CELL.get_or_init(|| {
        let agents = sample_agent_grid(&GridConfig::reduced()).unwrap();
        build_empirical_payoff(&tictactoe(), &agents, 0).unwrap().payoff
    })
    .clone()
}

fn random_antisymmetric(n: usize, seed: u64) -> PayoffMatrix {
    let mut rng = stream(seed, &[0xacc, n as u64]);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = rng.random_range(-1.0..1.0);
            m.set(i, j, v);
            m.set(j, i, -v);
        }
    }
    PayoffMatrix::new(m).unwrap()
}

fn random_sign_target(n: usize, seed: u64) -> Matrix {
    let mut rng = stream(seed, &[0x7a9, n as u64]);
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i + 1..n {
            let v = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
            m.set(i, j, v);
            m.set(j, i, -v);
        }
    }
    m
}

fn c1_ttt_communicativeness() -> Outcome {
    let r = communicativeness(&tictactoe(), DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let detail = format!("n = {:.5}, floor(2^n) = {}", r.n_bits, r.floor_pow2);
    check(r.floor_pow2 == 47u32.into() && (r.n_bits - 5.58).abs() <= 0.01, detail)
}

fn c2_ttt_counts() -> Outcome {
    let c = count_pure_strategies(&tictactoe(), DEFAULT_NODE_BUDGET).map_err(|e| e.to_string())?;
    let [a, b, p] = c.log10();
    let detail = format!("log10 counts {a:.3}, {b:.3}, {p:.3}");
    check(
        (123.0..=125.0).contains(&a) && (442.0..=444.0).contains(&b) && (566.0..=568.0).contains(&p),
        detail,
    )
}

fn c3_parity_enumeration() -> Outcome {
    let p = figure_parity();
    let prof = game_profile(&p, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let biggest = prof.cluster_sizes.iter().copied().max().unwrap_or(0);
    let detail = format!(
        "{} strategies, largest cluster {biggest}, {} three-cycles",
        p.len(),
        prof.cycles.total
    );
    check(p.len() == 161 && biggest == 40 && prof.cycles.total > 140, detail)
}

fn c4_rpp_monotone() -> Outcome {
    let opts = SolverOptions::default();
    let games: Vec<(&str, PayoffMatrix)> = vec![
        ("rps", rps().standardized()),
        ("elo50", elo_game(50, 1).unwrap().standardized()),
        ("disc200", disc_game(200, 1).unwrap().standardized()),
        ("noisy_elo", noisy_elo_game(50, 0.1, 1).unwrap().standardized()),
        ("blotto(10,5)", blotto(10, 5).unwrap().standardized()),
        ("parity", figure_parity()),
        ("tictactoe", ttt_reduced()),
    ];
    let mut worst = f64::INFINITY;
    let mut summary = Vec::new();
    for (name, p) in games {
        let prof = game_profile(&p, &opts).map_err(|e| format!("{name}: {e}"))?;
        let k = prof.cluster_sizes.len();
        let mut w = f64::INFINITY;
        for i in 0..k {
            for j in i + 1..k {
                w = w.min(prof.rpp.get(i, j));
            }
        }
        summary.push(format!("{name}:{k}"));
        worst = worst.min(w);
    }
    check(
        worst >= -1e-4,
        format!("clusters {}; min RPP(C_i, C_j), i < j: {worst:.2e}", summary.join(" ")),
    )
}

fn c5_solver_oracle() -> Outcome {
    let opts = SolverOptions::default();
    let (mut worst_d, mut worst_e) = (0.0_f64, 0.0_f64);
    for seed in 0..200u64 {
        let n = 2 + (seed as usize % 7);
        let p = random_antisymmetric(n, seed);
        let all: Vec<usize> = (0..n).collect();
        let x = max_entropy_nash(&p, &all, &opts).map_err(|e| e.to_string())?;
        let y = brute_force_nash(&p, &all).map_err(|e| e.to_string())?;
        let d = x.dense(n).iter().zip(y.dense(n)).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        worst_d = worst_d.max(d);
        worst_e = worst_e.max(exploitability(&p, &x));
    }
    check(
        worst_d <= 1e-4 && worst_e <= 1e-4,
        format!("200 matrices: max sup-norm gap {worst_d:.2e}, max exploitability {worst_e:.2e}"),
    )
}

fn c6_theorem1() -> Outcome {
    let g = parity_game(4);
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 7);
        let target = random_sign_target(n, seed);
        let s = theorem1_construct(&g, &target).map_err(|e| e.to_string())?;
        let m = simulate(&g, &s);
        for i in 0..n {
            for j in 0..n {
                if m.get(i, j).signum() != target.get(i, j).signum() && i != j {
                    return Err(format!("seed {seed}: entry ({i},{j}) differs"));
                }
            }
        }
    }
    // i beats i+1 (mod 8), every other pair decided arbitrarily but fixed.
    let cyc = Matrix::from_fn(8, 8, |i, j| {
        if i == j {
            0.0
        } else if (i + 1) % 8 == j {
            1.0
        } else if (j + 1) % 8 == i || i < j {
            -1.0
        } else {
            1.0
        }
    });
    let s = theorem1_construct(&g, &cyc).map_err(|e| e.to_string())?;
    let m = simulate(&g, &s);
    let cycle = (0..8).all(|i| m.get(i, (i + 1) % 8) > 0.0);
    check(cycle, "50 targets reproduced; 8-cycle verified".into())
}

fn c7_learning() -> Outcome {
    let opts = SolverOptions::default();
    let elo = TrainingGame::new(elo_game(100, 2).unwrap().standardized(), &opts).map_err(|e| e.to_string())?;
    let t = run_training(&elo, &TrainingConfig::new(1, OracleKind::BeatAverage)).map_err(|e| e.to_string())?;
    let elo_ok = t.terminal_status == TerminalStatus::Converged;

    let disc = TrainingGame::new(disc_game(1000, 2).unwrap().standardized(), &opts).map_err(|e| e.to_string())?;
    let rows = population_sweep(&disc, &[1, 4, 16, 64], OracleKind::BeatAverage, Replacement::Oldest, None, &[0, 1])
        .map_err(|e| e.to_string())?;
    let disc_ok = rows.iter().all(|r| r.0.terminal_status != TerminalStatus::Converged);

    let ttt = TrainingGame::new(ttt_reduced(), &opts).map_err(|e| e.to_string())?;
    let sizes = [1, 2, 4, 8, 16, 32, 64];
    let rows = population_sweep(&ttt, &sizes, OracleKind::BeatAverage, Replacement::Oldest, None, &[0])
        .map_err(|e| e.to_string())?;
    let frac = |s: usize| {
        let cells: Vec<_> = rows.iter().filter(|r| r.0.size == s).collect();
        cells.iter().filter(|r| r.0.terminal_status == TerminalStatus::Converged).count() as f64 / cells.len() as f64
    };
    let fr: Vec<String> = sizes.iter().map(|&s| format!("{s}:{:.2}", frac(s))).collect();
    check(
        elo_ok && disc_ok && frac(64) > frac(1),
        format!(
            "elo converged {elo_ok}; disc never converged {disc_ok}; tictactoe ({} strategies) {}",
            ttt.len(),
            fr.join(" ")
        ),
    )
}

fn c8_layered() -> Outcome {
    let opts = SolverOptions::default();
    let mut longest = 0;
    for seed in 0..50u64 {
        let mut rng = stream(seed, &[0x1a7]);
        let layers = rng.random_range(2..=7usize);
        let mut sizes: Vec<usize> = (0..layers).map(|_| rng.random_range(1..=5)).collect();
        // Unimodal: ascending to a random peak, then descending.
        let peak = rng.random_range(0..layers);
        sizes[..=peak].sort();
        sizes[peak..].sort_by(|a, b| b.cmp(a));
        let lg = layered_game(&LayeredSpec::new(sizes.clone(), peak).map_err(|e| e.to_string())?, seed)
            .map_err(|e| e.to_string())?;
        let game = TrainingGame::new(lg.game.standardized(), &opts).map_err(|e| e.to_string())?;
        let pop = *sizes.iter().max().unwrap();
        let t = run_training(&game, &TrainingConfig::new(pop, OracleKind::BeatAll)).map_err(|e| e.to_string())?;
        let top_reached = t.final_population().iter().any(|&i| lg.layer_of[i] == 0);
        if t.terminal_status != TerminalStatus::Converged || !top_reached {
            return Err(format!("seed {seed} sizes {sizes:?}: {:?}", t.terminal_status));
        }
        // A step improves when the best layer present gets stronger.
        let best = |m: &[usize]| m.iter().map(|&i| lg.layer_of[i]).min().unwrap();
        let mut prev = best(&t.initial.members);
        let mut run = 0;
        for r in &t.records {
            let b = best(&r.population);
            run = if b < prev { 0 } else { run + 1 };
            prev = b;
            longest = longest.max(run);
            if run >= pop {
                return Err(format!("seed {seed} sizes {sizes:?}: {run} steps without improvement"));
            }
        }
    }
    Ok(format!("50 games converged; longest non-improving stretch {longest}"))
}

fn c9_go_bound() -> Outcome {
    let bits = log2_factorial(180);
    check(bits >= 1000.0, format!("log2(180!) = {bits:.2}"))
}

fn c10_random_gos() -> Outcome {
    let e = gos_row_mean_experiment(1000, 1.0, 0, 500, 10).map_err(|e| e.to_string())?;
    let spec = RandomGoSSpec::new(1000, 1.0, 1.0, 0);
    let mut drifts = Vec::new();
    for m in [2, 4, 8] {
        drifts.push(random_gos_drift(&spec, m, 20, 20, 11).map_err(|e| e.to_string())?);
    }
    let positive = drifts.iter().all(|d| d.mean > 0.0);
    let decreasing = drifts.windows(2).all(|w| w[1].variance < w[0].variance);
    let detail = format!(
        "KS p = {:.3} (variance ratio {:.2}); drift means {:?}; variances {:?}",
        e.ks.p_value,
        e.variance_ratio,
        drifts.iter().map(|d| format!("{:.3}", d.mean)).collect::<Vec<_>>(),
        drifts.iter().map(|d| format!("{:.2e}", d.variance)).collect::<Vec<_>>()
    );
    check(e.ks.p_value >= 0.01 && positive && decreasing, detail)
}

#[test]
fn acceptance_criteria() {
    let criteria: [Criterion; 10] = [
        ("tictactoe communicativeness", c1_ttt_communicativeness),
        ("tictactoe pure-strategy counts", c2_ttt_counts),
        ("parity game enumeration", c3_parity_enumeration),
        ("RPP monotone along clusters", c4_rpp_monotone),
        ("Nash solver matches brute force", c5_solver_oracle),
        ("parity game realises any sign pattern", c6_theorem1),
        ("learning phase behaviour", c7_learning),
        ("layered game training", c8_layered),
        ("Go lower-bound arithmetic", c9_go_bound),
        ("random game of skill statistics", c10_random_gos),
    ];
    let mut failed = Vec::new();
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match &r {
            Ok(d) => println!("criterion {:>2} PASS  {name}: {d} [{secs:.1}s]", k + 1),
            Err(d) => {
                println!("criterion {:>2} FAIL  {name}: {d} [{secs:.1}s]", k + 1);
                failed.push(k + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}

/// The qualitative shape check that accompanies the learning criterion: a
/// skew-normal fit of the Tic-Tac-Toe profile with positive amplitude and
/// its peak strictly inside the range of mean RPP.
#[test]
fn tictactoe_profile_is_a_spinning_top() {
    let prof = game_profile(&ttt_reduced(), &SolverOptions::default()).unwrap();
    let fit = prof.fit.expect("enough clusters to fit");
    let lo = prof.mean_rpp.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = prof.mean_rpp.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let peak = fit.peak(lo, hi);
    let margin = 1e-3 * (hi - lo);
    let interior = peak > lo + margin && peak < hi - margin;
    println!(
        "tictactoe profile {}: amplitude {:.3e}, peak {peak:.4} on [{lo:.4}, {hi:.4}]",
        if fit.a > 0.0 && interior { "PASS" } else { "FAIL" },
        fit.a
    );
    assert!(fit.a > 0.0, "amplitude {}", fit.a);
    assert!(interior, "peak {peak} on [{lo}, {hi}], fit {fit:?}");
}
