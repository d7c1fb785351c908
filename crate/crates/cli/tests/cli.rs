use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn spintop(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spintop"))
        .arg("--out")
        .arg(out)
        .args(args)
        .output()
        .expect("spawn spintop")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn error_json(o: &Output) -> serde_json::Value {
    let err = String::from_utf8_lossy(&o.stderr);
    let line = err.lines().rev().find(|l| l.trim_start().starts_with('{')).expect("json error line");
    serde_json::from_str(line).expect("valid json")
}

#[test]
fn payoff_writes_matrix_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["payoff", "--game", "tictactoe", "--preset", "small"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["payoff.csv", "payoff.json", "manifest.json"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    assert!(stdout(&o).contains("18 agents"));
    let csv = fs::read_to_string(dir.path().join("payoff.csv")).unwrap();
    let rows = csv.lines().count() - 1;
    assert!((2..=18).contains(&rows));
}

#[test]
fn rerun_reproduces_outputs_byte_for_byte() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(
        dir.path(),
        &["--seed", "5", "train", "--game", "disc", "--n", "40", "--sizes", "1,2,4", "--seeds", "2", "--replacement", "random"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let first: Vec<Vec<u8>> = ["sweep.csv", "trajectories.json", "manifest.json"]
        .iter()
        .map(|f| fs::read(dir.path().join(f)).unwrap())
        .collect();
    let saved = tempfile::tempdir().unwrap();
    let manifest = saved.path().join("manifest.json");
    fs::copy(dir.path().join("manifest.json"), &manifest).unwrap();
    for f in ["sweep.csv", "trajectories.json", "manifest.json"] {
        fs::remove_file(dir.path().join(f)).unwrap();
    }
    let o2 = Command::new(env!("CARGO_BIN_EXE_spintop"))
        .arg("rerun")
        .arg(&manifest)
        .output()
        .unwrap();
    assert!(o2.status.success(), "{}", String::from_utf8_lossy(&o2.stderr));
    assert_eq!(stdout(&o), stdout(&o2));
    for (f, bytes) in ["sweep.csv", "trajectories.json", "manifest.json"].iter().zip(&first) {
        assert_eq!(&fs::read(dir.path().join(f)).unwrap(), bytes, "{f} differs");
    }
}

#[test]
fn unknown_game_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["profile", "--game", "chess"]);
    assert_eq!(o.status.code(), Some(2));
    let e = error_json(&o);
    assert_eq!(e["exit_code"], 2);
    assert!(e["message"].as_str().unwrap().contains("chess"));
}

#[test]
fn bad_flag_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["comm", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(error_json(&o)["exit_code"], 2);
}

#[test]
fn node_budget_overrun_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["--node-budget", "1000", "comm", "--game", "connect_four"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(error_json(&o)["exit_code"], 3);
}

#[test]
fn comm_reports_tictactoe_bits() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["comm", "--game", "tictactoe"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("comm.json")).unwrap()).unwrap();
    let n = r["n_bits"].as_f64().unwrap();
    assert!(n > 5.0 && n < 6.0, "{n}");
    assert_eq!(r["floor_pow2"], (2f64.powf(n).floor() as u64).to_string());
}

#[test]
fn count_on_parity_includes_symmetric_strategy_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["count", "--game", "parity", "--steps", "2"]);
    assert!(o.status.success());
    let r: serde_json::Value = serde_json::from_slice(&fs::read(dir.path().join("count.json")).unwrap()).unwrap();
    let c = &r["counts"];
    let z0: u64 = c["z_player0"].as_str().unwrap().parse().unwrap();
    let z1: u64 = c["z_player1"].as_str().unwrap().parse().unwrap();
    assert_eq!(c["product"].as_str().unwrap(), (z0 * z1).to_string());
    // Every (player 0 plan, player 1 plan) pair differs in payoff here.
    assert_eq!(r["distinct_symmetric_strategies"].as_u64().unwrap(), z0 * z1);
}

#[test]
fn profile_of_blotto_writes_points_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["profile", "--game", "blotto", "--units", "6", "--fields", "3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let points = fs::read_to_string(dir.path().join("points.csv")).unwrap();
    assert!(points.starts_with("mean_rpp,cluster_size"));
    let sizes: usize = points
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(1).unwrap().parse::<usize>().unwrap())
        .sum();
    // C(8, 2) allocations of 6 units over 3 fields.
    assert_eq!(sizes, 28);
    assert!(dir.path().join("profile.json").exists());
}

#[test]
fn train_on_elo_converges_at_every_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["train", "--game", "elo", "--n", "30", "--sizes", "1..3"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().skip_while(|l| *l != "size,convergence_fraction").skip(1).collect();
    assert_eq!(lines, ["1,1", "2,1", "3,1"]);
}

#[test]
fn synth_then_profile_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let o = spintop(dir.path(), &["--seed", "3", "synth", "--game", "gos", "--n", "30"]);
    assert!(o.status.success());
    let csv = dir.path().join("game.csv");
    let prof = tempfile::tempdir().unwrap();
    let o = spintop(prof.path(), &["profile", "--payoff", csv.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(prof.path().join("profile.json").exists());
}
