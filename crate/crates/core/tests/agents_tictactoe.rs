use spintop_core::agents::{build_empirical_payoff, sample_agent_grid, AgentContext, AgentKind, AgentSpec, EmpiricalGame, GridConfig};
use spintop_core::games::{tictactoe, ExtensiveGame, TicTacToe};

fn reduced() -> (Vec<AgentSpec>, EmpiricalGame) {
    let agents = sample_agent_grid(&GridConfig::reduced()).unwrap();
    let g = build_empirical_payoff(&tictactoe(), &agents, 0).unwrap();
    (agents, g)
}

/// Worst outcome for `seat` when `spec` plays that seat and the opponent
/// tries every legal move.
fn worst_case(ctx: &AgentContext<'_, TicTacToe>, spec: &AgentSpec, seat: usize, s: &<TicTacToe as ExtensiveGame>::State) -> f64 {
    let g = ctx.game();
    if g.is_terminal(s) {
        let v = g.outcome(s);
        return if seat == 0 { v } else { -v };
    }
    if g.player_to_move(s) == seat {
        let a = ctx.act(spec, s).unwrap();
        worst_case(ctx, spec, seat, &g.apply(s, a))
    } else {
        g.legal_actions(s)
            .into_iter()
            .map(|a| worst_case(ctx, spec, seat, &g.apply(s, a)))
            .fold(f64::INFINITY, f64::min)
    }
}

#[test]
fn full_depth_minmax_never_loses() {
    let game = tictactoe();
    let ctx = AgentContext::new(&game);
    for seed in 1..=8 {
        let spec = AgentSpec {
            kind: AgentKind::MinMax,
            param: 9,
            seed,
        };
        for seat in 0..2 {
            let v = worst_case(&ctx, &spec, seat, &game.initial_state());
            assert!(v >= 0.0, "seed {seed} seat {seat}: can be forced to {v}");
        }
    }
}

#[test]
fn maxmin_group_is_weaker_than_minmax_group() {
    let (agents, g) = &reduced();
    // Expand the deduplicated matrix back to every agent.
    let mut rep = vec![0; agents.len()];
    for (k, group) in g.dedup_map.iter().enumerate() {
        for &i in group {
            rep[i] = k;
        }
    }
    let group_mean = |kind: AgentKind| {
        let members: Vec<usize> = (0..agents.len()).filter(|&i| agents[i].kind == kind && agents[i].param == 9).collect();
        let total: f64 = members
            .iter()
            .map(|&i| (0..agents.len()).map(|j| g.payoff.get(rep[i], rep[j])).sum::<f64>())
            .sum();
        total / (members.len() * agents.len()) as f64
    };
    let (maxmin, minmax) = (group_mean(AgentKind::MaxMin), group_mean(AgentKind::MinMax));
    assert!(maxmin < minmax, "MaxMin(9) {maxmin} vs MinMax(9) {minmax}");
}
