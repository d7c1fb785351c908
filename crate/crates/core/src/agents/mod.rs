//! Seeded deterministic agents and empirical payoff matrices.

mod empirical;
mod search;
mod spec;

pub use empirical::{build_empirical_payoff, build_empirical_payoff_with_progress, load_external_payoff, EmpiricalGame};
pub use search::{act, play_match, AgentContext};
pub use spec::{sample_agent_grid, AgentKind, AgentSpec, GridConfig, GridEntry};
