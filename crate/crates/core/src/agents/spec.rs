use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AgentKind {
    /// Depth-limited minimax; random when the search does not resolve.
    MinMax,
    /// As `MinMax` on the game with negated outcomes: tries to lose.
    MaxMin,
    /// Depth-limited minimax with cut-off states valued 0.
    MinMaxZero,
    MaxMinZero,
    /// UCT with the parameter as simulation count.
    Mcts,
    Random,
}

impl AgentKind {
    pub const ALL: [AgentKind; 6] = [
        AgentKind::MinMax,
        AgentKind::MaxMin,
        AgentKind::MinMaxZero,
        AgentKind::MaxMinZero,
        AgentKind::Mcts,
        AgentKind::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AgentKind::MinMax => "minmax",
            AgentKind::MaxMin => "maxmin",
            AgentKind::MinMaxZero => "minmax_zero",
            AgentKind::MaxMinZero => "maxmin_zero",
            AgentKind::Mcts => "mcts",
            AgentKind::Random => "random",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::invalid(format!("unknown agent kind {s:?}")))
    }
}

/// A seeded deterministic agent: `(spec, game, state) ↦ action` is a pure
/// function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AgentSpec {
    pub kind: AgentKind,
    /// Search depth, or simulation count for MCTS; ignored for `Random`.
    pub param: u32,
    pub seed: u64,
}

impl AgentSpec {
    pub fn new(kind: AgentKind, param: u32, seed: u64) -> Self {
        AgentSpec { kind, param, seed }
    }
}

impl fmt::Display for AgentSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (name, param) = match self.kind {
            AgentKind::MinMax => ("MinMax", true),
            AgentKind::MaxMin => ("MaxMin", true),
            AgentKind::MinMaxZero => ("MinMax'", true),
            AgentKind::MaxMinZero => ("MaxMin'", true),
            AgentKind::Mcts => ("MCTS", true),
            AgentKind::Random => ("Random", false),
        };
        if param {
            write!(f, "{name}({},{})", self.param, self.seed)
        } else {
            write!(f, "{name}({})", self.seed)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridEntry {
    pub kind: AgentKind,
    pub params: Vec<u32>,
    pub seeds: Vec<u64>,
}

/// Cross-product description of an agent population.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridConfig {
    pub entries: Vec<GridEntry>,
}

fn entry(kind: AgentKind, params: impl IntoIterator<Item = u32>, seeds: std::ops::RangeInclusive<u64>) -> GridEntry {
    GridEntry {
        kind,
        params: params.into_iter().collect(),
        seeds: seeds.collect(),
    }
}

impl GridConfig {
    /// MinMax d∈0..=9, MinMax′/MaxMin/MaxMin′ d∈1..=9, MCTS k∈{10,100,1000},
    /// seeds 1..=50 each: 2000 agents.
    pub fn paper() -> Self {
        Self::standard(1..=50)
    }

    /// The paper layout with 8 seeds per cell: 320 agents.
    pub fn reduced() -> Self {
        Self::standard(1..=8)
    }

    /// A handful of agents for smoke tests.
    pub fn small() -> Self {
        GridConfig {
            entries: vec![
                entry(AgentKind::MinMax, [0, 1, 2, 9], 1..=3),
                entry(AgentKind::MaxMin, [1, 9], 1..=2),
                entry(AgentKind::Mcts, [10], 1..=2),
            ],
        }
    }

    fn standard(seeds: std::ops::RangeInclusive<u64>) -> Self {
        GridConfig {
            entries: vec![
                entry(AgentKind::MinMax, 0..=9, seeds.clone()),
                entry(AgentKind::MinMaxZero, 1..=9, seeds.clone()),
                entry(AgentKind::MaxMin, 1..=9, seeds.clone()),
                entry(AgentKind::MaxMinZero, 1..=9, seeds.clone()),
                entry(AgentKind::Mcts, [10, 100, 1000], seeds),
            ],
        }
    }

    pub fn preset(name: &str) -> Option<Self> {
        match name {
            "paper" => Some(Self::paper()),
            "reduced" => Some(Self::reduced()),
            "small" => Some(Self::small()),
            _ => None,
        }
    }

    /// One entry per line: `<kind> <params> <seeds>`, where the lists are
    /// comma-separated values or inclusive ranges `a..b`. `#` starts a
    /// comment.
    ///
    /// ```text
    /// minmax 0..9 1..50
    /// mcts 10,100,1000 1..50
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        fn list(s: &str) -> Result<Vec<u64>> {
            let mut out = Vec::new();
            for part in s.split(',') {
                let part = part.trim();
                let bad = || Error::invalid(format!("bad list item {part:?}"));
                if let Some((a, b)) = part.split_once("..") {
                    let (a, b): (u64, u64) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
                    if a > b {
                        return Err(bad());
                    }
                    out.extend(a..=b);
                } else {
                    out.push(part.parse().map_err(|_| bad())?);
                }
            }
            Ok(out)
        }
        let mut entries = Vec::new();
        for (no, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 3 {
                return Err(Error::invalid(format!("line {}: expected `kind params seeds`", no + 1)));
            }
            let params = list(f[1])?
                .into_iter()
                .map(|p| u32::try_from(p).map_err(|_| Error::invalid(format!("line {}: parameter too large", no + 1))))
                .collect::<Result<_>>()?;
            entries.push(GridEntry {
                kind: AgentKind::parse(f[0])?,
                params,
                seeds: list(f[2])?,
            });
        }
        Ok(GridConfig { entries })
    }
}

/// Expands the grid in entry, parameter, seed order. Rejects empty grids
/// and repeated agents.
pub fn sample_agent_grid(config: &GridConfig) -> Result<Vec<AgentSpec>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for e in &config.entries {
        for &p in &e.params {
            for &s in &e.seeds {
                let spec = AgentSpec::new(e.kind, p, s);
                if !seen.insert(spec) {
                    return Err(Error::invalid(format!("duplicate agent {spec}")));
                }
                out.push(spec);
            }
        }
    }
    if out.is_empty() {
        return Err(Error::invalid("agent grid is empty"));
    }
    Ok(out)
}
