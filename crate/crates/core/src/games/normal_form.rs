//! Synthetic normal-form games.
//!
//! Generators return the raw payoff (win rates for Elo, field differences
//! for Blotto, ...). Analysis always runs on [`NormalFormGame::standardized`].

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Normal, Uniform};
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::payoff::{standardize, Matrix, PayoffMatrix};
use crate::rng::{stream, tags};

/// Generator name, its parameters and the root seed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub generator: String,
    pub params: serde_json::Value,
    pub seed: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalFormGame {
    pub raw: Matrix,
    pub labels: Vec<String>,
    pub provenance: Provenance,
}

impl NormalFormGame {
    pub fn new(raw: Matrix, labels: Vec<String>, provenance: Provenance) -> Result<Self> {
        if !raw.is_square() {
            return Err(Error::NotSquare {
                rows: raw.rows(),
                cols: raw.cols(),
            });
        }
        if labels.len() != raw.rows() {
            return Err(Error::invalid(format!(
                "{} labels for {} strategies",
                labels.len(),
                raw.rows()
            )));
        }
        Ok(NormalFormGame {
            raw,
            labels,
            provenance,
        })
    }

    pub fn len(&self) -> usize {
        self.raw.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn standardized(&self) -> PayoffMatrix {
        standardize(&self.raw).expect("square by construction")
    }
}

fn numbered(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

fn provenance(generator: &str, params: serde_json::Value, seed: Option<u64>) -> Provenance {
    Provenance {
        generator: generator.into(),
        params,
        seed,
    }
}

fn need(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::invalid(msg))
    }
}

/// Rock-paper-scissors with strategies ordered rock, scissors, paper so
/// that every strategy beats its successor.
pub fn rps() -> NormalFormGame {
    let raw = Matrix::from_rows(&[
        vec![0.0, 1.0, -1.0],
        vec![-1.0, 0.0, 1.0],
        vec![1.0, -1.0, 0.0],
    ])
    .expect("static matrix");
    NormalFormGame {
        raw,
        labels: vec!["rock".into(), "scissors".into(), "paper".into()],
        provenance: provenance("rps", json!({}), None),
    }
}

/// Elo win probability for a rating gap `d`.
pub fn elo_win_rate(d: f64) -> f64 {
    1.0 / (1.0 + (-d / 400.0).exp())
}

pub fn elo_ratings(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = stream(seed, &[tags::ELO]);
    let u = Uniform::new(0.0, 2000.0).expect("valid range");
    (0..n).map(|_| u.sample(&mut rng)).collect()
}

/// Ratings `S ~ U(0, 2000)`, raw payoff `P_ij = σ((S_i − S_j)/400)`.
pub fn elo_game(n: usize, seed: u64) -> Result<NormalFormGame> {
    need(n >= 2, "elo_game needs n >= 2")?;
    let s = elo_ratings(n, seed);
    let raw = Matrix::from_fn(n, n, |i, j| elo_win_rate(s[i] - s[j]));
    NormalFormGame::new(
        raw,
        numbered("elo", n),
        provenance("elo", json!({ "n": n, "ratings": s }), Some(seed)),
    )
}

/// Elo game plus i.i.d. `N(0, ε)` noise on every entry (ε is the standard
/// deviation), antisymmetrised as `P_ε − P_εᵀ`.
pub fn noisy_elo_game(n: usize, epsilon: f64, seed: u64) -> Result<NormalFormGame> {
    need(epsilon >= 0.0 && epsilon.is_finite(), "epsilon must be >= 0")?;
    let base = elo_game(n, seed)?;
    let mut rng = stream(seed, &[tags::NOISE]);
    let normal = Normal::new(0.0, epsilon).map_err(|e| Error::invalid(e.to_string()))?;
    let mut pe = base.raw.clone();
    for i in 0..n {
        for j in 0..n {
            pe.set(i, j, pe.get(i, j) + normal.sample(&mut rng));
        }
    }
    let raw = Matrix::from_fn(n, n, |i, j| pe.get(i, j) - pe.get(j, i));
    NormalFormGame::new(
        raw,
        numbered("nelo", n),
        provenance("noisy_elo", json!({ "n": n, "epsilon": epsilon }), Some(seed)),
    )
}

/// Points uniform in the unit disc (by area); `P_ij = A_iᵀ [[0,−1],[1,0]] A_j`.
pub fn disc_game(n: usize, seed: u64) -> Result<NormalFormGame> {
    need(n >= 2, "disc_game needs n >= 2")?;
    let mut rng = stream(seed, &[tags::DISC]);
    let pts: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let r = rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * std::f64::consts::TAU;
            (r * t.cos(), r * t.sin())
        })
        .collect();
    let raw = Matrix::from_fn(n, n, |i, j| disc_payoff(pts[i], pts[j]));
    NormalFormGame::new(
        raw,
        numbered("disc", n),
        provenance("disc", json!({ "n": n }), Some(seed)),
    )
}

/// `aᵀ [[0,−1],[1,0]] b`.
pub fn disc_payoff(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.1 * b.0 - a.0 * b.1
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomGoSSpec {
    pub n: usize,
    pub sigma_w: f64,
    pub sigma_s: f64,
    pub seed: u64,
}

impl RandomGoSSpec {
    pub fn new(n: usize, sigma_w: f64, sigma_s: f64, seed: u64) -> Self {
        RandomGoSSpec {
            n,
            sigma_w,
            sigma_s,
            seed,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomGoS {
    pub game: NormalFormGame,
    /// Transitive strengths `S_i`.
    pub skill: Vec<f64>,
    /// `W̃ = ½(W − Wᵀ)`, the cyclic part.
    pub max_abs_w_tilde: f64,
}

/// `P_ij = ½(W_ij − W_ji) + S_i − S_j`, `W ~ N(0, σ_W²)`, `S ~ N(0, σ_S²)`.
///
/// `σ_W = 0` is accepted and yields a purely transitive game.
pub fn random_game_of_skill(spec: &RandomGoSSpec) -> Result<RandomGoS> {
    need(spec.n >= 2, "random_game_of_skill needs n >= 2")?;
    need(
        spec.sigma_w >= 0.0 && spec.sigma_s > 0.0 && spec.sigma_w.is_finite() && spec.sigma_s.is_finite(),
        "need sigma_w >= 0 and sigma_s > 0",
    )?;
    let n = spec.n;
    let mut rs = stream(spec.seed, &[tags::GOS_S]);
    let mut rw = stream(spec.seed, &[tags::GOS_W]);
    let ns = Normal::new(0.0, spec.sigma_s).map_err(|e| Error::invalid(e.to_string()))?;
    let nw = Normal::new(0.0, spec.sigma_w).map_err(|e| Error::invalid(e.to_string()))?;
    let skill: Vec<f64> = (0..n).map(|_| ns.sample(&mut rs)).collect();
    let w: Vec<f64> = (0..n * n).map(|_| nw.sample(&mut rw)).collect();
    let mut max_w = 0.0_f64;
    let raw = Matrix::from_fn(n, n, |i, j| {
        let wt = 0.5 * (w[i * n + j] - w[j * n + i]);
        max_w = max_w.max(wt.abs());
        wt + skill[i] - skill[j]
    });
    let game = NormalFormGame::new(
        raw,
        numbered("gos", n),
        provenance(
            "random_game_of_skill",
            json!({ "n": n, "sigma_w": spec.sigma_w, "sigma_s": spec.sigma_s, "skill": skill }),
            Some(spec.seed),
        ),
    )?;
    Ok(RandomGoS {
        game,
        skill,
        max_abs_w_tilde: max_w,
    })
}

/// All ways to put `units` indistinguishable units on `fields` fields, in
/// lexicographically decreasing order (all units on the first field first).
pub fn compositions(units: usize, fields: usize) -> Vec<Vec<u32>> {
    fn rec(left: usize, fields: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if fields == 1 {
            cur.push(left as u32);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in (0..=left).rev() {
            cur.push(k as u32);
            rec(left - k, fields - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(units, fields, &mut Vec::with_capacity(fields), &mut out);
    out
}

/// Fields won minus fields lost.
pub fn blotto_payoff(a: &[u32], b: &[u32]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x > y) as i32 - (x < y) as i32)
        .sum::<i32>() as f64
}

pub fn blotto(units: usize, fields: usize) -> Result<NormalFormGame> {
    need(units >= 1 && fields >= 1, "blotto needs units >= 1 and fields >= 1")?;
    let strategies = compositions(units, fields);
    let n = strategies.len();
    let raw = Matrix::from_fn(n, n, |i, j| blotto_payoff(&strategies[i], &strategies[j]));
    let labels = strategies
        .iter()
        .map(|s| s.iter().map(u32::to_string).collect::<Vec<_>>().join("-"))
        .collect();
    NormalFormGame::new(
        raw,
        labels,
        provenance("blotto", json!({ "units": units, "fields": fields }), None),
    )
}

/// Layer sizes of a layered Game of Skill. Layer 0 is the strongest; sizes
/// grow (weakly) up to `z_index` and shrink (weakly) after it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayeredSpec {
    pub layer_sizes: Vec<usize>,
    pub z_index: usize,
}

impl LayeredSpec {
    pub fn new(layer_sizes: Vec<usize>, z_index: usize) -> Result<Self> {
        let s = &layer_sizes;
        need(!s.is_empty(), "no layers")?;
        need(s.iter().all(|&k| k > 0), "layer sizes must be positive")?;
        need(z_index < s.len(), "z_index out of range")?;
        need(
            s[..=z_index].windows(2).all(|w| w[0] <= w[1]) && s[z_index..].windows(2).all(|w| w[0] >= w[1]),
            "layer sizes must be unimodal around z_index",
        )?;
        Ok(LayeredSpec {
            layer_sizes,
            z_index,
        })
    }

    /// Spec with the peak placed at the first largest layer.
    pub fn unimodal(layer_sizes: Vec<usize>) -> Result<Self> {
        let z = layer_sizes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(&a.0)))
            .map_or(0, |(i, _)| i);
        Self::new(layer_sizes, z)
    }

    pub fn total(&self) -> usize {
        self.layer_sizes.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayeredGame {
    pub game: NormalFormGame,
    /// Layer of every strategy.
    pub layer_of: Vec<usize>,
}

/// Cross-layer payoff is +1 for the stronger (lower-index) layer. Inside a
/// layer of size ≥ 3 the payoffs form a random ±1 tournament that contains
/// the cycle `σ(0) → σ(1) → … → σ(k−1) → σ(0)` for a random permutation σ;
/// a layer of size 2 gets a random winner.
pub fn layered_game(spec: &LayeredSpec, seed: u64) -> Result<LayeredGame> {
    let spec = LayeredSpec::new(spec.layer_sizes.clone(), spec.z_index)?;
    let n = spec.total();
    let mut rng = stream(seed, &[tags::LAYERED]);
    let mut layer_of = Vec::with_capacity(n);
    for (l, &k) in spec.layer_sizes.iter().enumerate() {
        layer_of.extend(std::iter::repeat_n(l, k));
    }
    let mut raw = Matrix::from_fn(n, n, |i, j| match layer_of[i].cmp(&layer_of[j]) {
        std::cmp::Ordering::Less => 1.0,
        std::cmp::Ordering::Greater => -1.0,
        std::cmp::Ordering::Equal => 0.0,
    });
    let mut start = 0;
    for &k in &spec.layer_sizes {
        let members: Vec<usize> = (start..start + k).collect();
        start += k;
        if k < 2 {
            continue;
        }
        let mut order = members.clone();
        order.shuffle(&mut rng);
        let mut fixed = std::collections::HashSet::new();
        if k >= 3 {
            for t in 0..k {
                let (a, b) = (order[t], order[(t + 1) % k]);
                raw.set(a, b, 1.0);
                raw.set(b, a, -1.0);
                fixed.insert((a.min(b), a.max(b)));
            }
        }
        for (x, &a) in members.iter().enumerate() {
            for &b in &members[x + 1..] {
                if fixed.contains(&(a, b)) {
                    continue;
                }
                let v = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
                raw.set(a, b, v);
                raw.set(b, a, -v);
            }
        }
    }
    let labels = (0..n).map(|i| format!("L{}_{}", layer_of[i], i)).collect();
    let game = NormalFormGame::new(
        raw,
        labels,
        provenance(
            "layered",
            json!({ "layer_sizes": spec.layer_sizes, "z_index": spec.z_index }),
            Some(seed),
        ),
    )?;
    Ok(LayeredGame { game, layer_of })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn rps_matrix() {
        let g = rps();
        assert_eq!(g.raw.get(0, 1), 1.0);
        let p = g.standardized();
        for i in 0..3 {
            assert_eq!(p.get(i, i), 0.0);
        }
        assert_eq!(p.get(0, 1), 1.0);
    }

    #[test]
    fn elo_formula() {
        assert_eq!(elo_win_rate(0.0), 0.5);
        assert!((elo_win_rate(400.0) - 0.731_058_578_630_004_9).abs() < 1e-12);
    }

    #[test]
    fn elo_is_monotonic() {
        let p = elo_game(50, 11).unwrap().standardized();
        let n = p.len();
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if p.get(i, j) > 0.0 && p.get(j, k) > 0.0 {
                        assert!(p.get(i, k) > 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn noisy_elo_zero_noise_is_antisymmetrised_elo() {
        let e = elo_game(20, 4).unwrap();
        let ne = noisy_elo_game(20, 0.0, 4).unwrap();
        for i in 0..20 {
            for j in 0..20 {
                let want = e.raw.get(i, j) - e.raw.get(j, i);
                assert!((ne.raw.get(i, j) - want).abs() < 1e-15);
            }
        }
        let ne = noisy_elo_game(30, 1.0, 4).unwrap();
        for i in 0..30 {
            for j in 0..30 {
                assert_eq!(ne.raw.get(i, j), -ne.raw.get(j, i));
            }
        }
    }

    #[test]
    fn disc_payoff_example() {
        assert_eq!(disc_payoff((1.0, 0.0), (0.0, 1.0)), -1.0);
        let g = disc_game(40, 1).unwrap();
        for i in 0..40 {
            assert_eq!(g.raw.get(i, i), 0.0);
        }
    }

    #[test]
    fn gos_without_cycles_is_monotonic_in_skill() {
        let g = random_game_of_skill(&RandomGoSSpec::new(30, 0.0, 1.0, 9)).unwrap();
        assert_eq!(g.max_abs_w_tilde, 0.0);
        for i in 0..30 {
            for j in 0..30 {
                assert_eq!(g.game.raw.get(i, j) > 0.0, g.skill[i] > g.skill[j]);
            }
        }
        assert!(random_game_of_skill(&RandomGoSSpec::new(30, 1.0, 0.0, 9)).is_err());
    }

    #[test]
    fn blotto_counts_and_payoffs() {
        assert_eq!(blotto(10, 5).unwrap().len(), 1001);
        for units in 1..=12 {
            for fields in 1..=6 {
                let c = compositions(units, fields).len() as u64;
                assert_eq!(c, binom((units + fields - 1) as u64, (fields - 1) as u64));
            }
        }
        assert_eq!(blotto_payoff(&[10, 0, 0, 0, 0], &[2, 2, 2, 2, 2]), -3.0);
        assert_eq!(blotto_payoff(&[3, 3, 4, 0, 0], &[3, 3, 4, 0, 0]), 0.0);
    }

    #[test]
    fn layered_structure() {
        let g = layered_game(&LayeredSpec::new(vec![1, 1, 1], 0).unwrap(), 0).unwrap();
        let p = g.game.standardized();
        assert_eq!(p.get(0, 1), 1.0);
        assert_eq!(p.get(0, 2), 1.0);
        assert_eq!(p.get(1, 2), 1.0);

        let spec = LayeredSpec::new(vec![1, 2, 4, 6, 3, 1], 3).unwrap();
        for seed in 0..10 {
            let g = layered_game(&spec, seed).unwrap();
            let n = g.layer_of.len();
            for i in 0..n {
                for j in 0..n {
                    if g.layer_of[i] < g.layer_of[j] {
                        assert_eq!(g.game.raw.get(i, j), 1.0);
                    }
                    if i != j && g.layer_of[i] == g.layer_of[j] {
                        assert_eq!(g.game.raw.get(i, j).abs(), 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn layered_spec_validation() {
        assert!(LayeredSpec::new(vec![3, 1, 2], 0).is_err());
        assert!(LayeredSpec::new(vec![1, 0], 0).is_err());
        assert_eq!(LayeredSpec::unimodal(vec![1, 3, 3, 2]).unwrap().z_index, 1);
    }

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(disc_game(30, 5).unwrap(), disc_game(30, 5).unwrap());
        assert_ne!(disc_game(30, 5).unwrap().raw, disc_game(30, 6).unwrap().raw);
        let s = RandomGoSSpec::new(25, 1.0, 1.0, 3);
        assert_eq!(random_game_of_skill(&s).unwrap(), random_game_of_skill(&s).unwrap());
    }
}
