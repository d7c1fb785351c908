use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::games::{random_game_of_skill, RandomGoSSpec};
use crate::rng::{self, tags};

/// Per-step changes of the population's mean transitive strength `S̄`,
/// pooled over trials.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DriftStats {
    pub m: usize,
    pub steps: usize,
    pub trials: usize,
    pub accepted: usize,
    pub mean: f64,
    /// Sample variance (n − 1 denominator); 0 with fewer than two steps.
    pub variance: f64,
    pub min: f64,
    /// Trials that ran out of candidates before `steps`.
    pub exhausted: usize,
}

/// Training with a uniform improvement oracle on random Games of Skill:
/// the candidate is drawn uniformly among strategies beating every member
/// and replaces a uniformly chosen member. Trial `t` uses its own game,
/// generated from `spec` with a seed derived from `(seed, t)`.
pub fn random_gos_drift(spec: &RandomGoSSpec, m: usize, steps: usize, trials: usize, seed: u64) -> Result<DriftStats> {
    if m == 0 || m >= spec.n {
        return Err(Error::invalid(format!("population size {m} not in 1..{}", spec.n)));
    }
    let mut deltas = Vec::new();
    let mut exhausted = 0;
    for t in 0..trials {
        let trial_seed = rng::derive_seed(seed, &[tags::DRIFT, t as u64]);
        let gos = random_game_of_skill(&RandomGoSSpec { seed: trial_seed, ..*spec })?;
        let (p, s) = (&gos.game.raw, &gos.skill);
        let mut rng = rng::stream(trial_seed, &[tags::DRIFT]);
        let mut all: Vec<usize> = (0..spec.n).collect();
        all.shuffle(&mut rng);
        let mut pop: Vec<usize> = all[..m].to_vec();
        let mut inside = vec![false; spec.n];
        for &i in &pop {
            inside[i] = true;
        }
        for _ in 0..steps {
            let cands: Vec<usize> = (0..spec.n)
                .filter(|&c| !inside[c] && pop.iter().all(|&j| p.get(c, j) > 0.0))
                .collect();
            let Some(&c) = cands.choose(&mut rng) else {
                exhausted += 1;
                break;
            };
            let slot = rng.random_range(0..m);
            let old = pop[slot];
            inside[old] = false;
            inside[c] = true;
            pop[slot] = c;
            deltas.push((s[c] - s[old]) / m as f64);
        }
    }
    let k = deltas.len();
    let mean = if k > 0 { deltas.iter().sum::<f64>() / k as f64 } else { 0.0 };
    let variance = if k > 1 {
        deltas.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (k - 1) as f64
    } else {
        0.0
    };
    Ok(DriftStats {
        m,
        steps,
        trials,
        accepted: k,
        mean,
        variance,
        min: deltas.iter().copied().fold(f64::INFINITY, f64::min),
        exhausted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transitive_game_always_improves() {
        let spec = RandomGoSSpec::new(200, 0.0, 1.0, 3);
        let d = random_gos_drift(&spec, 4, 30, 5, 1).unwrap();
        assert!(d.accepted > 0);
        assert!(d.min > 0.0);
    }

    #[test]
    fn positive_drift_and_shrinking_variance() {
        let spec = RandomGoSSpec::new(300, 1.0, 1.0, 0);
        let d2 = random_gos_drift(&spec, 2, 10, 20, 5).unwrap();
        let d8 = random_gos_drift(&spec, 8, 10, 20, 5).unwrap();
        assert!(d2.mean > 0.0 && d8.mean > 0.0);
        assert!(d8.variance < d2.variance);
    }

    #[test]
    fn rejects_bad_population() {
        let spec = RandomGoSSpec::new(10, 1.0, 1.0, 0);
        assert!(random_gos_drift(&spec, 0, 1, 1, 0).is_err());
        assert!(random_gos_drift(&spec, 10, 1, 1, 0).is_err());
    }
}
