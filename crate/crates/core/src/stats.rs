//! One-sample Kolmogorov–Smirnov test and the random Game of Skill row-mean
//! experiment built on it.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::error::{Error, Result};
use crate::games::{random_game_of_skill, RandomGoSSpec};
use crate::rng;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KsResult {
    /// `sup |F_n − F|`.
    pub statistic: f64,
    pub p_value: f64,
    pub n: usize,
}

/// Survival function of the Kolmogorov distribution,
/// `Q(λ) = 2 Σ_{k≥1} (−1)^{k−1} e^{−2k²λ²}`.
pub fn kolmogorov_sf(lambda: f64) -> f64 {
    if lambda < 0.2 {
        return 1.0;
    }
    let mut sum = 0.0;
    for k in 1..=100 {
        let k = f64::from(k);
        let term = (-2.0 * k * k * lambda * lambda).exp();
        sum += if k as u32 % 2 == 1 { term } else { -term };
        if term < 1e-16 {
            break;
        }
    }
    (2.0 * sum).clamp(0.0, 1.0)
}

/// Tests `samples` against the continuous CDF `cdf`. The p-value uses the
/// asymptotic distribution with Stephens' small-sample correction.
pub fn ks_test(samples: &[f64], cdf: impl Fn(f64) -> f64) -> Result<KsResult> {
    if samples.is_empty() || samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("KS test needs finite samples"));
    }
    let mut x = samples.to_vec();
    x.sort_by(f64::total_cmp);
    let n = x.len() as f64;
    let mut d = 0.0_f64;
    for (i, &v) in x.iter().enumerate() {
        let f = cdf(v);
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    let sn = n.sqrt();
    Ok(KsResult {
        statistic: d,
        p_value: kolmogorov_sf((sn + 0.12 + 0.11 / sn) * d),
        n: x.len(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RowMeanExperiment {
    /// `(row mean of strategy k) − S_k`, one per sampled game.
    pub residuals: Vec<f64>,
    /// Against `Normal(0, 2σ²/n)`.
    pub ks: KsResult,
    /// Sample variance of the residuals divided by `σ²/n`.
    pub variance_ratio: f64,
}

/// Draws `draws` random Games of Skill with `σ_W = σ_S = sigma` and tests
/// whether the mean payoff of strategy `k` is distributed as
/// `Normal(S_k, 2σ²/n)`.
pub fn gos_row_mean_experiment(n: usize, sigma: f64, k: usize, draws: usize, seed: u64) -> Result<RowMeanExperiment> {
    if k >= n || draws < 2 {
        return Err(Error::invalid("need k < n and at least two draws"));
    }
    let mut residuals = Vec::with_capacity(draws);
    for d in 0..draws {
        let spec = RandomGoSSpec::new(n, sigma, sigma, rng::derive_seed(seed, &[d as u64]));
        let g = random_game_of_skill(&spec)?;
        let mean = g.game.raw.row(k).iter().sum::<f64>() / n as f64;
        residuals.push(mean - g.skill[k]);
    }
    let scale = sigma * sigma / n as f64;
    let normal = Normal::new(0.0, (2.0 * scale).sqrt()).map_err(|e| Error::invalid(e.to_string()))?;
    let ks = ks_test(&residuals, |x| normal.cdf(x))?;
    let m = residuals.iter().sum::<f64>() / draws as f64;
    let var = residuals.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (draws - 1) as f64;
    Ok(RowMeanExperiment {
        residuals,
        ks,
        variance_ratio: var / scale,
    })
}
