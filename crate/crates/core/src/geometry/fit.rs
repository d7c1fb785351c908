//! Skew-normal profile fit.
//!
//! Model: `ψ(x) = σ² · 2φ(z) Φ(αz)` with `z = (x − μ)/σ²`, and
//! `ψ′ = aψ + b`. For fixed `(μ, σ, α)` the affine part is an ordinary
//! least-squares problem, so the search runs Nelder–Mead over
//! `(μ, ln σ, α)` only.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::error::{Error, Result};

pub const MIN_POINTS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileFit {
    pub mu: f64,
    pub sigma: f64,
    pub alpha: f64,
    pub a: f64,
    pub b: f64,
    /// `Σ (ψ′(x_i) − y_i)²` at the fitted parameters.
    pub residual: f64,
}

pub fn skew_normal_shape(x: f64, mu: f64, sigma: f64, alpha: f64) -> f64 {
    let s2 = sigma * sigma;
    let z = (x - mu) / s2;
    let pdf = (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let cdf = 0.5 * erfc(-alpha * z / std::f64::consts::SQRT_2);
    s2 * 2.0 * pdf * cdf
}

impl ProfileFit {
    pub fn eval(&self, x: f64) -> f64 {
        self.a * skew_normal_shape(x, self.mu, self.sigma, self.alpha) + self.b
    }

    /// Location of the fitted maximum on `[lo, hi]` (grid plus golden
    /// section refinement).
    pub fn peak(&self, lo: f64, hi: f64) -> f64 {
        let grid: usize = 2000;
        let step = (hi - lo) / grid as f64;
        let k = (0..=grid)
            .max_by(|&i, &j| {
                self.eval(lo + i as f64 * step)
                    .total_cmp(&self.eval(lo + j as f64 * step))
            })
            .unwrap_or(0);
        let (mut a, mut b) = (lo + k.saturating_sub(1) as f64 * step, (lo + (k + 1) as f64 * step).min(hi));
        let g = (5f64.sqrt() - 1.0) / 2.0;
        for _ in 0..100 {
            let c = b - g * (b - a);
            let d = a + g * (b - a);
            if self.eval(c) >= self.eval(d) {
                b = d;
            } else {
                a = c;
            }
        }
        0.5 * (a + b)
    }
}

/// Best affine coefficients and residual for fixed shape values `f`.
fn affine(f: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = f.len() as f64;
    let mf = f.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sff: f64 = f.iter().map(|v| (v - mf) * (v - mf)).sum();
    let sfy: f64 = f.iter().zip(y).map(|(a, b)| (a - mf) * (b - my)).sum();
    let a = if sff > 1e-300 * n && sff.is_finite() { sfy / sff } else { 0.0 };
    let b = my - a * mf;
    let r = f.iter().zip(y).map(|(fv, yv)| (a * fv + b - yv).powi(2)).sum();
    (a, b, r)
}

fn loss(theta: &[f64; 3], x: &[f64], y: &[f64]) -> f64 {
    let sigma = theta[1].exp();
    if !sigma.is_finite() || sigma <= 0.0 {
        return f64::INFINITY;
    }
    let f: Vec<f64> = x.iter().map(|&v| skew_normal_shape(v, theta[0], sigma, theta[2])).collect();
    let r = affine(&f, y).2;
    if r.is_finite() {
        r
    } else {
        f64::INFINITY
    }
}

fn nelder_mead(f: &dyn Fn(&[f64; 3]) -> f64, start: [f64; 3], step: [f64; 3], iters: usize) -> ([f64; 3], f64) {
    let mut pts: Vec<([f64; 3], f64)> = vec![(start, f(&start))];
    for k in 0..3 {
        let mut p = start;
        p[k] += step[k];
        pts.push((p, f(&p)));
    }
    for _ in 0..iters {
        pts.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = (pts[3].1 - pts[0].1).abs();
        if spread <= 1e-15 * (1.0 + pts[0].1.abs()) && pts[3].1.is_finite() {
            let size = (1..4)
                .map(|i| (0..3).map(|k| (pts[i].0[k] - pts[0].0[k]).abs()).fold(0.0, f64::max))
                .fold(0.0, f64::max);
            if size < 1e-10 {
                break;
            }
        }
        let mut c = [0.0; 3];
        for p in &pts[..3] {
            for k in 0..3 {
                c[k] += p.0[k] / 3.0;
            }
        }
        let at = |t: f64| -> [f64; 3] {
            let mut q = [0.0; 3];
            for k in 0..3 {
                q[k] = c[k] + t * (pts[3].0[k] - c[k]);
            }
            q
        };
        let r = at(-1.0);
        let fr = f(&r);
        if fr < pts[0].1 {
            let e = at(-2.0);
            let fe = f(&e);
            pts[3] = if fe < fr { (e, fe) } else { (r, fr) };
        } else if fr < pts[2].1 {
            pts[3] = (r, fr);
        } else {
            let (q, fq) = if fr < pts[3].1 {
                let q = at(-0.5);
                (q, f(&q))
            } else {
                let q = at(0.5);
                (q, f(&q))
            };
            if fq < pts[3].1.min(fr) {
                pts[3] = (q, fq);
            } else {
                let best = pts[0].0;
                for p in pts.iter_mut().skip(1) {
                    for k in 0..3 {
                        p.0[k] = best[k] + 0.5 * (p.0[k] - best[k]);
                    }
                    p.1 = f(&p.0);
                }
            }
        }
    }
    pts.sort_by(|a, b| a.1.total_cmp(&b.1));
    pts[0]
}

/// The eight documented starting points: `μ` at the highest `y` or at the
/// mean of `x`; `σ²` equal to the standard deviation or a quarter of the
/// range of `x`; `α = ±1`.
pub fn initial_guesses(x: &[f64], y: &[f64]) -> Vec<[f64; 3]> {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let sd = (x.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n).sqrt();
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    let top = (0..x.len()).max_by(|&i, &j| y[i].total_cmp(&y[j])).unwrap_or(0);
    let mut out = Vec::new();
    for mu in [x[top], mean] {
        for s2 in [sd, (hi - lo) / 4.0] {
            for alpha in [1.0, -1.0] {
                out.push([mu, 0.5 * s2.max(1e-12).ln(), alpha]);
            }
        }
    }
    out
}

/// Least-squares fit of `ψ′` to the points. Deterministic.
pub fn fit_spinning_top(x: &[f64], y: &[f64]) -> Result<ProfileFit> {
    if x.len() != y.len() {
        return Err(Error::invalid("x and y differ in length"));
    }
    if x.len() < MIN_POINTS {
        return Err(Error::invalid(format!("need at least {MIN_POINTS} points")));
    }
    if x.iter().chain(y).any(|v| !v.is_finite()) {
        return Err(Error::invalid("non-finite profile data"));
    }
    let (lo, hi) = x.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| (a.min(v), b.max(v)));
    if hi - lo <= 0.0 {
        return Err(Error::invalid("all x values are equal"));
    }
    let obj = |t: &[f64; 3]| loss(t, x, y);
    let range = hi - lo;
    let mut best: Option<([f64; 3], f64)> = None;
    for start in initial_guesses(x, y) {
        let mut cur = (start, obj(&start));
        // Restarting the simplex a few times guards against collapse.
        for _ in 0..4 {
            let next = nelder_mead(&obj, cur.0, [0.1 * range, 0.3, 0.5], 4000);
            let stalled = next.1 >= cur.1 - 1e-15 * (1.0 + cur.1.abs());
            if next.1 <= cur.1 {
                cur = next;
            }
            if stalled {
                break;
            }
        }
        if best.is_none_or(|b| cur.1 < b.1) {
            best = Some(cur);
        }
    }
    let (theta, _) = best.expect("eight starts");
    let sigma = theta[1].exp();
    let f: Vec<f64> = x.iter().map(|&v| skew_normal_shape(v, theta[0], sigma, theta[2])).collect();
    let (a, b, residual) = affine(&f, y);
    Ok(ProfileFit {
        mu: theta[0],
        sigma,
        alpha: theta[2],
        a,
        b,
        residual,
    })
}
