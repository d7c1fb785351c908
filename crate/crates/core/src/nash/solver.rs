//! Maximum-entropy equilibria of two-player zero-sum matrix games.
//!
//! 1. A simplex solve of the shifted game followed by re-optimisation over
//!    the optimal face identifies the *essential* supports: the strategies
//!    that are played with positive weight by some optimal mixture.
//! 2. The maximum-entropy optimal mixture has exactly that support. It is
//!    found by projected Newton on the convex dual
//!    `min_λ log Σ_i exp((Mλ)_i) − v·Σλ`, with `λ_j` free for essential
//!    opponent strategies (their constraint is tight on the whole optimal
//!    set) and `λ_j ≥ 0` for the rest.

use serde::{Deserialize, Serialize};

use super::simplex::Tableau;
use crate::error::{Error, Result};
use crate::payoff::{Matrix, PayoffMatrix};

pub const DEFAULT_TOL: f64 = 1e-4;
pub const DEFAULT_MAX_ITER: usize = 100_000;

/// Values below this are treated as zero when reading the simplex tableau.
const SUPPORT_EPS: f64 = 1e-10;
const REG: f64 = 1e-11;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Accepted exploitability of returned mixtures.
    pub tol: f64,
    /// Cap on simplex pivots and on Newton iterations (each).
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: DEFAULT_TOL,
            max_iter: DEFAULT_MAX_ITER,
        }
    }
}

/// Probability weights over an ordered list of strategy indices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixedStrategy {
    pub indices: Vec<usize>,
    pub weights: Vec<f64>,
}

impl MixedStrategy {
    pub fn pure(index: usize) -> Self {
        MixedStrategy {
            indices: vec![index],
            weights: vec![1.0],
        }
    }

    /// Weights laid out over `0..n`.
    pub fn dense(&self, n: usize) -> Vec<f64> {
        let mut d = vec![0.0; n];
        for (&i, &w) in self.indices.iter().zip(&self.weights) {
            d[i] = w;
        }
        d
    }

    pub fn weight_of(&self, index: usize) -> f64 {
        self.indices
            .iter()
            .position(|&i| i == index)
            .map_or(0.0, |k| self.weights[k])
    }

    pub fn entropy(&self) -> f64 {
        self.weights
            .iter()
            .filter(|&&w| w > 0.0)
            .map(|&w| -w * w.ln())
            .sum()
    }

    /// Indices carrying positive weight.
    pub fn support(&self) -> Vec<usize> {
        self.indices
            .iter()
            .zip(&self.weights)
            .filter(|(_, &w)| w > 0.0)
            .map(|(&i, _)| i)
            .collect()
    }
}

/// Solution of a matrix game `M` where the row player maximises `pᵀMq`.
#[derive(Clone, Debug)]
#[allow(dead_code)]
pub(crate) struct GameSolution {
    pub value: f64,
    pub row_support: Vec<bool>,
    pub col_support: Vec<bool>,
    pub row: Vec<f64>,
    pub col: Vec<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Class {
    Unknown,
    In,
    Out,
}

/// Game value and essential supports of `m`. With `symmetric` the game
/// must be antisymmetric and row `i` is identified with column `i`.
fn essential_supports(m: &Matrix, symmetric: bool, opts: &SolverOptions) -> Result<(f64, Vec<bool>, Vec<bool>)> {
    let (r, c) = (m.rows(), m.cols());
    let shift = m.max_abs() + 1.0;
    let a = Matrix::from_fn(r, c, |i, j| m.get(i, j) + shift);
    let mut tab = Tableau::new(&a, opts.max_iter);
    tab.solve()?;
    let value = 1.0 / tab.objective() - shift;

    let mut cols = vec![Class::Unknown; c];
    let mut rows = vec![Class::Unknown; r];
    // Column j: y_j > 0 puts it in; a positive reduced cost (some optimal
    // row mixture makes it strictly worse than the value) puts it out.
    // Row i: a positive slack puts it out, a positive dual puts it in.
    let read = |vals: &[f64], red: Option<&[f64]>, cols: &mut [Class], rows: &mut [Class]| {
        for j in 0..c {
            if vals[j] > SUPPORT_EPS {
                cols[j] = Class::In;
            } else if cols[j] == Class::Unknown && red.is_some_and(|d| d[j] > SUPPORT_EPS) {
                cols[j] = Class::Out;
            }
        }
        for i in 0..r {
            if vals[c + i] > SUPPORT_EPS {
                rows[i] = Class::Out;
            } else if rows[i] == Class::Unknown && red.is_some_and(|d| d[c + i] > SUPPORT_EPS) {
                rows[i] = Class::In;
            }
        }
        if symmetric {
            for k in 0..c {
                let merged = match (cols[k], rows[k]) {
                    (Class::In, _) | (_, Class::In) => Class::In,
                    (Class::Out, _) | (_, Class::Out) => Class::Out,
                    _ => Class::Unknown,
                };
                cols[k] = merged;
                rows[k] = merged;
            }
        }
    };
    let reduced = tab.reduced_costs();
    read(&tab.values(), Some(&reduced), &mut cols, &mut rows);

    loop {
        let unknown_cols: Vec<usize> = (0..c).filter(|&j| cols[j] == Class::Unknown).collect();
        let unknown_rows: Vec<usize> = (0..r).filter(|&i| rows[i] == Class::Unknown).collect();
        if unknown_cols.is_empty() && unknown_rows.is_empty() {
            break;
        }
        let mut weight = vec![0.0; c + r];
        for &j in &unknown_cols {
            weight[j] = 1.0;
        }
        for &i in &unknown_rows {
            weight[c + i] = 1.0;
        }
        let vals = tab.optimise_on_face(&weight)?;
        let before = (cols.clone(), rows.clone());
        read(&vals, None, &mut cols, &mut rows);
        if (cols.clone(), rows.clone()) == before {
            // Nothing on the optimal face makes the remaining variables
            // positive, so by strict complementarity the remaining columns
            // are never played and the remaining rows always bind.
            for j in unknown_cols {
                cols[j] = Class::Out;
            }
            for i in unknown_rows {
                rows[i] = if symmetric { Class::Out } else { Class::In };
            }
        }
    }
    // In the tableau the LP variables are the column player's; its rows are
    // the row player's constraints.
    Ok((
        value,
        rows.iter().map(|&k| k == Class::In).collect(),
        cols.iter().map(|&k| k == Class::In).collect(),
    ))
}

/// Maximum-entropy `p` over the rows of `m` subject to `(mᵀp)_j = v` for
/// `eq[j]` and `(mᵀp)_j ≥ v` otherwise.
fn max_entropy_face(m: &Matrix, v: f64, eq: &[bool], opts: &SolverOptions) -> Result<Vec<f64>> {
    let (r, c) = (m.rows(), m.cols());
    if r == 1 {
        return Ok(vec![1.0]);
    }
    let eval = |lam: &[f64]| -> (f64, Vec<f64>, Vec<f64>) {
        let z: Vec<f64> = (0..r)
            .map(|i| m.row(i).iter().zip(lam).map(|(a, b)| a * b).sum())
            .collect();
        let zmax = z.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mut p: Vec<f64> = z.iter().map(|&x| (x - zmax).exp()).collect();
        let s: f64 = p.iter().sum();
        p.iter_mut().for_each(|x| *x /= s);
        let lsum: f64 = lam.iter().sum();
        let reg: f64 = lam.iter().map(|x| x * x).sum::<f64>() * REG / 2.0;
        let d = zmax + s.ln() - v * lsum + reg;
        let mut g = vec![-v; c];
        for i in 0..r {
            let pi = p[i];
            for (gj, &a) in g.iter_mut().zip(m.row(i)) {
                *gj += pi * a;
            }
        }
        for (gj, &l) in g.iter_mut().zip(lam) {
            *gj += REG * l;
        }
        (d, p, g)
    };

    let mut lam = vec![0.0; c];
    let (mut d, mut p, mut g) = eval(&lam);
    // Consecutive steps whose decrease is lost in rounding.
    let mut stalled = 0;
    for _ in 0..opts.max_iter {
        let pg: Vec<f64> = (0..c)
            .map(|j| if !eq[j] && lam[j] <= 0.0 && g[j] > 0.0 { 0.0 } else { g[j] })
            .collect();
        let pg_norm = pg.iter().fold(0.0_f64, |a, x| a.max(x.abs()));
        if pg_norm < 1e-12 {
            break;
        }
        let eps_act = pg_norm.min(1e-6);
        let free: Vec<bool> = (0..c)
            .map(|j| eq[j] || !(lam[j] <= eps_act && g[j] > 0.0))
            .collect();
        let fidx: Vec<usize> = (0..c).filter(|&j| free[j]).collect();

        // Conjugate gradients on the free block of the Hessian
        // H = Mᵀ (diag p − p pᵀ) M + REG·I.
        let hv = |x: &[f64]| -> Vec<f64> {
            let u: Vec<f64> = (0..r)
                .map(|i| {
                    let row = m.row(i);
                    fidx.iter().zip(x).map(|(&j, &xv)| row[j] * xv).sum()
                })
                .collect();
            let s: f64 = p.iter().zip(&u).map(|(a, b)| a * b).sum();
            let wv: Vec<f64> = (0..r).map(|i| p[i] * (u[i] - s)).collect();
            let mut out: Vec<f64> = x.iter().map(|&xv| REG * xv).collect();
            for i in 0..r {
                let row = m.row(i);
                let wi = wv[i];
                if wi != 0.0 {
                    for (o, &j) in out.iter_mut().zip(&fidx) {
                        *o += wi * row[j];
                    }
                }
            }
            out
        };
        let b: Vec<f64> = fidx.iter().map(|&j| g[j]).collect();
        let bnorm = b.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut x = vec![0.0; b.len()];
        if bnorm > 0.0 {
            let target = (bnorm * bnorm.sqrt().min(0.1)).max(1e-15);
            let mut res = b.clone();
            let mut dir = res.clone();
            let mut rr: f64 = res.iter().map(|x| x * x).sum();
            for _ in 0..(2 * b.len()).clamp(10, 2000) {
                let hd = hv(&dir);
                let dhd: f64 = dir.iter().zip(&hd).map(|(a, b)| a * b).sum();
                if dhd <= 0.0 {
                    break;
                }
                let alpha = rr / dhd;
                for k in 0..x.len() {
                    x[k] += alpha * dir[k];
                    res[k] -= alpha * hd[k];
                }
                let rr_new: f64 = res.iter().map(|x| x * x).sum();
                if rr_new.sqrt() <= target {
                    break;
                }
                let beta = rr_new / rr;
                rr = rr_new;
                for k in 0..dir.len() {
                    dir[k] = res[k] + beta * dir[k];
                }
            }
            if x.iter().all(|&v| v == 0.0) {
                x = b.clone();
            }
        }
        let mut step = g.clone();
        for (k, &j) in fidx.iter().enumerate() {
            step[j] = x[k];
        }

        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..60 {
            let cand: Vec<f64> = (0..c)
                .map(|j| {
                    let t = lam[j] - alpha * step[j];
                    if eq[j] {
                        t
                    } else {
                        t.max(0.0)
                    }
                })
                .collect();
            let (dc, pc, gc) = eval(&cand);
            let decrease: f64 = (0..c).map(|j| g[j] * (lam[j] - cand[j])).sum();
            if dc <= d - 1e-4 * decrease && decrease > 0.0 {
                stalled = if d - dc <= 1e-14 * (1.0 + d.abs()) { stalled + 1 } else { 0 };
                lam = cand;
                d = dc;
                p = pc;
                g = gc;
                accepted = true;
                break;
            }
            alpha *= 0.5;
        }
        if !accepted || stalled >= 3 {
            // No further decrease representable in floating point.
            break;
        }
    }
    let worst = (0..c)
        .map(|j| if eq[j] { -g[j].abs() } else { g[j].min(0.0) })
        .fold(0.0_f64, f64::min);
    if -worst > opts.tol {
        return Err(Error::NonConvergence(format!(
            "maximum-entropy refinement violates optimality by {:.3e}",
            -worst
        )));
    }
    Ok(p)
}

/// Solves `m` (rows maximise) and selects maximum-entropy optimal mixtures
/// for both players.
pub(crate) fn solve_game(m: &Matrix, opts: &SolverOptions) -> Result<GameSolution> {
    let (value, row_support, col_support) = essential_supports(m, false, opts)?;
    let rows: Vec<usize> = (0..m.rows()).filter(|&i| row_support[i]).collect();
    let cols: Vec<usize> = (0..m.cols()).filter(|&j| col_support[j]).collect();
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::NonConvergence("empty equilibrium support".into()));
    }
    let all_cols: Vec<usize> = (0..m.cols()).collect();
    let p = max_entropy_face(&m.select(&rows, &all_cols), value, &col_support, opts)?;
    let neg_t = Matrix::from_fn(cols.len(), m.rows(), |a, i| -m.get(i, cols[a]));
    let q = max_entropy_face(&neg_t, -value, &row_support, opts)?;
    let mut row = vec![0.0; m.rows()];
    for (k, &i) in rows.iter().enumerate() {
        row[i] = p[k];
    }
    let mut col = vec![0.0; m.cols()];
    for (k, &j) in cols.iter().enumerate() {
        col[j] = q[k];
    }
    Ok(GameSolution {
        value,
        row_support,
        col_support,
        row,
        col,
    })
}

/// Maximum-entropy equilibrium of the symmetric game restricted to
/// `restriction`, plus its essential support (aligned with `restriction`).
pub(crate) fn solve_symmetric(
    p: &PayoffMatrix,
    restriction: &[usize],
    opts: &SolverOptions,
) -> Result<(MixedStrategy, Vec<bool>)> {
    if restriction.is_empty() {
        return Err(Error::invalid("empty restriction"));
    }
    let sub = p.matrix().select(restriction, restriction);
    let (_, support, _) = essential_supports(&sub, true, opts)?;
    let idx: Vec<usize> = (0..restriction.len()).filter(|&k| support[k]).collect();
    if idx.is_empty() {
        return Err(Error::NonConvergence("empty equilibrium support".into()));
    }
    let all: Vec<usize> = (0..restriction.len()).collect();
    let w = max_entropy_face(&sub.select(&idx, &all), 0.0, &support, opts)?;
    let mut weights = vec![0.0; restriction.len()];
    for (k, &i) in idx.iter().enumerate() {
        weights[i] = w[k];
    }
    let mix = MixedStrategy {
        indices: restriction.to_vec(),
        weights,
    };
    let expl = exploitability(p, &mix);
    if expl > opts.tol {
        return Err(Error::NonConvergence(format!("exploitability {expl:.3e} exceeds tolerance")));
    }
    Ok((mix, support))
}

/// Maximum-entropy Nash equilibrium of the symmetric game restricted to
/// `restriction`. Weights are aligned with `restriction`.
pub fn max_entropy_nash(p: &PayoffMatrix, restriction: &[usize], opts: &SolverOptions) -> Result<MixedStrategy> {
    solve_symmetric(p, restriction, opts).map(|(m, _)| m)
}

/// Best payoff any pure strategy of the restricted game achieves against
/// `x`; an equilibrium has exploitability 0.
pub fn exploitability(p: &PayoffMatrix, x: &MixedStrategy) -> f64 {
    x.indices
        .iter()
        .map(|&j| {
            x.indices
                .iter()
                .zip(&x.weights)
                .map(|(&i, &w)| w * p.get(j, i))
                .sum::<f64>()
        })
        .fold(0.0_f64, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::rps;

    fn all(n: usize) -> Vec<usize> {
        (0..n).collect()
    }

    #[test]
    fn rps_is_uniform() {
        let p = rps().standardized();
        let x = max_entropy_nash(&p, &all(3), &SolverOptions::default()).unwrap();
        for w in x.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn dominant_strategy() {
        let p = PayoffMatrix::from_rows(&[vec![0.0, 1.0], vec![-1.0, 0.0]]).unwrap();
        let x = max_entropy_nash(&p, &all(2), &SolverOptions::default()).unwrap();
        assert_eq!(x.weights, vec![1.0, 0.0]);
    }

    #[test]
    fn rps_plus_loser() {
        let p = PayoffMatrix::from_rows(&[
            vec![0.0, 1.0, -1.0, 1.0],
            vec![-1.0, 0.0, 1.0, 1.0],
            vec![1.0, -1.0, 0.0, 1.0],
            vec![-1.0, -1.0, -1.0, 0.0],
        ])
        .unwrap();
        let x = max_entropy_nash(&p, &all(4), &SolverOptions::default()).unwrap();
        for k in 0..3 {
            assert!((x.weights[k] - 1.0 / 3.0).abs() < 1e-9);
        }
        assert_eq!(x.weights[3], 0.0);
    }

    #[test]
    fn restriction_is_respected() {
        let p = rps().standardized();
        let x = max_entropy_nash(&p, &[0, 1], &SolverOptions::default()).unwrap();
        assert_eq!(x.indices, vec![0, 1]);
        assert_eq!(x.weights, vec![1.0, 0.0]);
    }

    #[test]
    fn degenerate_ties_spread_weight() {
        // Two identical copies of rock: maximum entropy splits rock's weight.
        let p = PayoffMatrix::from_rows(&[
            vec![0.0, 0.0, 1.0, -1.0],
            vec![0.0, 0.0, 1.0, -1.0],
            vec![-1.0, -1.0, 0.0, 1.0],
            vec![1.0, 1.0, -1.0, 0.0],
        ])
        .unwrap();
        let x = max_entropy_nash(&p, &all(4), &SolverOptions::default()).unwrap();
        let want = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
        for k in 0..4 {
            assert!((x.weights[k] - want[k]).abs() < 1e-7, "{:?}", x.weights);
        }
    }

    #[test]
    fn asymmetric_game() {
        // Matching pennies with a dominated third row.
        let m = Matrix::from_rows(&[vec![1.0, -1.0], vec![-1.0, 1.0], vec![-1.0, -1.0]]).unwrap();
        let s = solve_game(&m, &SolverOptions::default()).unwrap();
        assert!(s.value.abs() < 1e-12);
        assert!((s.row[0] - 0.5).abs() < 1e-9 && s.row[2] == 0.0);
        assert!((s.col[0] - 0.5).abs() < 1e-9);
        assert_eq!(s.row_support, vec![true, true, false]);
    }
}
