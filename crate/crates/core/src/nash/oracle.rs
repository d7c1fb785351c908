//! Independent reference solver for small games: enumerate the vertices of
//! the optimal polytope, then maximise entropy over their convex hull.

use super::solver::MixedStrategy;
use crate::error::{Error, Result};
use crate::payoff::PayoffMatrix;

pub const BRUTE_FORCE_LIMIT: usize = 12;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
fn solve_linear(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[piv][col].abs() < 1e-10 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for k in col..n {
                    a[r][k] -= f * a[col][k];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Calls `f` with every `k`-subset of `0..n` in lexicographic order.
fn for_each_subset(n: usize, k: usize, f: &mut dyn FnMut(&[usize])) {
    let mut idx: Vec<usize> = (0..k).collect();
    if k > n {
        return;
    }
    loop {
        f(&idx);
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + n - k) else { return };
        idx[pos] += 1;
        for i in pos + 1..k {
            idx[i] = idx[i - 1] + 1;
        }
    }
}

/// Vertices of `{x ≥ 0, Σx = 1, Pᵀx ≥ 0}` for the restricted game.
pub fn optimal_vertices(p: &PayoffMatrix, restriction: &[usize]) -> Vec<Vec<f64>> {
    let n = restriction.len();
    let q = |i: usize, j: usize| p.get(restriction[i], restriction[j]);
    // Constraint c < n: x_c ≥ 0; c ≥ n: Σ_i x_i P_{i,c−n} ≥ 0.
    let row = |c: usize| -> Vec<f64> {
        if c < n {
            (0..n).map(|i| (i == c) as u8 as f64).collect()
        } else {
            (0..n).map(|i| q(i, c - n)).collect()
        }
    };
    let feasible = |x: &[f64]| {
        x.iter().all(|&v| v >= -1e-9) && (0..n).all(|j| (0..n).map(|i| x[i] * q(i, j)).sum::<f64>() >= -1e-9)
    };
    let mut out: Vec<Vec<f64>> = Vec::new();
    for_each_subset(2 * n, n - 1, &mut |active| {
        let mut a: Vec<Vec<f64>> = active.iter().map(|&c| row(c)).collect();
        a.push(vec![1.0; n]);
        let mut b = vec![0.0; n];
        b[n - 1] = 1.0;
        if let Some(x) = solve_linear(a, b) {
            if feasible(&x) {
                let x: Vec<f64> = x.iter().map(|&v| v.max(0.0)).collect();
                if !out.iter().any(|v| v.iter().zip(&x).all(|(a, b)| (a - b).abs() < 1e-9)) {
                    out.push(x);
                }
            }
        }
    });
    out
}

fn entropy_slope(x: &[f64], d: &[f64], g: f64) -> f64 {
    // d/dγ of −Σ y log y at y = x + γd, using Σd = 0.
    -x.iter()
        .zip(d)
        .filter(|(_, &di)| di != 0.0)
        .map(|(&xi, &di)| di * (xi + g * di).max(0.0).ln())
        .sum::<f64>()
}

/// Maximum-entropy optimal strategy of the restricted symmetric game, by
/// vertex enumeration and away-step Frank–Wolfe over the vertex hull.
pub fn brute_force_nash(p: &PayoffMatrix, restriction: &[usize]) -> Result<MixedStrategy> {
    let n = restriction.len();
    if n == 0 || n > BRUTE_FORCE_LIMIT {
        return Err(Error::invalid(format!(
            "brute force needs 1..={BRUTE_FORCE_LIMIT} strategies, got {n}"
        )));
    }
    let verts = optimal_vertices(p, restriction);
    if verts.is_empty() {
        return Err(Error::NonConvergence("no optimal vertex found".into()));
    }
    let k = verts.len();
    let mut alpha = vec![1.0 / k as f64; k];
    let mut x = vec![0.0; n];
    for (a, v) in alpha.iter().zip(&verts) {
        for i in 0..n {
            x[i] += a * v[i];
        }
    }
    for _ in 0..200_000 {
        let grad: Vec<f64> = x.iter().map(|&v| if v > 0.0 { -v.ln() - 1.0 } else { 0.0 }).collect();
        let dot = |v: &[f64]| v.iter().zip(&grad).map(|(a, b)| a * b).sum::<f64>();
        let gx = dot(&x);
        let (s, gs) = (0..k)
            .map(|t| (t, dot(&verts[t])))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let (aw, ga) = (0..k)
            .filter(|&t| alpha[t] > 0.0)
            .map(|t| (t, dot(&verts[t])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("nonempty");
        let fw_gap = gs - gx;
        if fw_gap < 1e-13 {
            break;
        }
        let toward = fw_gap >= gx - ga;
        let (d, gmax): (Vec<f64>, f64) = if toward {
            ((0..n).map(|i| verts[s][i] - x[i]).collect(), 1.0)
        } else {
            let a = alpha[aw];
            if a >= 1.0 {
                break;
            }
            ((0..n).map(|i| x[i] - verts[aw][i]).collect(), a / (1.0 - a))
        };
        let gamma = if entropy_slope(&x, &d, gmax) >= 0.0 {
            gmax
        } else {
            let (mut lo, mut hi) = (0.0, gmax);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if entropy_slope(&x, &d, mid) > 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            lo
        };
        if gamma == 0.0 {
            break;
        }
        for i in 0..n {
            x[i] = (x[i] + gamma * d[i]).max(0.0);
        }
        if toward {
            alpha.iter_mut().for_each(|a| *a *= 1.0 - gamma);
            alpha[s] += gamma;
        } else {
            alpha.iter_mut().for_each(|a| *a *= 1.0 + gamma);
            alpha[aw] -= gamma;
            if alpha[aw] < 1e-15 {
                alpha[aw] = 0.0;
            }
        }
    }
    let total: f64 = x.iter().sum();
    Ok(MixedStrategy {
        indices: restriction.to_vec(),
        weights: x.iter().map(|v| v / total).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::games::rps;

    #[test]
    fn subsets_are_enumerated() {
        let mut seen = Vec::new();
        for_each_subset(4, 2, &mut |s| seen.push(s.to_vec()));
        assert_eq!(seen.len(), 6);
        assert_eq!(seen[0], vec![0, 1]);
        assert_eq!(seen[5], vec![2, 3]);
    }

    #[test]
    fn rps_uniform() {
        let x = brute_force_nash(&rps().standardized(), &[0, 1, 2]).unwrap();
        for w in x.weights {
            assert!((w - 1.0 / 3.0).abs() < 1e-9);
        }
    }

    #[test]
    fn monotonic_pure() {
        let p = PayoffMatrix::from_rows(&[
            vec![0.0, -1.0, -1.0],
            vec![1.0, 0.0, -1.0],
            vec![1.0, 1.0, 0.0],
        ])
        .unwrap();
        let x = brute_force_nash(&p, &[0, 1, 2]).unwrap();
        assert_eq!(x.weights, vec![0.0, 0.0, 1.0]);
    }

    #[test]
    fn duplicated_rock_is_split() {
        let p = PayoffMatrix::from_rows(&[
            vec![0.0, 0.0, 1.0, -1.0],
            vec![0.0, 0.0, 1.0, -1.0],
            vec![-1.0, -1.0, 0.0, 1.0],
            vec![1.0, 1.0, -1.0, 0.0],
        ])
        .unwrap();
        let x = brute_force_nash(&p, &[0, 1, 2, 3]).unwrap();
        let want = [1.0 / 6.0, 1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0];
        for k in 0..4 {
            assert!((x.weights[k] - want[k]).abs() < 1e-5, "{:?}", x.weights);
        }
    }

    #[test]
    fn size_limit() {
        let p = crate::games::elo_game(13, 0).unwrap().standardized();
        let all: Vec<usize> = (0..13).collect();
        assert!(brute_force_nash(&p, &all).is_err());
    }
}
