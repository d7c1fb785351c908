//! Dense tableau simplex for `max 1ᵀy  s.t.  A y ≤ 1, y ≥ 0` with `A > 0`.
//!
//! The right-hand side is nonnegative, so the slack basis is feasible and no
//! phase one is needed. Besides solving the LP, the tableau can be
//! re-optimised for a secondary objective over the optimal face, which is
//! how essential (strictly complementary) supports are identified.

use crate::error::{Error, Result};
use crate::payoff::Matrix;

const EPS: f64 = 1e-10;

pub(crate) struct Tableau {
    m: usize,
    n: usize,
    /// Row stride: `n + m` variables plus the right-hand side.
    w: usize,
    /// `m` constraint rows, the primary objective row, the secondary row.
    t: Vec<f64>,
    basis: Vec<usize>,
    pub(crate) pivots: usize,
    max_pivots: usize,
}

impl Tableau {
    pub(crate) fn new(a: &Matrix, max_pivots: usize) -> Self {
        let (m, n) = (a.rows(), a.cols());
        let w = n + m + 1;
        let mut t = vec![0.0; (m + 2) * w];
        for i in 0..m {
            let row = &mut t[i * w..(i + 1) * w];
            row[..n].copy_from_slice(a.row(i));
            row[n + i] = 1.0;
            row[w - 1] = 1.0;
        }
        for j in 0..n {
            t[m * w + j] = -1.0;
        }
        Tableau {
            m,
            n,
            w,
            t,
            basis: (n..n + m).collect(),
            pivots: 0,
            max_pivots,
        }
    }

    #[inline]
    fn at(&self, i: usize, j: usize) -> f64 {
        self.t[i * self.w + j]
    }

    fn rhs(&self, i: usize) -> f64 {
        self.at(i, self.w - 1)
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let w = self.w;
        let p = self.at(r, c);
        for v in &mut self.t[r * w..(r + 1) * w] {
            *v /= p;
        }
        let (before, rest) = self.t.split_at_mut(r * w);
        let (prow, after) = rest.split_at_mut(w);
        let update = |row: &mut [f64]| {
            let f = row[c];
            if f != 0.0 {
                for (x, &y) in row.iter_mut().zip(prow.iter()) {
                    *x -= f * y;
                }
                row[c] = 0.0;
            }
        };
        before.chunks_mut(w).for_each(update);
        after.chunks_mut(w).for_each(update);
        self.basis[r] = c;
        self.pivots += 1;
    }

    /// Leaving row for entering column `c`, or `None` if unbounded.
    ///
    /// Ties in the minimum ratio are broken lexicographically on the rows
    /// of the basis inverse (the slack columns) scaled by the pivot entry.
    /// The starting basis is the identity, so every row starts
    /// lexicographically positive and the simplex cannot cycle, whatever
    /// the entering rule.
    fn ratio_test(&self, c: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for i in 0..self.m {
            let a = self.at(i, c);
            if a <= 1e-9 {
                continue;
            }
            let ratio = self.rhs(i).max(0.0) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let better = if ratio < br - 1e-12 {
                        true
                    } else if ratio <= br + 1e-12 {
                        self.lex_less(i, bi, c)
                    } else {
                        false
                    };
                    Some(if better { (i, ratio) } else { (bi, br) })
                }
            };
        }
        best.map(|b| b.0)
    }

    /// Whether row `i` of the basis inverse, divided by its entry in column
    /// `c`, is lexicographically smaller than row `k`'s.
    fn lex_less(&self, i: usize, k: usize, c: usize) -> bool {
        let (ai, ak) = (self.at(i, c), self.at(k, c));
        for s in self.n..self.n + self.m {
            let (x, y) = (self.at(i, s) / ai, self.at(k, s) / ak);
            if x < y - 1e-12 {
                return true;
            }
            if x > y + 1e-12 {
                return false;
            }
        }
        false
    }

    /// Runs the simplex on objective row `obj`; entering columns must pass
    /// `allowed`.
    fn optimise(&mut self, obj: usize, allowed: &dyn Fn(&Self, usize) -> bool) -> Result<()> {
        let nv = self.n + self.m;
        loop {
            let mut enter = None;
            let mut best = -EPS;
            for k in 0..nv {
                let d = self.at(obj, k);
                if d < best && allowed(self, k) {
                    enter = Some(k);
                    best = d;
                }
            }
            let Some(c) = enter else { return Ok(()) };
            let Some(r) = self.ratio_test(c) else {
                return Err(Error::NonConvergence("linear program is unbounded".into()));
            };
            if self.pivots >= self.max_pivots {
                return Err(Error::NonConvergence(format!(
                    "simplex exceeded {} pivots",
                    self.max_pivots
                )));
            }
            self.pivot(r, c);
        }
    }

    pub(crate) fn solve(&mut self) -> Result<()> {
        self.optimise(self.m, &|_, _| true)
    }

    /// Primary objective value.
    pub(crate) fn objective(&self) -> f64 {
        self.rhs(self.m)
    }

    /// Values of all `n + m` variables (structural first, then slacks).
    pub(crate) fn values(&self) -> Vec<f64> {
        let mut v = vec![0.0; self.n + self.m];
        for (i, &b) in self.basis.iter().enumerate() {
            v[b] = self.rhs(i).max(0.0);
        }
        v
    }

    /// Primary reduced costs of all variables. For a slack these are the
    /// dual values of the corresponding constraint.
    pub(crate) fn reduced_costs(&self) -> Vec<f64> {
        (0..self.n + self.m).map(|k| self.at(self.m, k)).collect()
    }

    /// Maximises `Σ weight[k]·var[k]` over the optimal face of the primary
    /// problem and returns the variable values at the new vertex.
    pub(crate) fn optimise_on_face(&mut self, weight: &[f64]) -> Result<Vec<f64>> {
        let (m, w) = (self.m, self.w);
        let row = (m + 1) * w;
        for k in 0..w {
            let mut d = if k < w - 1 { -weight[k] } else { 0.0 };
            for i in 0..m {
                let cb = weight[self.basis[i]];
                if cb != 0.0 {
                    d += cb * self.at(i, k);
                }
            }
            self.t[row + k] = d;
        }
        // Columns with a nonzero primary reduced cost are fixed at zero on
        // the optimal face.
        let tol = 1e-9;
        self.optimise(m + 1, &|s: &Self, k| s.at(m, k).abs() <= tol)?;
        Ok(self.values())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_lp() {
        // max y1 + y2  s.t. 2y1 + y2 <= 1, y1 + 3y2 <= 1  → (0.4, 0.2)
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let mut t = Tableau::new(&a, 100);
        t.solve().unwrap();
        let v = t.values();
        assert!((v[0] - 0.4).abs() < 1e-12 && (v[1] - 0.2).abs() < 1e-12);
        assert!((t.objective() - 0.6).abs() < 1e-12);
        let d = t.reduced_costs();
        // duals: u = (0.4, 0.2)
        assert!((d[2] - 0.4).abs() < 1e-12 && (d[3] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn pivot_cap_is_reported() {
        let a = Matrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let mut t = Tableau::new(&a, 1);
        assert!(matches!(t.solve(), Err(Error::NonConvergence(_))));
    }
}
