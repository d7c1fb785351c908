//! Dense matrices and the antisymmetric payoff matrix of a symmetric
//! zero-sum game.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on `P + Pᵀ` accepted by [`PayoffMatrix`].
pub const ANTISYMMETRY_TOL: f64 = 1e-12;

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(Matrix {
            rows: r,
            cols: c,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.cols + j] = v;
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Sub-matrix with the given rows and columns, in the given order.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        Matrix::from_fn(rows.len(), cols.len(), |i, j| self.get(rows[i], cols[j]))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }
}

/// Antisymmetric square matrix with entries in `[-1, 1]` and an exactly zero
/// diagonal. Entry `(i, j)` is the payoff of strategy `i` against `j`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Matrix", into = "Matrix")]
pub struct PayoffMatrix(Matrix);

impl PayoffMatrix {
    /// Wraps a matrix that is already antisymmetric within
    /// [`ANTISYMMETRY_TOL`] with entries in `[-1, 1]`.
    pub fn new(m: Matrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::NotSquare {
                rows: m.rows(),
                cols: m.cols(),
            });
        }
        let n = m.rows();
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::invalid(format!("diagonal entry {i} is not zero")));
            }
            for j in 0..n {
                let v = m.get(i, j);
                if !v.is_finite() || v.abs() > 1.0 + ANTISYMMETRY_TOL {
                    return Err(Error::invalid(format!("entry ({i},{j}) = {v} outside [-1,1]")));
                }
                if (v + m.get(j, i)).abs() > ANTISYMMETRY_TOL {
                    return Err(Error::invalid(format!("entries ({i},{j}) and ({j},{i}) not antisymmetric")));
                }
            }
        }
        Ok(PayoffMatrix(m))
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(Matrix::from_rows(rows)?)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.0.get(i, j)
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        self.0.row(i)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    /// Restriction to a subset of strategies (a symmetric sub-game).
    pub fn restrict(&self, idx: &[usize]) -> PayoffMatrix {
        PayoffMatrix(self.0.select(idx, idx))
    }

    /// Mean payoff of every strategy against the full strategy set.
    pub fn row_means(&self) -> Vec<f64> {
        let n = self.len() as f64;
        (0..self.len())
            .map(|i| self.row(i).iter().sum::<f64>() / n)
            .collect()
    }
}

impl TryFrom<Matrix> for PayoffMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        PayoffMatrix::new(m)
    }
}

impl From<PayoffMatrix> for Matrix {
    fn from(p: PayoffMatrix) -> Matrix {
        p.0
    }
}

/// Symmetrises and rescales a raw payoff: `P'ᵢⱼ = (Pᵢⱼ − Pⱼᵢ) / (2 max|P|)`.
/// A zero matrix maps to the zero matrix.
pub fn standardize(raw: &Matrix) -> Result<PayoffMatrix> {
    if !raw.is_square() {
        return Err(Error::NotSquare {
            rows: raw.rows(),
            cols: raw.cols(),
        });
    }
    if raw.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid("payoff contains non-finite entries"));
    }
    let n = raw.rows();
    let scale = 2.0 * raw.max_abs();
    let m = Matrix::from_fn(n, n, |i, j| {
        if i == j || scale == 0.0 {
            0.0
        } else if i < j {
            (raw.get(i, j) - raw.get(j, i)) / scale
        } else {
            // Mirror so that antisymmetry is exact in floating point.
            -(raw.get(j, i) - raw.get(i, j)) / scale
        }
    });
    PayoffMatrix::new(m)
}

/// Indices of the first occurrence of every distinct row, plus, for every
/// survivor, the list of original indices it stands for.
pub fn dedup_rows(p: &PayoffMatrix) -> (Vec<usize>, Vec<Vec<usize>>) {
    let mut keep: Vec<usize> = Vec::new();
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut index: std::collections::HashMap<Vec<u64>, usize> = std::collections::HashMap::new();
    for i in 0..p.len() {
        // -0.0 and 0.0 compare equal as payoffs.
        let key: Vec<u64> = p.row(i).iter().map(|v| (v + 0.0).to_bits()).collect();
        match index.get(&key) {
            Some(&g) => groups[g].push(i),
            None => {
                index.insert(key, keep.len());
                keep.push(i);
                groups.push(vec![i]);
            }
        }
    }
    (keep, groups)
}
