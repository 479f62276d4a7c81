//! Minimal dense matrix plus an exact-capable Gaussian solver.
//!
//! The solver is generic over [`Scalar`] so the same elimination runs in
//! `f64` for fast policy evaluation and in rationals where exactness
//! matters.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Clone> Mat<S> {
    pub fn filled(rows: usize, cols: usize, value: S) -> Self {
        Mat {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> S) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Mat { rows, cols, data }
    }

    /// Build from pre-computed rows; every row must have the same length.
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(nrows * ncols);
        for row in rows {
            assert_eq!(row.len(), ncols, "ragged rows");
            data.extend(row);
        }
        Mat {
            rows: nrows,
            cols: ncols,
            data,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[S] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn iter(&self) -> impl Iterator<Item = &S> {
        self.data.iter()
    }

    pub fn map<T>(&self, f: impl Fn(&S) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<S> Index<(usize, usize)> for Mat<S> {
    type Output = S;

    fn index(&self, (r, c): (usize, usize)) -> &S {
        &self.data[r * self.cols + c]
    }
}

impl<S> IndexMut<(usize, usize)> for Mat<S> {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut S {
        &mut self.data[r * self.cols + c]
    }
}

/// Solve `a x = b` by Gaussian elimination with partial pivoting.
///
/// Exact when `S` is a rational type; the pivot choice by largest absolute
/// value is only a conditioning heuristic there.
pub fn solve_linear<S: Scalar>(a: &Mat<S>, b: &[S]) -> Result<Vec<S>> {
    let n = a.rows();
    if a.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "linear system {}x{} with rhs of length {}",
            a.rows(),
            a.cols(),
            b.len()
        )));
    }

    let mut m = a.clone();
    let mut rhs = b.to_vec();

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| {
                m[(i, col)]
                    .abs()
                    .partial_cmp(&m[(j, col)].abs())
                    .expect("unordered pivot")
            })
            .expect("empty pivot range");
        if m[(pivot_row, col)].is_zero() {
            return Err(Error::Numeric("singular linear system".into()));
        }
        if pivot_row != col {
            for c in 0..n {
                let tmp = m[(pivot_row, c)].clone();
                m[(pivot_row, c)] = m[(col, c)].clone();
                m[(col, c)] = tmp;
            }
            rhs.swap(pivot_row, col);
        }

        let pivot = m[(col, col)].clone();
        for row in col + 1..n {
            if m[(row, col)].is_zero() {
                continue;
            }
            let factor = m[(row, col)].clone() / pivot.clone();
            for c in col..n {
                let delta = factor.clone() * m[(col, c)].clone();
                m[(row, c)] = m[(row, c)].clone() - delta;
            }
            let delta = factor * rhs[col].clone();
            rhs[row] = rhs[row].clone() - delta;
        }
    }

    let mut x = vec![S::zero(); n];
    for row in (0..n).rev() {
        let mut acc = rhs[row].clone();
        for c in row + 1..n {
            acc = acc - m[(row, c)].clone() * x[c].clone();
        }
        x[row] = acc / m[(row, row)].clone();
    }
    Ok(x)
}
