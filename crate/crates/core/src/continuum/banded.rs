//! Banded Hermitian positive-definite factorization A = L Lᴴ.

use num_complex::Complex64;
use rayon::prelude::*;
use std::ops::{Add, Mul, Neg, Sub};

pub trait Scalar:
    Copy
    + Send
    + Sync
    + Default
    + PartialEq
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn conj(self) -> Self;
    fn re(self) -> f64;
    fn from_re(x: f64) -> Self;
    fn scale(self, x: f64) -> Self;
    fn abs2(self) -> f64;
}

impl Scalar for f64 {
    fn conj(self) -> Self {
        self
    }
    fn re(self) -> f64 {
        self
    }
    fn from_re(x: f64) -> Self {
        x
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn abs2(self) -> f64 {
        self * self
    }
}

impl Scalar for Complex64 {
    fn conj(self) -> Self {
        Complex64::conj(&self)
    }
    fn re(self) -> f64 {
        self.re
    }
    fn from_re(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn scale(self, x: f64) -> Self {
        self * x
    }
    fn abs2(self) -> f64 {
        self.norm_sqr()
    }
}

/// Sparse Hermitian matrix in row-compressed form.
#[derive(Debug, Clone)]
pub struct SparseHermitian<T> {
    pub n: usize,
    pub row_start: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<T>,
}

impl<T: Scalar> SparseHermitian<T> {
    pub fn from_rows(rows: Vec<Vec<(usize, T)>>) -> Self {
        let n = rows.len();
        let mut row_start = Vec::with_capacity(n + 1);
        let mut cols = Vec::new();
        let mut vals = Vec::new();
        row_start.push(0);
        for mut r in rows {
            r.sort_by_key(|e| e.0);
            for (c, v) in r {
                if let Some(&last) = cols.last() {
                    if cols.len() > *row_start.last().unwrap() && last == c {
                        let k = vals.len() - 1;
                        vals[k] = vals[k] + v;
                        continue;
                    }
                }
                cols.push(c);
                vals.push(v);
            }
            row_start.push(cols.len());
        }
        SparseHermitian {
            n,
            row_start,
            cols,
            vals,
        }
    }

    pub fn nnz(&self) -> usize {
        self.vals.len()
    }

    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        (self.row_start[i]..self.row_start[i + 1]).map(move |k| (self.cols[k], self.vals[k]))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        self.row(i).find(|e| e.0 == j).map_or(T::default(), |e| e.1)
    }

    pub fn apply(&self, x: &[T]) -> Vec<T> {
        (0..self.n)
            .into_par_iter()
            .map(|i| {
                let mut s = T::default();
                for (c, v) in self.row(i) {
                    s = s + v * x[c];
                }
                s
            })
            .collect()
    }

    /// Largest |row index - column index| over stored entries.
    pub fn bandwidth(&self) -> usize {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(c, _)| c.abs_diff(i)))
            .max()
            .unwrap_or(0)
    }

    /// max |A_ij - conj(A_ji)| over stored entries.
    pub fn hermiticity_defect(&self) -> f64 {
        (0..self.n)
            .flat_map(|i| self.row(i).map(move |(j, v)| (i, j, v)))
            .map(|(i, j, v)| (v - self.get(j, i).conj()).abs2().sqrt())
            .fold(0.0, f64::max)
    }

    /// Row-sum bound on the operator norm.
    pub fn norm_bound(&self) -> f64 {
        (0..self.n)
            .map(|i| self.row(i).map(|(_, v)| v.abs2().sqrt()).sum::<f64>())
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NotPositiveDefinite {
    pub row: usize,
    pub pivot: f64,
}

/// Lower factor of a banded Hermitian positive-definite matrix.
#[derive(Debug, Clone)]
pub struct BandedCholesky<T> {
    n: usize,
    kd: usize,
    /// Row i holds L[i, i-kd..=i] (entries with column < 0 are zero).
    l: Vec<T>,
}

impl<T: Scalar> BandedCholesky<T> {
    /// Factors A - shift·I.
    pub fn factor(a: &SparseHermitian<T>, shift: f64) -> Result<Self, NotPositiveDefinite> {
        let n = a.n;
        let kd = a.bandwidth();
        let w = kd + 1;
        let mut l = vec![T::default(); n * w];
        for i in 0..n {
            for (j, v) in a.row(i) {
                if j <= i {
                    l[i * w + kd - (i - j)] = v;
                }
            }
            l[i * w + kd] = l[i * w + kd] - T::from_re(shift);
        }
        for i in 0..n {
            let j0 = i.saturating_sub(kd);
            for j in j0..=i {
                // s = A[i][j] - Σ_k L[i][k] conj(L[j][k]), k from max(j0, j-kd) to j-1
                let k0 = j0.max(j.saturating_sub(kd));
                let mut s = l[i * w + kd - (i - j)];
                let ri = i * w + kd - i;
                let rj = j * w + kd - j;
                for k in k0..j {
                    s = s - l[ri + k] * l[rj + k].conj();
                }
                if i == j {
                    let p = s.re();
                    if !(p > 0.0) {
                        return Err(NotPositiveDefinite { row: i, pivot: p });
                    }
                    l[i * w + kd] = T::from_re(p.sqrt());
                } else {
                    let d = l[j * w + kd].re();
                    l[i * w + kd - (i - j)] = s.scale(1.0 / d);
                }
            }
        }
        Ok(BandedCholesky { n, kd, l })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, b: &[T]) -> Vec<T> {
        let (n, kd) = (self.n, self.kd);
        let w = kd + 1;
        let mut y = b.to_vec();
        for i in 0..n {
            let j0 = i.saturating_sub(kd);
            let ri = i * w + kd - i;
            let mut s = y[i];
            for (k, yk) in y.iter().enumerate().take(i).skip(j0) {
                s = s - self.l[ri + k] * *yk;
            }
            y[i] = s.scale(1.0 / self.l[i * w + kd].re());
        }
        for i in (0..n).rev() {
            let v = y[i].scale(1.0 / self.l[i * w + kd].re());
            y[i] = v;
            let j0 = i.saturating_sub(kd);
            let ri = i * w + kd - i;
            for k in j0..i {
                y[k] = y[k] - self.l[ri + k].conj() * v;
            }
        }
        y
    }
}
