use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use super::{ExactError, ExactScalar};

/// Dense row-major matrix of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<ExactScalar>,
}

impl ExactMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<ExactScalar>) -> Result<Self, ExactError> {
        if entries.len() != rows * cols {
            return Err(ExactError::EntryCount {
                rows,
                cols,
                got: entries.len(),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![ExactScalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.entries[i * n + i] = ExactScalar::one();
        }
        m
    }

    /// Build from rows; all rows must share one length.
    pub fn from_rows(rows: Vec<Vec<ExactScalar>>) -> Result<Self, ExactError> {
        let n_rows = rows.len();
        let n_cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(n_rows * n_cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n_cols {
                return Err(ExactError::RaggedRows {
                    row: i,
                    expected: n_cols,
                    got: row.len(),
                });
            }
            entries.extend(row);
        }
        Ok(Self {
            rows: n_rows,
            cols: n_cols,
            entries,
        })
    }

    pub fn from_integer_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self, ExactError> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| ExactScalar::from(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[ExactScalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &ExactScalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: ExactScalar) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[ExactScalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[ExactScalar]> {
        // chunks_exact panics on a zero chunk size
        let width = self.cols.max(1);
        self.entries
            .chunks_exact(width)
            .take(if self.cols == 0 { 0 } else { self.rows })
    }

    pub fn column(&self, j: usize) -> Vec<ExactScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mat_mul(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.rows {
            return Err(ExactError::ShapeMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for (t, a) in self.row(i).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(t, j);
                    if !b.is_zero() {
                        out.entries[i * rhs.cols + j] += &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[ExactScalar]) -> Result<Vec<ExactScalar>, ExactError> {
        if v.len() != self.rows {
            return Err(ExactError::ShapeMismatch {
                op: "vec_mul",
                left: (1, v.len()),
                right: self.shape(),
            });
        }
        let mut out = vec![ExactScalar::zero(); self.cols];
        for (t, a) in v.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, o) in out.iter_mut().enumerate() {
                let b = self.get(t, j);
                if !b.is_zero() {
                    *o += &(a * b);
                }
            }
        }
        Ok(out)
    }

    fn zip_with(
        &self,
        rhs: &Self,
        op: &'static str,
        f: impl Fn(&ExactScalar, &ExactScalar) -> ExactScalar,
    ) -> Result<Self, ExactError> {
        if self.shape() != rhs.shape() {
            return Err(ExactError::ShapeMismatch {
                op,
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&rhs.entries)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    pub fn add(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.zip_with(rhs, "add", |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self, ExactError> {
        self.zip_with(rhs, "sub", |a, b| a - b)
    }

    pub fn scale(&self, factor: &ExactScalar) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| -e).collect(),
        }
    }

    /// Kronecker product: each entry `a_ij` becomes the block `a_ij * rhs`.
    pub fn kron(&self, rhs: &Self) -> Self {
        let rows = self.rows * rhs.rows;
        let cols = self.cols * rhs.cols;
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..self.rows {
            for p in 0..rhs.rows {
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    for q in 0..rhs.cols {
                        entries.push(a * rhs.get(p, q));
                    }
                }
            }
        }
        Self {
            rows,
            cols,
            entries,
        }
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.rows != rhs.rows {
            return Err(ExactError::ShapeMismatch {
                op: "hstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut entries = Vec::with_capacity(self.entries.len() + rhs.entries.len());
        for i in 0..self.rows {
            entries.extend_from_slice(self.row(i));
            entries.extend_from_slice(rhs.row(i));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols + rhs.cols,
            entries,
        })
    }

    /// `[self; rhs]`.
    pub fn vstack(&self, rhs: &Self) -> Result<Self, ExactError> {
        if self.cols != rhs.cols {
            return Err(ExactError::ShapeMismatch {
                op: "vstack",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut entries = self.entries.clone();
        entries.extend_from_slice(&rhs.entries);
        Ok(Self {
            rows: self.rows + rhs.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(ExactScalar::is_zero)
    }

    pub fn max_abs_entry(&self) -> ExactScalar {
        self.entries
            .iter()
            .map(ExactScalar::abs)
            .max()
            .unwrap_or_else(ExactScalar::zero)
    }

    /// Rank by fraction-free (Bareiss) elimination. Each row is first scaled
    /// to integers by the lcm of its denominators, which leaves the rank
    /// unchanged; every later division is exact.
    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<BigInt>> = self
            .row_iter()
            .map(|row| {
                let lcm = ExactScalar::common_denominator(row);
                row.iter()
                    .map(|v| v.numer() * (&lcm / v.denom()))
                    .collect()
            })
            .collect();
        let (rows, cols) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = BigInt::from(1);
        for col in 0..cols {
            if rank == rows {
                break;
            }
            let Some(pivot_row) = (rank..rows).find(|&r| !work[r][col].is_zero()) else {
                continue;
            };
            work.swap(rank, pivot_row);
            let pivot = work[rank][col].clone();
            for r in rank + 1..rows {
                let factor = work[r][col].clone();
                for c in col..cols {
                    let num = &work[r][c] * &pivot - &factor * &work[rank][c];
                    debug_assert!((&num % &prev).is_zero(), "inexact Bareiss step");
                    work[r][c] = num / &prev;
                }
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }
}

impl fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.row_iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            for (j, v) in row.iter().enumerate() {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{v}")?;
            }
        }
        Ok(())
    }
}
