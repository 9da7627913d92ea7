//! Fraction-free two-phase tableau simplex.
//!
//! The tableau holds integers `T` over one common positive denominator
//! `det`; an entry's value is `T[i][j] / det`. A pivot on `(p, q)` replaces
//! every row `i ≠ p` by `(T[i][j]·T[p][q] − T[i][q]·T[p][j]) / det` and sets
//! `det = T[p][q]`; the divisions are exact because every entry is a minor of
//! the initial integer matrix. Pivoting follows Bland's smallest-index rule.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

/// Integer type the tableau runs on. Operations may refuse (`None`) when the
/// result does not fit; the caller then restarts on a wider type.
pub(crate) trait PivotInt: Clone + std::fmt::Debug {
    fn zero() -> Self;
    fn from_big(v: &BigInt) -> Option<Self>;
    fn to_big(&self) -> BigInt;
    fn sign(&self) -> Ordering;
    fn negate(&self) -> Option<Self>;
    /// `(a·p − b·c) / det`; `Err(true)` on overflow, `Err(false)` on an
    /// inexact division.
    fn pivot_combine(a: &Self, p: &Self, b: &Self, c: &Self, det: &Self) -> Result<Self, bool>;
    /// Compare `x1/y1` with `x2/y2` for positive `y1`, `y2`.
    fn cmp_ratio(x1: &Self, y1: &Self, x2: &Self, y2: &Self) -> Option<Ordering>;
}

impl PivotInt for i128 {
    fn zero() -> Self {
        0
    }

    fn from_big(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }

    fn to_big(&self) -> BigInt {
        BigInt::from(*self)
    }

    fn sign(&self) -> Ordering {
        self.cmp(&0)
    }

    fn negate(&self) -> Option<Self> {
        self.checked_neg()
    }

    fn pivot_combine(a: &Self, p: &Self, b: &Self, c: &Self, det: &Self) -> Result<Self, bool> {
        let left = a.checked_mul(*p).ok_or(true)?;
        let right = b.checked_mul(*c).ok_or(true)?;
        let num = left.checked_sub(right).ok_or(true)?;
        if num % det != 0 {
            return Err(false);
        }
        Ok(num / det)
    }

    fn cmp_ratio(x1: &Self, y1: &Self, x2: &Self, y2: &Self) -> Option<Ordering> {
        Some(x1.checked_mul(*y2)?.cmp(&x2.checked_mul(*y1)?))
    }
}

impl PivotInt for BigInt {
    fn zero() -> Self {
        Zero::zero()
    }

    fn from_big(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }

    fn to_big(&self) -> BigInt {
        self.clone()
    }

    fn sign(&self) -> Ordering {
        if self.is_positive() {
            Ordering::Greater
        } else if self.is_negative() {
            Ordering::Less
        } else {
            Ordering::Equal
        }
    }

    fn negate(&self) -> Option<Self> {
        Some(-self)
    }

    fn pivot_combine(a: &Self, p: &Self, b: &Self, c: &Self, det: &Self) -> Result<Self, bool> {
        let num = a * p - b * c;
        let (q, r) = num.div_rem(det);
        if !r.is_zero() {
            return Err(false);
        }
        Ok(q)
    }

    fn cmp_ratio(x1: &Self, y1: &Self, x2: &Self, y2: &Self) -> Option<Ordering> {
        Some((x1 * y2).cmp(&(x2 * y1)))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SimplexError {
    Overflow,
    Inexact,
}

/// `max c·x  s.t.  A x = b, x ≥ 0` with integer data and `b ≥ 0`.
#[derive(Clone, Debug)]
pub(crate) struct StandardForm {
    pub rows: usize,
    pub cols: usize,
    /// Row-major `rows × cols`.
    pub a: Vec<BigInt>,
    pub b: Vec<BigInt>,
    pub c: Vec<BigInt>,
}

#[derive(Clone, Debug)]
pub(crate) enum StandardOutcome {
    /// Values are `(numerator, common denominator)` pairs.
    Optimal {
        x: Vec<BigInt>,
        y: Vec<BigInt>,
        value: BigInt,
        det: BigInt,
        pivots: usize,
    },
    Infeasible,
    Unbounded,
}

struct Tableau<T: PivotInt> {
    rows: usize,
    structural: usize,
    width: usize,
    data: Vec<T>,
    det: T,
    basis: Vec<usize>,
    pivots: usize,
}

impl<T: PivotInt> Tableau<T> {
    fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.width + j]
    }

    fn rhs_col(&self) -> usize {
        self.width - 1
    }

    fn phase2_row(&self) -> usize {
        self.rows
    }

    fn phase1_row(&self) -> usize {
        self.rows + 1
    }

    fn is_artificial(&self, var: usize) -> bool {
        var >= self.structural
    }

    fn new(sf: &StandardForm) -> Option<Self> {
        let rows = sf.rows;
        let structural = sf.cols;
        let width = structural + rows + 1;
        let mut data = vec![T::zero(); (rows + 2) * width];
        let one = T::from_big(&BigInt::from(1))?;
        let mut phase1 = vec![<BigInt as Zero>::zero(); width];
        for i in 0..rows {
            for j in 0..structural {
                let v = &sf.a[i * structural + j];
                data[i * width + j] = T::from_big(v)?;
                phase1[j] -= v;
            }
            data[i * width + structural + i] = one.clone();
            data[i * width + width - 1] = T::from_big(&sf.b[i])?;
            phase1[width - 1] -= &sf.b[i];
        }
        for j in 0..structural {
            data[rows * width + j] = T::from_big(&-&sf.c[j])?;
        }
        for (j, v) in phase1.iter().enumerate() {
            data[(rows + 1) * width + j] = T::from_big(v)?;
        }
        Some(Self {
            rows,
            structural,
            width,
            data,
            det: one,
            basis: (structural..structural + rows).collect(),
            pivots: 0,
        })
    }

    fn pivot(&mut self, p: usize, q: usize) -> Result<(), SimplexError> {
        let w = self.width;
        let total_rows = self.rows + 2;
        let pivot = self.at(p, q).clone();
        let pivot_row: Vec<T> = self.data[p * w..(p + 1) * w].to_vec();
        for i in 0..total_rows {
            if i == p {
                continue;
            }
            let factor = self.at(i, q).clone();
            for j in 0..w {
                let idx = i * w + j;
                let v = T::pivot_combine(&self.data[idx], &pivot, &factor, &pivot_row[j], &self.det)
                    .map_err(|overflow| {
                        if overflow {
                            SimplexError::Overflow
                        } else {
                            SimplexError::Inexact
                        }
                    })?;
                self.data[idx] = v;
            }
        }
        self.det = pivot;
        if self.det.sign() == Ordering::Less {
            for v in self.data.iter_mut() {
                *v = v.negate().ok_or(SimplexError::Overflow)?;
            }
            self.det = self.det.negate().ok_or(SimplexError::Overflow)?;
        }
        self.basis[p] = q;
        self.pivots += 1;
        Ok(())
    }

    /// Bland: smallest structural column with negative reduced cost.
    fn entering(&self, objective_row: usize) -> Option<usize> {
        (0..self.structural).find(|&j| self.at(objective_row, j).sign() == Ordering::Less)
    }

    /// Minimum-ratio row, ties broken by the smallest basic variable index.
    fn leaving(&self, q: usize) -> Result<Option<usize>, SimplexError> {
        let rhs = self.rhs_col();
        let mut best: Option<usize> = None;
        for i in 0..self.rows {
            if self.at(i, q).sign() != Ordering::Greater {
                continue;
            }
            best = match best {
                None => Some(i),
                Some(b) => {
                    let ord = T::cmp_ratio(self.at(i, rhs), self.at(i, q), self.at(b, rhs), self.at(b, q))
                        .ok_or(SimplexError::Overflow)?;
                    match ord {
                        Ordering::Less => Some(i),
                        Ordering::Equal if self.basis[i] < self.basis[b] => Some(i),
                        _ => Some(b),
                    }
                }
            };
        }
        Ok(best)
    }

    /// Run simplex iterations on `objective_row`; `Ok(false)` means unbounded.
    fn optimize(&mut self, objective_row: usize) -> Result<bool, SimplexError> {
        while let Some(q) = self.entering(objective_row) {
            match self.leaving(q)? {
                Some(p) => self.pivot(p, q)?,
                None => return Ok(false),
            }
        }
        Ok(true)
    }

    fn solve(mut self) -> Result<StandardOutcome, SimplexError> {
        let rhs = self.rhs_col();
        let ph1 = self.phase1_row();
        let bounded = self.optimize(ph1)?;
        debug_assert!(bounded, "phase one is bounded by construction");
        if self.at(ph1, rhs).sign() != Ordering::Equal {
            return Ok(StandardOutcome::Infeasible);
        }
        // drive zero-level artificials out of the basis where possible
        for i in 0..self.rows {
            if !self.is_artificial(self.basis[i]) {
                continue;
            }
            if let Some(q) = (0..self.structural).find(|&j| self.at(i, j).sign() != Ordering::Equal) {
                self.pivot(i, q)?;
            }
        }
        let ph2 = self.phase2_row();
        if !self.optimize(ph2)? {
            return Ok(StandardOutcome::Unbounded);
        }
        let mut x = vec![<BigInt as Zero>::zero(); self.structural];
        for (i, &var) in self.basis.iter().enumerate() {
            if var < self.structural {
                x[var] = self.at(i, rhs).to_big();
            }
        }
        let y = (0..self.rows)
            .map(|i| self.at(ph2, self.structural + i).to_big())
            .collect();
        Ok(StandardOutcome::Optimal {
            x,
            y,
            value: self.at(ph2, rhs).to_big(),
            det: self.det.to_big(),
            pivots: self.pivots,
        })
    }
}

/// Solve on `i128` first and restart on `BigInt` if anything overflows.
pub(crate) fn solve_standard(sf: &StandardForm) -> Result<StandardOutcome, SimplexError> {
    if let Some(t) = Tableau::<i128>::new(sf) {
        match t.solve() {
            Err(SimplexError::Overflow) => {}
            other => return other,
        }
    }
    Tableau::<BigInt>::new(sf).expect("BigInt holds any input").solve()
}

#[cfg(test)]
pub(crate) fn solve_standard_big(sf: &StandardForm) -> Result<StandardOutcome, SimplexError> {
    Tableau::<BigInt>::new(sf).expect("BigInt holds any input").solve()
}
